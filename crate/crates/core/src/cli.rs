//! Command-line front end: argument parsing, the analysis pipeline and report rendering.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{parse_poly, parse_ratfunc, Poly, RatFunc};
use crate::bounds::{
    accumulate_candidates, accumulate_conditional, accumulate_index, base_change_bound,
    part1_bound, part2_bound, part3_count_bound, pink_bound, IndexBound, PART1_HORIZON,
};
use crate::dynamics::{
    base_change, classify, factor_quadratic, HeightCase, MapClass, QuadFactorization, QuadMap,
};
use crate::error::Error;
use crate::stability::{certify_auto, StabilityCertificate};
use crate::tower::{
    certify_levels, discriminant_tower, isotrivial_candidate_levels, verify_curve_identity,
    CandidateLevels, CurveIdentityCheck, DiscriminantStep, LevelOptions, LevelReport, LevelVerdict,
    DISCRIMINANT_LAW,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "quadtower",
    version,
    about = "Galois tower certificates for (x - gamma)^2 + c over Q(t)"
)]
pub struct Args {
    /// Critical point gamma, a polynomial in t
    #[arg(long, allow_hyphen_values = true, required_unless_present = "batch")]
    pub gamma: Option<String>,
    /// Critical value c, a polynomial in t
    #[arg(long, allow_hyphen_values = true, required_unless_present = "batch")]
    pub c: Option<String>,
    /// Highest tower level to certify
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u16).range(1..=20))]
    pub max_level: u16,
    /// Orbit length searched for a cycle when classifying isotrivial maps
    #[arg(long, default_value_t = 64)]
    pub pcf_bound: usize,
    /// Base change t -> f(t) for a nonconstant rational function f
    #[arg(long, allow_hyphen_values = true)]
    pub base_change: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Use exact gcds at every level
    #[arg(long)]
    pub no_modular: bool,
    /// Run every line of a file as a separate invocation
    #[arg(long, conflicts_with_all = ["gamma", "c", "base_change"])]
    pub batch: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub gamma_text: String,
    pub c_text: String,
    pub max_level: usize,
    pub pcf_bound: usize,
    pub modular_fastpath: bool,
    pub output: OutputFormat,
    pub base_change_f: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            gamma_text: "0".into(),
            c_text: "t".into(),
            max_level: 10,
            pcf_bound: 64,
            modular_fastpath: true,
            output: OutputFormat::Text,
            base_change_f: None,
        }
    }
}

impl RunConfig {
    pub fn new(gamma: &str, c: &str) -> Self {
        RunConfig {
            gamma_text: gamma.into(),
            c_text: c.into(),
            ..Self::default()
        }
    }

    pub fn from_args(args: &Args) -> Option<Self> {
        Some(RunConfig {
            gamma_text: args.gamma.clone()?,
            c_text: args.c.clone()?,
            max_level: args.max_level as usize,
            pcf_bound: args.pcf_bound,
            modular_fastpath: !args.no_modular,
            output: args.output,
            base_change_f: args.base_change.clone(),
        })
    }

    fn level_options(&self) -> LevelOptions {
        if self.modular_fastpath {
            LevelOptions::default()
        } else {
            LevelOptions::exact()
        }
    }
}

/// Failure of a run. Parse errors map to exit code 2, everything else to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunError {
    Parse { field: &'static str, error: Error },
    Internal(Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Parse { .. } => 2,
            RunError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Parse { field, error } => write!(f, "--{field}: {error}"),
            RunError::Internal(e) => write!(f, "internal error: {e}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Internal(e)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MapEcho {
    pub gamma: Poly,
    pub c: Poly,
    pub height: usize,
    pub h_gamma: usize,
    pub h_c: usize,
    pub h_b: usize,
}

impl MapEcho {
    fn of(phi: &QuadMap) -> Self {
        MapEcho {
            gamma: phi.gamma().clone(),
            c: phi.c().clone(),
            height: phi.height(),
            h_gamma: phi.gamma().height(),
            h_c: phi.c().height(),
            h_b: phi.b().height(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscriminantSummary {
    pub levels: usize,
    pub degrees: Vec<usize>,
    pub steps: Vec<DiscriminantStep>,
    pub law: &'static str,
    pub law_holds: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Identities {
    pub curve: Vec<CurveIdentityCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<DiscriminantSummary>,
}

/// Tower analysis of one polynomial map.
#[derive(Clone, Debug, Serialize)]
pub struct TowerAnalysis {
    pub stability: StabilityCertificate,
    pub levels: Vec<LevelReport>,
    pub bounds: Vec<IndexBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<CandidateLevels>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseChangeReport {
    pub f: RatFunc,
    pub gamma: RatFunc,
    pub c: RatFunc,
    pub factorization: QuadFactorization,
    pub level1_maximal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<IndexBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerAnalysis>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Timings {
    pub stages: Vec<(&'static str, Duration)>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub map: MapEcho,
    pub class: MapClass,
    pub tower: TowerAnalysis,
    pub identities: Identities,
    pub base_change: Option<BaseChangeReport>,
    pub timings: Timings,
}

impl Report {
    pub fn stability(&self) -> &StabilityCertificate {
        &self.tower.stability
    }

    pub fn levels(&self) -> &[LevelReport] {
        &self.tower.levels
    }

    pub fn bounds(&self) -> &[IndexBound] {
        &self.tower.bounds
    }

    /// Key-sorted JSON value; timings are left out so output is reproducible.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "map": self.map,
            "class": self.class,
            "stability": self.tower.stability,
            "levels": self.tower.levels,
            "bounds": self.tower.bounds,
            "identities": self.identities,
            "notes": self.tower.notes,
            "version": VERSION,
        });
        if let Some(c) = &self.tower.candidates {
            v["candidate_levels"] = json!(c);
        }
        if let Some(bc) = &self.base_change {
            v["base_change"] = json!(bc);
        }
        v
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let m = &self.map;
        if m.gamma.is_zero() {
            let _ = writeln!(out, "map: x^2 + ({})", m.c);
        } else {
            let _ = writeln!(out, "map: (x - ({}))^2 + ({})", m.gamma, m.c);
        }
        let _ = writeln!(
            out,
            "heights: h(gamma)={} h(c)={} h(gamma-c)={} h(phi)={}",
            m.h_gamma, m.h_c, m.h_b, m.height
        );
        let _ = writeln!(
            out,
            "class: {} ({:?})",
            if self.class.isotrivial {
                "isotrivial"
            } else {
                "non-isotrivial"
            },
            self.class.height_case
        );
        let _ = writeln!(out, "critical orbit: {}", pcf_text(&self.class));
        write_tower(&mut out, &self.tower, "");
        if !self.identities.curve.is_empty() {
            let holds = self.identities.curve.iter().filter(|c| c.holds).count();
            let _ = writeln!(
                out,
                "curve identity: {holds}/{} levels hold",
                self.identities.curve.len()
            );
        }
        if let Some(d) = &self.identities.discriminant {
            let _ = writeln!(
                out,
                "discriminant recursion through m={}: {} [{}]",
                d.levels,
                if d.law_holds { "holds" } else { "fails" },
                d.law
            );
        }
        if let Some(bc) = &self.base_change {
            let _ = writeln!(out, "base change f = {}", bc.f);
            let _ = writeln!(out, "  phi_f = (x - ({}))^2 + ({})", bc.gamma, bc.c);
            match &bc.factorization {
                QuadFactorization::Irreducible => {
                    let _ = writeln!(out, "  phi_f irreducible over Q(t)");
                }
                QuadFactorization::SplitLinear { root1, root2 } => {
                    let _ = writeln!(out, "  phi_f = (x - ({root1}))*(x - ({root2}))");
                }
            }
            let _ = writeln!(out, "  level 1 maximal: {}", bc.level1_maximal);
            if let Some(b) = &bc.bound {
                let _ = writeln!(out, "  base-change bound: log2 index <= {}", b.log2_bound);
            }
            if let Some(t) = &bc.tower {
                write_tower(&mut out, t, "  ");
            }
            for n in &bc.notes {
                let _ = writeln!(out, "  note: {n}");
            }
        }
        let _ = writeln!(out, "version: {VERSION}");
        for (stage, d) in &self.timings.stages {
            let _ = writeln!(out, "time {stage}: {:.3}s", d.as_secs_f64());
        }
        out
    }
}

fn pcf_text(class: &MapClass) -> String {
    use crate::dynamics::PcfStatus;
    match &class.pcf {
        PcfStatus::Finite { preperiod, period } => {
            format!("finite (preperiod {preperiod}, period {period})")
        }
        PcfStatus::Infinite { .. } => "infinite".into(),
        PcfStatus::UndeterminedUpTo { bound } => format!("undetermined up to {bound}"),
    }
}

pub fn verdict_text(v: LevelVerdict) -> &'static str {
    match v {
        LevelVerdict::CertifiedMaximal => "certified maximal",
        LevelVerdict::NonMaximalExact => "not maximal (exact)",
        LevelVerdict::Undetermined => "undetermined",
    }
}

fn write_tower(out: &mut String, t: &TowerAnalysis, indent: &str) {
    let _ = writeln!(out, "{indent}stability: {}", t.stability.summary());
    for r in &t.levels {
        let _ = writeln!(out, "{indent}level {}: {}", r.n, verdict_text(r.verdict));
    }
    if let Some(c) = &t.candidates {
        let _ = writeln!(
            out,
            "{indent}candidate levels: {:?} (p(s) degree {})",
            c.levels,
            c.p.height()
        );
    }
    for b in &t.bounds {
        let threshold = b
            .threshold_level
            .map(|n| format!(" threshold {n}"))
            .unwrap_or_default();
        let assumption = b
            .assumption
            .as_ref()
            .map(|a| format!(" ({a})"))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{indent}bound {:?}: {}{threshold}{assumption}",
            b.kind, b.log2_bound
        );
    }
    for n in &t.notes {
        let _ = writeln!(out, "{indent}note: {n}");
    }
}

fn parse_field(field: &'static str, text: &str) -> Result<Poly, RunError> {
    parse_poly(text).map_err(|error| RunError::Parse { field, error })
}

fn analyse_tower(
    phi: &QuadMap,
    class: &MapClass,
    config: &RunConfig,
) -> Result<TowerAnalysis, RunError> {
    let max_level = config.max_level;
    let stability = certify_auto(phi, max_level);
    let mut notes = Vec::new();
    let mut bounds = Vec::new();
    let mut candidates = None;
    if !stability.is_stable() {
        notes.push(format!(
            "stability not certified ({}); levels and bounds skipped",
            stability.summary()
        ));
        return Ok(TowerAnalysis {
            stability,
            levels: Vec::new(),
            bounds,
            candidates,
            notes,
        });
    }
    let levels = certify_levels(phi, max_level, &stability, &config.level_options())?;
    let stable = true;
    let eligible = class.pcf.is_infinite() && phi.height() > 0;
    if !eligible {
        notes.push("index bounds need a post-critically infinite map of positive height".into());
    } else {
        match class.height_case {
            HeightCase::UnequalHeights => {
                bounds.push(part1_bound());
                bounds.push(accumulate_index(&levels, stable, PART1_HORIZON)?);
            }
            HeightCase::EqualHeightsNonIso => {
                bounds.push(part2_bound(phi, &levels, stable)?);
            }
            HeightCase::Isotrivial => {
                bounds.push(part3_count_bound(phi)?);
                bounds.push(pink_bound(phi)?);
                let found = isotrivial_candidate_levels(phi, max_level)?;
                if found.complete {
                    bounds.push(accumulate_candidates(&levels, &found.levels, stable)?);
                } else {
                    notes.push("candidate levels not known to be complete".into());
                }
                candidates = Some(found);
            }
        }
        bounds.push(accumulate_conditional(&levels, stable)?);
    }
    Ok(TowerAnalysis {
        stability,
        levels,
        bounds,
        candidates,
        notes,
    })
}

fn identities(phi: &QuadMap, max_level: usize) -> Identities {
    let curve = (2..=max_level.min(5))
        .filter_map(|n| verify_curve_identity(phi, n).ok())
        .collect();
    let m = max_level.min(if phi.height() <= 2 { 4 } else { 3 });
    let discriminant = discriminant_tower(phi, m)
        .ok()
        .map(|t| DiscriminantSummary {
            levels: m,
            degrees: t.deltas.iter().map(Poly::height).collect(),
            steps: t.steps,
            law: DISCRIMINANT_LAW,
            law_holds: t.law_holds,
        });
    Identities {
        curve,
        discriminant,
    }
}

fn analyse_base_change(
    phi: &QuadMap,
    base_bounds: &[IndexBound],
    f: RatFunc,
    config: &RunConfig,
) -> Result<BaseChangeReport, RunError> {
    let psi = base_change(phi, &f)?;
    let factorization = factor_quadratic(&psi);
    let level1_maximal = psi.level1_maximal()?;
    let mut notes = Vec::new();
    let bound = base_bounds
        .iter()
        .find(|b| b.assumption.is_none() && b.kind != crate::bounds::BoundKind::Part3Count)
        .map(|b| base_change_bound(b, &f))
        .transpose()?;
    let tower = match psi.to_poly_map() {
        Some(phi_f) => {
            let class = classify(&phi_f, config.pcf_bound);
            Some(analyse_tower(&phi_f, &class, config)?)
        }
        None => {
            notes.push(
                "tower certification needs polynomial coefficients; only level 1 is reported"
                    .into(),
            );
            None
        }
    };
    Ok(BaseChangeReport {
        f,
        gamma: psi.gamma,
        c: psi.c,
        factorization,
        level1_maximal,
        bound,
        tower,
        notes,
    })
}

/// Full pipeline: classify, certify stability, certify levels, compute bounds.
pub fn run_classify(config: &RunConfig) -> Result<Report, RunError> {
    let gamma = parse_field("gamma", &config.gamma_text)?;
    let c = parse_field("c", &config.c_text)?;
    let f = match &config.base_change_f {
        Some(text) => Some(parse_ratfunc(text).map_err(|error| RunError::Parse {
            field: "base-change",
            error,
        })?),
        None => None,
    };
    let phi = QuadMap::new(gamma, c);
    let mut stages = Vec::new();

    let start = Instant::now();
    let class = classify(&phi, config.pcf_bound);
    stages.push(("classify", start.elapsed()));

    let start = Instant::now();
    let tower = analyse_tower(&phi, &class, config)?;
    stages.push(("tower", start.elapsed()));

    let start = Instant::now();
    let identities = identities(&phi, config.max_level);
    stages.push(("identities", start.elapsed()));

    let base_change = match f {
        Some(f) if f.is_constant() => Some(BaseChangeReport {
            gamma: RatFunc::from_poly(phi.gamma().clone()),
            c: RatFunc::from_poly(phi.c().clone()),
            factorization: QuadFactorization::Irreducible,
            level1_maximal: false,
            bound: None,
            tower: None,
            notes: vec!["base change needs a nonconstant f".into()],
            f,
        }),
        Some(f) => {
            let start = Instant::now();
            let bc = analyse_base_change(&phi, &tower.bounds, f, config)?;
            stages.push(("base change", start.elapsed()));
            Some(bc)
        }
        None => None,
    };

    Ok(Report {
        map: MapEcho::of(&phi),
        class,
        tower,
        identities,
        base_change,
        timings: Timings { stages },
    })
}

/// One batch line: a report or the error it produced.
#[derive(Debug)]
pub struct BatchItem {
    pub line: usize,
    pub output: OutputFormat,
    pub result: Result<Report, String>,
}

impl BatchItem {
    pub fn render(&self) -> String {
        match (&self.result, self.output) {
            (Ok(r), OutputFormat::Json) => r.to_json_string(),
            (Ok(r), OutputFormat::Text) => r.to_text(),
            (Err(e), OutputFormat::Json) => json!({ "line": self.line, "error": e }).to_string(),
            (Err(e), OutputFormat::Text) => format!("line {}: error: {e}\n", self.line),
        }
    }
}

fn batch_line(line: usize, text: &str, default_output: OutputFormat) -> BatchItem {
    let fail = |e: String, output| BatchItem {
        line,
        output,
        result: Err(e),
    };
    let Some(words) = shlex::split(text) else {
        return fail("unbalanced quotes".into(), default_output);
    };
    let args = match Args::try_parse_from(std::iter::once("quadtower".to_string()).chain(words)) {
        Ok(a) => a,
        Err(e) => {
            return fail(
                e.to_string()
                    .lines()
                    .next()
                    .unwrap_or("invalid arguments")
                    .into(),
                default_output,
            )
        }
    };
    if args.batch.is_some() {
        return fail("nested --batch is not allowed".into(), args.output);
    }
    let config = RunConfig::from_args(&args).expect("clap enforces --gamma and --c");
    BatchItem {
        line,
        output: args.output,
        result: run_classify(&config).map_err(|e| e.to_string()),
    }
}

/// Runs every non-empty line of `contents` (lines starting with `#` are skipped).
/// Lines run concurrently; results keep input order.
pub fn run_batch_str(contents: &str, default_output: OutputFormat) -> Vec<BatchItem> {
    let lines: Vec<(usize, &str)> = contents
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    lines
        .into_par_iter()
        .map(|(i, l)| batch_line(i, l, default_output))
        .collect()
}

pub fn run_batch(
    path: &std::path::Path,
    default_output: OutputFormat,
) -> std::io::Result<Vec<BatchItem>> {
    Ok(run_batch_str(
        &std::fs::read_to_string(path)?,
        default_output,
    ))
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    use std::io::Write as _;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

/// Entry point shared by the binary; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(path) = &args.batch {
        return match run_batch(path, args.output) {
            Ok(items) => {
                let mut text = String::new();
                for item in &items {
                    text.push_str(&item.render());
                    if item.output == OutputFormat::Json {
                        text.push('\n');
                    }
                }
                emit(&text);
                0
            }
            Err(e) => {
                eprintln!("cannot read {}: {e}", path.display());
                2
            }
        };
    }
    let config = RunConfig::from_args(&args).expect("clap enforces --gamma and --c");
    match run_classify(&config) {
        Ok(report) => {
            match config.output {
                OutputFormat::Json => emit(&(report.to_json_string() + "\n")),
                OutputFormat::Text => emit(&report.to_text()),
            }
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
