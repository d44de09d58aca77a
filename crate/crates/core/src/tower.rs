//! Level-by-level analysis of the preimage tower `K = K_0 ⊂ K_1 ⊂ ...`, where `K_n` is
//! the splitting field of `phi^n` over K = Q(t).
//!
//! Level `n` is maximal iff `phi^n(gamma)` is not a square in `K_{n-1}`. Levels 1 and 2
//! are decided exactly. From level 3 on a level is certified maximal when the
//! square-free part `d_n` of `phi^n(gamma)` has an irreducible factor dividing none of
//! `phi^t(gamma), phi^t(0)` for `t <= n/2`; otherwise it is left undetermined.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::modular::{certify_coprime, certify_squarefree};
use crate::arith::{
    disc_t_shifted, disc_x, poly_gcd, squarefree_part_split, BiPoly, Poly, Rat, RatFunc,
};
use crate::dynamics::{classify, critical_orbit, isotrivial_constants, zero_orbit, QuadMap};
use crate::error::{Error, Result};
use crate::stability::{isotrivial_tail_level, StabilityCertificate};

/// `phi^n(gamma) = u * d * y^2` with `d` monic square-free and `y` monic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelObstruction {
    pub n: usize,
    pub value: Poly,
    pub d: Poly,
    pub y: Poly,
    #[serde(serialize_with = "ser_rat")]
    pub u: Rat,
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&crate::arith::render_rat(r))
}

fn split_value(n: usize, value: Poly) -> Result<LevelObstruction> {
    if value.is_zero() {
        return Err(Error::PeriodicCriticalOrbit { n });
    }
    let (d, y, u) = squarefree_part_split(&value)?;
    Ok(LevelObstruction { n, value, d, y, u })
}

pub fn obstruction(phi: &QuadMap, n: usize) -> Result<LevelObstruction> {
    if n == 0 {
        return Err(Error::InvalidLevel { min: 1, got: 0 });
    }
    split_value(n, phi.iterate_poly(phi.gamma(), n))
}

/// Critical and zero orbits shared by all levels.
#[derive(Clone, Debug)]
pub struct OrbitCache {
    critical: Vec<Poly>,
    zero: Vec<Poly>,
}

impl OrbitCache {
    /// Orbits long enough to analyse every level up to `max_level`.
    pub fn new(phi: &QuadMap, max_level: usize) -> Self {
        let critical = critical_orbit(phi, max_level);
        let half = max_level / 2;
        let zero = if phi.gamma().is_zero() {
            critical[..half].to_vec()
        } else {
            zero_orbit(phi, half)
        };
        OrbitCache { critical, zero }
    }

    /// `phi^n(gamma)`, `n >= 1`.
    pub fn critical(&self, n: usize) -> &Poly {
        &self.critical[n - 1]
    }

    /// `phi^n(0)`, `n >= 1`.
    pub fn zero(&self, n: usize) -> &Poly {
        &self.zero[n - 1]
    }

    pub fn max_level(&self) -> usize {
        self.critical.len()
    }

    /// The factors `phi^t(gamma), phi^t(0)` for `1 <= t <= n/2`.
    pub fn refinement_factors(&self, n: usize) -> Vec<&Poly> {
        (1..=n / 2)
            .flat_map(|t| [self.critical(t), self.zero(t)])
            .collect()
    }
}

/// `P_n = prod_{t=1}^{n/2} phi^t(gamma) * phi^t(0)`.
pub fn refinement_product(phi: &QuadMap, n: usize) -> Result<Poly> {
    if n < 2 {
        return Err(Error::InvalidLevel { min: 2, got: n });
    }
    let cache = OrbitCache::new(phi, n);
    Ok(cache
        .refinement_factors(n)
        .into_iter()
        .fold(Poly::one(), |acc, f| &acc * f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LevelVerdict {
    CertifiedMaximal,
    NonMaximalExact,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelMethod {
    /// Level 1: squareness of `-c` in K.
    RootDiscriminant,
    /// Level 2: squareness in `K(sqrt(delta))` reduced to two tests in K.
    KummerDescent,
    /// Square-free part stripped of every factor shared with `P_n`, exact gcds.
    RefinementExact,
    /// Same certificate with coprimality proved modulo random primes.
    RefinementModular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LevelWitness {
    /// Nonconstant factor of `d_n` coprime to `P_n`.
    CoprimePart {
        poly: Poly,
        degree: usize,
    },
    /// These elements of K are all non-squares.
    NonSquares {
        elements: Vec<RatFunc>,
    },
    /// This element of K is a square, so `phi^n(gamma)` is a square in `K_{n-1}`.
    Square {
        element: RatFunc,
    },
    None {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub n: usize,
    pub verdict: LevelVerdict,
    pub method: LevelMethod,
    /// Degree of `d_n` when it was computed.
    pub obstruction_degree: Option<usize>,
    pub witness: LevelWitness,
}

/// How levels are certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelOptions {
    /// First level handled by the modular coprimality path; `None` disables it.
    pub modular_from: Option<usize>,
    /// Below `modular_from`, obstructions of larger degree also go through the modular path.
    pub exact_degree_limit: usize,
    pub attempts: usize,
    pub seed: u64,
}

impl Default for LevelOptions {
    fn default() -> Self {
        LevelOptions {
            modular_from: Some(9),
            exact_degree_limit: 256,
            attempts: 3,
            seed: 0x5eed,
        }
    }
}

impl LevelOptions {
    pub fn exact() -> Self {
        LevelOptions {
            modular_from: None,
            ..Self::default()
        }
    }

    fn use_modular(&self, n: usize, degree: usize) -> bool {
        match self.modular_from {
            Some(from) => n >= from || degree > self.exact_degree_limit,
            None => false,
        }
    }
}

fn require_stable(stable: &StabilityCertificate) -> Result<()> {
    if stable.is_stable() {
        Ok(())
    } else {
        Err(Error::MissingStabilityCertificate)
    }
}

fn as_rf(p: &Poly) -> RatFunc {
    RatFunc::from_poly(p.clone())
}

fn level_one(phi: &QuadMap) -> Result<LevelReport> {
    if phi.c().is_zero() {
        return Err(Error::PeriodicCriticalOrbit { n: 1 });
    }
    let minus_c = -phi.c();
    let element = as_rf(&minus_c);
    let (verdict, witness) = if element.is_square()? {
        (
            LevelVerdict::NonMaximalExact,
            LevelWitness::Square { element },
        )
    } else {
        (
            LevelVerdict::CertifiedMaximal,
            LevelWitness::NonSquares {
                elements: vec![element],
            },
        )
    };
    let degree = squarefree_part_split(&minus_c)?.0.degree();
    Ok(LevelReport {
        n: 1,
        verdict,
        method: LevelMethod::RootDiscriminant,
        obstruction_degree: degree,
        witness,
    })
}

fn level_two(phi: &QuadMap, value: &Poly) -> Result<LevelReport> {
    let ob = split_value(2, value.clone())?;
    let delta = phi.c().scale(&Rat::from_integer((-4).into()));
    let a = as_rf(value);
    let ad = as_rf(&(value * &delta));
    let delta_is_square = as_rf(&delta).is_square()?;
    let (verdict, witness) = if a.is_square()? {
        (
            LevelVerdict::NonMaximalExact,
            LevelWitness::Square { element: a },
        )
    } else if !delta_is_square && ad.is_square()? {
        (
            LevelVerdict::NonMaximalExact,
            LevelWitness::Square { element: ad },
        )
    } else {
        let elements = if delta_is_square {
            vec![a]
        } else {
            vec![a, ad]
        };
        (
            LevelVerdict::CertifiedMaximal,
            LevelWitness::NonSquares { elements },
        )
    };
    Ok(LevelReport {
        n: 2,
        verdict,
        method: LevelMethod::KummerDescent,
        obstruction_degree: ob.d.degree(),
        witness,
    })
}

fn refinement_exact(n: usize, value: &Poly, cache: &OrbitCache) -> Result<LevelReport> {
    let ob = split_value(n, value.clone())?;
    let mut e = ob.d.clone();
    for f in cache.refinement_factors(n) {
        if e.is_constant() {
            break;
        }
        // d_n is square-free, so one division removes every shared prime
        let g = poly_gcd(&e, f);
        if !g.is_constant() {
            e = e.div_exact(&g)?;
        }
    }
    Ok(coprime_report(
        n,
        LevelMethod::RefinementExact,
        ob.d.degree(),
        e,
    ))
}

fn coprime_report(
    n: usize,
    method: LevelMethod,
    obstruction_degree: Option<usize>,
    e: Poly,
) -> LevelReport {
    let degree = e.height();
    if degree > 0 {
        LevelReport {
            n,
            verdict: LevelVerdict::CertifiedMaximal,
            method,
            obstruction_degree,
            witness: LevelWitness::CoprimePart { poly: e, degree },
        }
    } else {
        let reason = if obstruction_degree == Some(0) {
            "square-free part is constant"
        } else {
            "square-free part is supported on the refinement product"
        };
        LevelReport {
            n,
            verdict: LevelVerdict::Undetermined,
            method,
            obstruction_degree,
            witness: LevelWitness::None {
                reason: reason.into(),
            },
        }
    }
}

fn refinement_modular(
    n: usize,
    value: &Poly,
    cache: &OrbitCache,
    opts: &LevelOptions,
) -> LevelReport {
    let mut rng =
        ChaCha8Rng::seed_from_u64(opts.seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let method = LevelMethod::RefinementModular;
    let undetermined = |reason: &str| LevelReport {
        n,
        verdict: LevelVerdict::Undetermined,
        method,
        obstruction_degree: None,
        witness: LevelWitness::None {
            reason: reason.into(),
        },
    };
    // strip every prime shared with P_n, with multiplicity; the refinement factors have
    // at most half the degree, so these exact gcds stay cheap
    let mut r = value.clone();
    for f in cache.refinement_factors(n) {
        while !r.is_constant() && !certify_coprime(&r, f, opts.attempts, &mut rng).is_coprime() {
            let g = poly_gcd(&r, f);
            if g.is_constant() {
                break;
            }
            match r.div_exact(&g) {
                Ok(q) => r = q,
                Err(_) => return undetermined("inexact division while stripping shared factors"),
            }
        }
    }
    if r.is_constant() {
        return coprime_report(n, method, None, Poly::one());
    }
    // a square-free remainder means each of its primes divides phi^n(gamma) exactly once,
    // so all of them divide d_n and none divides P_n
    if !certify_squarefree(&r, opts.attempts, &mut rng).is_coprime() {
        return undetermined(
            "square-freeness of the part coprime to the refinement product not certified",
        );
    }
    coprime_report(n, method, None, r.monic())
}

fn certify_cached(
    phi: &QuadMap,
    n: usize,
    cache: &OrbitCache,
    opts: &LevelOptions,
) -> Result<LevelReport> {
    let value = cache.critical(n);
    if value.is_zero() {
        return Err(Error::PeriodicCriticalOrbit { n });
    }
    match n {
        0 => Err(Error::InvalidLevel { min: 1, got: 0 }),
        1 => level_one(phi),
        2 => level_two(phi, value),
        _ if opts.use_modular(n, value.height()) => {
            let report = refinement_modular(n, value, cache, opts);
            let below_switch = opts.modular_from.is_some_and(|from| n < from);
            if report.verdict == LevelVerdict::Undetermined && below_switch {
                refinement_exact(n, value, cache)
            } else {
                Ok(report)
            }
        }
        _ => refinement_exact(n, value, cache),
    }
}

/// Verdict for level `n`, given a stability certificate.
pub fn certify_level(
    phi: &QuadMap,
    n: usize,
    stable: &StabilityCertificate,
) -> Result<LevelReport> {
    certify_level_with(phi, n, stable, &LevelOptions::default())
}

pub fn certify_level_with(
    phi: &QuadMap,
    n: usize,
    stable: &StabilityCertificate,
    opts: &LevelOptions,
) -> Result<LevelReport> {
    require_stable(stable)?;
    if n == 0 {
        return Err(Error::InvalidLevel { min: 1, got: 0 });
    }
    certify_cached(phi, n, &OrbitCache::new(phi, n), opts)
}

/// Verdicts for levels `1..=max_level`, certified in parallel, ordered by level.
pub fn certify_levels(
    phi: &QuadMap,
    max_level: usize,
    stable: &StabilityCertificate,
    opts: &LevelOptions,
) -> Result<Vec<LevelReport>> {
    require_stable(stable)?;
    if max_level == 0 {
        return Err(Error::InvalidLevel { min: 1, got: 0 });
    }
    let cache = OrbitCache::new(phi, max_level);
    (1..=max_level)
        .into_par_iter()
        .map(|n| certify_cached(phi, n, &cache, opts))
        .collect()
}

/// The refinement certificate applied at any level `n >= 2` with exact gcds.
/// At `n = 2` it is a weaker alternative to the exact descent.
pub fn refinement_certificate(phi: &QuadMap, n: usize) -> Result<LevelReport> {
    if n < 2 {
        return Err(Error::InvalidLevel { min: 2, got: n });
    }
    let cache = OrbitCache::new(phi, n);
    refinement_exact(n, cache.critical(n), &cache)
}

/// Check of `u * Y^2 = d * (X - c) * ((X - gamma)^2 + c)` for
/// `X = phi^(n-1)(gamma)`, `Y = y * d * (phi^(n-2)(gamma) - gamma)`, where
/// `phi^n(gamma) = u * d * y^2`. Equivalently `(u d y (phi^(n-2)(gamma) - gamma))^2 / (u d)`
/// lies on the twist of `Y^2 = (X - c) phi(X)` by `u d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveIdentityCheck {
    pub n: usize,
    #[serde(skip)]
    pub lhs: Poly,
    #[serde(skip)]
    pub rhs: Poly,
    pub holds: bool,
}

pub fn verify_curve_identity(phi: &QuadMap, n: usize) -> Result<CurveIdentityCheck> {
    if n < 2 {
        return Err(Error::InvalidLevel { min: 2, got: n });
    }
    let prev2 = phi.iterate_poly(phi.gamma(), n - 2);
    let x = phi.apply(&prev2);
    let ob = split_value(n, phi.apply(&x))?;
    let big_y = &(&ob.y * &ob.d) * &(&prev2 - phi.gamma());
    let lhs = big_y.square().scale(&ob.u);
    let rhs = &(&ob.d * &(&x - phi.c())) * &phi.apply(&x);
    let holds = lhs == rhs;
    Ok(CurveIdentityCheck { n, lhs, rhs, holds })
}

/// One step `Delta_m = sign * 2^exponent * Delta_{m-1}^2 * phi^m(gamma)` of the fit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscriminantStep {
    pub m: usize,
    /// `+1` or `-1`; `0` if the quotient is not a signed power of two.
    pub sign: i8,
    pub exponent: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscriminantTower {
    pub deltas: Vec<Poly>,
    pub steps: Vec<DiscriminantStep>,
    /// Whether every step matches `Delta_m = Delta_{m-1}^2 * 2^(2^m) * phi^m(gamma)`.
    pub law_holds: bool,
}

/// Human-readable form of the fitted recursion.
pub const DISCRIMINANT_LAW: &str = "Delta_m = Delta_(m-1)^2 * 2^(2^m) * phi^m(gamma)";

fn signed_power_of_two(q: &Rat) -> (i8, Option<u32>) {
    if q.is_zero() || !q.is_integer() {
        return (0, None);
    }
    let n = q.numer();
    let sign = if n.sign() == num_bigint::Sign::Minus {
        -1
    } else {
        1
    };
    let mag = n.magnitude();
    let tz = mag.trailing_zeros().unwrap_or(0);
    if (mag >> tz) == num_bigint::BigUint::one() {
        (sign, Some(tz as u32))
    } else {
        (0, None)
    }
}

/// `[Delta_1, ..., Delta_M]` with `Delta_m = disc_x(phi^m(x))`, and the fitted recursion.
pub fn discriminant_tower(phi: &QuadMap, levels: usize) -> Result<DiscriminantTower> {
    if levels == 0 {
        return Err(Error::InvalidLevel { min: 1, got: 0 });
    }
    if levels > 4 {
        return Err(Error::LevelTooHigh {
            max: 4,
            got: levels,
        });
    }
    let base = phi.as_bipoly();
    let shift = BiPoly::constant(-phi.gamma());
    let c = BiPoly::constant(phi.c().clone());
    let mut iterate = base.clone();
    let mut deltas: Vec<Poly> = Vec::with_capacity(levels);
    let mut steps = Vec::new();
    let orbit = critical_orbit(phi, levels);
    for m in 1..=levels {
        if m > 1 {
            let centered = &iterate + &shift;
            iterate = &centered.square() + &c;
        }
        let delta = disc_x(&iterate)?;
        if m > 1 {
            let denom = &deltas[m - 2].square() * &orbit[m - 1];
            let (sign, exponent) = match delta.div_rem(&denom) {
                Ok((q, r)) if r.is_zero() && q.is_constant() => {
                    signed_power_of_two(&q.constant_term())
                }
                _ => (0, None),
            };
            steps.push(DiscriminantStep { m, sign, exponent });
        }
        deltas.push(delta);
    }
    let law_holds = steps
        .iter()
        .all(|s| s.sign == 1 && s.exponent == Some(1 << s.m));
    Ok(DiscriminantTower {
        deltas,
        steps,
        law_holds,
    })
}

/// Levels `n` at which `phi^n(gamma) = c + c_n` fails to be square-free, i.e. `p(c_n) = 0`
/// for `p(s) = disc_t(c + s)`. Only these levels of an isotrivial map can be non-maximal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateLevels {
    /// `p(s)`, written in the variable `t`.
    pub p: Poly,
    pub levels: Vec<usize>,
    /// Searched range `1..=searched`.
    pub searched: usize,
    /// When set, no level beyond `searched` can be a candidate.
    pub complete: bool,
}

pub fn isotrivial_candidate_levels(phi: &QuadMap, n_max: usize) -> Result<CandidateLevels> {
    if !phi.is_isotrivial() {
        return Err(Error::NotIsotrivial);
    }
    if phi.gamma().is_constant() {
        return Err(Error::ZeroHeight);
    }
    if !classify(phi, 64).pcf.is_infinite() {
        return Err(Error::PostCriticallyFinite);
    }
    let p = disc_t_shifted(phi.c())?;
    let tail = isotrivial_tail_level(phi, &p, 64)?;
    let searched = n_max.max(tail.unwrap_or(0));
    let consts = isotrivial_constants(phi, searched)?;
    let levels: Vec<usize> = consts
        .iter()
        .enumerate()
        .filter(|(_, cn)| p.eval(cn).is_zero())
        .map(|(i, _)| i + 1)
        .collect();
    // the c_n are distinct, so each root of p is hit at most once
    debug_assert!(levels.len() <= p.degree().unwrap_or(0));
    Ok(CandidateLevels {
        p,
        levels,
        searched,
        complete: tail.is_some(),
    })
}
