//! Quadratic maps `(x - gamma)^2 + c` over k(t): orbits, heights, classification
//! and base change.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{render_rat, BiPoly, Poly, Rat, RatFunc};
use crate::error::{Error, Result};

/// `phi(x) = (x - gamma)^2 + c` with `gamma, c` in Q[t].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuadMap {
    gamma: Poly,
    c: Poly,
    #[serde(skip)]
    height: usize,
}

impl QuadMap {
    pub fn new(gamma: Poly, c: Poly) -> Self {
        let height = gamma.height().max(c.height());
        QuadMap { gamma, c, height }
    }

    /// `x^2 + c`.
    pub fn monic_centered(c: Poly) -> Self {
        Self::new(Poly::zero(), c)
    }

    pub fn gamma(&self) -> &Poly {
        &self.gamma
    }

    pub fn c(&self) -> &Poly {
        &self.c
    }

    /// `b = gamma - c`.
    pub fn b(&self) -> Poly {
        &self.gamma - &self.c
    }

    /// `h(phi) = max(h(gamma), h(c))`.
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_isotrivial(&self) -> bool {
        self.b().height() == 0
    }

    pub fn height_case(&self) -> HeightCase {
        if self.is_isotrivial() {
            HeightCase::Isotrivial
        } else if self.gamma.height() != self.c.height() {
            HeightCase::UnequalHeights
        } else {
            HeightCase::EqualHeightsNonIso
        }
    }

    pub fn apply(&self, x: &Poly) -> Poly {
        &(x - &self.gamma).square() + &self.c
    }

    pub fn apply_ratfunc(&self, x: &RatFunc) -> RatFunc {
        let shifted = x - &RatFunc::from_poly(self.gamma.clone());
        &(&shifted * &shifted) + &RatFunc::from_poly(self.c.clone())
    }

    /// `phi^n(x0)`; `n = 0` returns `x0`.
    pub fn iterate_poly(&self, x0: &Poly, n: usize) -> Poly {
        let mut x = x0.clone();
        for _ in 0..n {
            x = self.apply(&x);
        }
        x
    }

    /// `phi` as a polynomial in `x` over Q[t].
    pub fn as_bipoly(&self) -> BiPoly {
        let two = Rat::from_integer(2.into());
        BiPoly::from_coeffs(vec![
            &self.gamma.square() + &self.c,
            self.gamma.scale(&-two),
            Poly::one(),
        ])
    }
}

/// `phi^n(x0)` by repeated substitution. `n = 0` returns `x0`.
pub fn iterate_at(phi: &QuadMap, x0: &RatFunc, n: usize) -> RatFunc {
    if let Some(p) = x0.as_poly() {
        return RatFunc::from_poly(phi.iterate_poly(p, n));
    }
    let mut x = x0.clone();
    for _ in 0..n {
        x = phi.apply_ratfunc(&x);
    }
    x
}

fn orbit_from(phi: &QuadMap, start: &Poly, n: usize) -> Vec<Poly> {
    let mut out = Vec::with_capacity(n);
    let mut x = start.clone();
    for _ in 0..n {
        x = phi.apply(&x);
        out.push(x.clone());
    }
    out
}

/// `[phi(gamma), ..., phi^n(gamma)]`.
pub fn critical_orbit(phi: &QuadMap, n: usize) -> Vec<Poly> {
    orbit_from(phi, phi.gamma(), n)
}

/// `[phi(0), ..., phi^n(0)]`.
pub fn zero_orbit(phi: &QuadMap, n: usize) -> Vec<Poly> {
    orbit_from(phi, &Poly::zero(), n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PredictionKind {
    Exact,
    UpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeightPrediction {
    pub kind: PredictionKind,
    pub value: u64,
}

impl HeightPrediction {
    fn exact(value: u64) -> Self {
        HeightPrediction {
            kind: PredictionKind::Exact,
            value,
        }
    }

    fn upper(value: u64) -> Self {
        HeightPrediction {
            kind: PredictionKind::UpperBound,
            value,
        }
    }

    /// Whether an observed height is consistent with the prediction.
    pub fn admits(&self, actual: u64) -> bool {
        match self.kind {
            PredictionKind::Exact => actual == self.value,
            PredictionKind::UpperBound => actual <= self.value,
        }
    }
}

fn pow2_times(m: usize, h: usize) -> u64 {
    (h as u64) << m
}

/// Predicted `h(phi^m(gamma))`.
pub fn predict_height_critical(phi: &QuadMap, m: usize) -> Result<HeightPrediction> {
    if m == 0 {
        return Err(Error::InvalidLevel { min: 1, got: 0 });
    }
    let hc = phi.c().height() as u64;
    Ok(match phi.height_case() {
        HeightCase::Isotrivial => HeightPrediction::exact(phi.gamma().height() as u64),
        HeightCase::UnequalHeights if m == 1 => HeightPrediction::upper(phi.height() as u64),
        HeightCase::UnequalHeights => HeightPrediction::exact(pow2_times(m - 1, phi.height())),
        HeightCase::EqualHeightsNonIso => {
            // phi^m(gamma) = c + z_m with h(z_m) = 2^(m-1) h(b) for m >= 2 and z_1 = 0
            let v = pow2_times(m - 1, phi.b().height());
            if v != hc {
                HeightPrediction::exact(v.max(hc))
            } else {
                HeightPrediction::upper(hc)
            }
        }
    })
}

/// Predicted `h(phi^m(0))`.
pub fn predict_height_zero(phi: &QuadMap, m: usize) -> Result<HeightPrediction> {
    if m == 0 {
        return Err(Error::InvalidLevel { min: 1, got: 0 });
    }
    let hg = phi.gamma().height();
    if hg == phi.c().height() && hg > 0 {
        Ok(HeightPrediction::exact(pow2_times(m, hg)))
    } else {
        Ok(HeightPrediction::upper(pow2_times(m, phi.height())))
    }
}

/// `rho = log2(h(gamma) / h(gamma - c)) + 1`, kept as the integer pair it comes from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rho {
    pub h_gamma: usize,
    pub h_b: usize,
    /// Floating-point value for display only.
    pub approx: f64,
}

impl Rho {
    /// `m > rho`, decided as `2^(m-1) * h(b) > h(gamma)`.
    pub fn exceeded_by(&self, m: usize) -> bool {
        m >= 1 && pow2_times(m - 1, self.h_b) > self.h_gamma as u64
    }
}

pub fn rho(phi: &QuadMap) -> Result<Rho> {
    match phi.height_case() {
        HeightCase::Isotrivial => Err(Error::Isotrivial),
        HeightCase::UnequalHeights => Err(Error::UnequalHeights),
        HeightCase::EqualHeightsNonIso => {
            let h_gamma = phi.gamma().height();
            let h_b = phi.b().height();
            let approx = (h_gamma as f64 / h_b as f64).log2() + 1.0;
            Ok(Rho {
                h_gamma,
                h_b,
                approx,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HeightCase {
    UnequalHeights,
    EqualHeightsNonIso,
    Isotrivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PcfStatus {
    /// The constant orbit `c_n` enters a cycle: `c_{preperiod + period} = c_preperiod`.
    Finite {
        preperiod: usize,
        period: usize,
    },
    Infinite {
        witness: InfiniteWitness,
    },
    UndeterminedUpTo {
        bound: usize,
    },
}

impl PcfStatus {
    pub fn is_infinite(&self) -> bool {
        matches!(self, PcfStatus::Infinite { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum InfiniteWitness {
    /// Heights of `phi^m(gamma)` strictly increase for `m >= from_level`.
    HeightGrowth { from_level: usize },
    /// `|s_n|` exceeds the escape radius of `s -> s^2 + a`.
    Escape { level: usize, value: String },
    /// `a = gamma - c` is not an integer, so some p-adic valuation of the orbit diverges.
    NonIntegral { a: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapClass {
    pub isotrivial: bool,
    pub height_case: HeightCase,
    pub pcf: PcfStatus,
}

/// Constants `c_n = phi^n(gamma) - c` for `n = 1..=count` of an isotrivial map.
pub fn isotrivial_constants(phi: &QuadMap, count: usize) -> Result<Vec<Rat>> {
    if !phi.is_isotrivial() {
        return Err(Error::NotIsotrivial);
    }
    let b = phi.b().constant_term();
    let mut out = Vec::with_capacity(count);
    let mut cn = Rat::zero();
    for _ in 0..count {
        out.push(cn.clone());
        let s = &cn - &b;
        cn = &s * &s;
    }
    Ok(out)
}

/// `|s| > (1 + sqrt(1 + 4|a|)) / 2`, decided exactly.
pub(crate) fn escapes(s: &Rat, a: &Rat) -> bool {
    let two = Rat::from_integer(2.into());
    let lhs = &(&two * s.abs()) - &Rat::one();
    lhs.is_positive() && &lhs * &lhs > Rat::one() + Rat::from_integer(4.into()) * a.abs()
}

/// Orbit of the constant recursion `s -> s^2 + a` with `a = c - gamma`, `s_n = c_n - b`.
fn classify_isotrivial(phi: &QuadMap, bound: usize) -> PcfStatus {
    let b = phi.b().constant_term();
    let a = -b.clone();
    if !a.is_integer() {
        return PcfStatus::Infinite {
            witness: InfiniteWitness::NonIntegral { a: render_rat(&a) },
        };
    }
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    // s_1 = c_1 - b = -b = a
    let mut s = a.clone();
    for n in 1..=bound {
        if escapes(&s, &a) {
            let value = render_rat(&(&s + &b));
            return PcfStatus::Infinite {
                witness: InfiniteWitness::Escape { level: n, value },
            };
        }
        if let Some(&first) = seen.get(s.numer()) {
            return PcfStatus::Finite {
                preperiod: first,
                period: n - first,
            };
        }
        seen.insert(s.numer().clone(), n);
        s = &s * &s + &a;
    }
    PcfStatus::UndeterminedUpTo { bound }
}

/// Classifies `phi`: isotriviality via `h(gamma - c) = 0`, and post-critical finiteness.
pub fn classify(phi: &QuadMap, pcf_bound: usize) -> MapClass {
    let height_case = phi.height_case();
    let pcf = match height_case {
        HeightCase::Isotrivial => classify_isotrivial(phi, pcf_bound),
        HeightCase::UnequalHeights => PcfStatus::Infinite {
            witness: InfiniteWitness::HeightGrowth { from_level: 1 },
        },
        HeightCase::EqualHeightsNonIso => {
            let hc = phi.c().height() as u64;
            let hb = phi.b().height();
            let from_level = (1..).find(|&m| pow2_times(m - 1, hb) > hc).unwrap();
            PcfStatus::Infinite {
                witness: InfiniteWitness::HeightGrowth { from_level },
            }
        }
    };
    MapClass {
        isotrivial: height_case == HeightCase::Isotrivial,
        height_case,
        pcf,
    }
}

/// `phi_f(x) = (x - gamma(f))^2 + c(f)` over K = Q(t).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadMapOverK {
    pub gamma: RatFunc,
    pub c: RatFunc,
}

impl QuadMapOverK {
    /// The same map with polynomial coefficients, if both are polynomials.
    pub fn to_poly_map(&self) -> Option<QuadMap> {
        Some(QuadMap::new(
            self.gamma.as_poly()?.clone(),
            self.c.as_poly()?.clone(),
        ))
    }

    /// Level 1 is maximal iff `-c` is not a square in K.
    pub fn level1_maximal(&self) -> Result<bool> {
        if self.c.is_zero() {
            return Ok(false);
        }
        Ok(!(-&self.c).is_square()?)
    }
}

pub fn base_change(phi: &QuadMap, f: &RatFunc) -> Result<QuadMapOverK> {
    if f.is_constant() {
        return Err(Error::ConstantInput("base_change"));
    }
    Ok(QuadMapOverK {
        gamma: f.substitute_into(phi.gamma()),
        c: f.substitute_into(phi.c()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum QuadFactorization {
    Irreducible,
    /// `(x - root1)(x - root2)` with `root1 = gamma + r`, `root2 = gamma - r`, `r^2 = -c`.
    SplitLinear {
        root1: RatFunc,
        root2: RatFunc,
    },
}

pub fn factor_quadratic(psi: &QuadMapOverK) -> QuadFactorization {
    if psi.c.is_zero() {
        return QuadFactorization::SplitLinear {
            root1: psi.gamma.clone(),
            root2: psi.gamma.clone(),
        };
    }
    match (-&psi.c).sqrt().expect("nonzero") {
        Some(r) => QuadFactorization::SplitLinear {
            root1: &psi.gamma + &r,
            root2: &psi.gamma - &r,
        },
        None => QuadFactorization::Irreducible,
    }
}
