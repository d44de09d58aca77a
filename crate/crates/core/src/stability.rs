//! Stability certificates: no square in the adjusted critical orbit
//! `{-phi(gamma), phi^2(gamma), phi^3(gamma), ...}` implies every iterate is irreducible.
//!
//! A square found in the orbit makes the test inconclusive. It never proves instability.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{disc_t_shifted, poly_sqrt_exact, Poly, Rat};
use crate::dynamics::{
    classify, critical_orbit, escapes, isotrivial_constants, HeightCase, QuadMap,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StabilityVerdict {
    CertifiedStable,
    /// The `n`-th adjusted orbit element is a square; the test says nothing about stability.
    SquareFoundAt {
        n: usize,
    },
    Inapplicable {
        reason: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityMethod {
    AdjustedOrbit,
    XSquaredPlusF,
    IsotrivialTail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitWitness {
    pub n: usize,
    pub value: Poly,
    pub is_square: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityCertificate {
    pub verdict: StabilityVerdict,
    pub method: StabilityMethod,
    pub checked_bound: usize,
    pub orbit_witnesses: Vec<OrbitWitness>,
}

impl StabilityCertificate {
    pub fn is_stable(&self) -> bool {
        self.verdict == StabilityVerdict::CertifiedStable
    }

    fn inapplicable(method: StabilityMethod, reason: impl ToString) -> Self {
        StabilityCertificate {
            verdict: StabilityVerdict::Inapplicable {
                reason: reason.to_string(),
            },
            method,
            checked_bound: 0,
            orbit_witnesses: Vec::new(),
        }
    }

    /// One-line human summary; a found square is reported as inconclusive.
    pub fn summary(&self) -> String {
        match &self.verdict {
            StabilityVerdict::CertifiedStable => {
                format!("certified stable (checked through {})", self.checked_bound)
            }
            StabilityVerdict::SquareFoundAt { n } => {
                format!("inconclusive: adjusted orbit element {n} is a square")
            }
            StabilityVerdict::Inapplicable { reason } => format!("inapplicable: {reason}"),
        }
    }
}

/// `[-phi(gamma), phi^2(gamma), ..., phi^n(gamma)]`.
pub fn adjusted_orbit(phi: &QuadMap, n: usize) -> Vec<Poly> {
    let mut orbit = critical_orbit(phi, n);
    if let Some(first) = orbit.first_mut() {
        *first = -&*first;
    }
    orbit
}

/// Number of adjusted orbit elements the general criterion must inspect.
///
/// Unequal heights: 8. Equal heights: the nearest integer to
/// `log2(110 h(gamma) / h(gamma - c)) + 3`, ties rounding up, found as the largest
/// `n` with `2^(2n - 7) h(b)^2 <= 110^2 h(gamma)^2`.
pub fn stability_check_bound(phi: &QuadMap) -> Result<usize> {
    match phi.height_case() {
        HeightCase::Isotrivial => return Err(Error::Isotrivial),
        HeightCase::UnequalHeights => {}
        HeightCase::EqualHeightsNonIso => {}
    }
    let c = phi.c();
    if c.is_zero() || phi.apply(c).is_zero() {
        return Err(Error::SingularCurve);
    }
    if phi.height_case() == HeightCase::UnequalHeights {
        return Ok(8);
    }
    let hg = phi.gamma().height() as u128;
    let hb = phi.b().height() as u128;
    let rhs = 110 * 110 * hg * hg;
    // s >= log2(110) + 3 > 9, so the search can start at n = 4
    let mut n = 4usize;
    while (hb * hb) << (2 * (n + 1) - 7) <= rhs {
        n += 1;
    }
    Ok(n)
}

fn witnesses(values: Vec<(usize, Poly)>) -> Vec<OrbitWitness> {
    values
        .into_par_iter()
        .map(|(n, value)| {
            let is_square = poly_sqrt_exact(&value).is_some();
            OrbitWitness {
                n,
                value,
                is_square,
            }
        })
        .collect()
}

fn verdict_from(ws: &[OrbitWitness]) -> StabilityVerdict {
    match ws.iter().find(|w| w.is_square) {
        Some(w) => StabilityVerdict::SquareFoundAt { n: w.n },
        None => StabilityVerdict::CertifiedStable,
    }
}

/// General criterion for non-isotrivial maps.
pub fn certify_stable(phi: &QuadMap) -> StabilityCertificate {
    let method = StabilityMethod::AdjustedOrbit;
    let bound = match stability_check_bound(phi) {
        Ok(b) => b,
        Err(e) => return StabilityCertificate::inapplicable(method, e),
    };
    let ws = witnesses(
        adjusted_orbit(phi, bound)
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i + 1, v))
            .collect(),
    );
    StabilityCertificate {
        verdict: verdict_from(&ws),
        method,
        checked_bound: bound,
        orbit_witnesses: ws,
    }
}

/// `x^2 + f` is stable as soon as `-f` is not a square.
pub fn certify_stable_xsq_plus_f(f: &Poly) -> StabilityCertificate {
    let method = StabilityMethod::XSquaredPlusF;
    if f.is_constant() {
        return StabilityCertificate::inapplicable(method, Error::ConstantInput("x^2 + f"));
    }
    let ws = witnesses(vec![(1, -f)]);
    StabilityCertificate {
        verdict: verdict_from(&ws),
        method,
        checked_bound: 1,
        orbit_witnesses: ws,
    }
}

fn cauchy_bound(p: &Poly) -> Rat {
    let lc = p.lc().unwrap().abs();
    let d = p.degree().unwrap();
    let max = p.coeffs()[..d]
        .iter()
        .map(|c| c.abs() / &lc)
        .max()
        .unwrap_or_else(Rat::zero);
    max + Rat::from_integer(1.into())
}

/// Least level `L` such that `p(c_n) != 0` for every `n >= L`, where `p(s) = disc_t(c + s)`
/// and `c_n` are the orbit constants. `None` if no such level is found by `cap`.
pub(crate) fn isotrivial_tail_level(phi: &QuadMap, p: &Poly, cap: usize) -> Result<Option<usize>> {
    if p.is_constant() {
        return Ok(Some(1));
    }
    if !phi.is_isotrivial() {
        return Err(Error::NotIsotrivial);
    }
    let b = phi.b().constant_term();
    let a = -b.clone();
    let integral = a.is_integer();
    let bound = cauchy_bound(p);
    // rational roots of p have denominators dividing its integral leading coefficient
    let (_, ints) = p.to_primitive_ints();
    let lc = ints.last().unwrap().abs();
    let mut cn = Rat::zero();
    for n in 1..=cap {
        let s = &cn - &b;
        if integral {
            // past the escape radius |s_n| grows strictly, so |c_n| >= |s_n| - |b| does too
            if escapes(&s, &a) && s.abs() - b.abs() > bound {
                return Ok(Some(n));
            }
        } else if n >= 2 && cn.denom() > &lc {
            // den(c_n) strictly increases from n = 2 on
            return Ok(Some(n));
        }
        cn = &s * &s;
    }
    Ok(None)
}

/// Stability of an isotrivial map, where `phi^n(gamma) = c + c_n` with `c_n` in Q.
///
/// Each `c + c_n` with `p(c_n) != 0` is square-free of positive degree, hence not a
/// square; beyond the tail level this holds for every `n`, and the finitely many
/// earlier levels are tested directly. Witnesses are recorded for `n <= max(n_min, L)`.
pub fn isotrivial_stability_check(phi: &QuadMap, n_min: usize) -> Result<StabilityCertificate> {
    let method = StabilityMethod::IsotrivialTail;
    if !phi.is_isotrivial() {
        return Err(Error::NotIsotrivial);
    }
    if phi.c().is_constant() {
        return Ok(StabilityCertificate::inapplicable(
            method,
            Error::ZeroHeight,
        ));
    }
    let class = classify(phi, 64);
    if !class.pcf.is_infinite() {
        return Ok(StabilityCertificate::inapplicable(
            method,
            Error::PostCriticallyFinite,
        ));
    }
    let p = disc_t_shifted(phi.c())?;
    let Some(tail) = isotrivial_tail_level(phi, &p, 64)? else {
        return Ok(StabilityCertificate::inapplicable(
            method,
            "no tail level found within 64 iterates",
        ));
    };
    let last = n_min.max(tail).max(1);
    let consts = isotrivial_constants(phi, last)?;
    let values = consts
        .iter()
        .enumerate()
        .map(|(i, cn)| {
            let v = phi.c() + &Poly::constant(cn.clone());
            (i + 1, if i == 0 { -v } else { v })
        })
        .collect();
    let ws = witnesses(values);
    Ok(StabilityCertificate {
        verdict: verdict_from(&ws),
        method,
        checked_bound: tail,
        orbit_witnesses: ws,
    })
}

/// Picks the applicable criterion for `phi`.
pub fn certify_auto(phi: &QuadMap, witness_levels: usize) -> StabilityCertificate {
    if phi.is_isotrivial() {
        return isotrivial_stability_check(phi, witness_levels).unwrap_or_else(|e| {
            StabilityCertificate::inapplicable(StabilityMethod::IsotrivialTail, e)
        });
    }
    let general = certify_stable(phi);
    if !general.is_stable() && phi.gamma().is_zero() && !phi.c().is_constant() {
        let fast = certify_stable_xsq_plus_f(phi.c());
        if fast.is_stable() {
            return fast;
        }
    }
    general
}
