//! Bounds on `log2 |Aut(T_inf) : G_inf(phi)|` and the accumulator that turns level
//! verdicts into such a bound.
//!
//! Every threshold that involves a logarithm is decided by comparing exact powers.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::RatFunc;
use crate::dynamics::QuadMap;
use crate::error::{Error, Result};
use crate::tower::{LevelReport, LevelVerdict};

/// Level from which every level is maximal in the unequal-heights case.
pub const PART1_HORIZON: usize = 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum BoundKind {
    Part1,
    Part2,
    Part3Count,
    Pink,
    BaseChange,
    Accumulated,
}

/// A nonnegative integer or infinity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Log2Bound {
    Finite(BigUint),
    Infinite,
}

impl Log2Bound {
    pub fn finite(v: u64) -> Self {
        Log2Bound::Finite(BigUint::from(v))
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self {
            Log2Bound::Finite(v) => v.to_u64(),
            Log2Bound::Infinite => None,
        }
    }

    fn plus(&self, extra: u64) -> Self {
        match self {
            Log2Bound::Finite(v) => Log2Bound::Finite(v + extra),
            Log2Bound::Infinite => Log2Bound::Infinite,
        }
    }
}

impl fmt::Display for Log2Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Log2Bound::Finite(v) => write!(f, "{v}"),
            Log2Bound::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Log2Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.collect_str(self),
        }
    }
}

/// The quantities a bound was computed from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundInputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_gamma: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_c: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_f: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
}

impl BoundInputs {
    pub fn of_map(phi: &QuadMap) -> Self {
        BoundInputs {
            h_gamma: Some(phi.gamma().height()),
            h_c: Some(phi.c().height()),
            h_b: Some(phi.b().height()),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexBound {
    pub kind: BoundKind,
    /// `log2` of the index bound; for `Part3Count`, the number of non-maximal levels.
    pub log2_bound: Log2Bound,
    pub threshold_level: Option<usize>,
    pub inputs: BoundInputs,
    /// Set when the bound relies on levels past the computed range being maximal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assumption: Option<String>,
    /// Exact index multiplier of a base change, `[k(t) : k(f)] = h(f)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<u64>,
}

impl IndexBound {
    fn new(
        kind: BoundKind,
        log2_bound: Log2Bound,
        threshold_level: Option<usize>,
        inputs: BoundInputs,
    ) -> Self {
        IndexBound {
            kind,
            log2_bound,
            threshold_level,
            inputs,
            assumption: None,
            multiplier: None,
        }
    }
}

fn worst_case_deficit(j: usize) -> BigUint {
    (BigUint::one() << (j - 1)) - 1u32
}

fn level_deficit(levels: &[LevelReport], j: usize) -> BigUint {
    match levels.iter().find(|r| r.n == j).map(|r| r.verdict) {
        Some(LevelVerdict::CertifiedMaximal) => BigUint::zero(),
        Some(LevelVerdict::NonMaximalExact) if j <= 2 => worst_case_deficit(j).min(BigUint::one()),
        _ => worst_case_deficit(j),
    }
}

/// Levels `1..=16` may all fail, everything from 17 on is maximal: `2^16 - 17 = 65519`.
pub fn part1_bound() -> IndexBound {
    let v = (BigUint::one() << (PART1_HORIZON - 1)) - PART1_HORIZON;
    IndexBound::new(
        BoundKind::Part1,
        Log2Bound::Finite(v),
        Some(PART1_HORIZON),
        BoundInputs::default(),
    )
}

/// Least `n` with `n > 2 log2(78 h_gamma / h_b) + 9`, i.e. `2^(n-9) h_b^2 > 78^2 h_gamma^2`.
pub fn part2_threshold(h_gamma: usize, h_b: usize) -> Result<usize> {
    if h_b == 0 {
        return Err(Error::Isotrivial);
    }
    if h_gamma == 0 {
        return Err(Error::ZeroHeight);
    }
    let rhs = BigUint::from(78u32 * 78) * BigUint::from(h_gamma) * BigUint::from(h_gamma) << 9;
    let hb2 = BigUint::from(h_b) * BigUint::from(h_b);
    let mut n = 0usize;
    while (&hb2 << n) <= rhs {
        n += 1;
    }
    Ok(n)
}

/// Part-2 bound realized as the accumulated bound with horizon `part2_threshold`.
pub fn part2_bound(phi: &QuadMap, levels: &[LevelReport], stable: bool) -> Result<IndexBound> {
    let h_gamma = phi.gamma().height();
    if h_gamma != phi.c().height() {
        return Err(Error::UnequalHeights);
    }
    let n0 = part2_threshold(h_gamma, phi.b().height())?;
    let mut bound = accumulate_index(levels, stable, n0)?;
    bound.kind = BoundKind::Part2;
    bound.inputs = BoundInputs {
        levels: Some(levels.len()),
        ..BoundInputs::of_map(phi)
    };
    Ok(bound)
}

fn require_isotrivial(phi: &QuadMap) -> Result<()> {
    if !phi.is_isotrivial() {
        return Err(Error::NotIsotrivial);
    }
    if phi.gamma().height() == 0 {
        return Err(Error::ZeroHeight);
    }
    Ok(())
}

/// At most `h(gamma) - 1` levels of an isotrivial map fail to be maximal.
pub fn part3_count_bound(phi: &QuadMap) -> Result<IndexBound> {
    require_isotrivial(phi)?;
    let count = phi.gamma().height() as u64 - 1;
    Ok(IndexBound::new(
        BoundKind::Part3Count,
        Log2Bound::finite(count),
        None,
        BoundInputs::of_map(phi),
    ))
}

/// `log2` of the isotrivial index bound `2^(ord_2 h(gamma))`.
pub fn pink_bound(phi: &QuadMap) -> Result<IndexBound> {
    require_isotrivial(phi)?;
    let e = phi.gamma().height().trailing_zeros() as u64;
    Ok(IndexBound::new(
        BoundKind::Pink,
        Log2Bound::finite(e),
        None,
        BoundInputs::of_map(phi),
    ))
}

fn ceil_log2(n: u64) -> u64 {
    (u64::BITS - (n - 1).leading_zeros()) as u64
}

/// A bound over the base multiplied by `[k(t) : k(f)] = h(f)`.
pub fn base_change_bound(over_base: &IndexBound, f: &RatFunc) -> Result<IndexBound> {
    if f.is_constant() {
        return Err(Error::ConstantInput("base_change_bound"));
    }
    let hf = f.height() as u64;
    let mut out = over_base.clone();
    out.kind = BoundKind::BaseChange;
    out.log2_bound = over_base.log2_bound.plus(ceil_log2(hf));
    out.inputs.h_f = Some(hf as usize);
    out.multiplier = Some(hf * over_base.multiplier.unwrap_or(1));
    Ok(out)
}

/// `log2` index bound from level verdicts, assuming every level `>= horizon` is maximal.
///
/// Each level `j < horizon` that is not certified maximal contributes `2^(j-1) - 1`;
/// a level decided non-maximal at `j <= 2` contributes its exact deficit instead.
/// Missing levels count as undetermined.
pub fn accumulate_index(
    levels: &[LevelReport],
    stable: bool,
    horizon: usize,
) -> Result<IndexBound> {
    if !stable {
        return Err(Error::Unstable);
    }
    let mut total = BigUint::zero();
    for j in 1..horizon {
        total += level_deficit(levels, j);
    }
    let inputs = BoundInputs {
        levels: Some(levels.len()),
        ..BoundInputs::default()
    };
    Ok(IndexBound::new(
        BoundKind::Accumulated,
        Log2Bound::Finite(total),
        Some(horizon),
        inputs,
    ))
}

/// The accumulated bound with horizon `max_level + 1`: exact only if every level past
/// the computed range is maximal, which is assumed rather than proved.
pub fn accumulate_conditional(levels: &[LevelReport], stable: bool) -> Result<IndexBound> {
    let last = levels.iter().map(|r| r.n).max().unwrap_or(0);
    let mut bound = accumulate_index(levels, stable, last + 1)?;
    bound.assumption = Some(format!("levels beyond {last} assumed maximal"));
    Ok(bound)
}

/// For an isotrivial map with a complete candidate set, only candidate levels can fail.
pub fn accumulate_candidates(
    levels: &[LevelReport],
    candidates: &[usize],
    stable: bool,
) -> Result<IndexBound> {
    if !stable {
        return Err(Error::Unstable);
    }
    let mut total = BigUint::zero();
    for &j in candidates {
        total += level_deficit(levels, j);
    }
    let horizon = candidates.iter().max().map(|j| j + 1);
    let inputs = BoundInputs {
        levels: Some(levels.len()),
        ..BoundInputs::default()
    };
    Ok(IndexBound::new(
        BoundKind::Accumulated,
        Log2Bound::Finite(total),
        horizon,
        inputs,
    ))
}
