//! Dense polynomials over Z, lowest degree first.
//!
//! This is the fraction-free kernel behind gcd and resultant computations on
//! [`Poly`](super::Poly): callers clear denominators, work here, and scale back.
//! Vectors are kept trimmed (no trailing zeros); the zero polynomial is empty.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub(crate) fn degree(v: &[BigInt]) -> Option<usize> {
    v.len().checked_sub(1)
}

/// Nonnegative gcd of the coefficients; zero for the zero polynomial.
pub(crate) fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Primitive part with positive leading coefficient.
pub(crate) fn primitive_part(v: &[BigInt]) -> Vec<BigInt> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut g = content(v);
    if v.last().unwrap().is_negative() {
        g = -g;
    }
    v.iter().map(|c| c / &g).collect()
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn scale(v: &mut [BigInt], s: &BigInt) {
    if s.is_one() {
        return;
    }
    for c in v.iter_mut() {
        *c *= s;
    }
}

fn div_scalar_exact(v: &mut [BigInt], s: &BigInt) {
    if s.is_one() {
        return;
    }
    for c in v.iter_mut() {
        debug_assert!((&*c % s).is_zero());
        *c /= s;
    }
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`. Requires `deg a >= deg b`.
pub(crate) fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = degree(b).expect("prem by zero polynomial");
    let da = degree(a).expect("prem of zero polynomial");
    debug_assert!(da >= db);
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    let mut remaining = (da - db + 1) as u32;
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let lr = r.last().unwrap().clone();
        let shift = dr - db;
        scale(&mut r, lb);
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &lr * bc;
        }
        debug_assert!(r[dr].is_zero());
        trim(&mut r);
        remaining -= 1;
    }
    if remaining > 0 && !r.is_empty() {
        scale(&mut r, &num_traits::pow(lb.clone(), remaining as usize));
    }
    r
}

/// Primitive gcd over Q[x] of two integer polynomials, via the subresultant
/// remainder sequence. The result is primitive with positive leading coefficient;
/// `gcd(0, 0)` is the zero polynomial.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return primitive_part(b);
    }
    if b.is_empty() {
        return primitive_part(a);
    }
    let mut a = primitive_part(a);
    let mut b = primitive_part(b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        if b.len() == 1 {
            return vec![BigInt::one()];
        }
        let delta = a.len() - b.len();
        let r = prem(&a, &b);
        if r.is_empty() {
            return primitive_part(&b);
        }
        let divisor = &g * num_traits::pow(h.clone(), delta);
        a = std::mem::replace(&mut b, r);
        div_scalar_exact(&mut b, &divisor);
        g = a.last().unwrap().clone();
        if delta > 0 {
            h = num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1);
        }
    }
}

/// Resultant `Res(a, b) = lc(a)^deg(b) * prod_{a(r)=0} b(r)`, computed with the
/// subresultant algorithm. Zero if either input is zero.
pub(crate) fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    if a.is_empty() || b.is_empty() {
        return BigInt::zero();
    }
    let (da, db) = (a.len() - 1, b.len() - 1);
    if da == 0 {
        return num_traits::pow(a[0].clone(), db);
    }
    if db == 0 {
        return num_traits::pow(b[0].clone(), da);
    }
    let ca = content(a);
    let cb = content(b);
    let t = num_traits::pow(ca.clone(), db) * num_traits::pow(cb.clone(), da);
    let mut a: Vec<BigInt> = a.iter().map(|c| c / &ca).collect();
    let mut b: Vec<BigInt> = b.iter().map(|c| c / &cb).collect();
    let mut sign_negative = false;
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            sign_negative = true;
        }
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (dega, degb) = (a.len() - 1, b.len() - 1);
        let delta = dega - degb;
        if dega % 2 == 1 && degb % 2 == 1 {
            sign_negative = !sign_negative;
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            return BigInt::zero();
        }
        let divisor = &g * num_traits::pow(h.clone(), delta);
        a = std::mem::replace(&mut b, r);
        div_scalar_exact(&mut b, &divisor);
        g = a.last().unwrap().clone();
        if delta > 0 {
            h = num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1);
        }
        if b.len() == 1 {
            let dega = a.len() - 1;
            let h_final = num_traits::pow(b[0].clone(), dega) / num_traits::pow(h, dega - 1);
            let res = t * h_final;
            return if sign_negative { -res } else { res };
        }
    }
}
