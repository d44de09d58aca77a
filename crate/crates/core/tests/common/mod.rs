//! Test-side oracles. Nothing here calls into the library's arithmetic beyond
//! reading coefficients, so agreement with the library is a real cross-check.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use quadtower::arith::{Poly, Rat};
use quadtower::dynamics::QuadMap;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Integer polynomial of exact degree `deg` with coefficients in `-r..=r`.
pub fn random_poly(rng: &mut ChaCha8Rng, deg: usize, r: i64) -> Poly {
    let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-r..=r)).collect();
    while c[deg] == 0 {
        c[deg] = rng.gen_range(-r..=r);
    }
    Poly::from_ints(&c)
}

/// A map with `h(phi) <= max_h`, spread over the three height regimes.
pub fn random_map(rng: &mut ChaCha8Rng, max_h: usize) -> QuadMap {
    match rng.gen_range(0..4) {
        0 => {
            // isotrivial: c = gamma - b with b constant
            let deg = rng.gen_range(1..=max_h);
            let gamma = random_poly(rng, deg, 3);
            let b = Poly::from_ints(&[rng.gen_range(-4..=4)]);
            QuadMap::new(gamma.clone(), &gamma - &b)
        }
        1 => {
            // equal heights, b of smaller height
            let h = rng.gen_range(1..=max_h);
            let gamma = random_poly(rng, h, 3);
            let deg = rng.gen_range(1..=h);
            let b = random_poly(rng, deg, 3);
            let c = &gamma - &b;
            if c.height() == h && !b.is_constant() {
                QuadMap::new(gamma, c)
            } else {
                random_map(rng, max_h)
            }
        }
        _ => {
            let (dg, dc) = (rng.gen_range(0..=max_h), rng.gen_range(0..=max_h));
            let gamma = random_poly(rng, dg, 3);
            let c = random_poly(rng, dc, 3);
            if gamma.height() == 0 && c.height() == 0 {
                random_map(rng, max_h)
            } else {
                QuadMap::new(gamma, c)
            }
        }
    }
}

/// Horner evaluation straight from the coefficient list.
pub fn eval(p: &Poly, t: &Rat) -> Rat {
    p.coeffs()
        .iter()
        .rev()
        .fold(Rat::zero(), |acc, c| acc * t + c)
}

pub mod modp {
    use super::*;

    pub const PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

    fn reduce_int(n: &BigInt, p: u64) -> u64 {
        n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
    }

    fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn reduce(poly: &Poly, p: u64) -> Vec<u64> {
        let mut v: Vec<u64> = poly
            .coeffs()
            .iter()
            .map(|c| {
                let d = reduce_int(c.denom(), p);
                assert_ne!(d, 0, "denominator divisible by p");
                reduce_int(c.numer(), p) * pow(d, p - 2, p) % p
            })
            .collect();
        trim(&mut v);
        v
    }

    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut out: Vec<u64> = (0..a.len().max(b.len()))
            .map(|i| (a.get(i).unwrap_or(&0) + p - b.get(i).unwrap_or(&0)) % p)
            .collect();
        trim(&mut out);
        out
    }

    fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut out: Vec<u64> = (0..a.len().max(b.len()))
            .map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % p)
            .collect();
        trim(&mut out);
        out
    }

    fn square(a: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; 2 * a.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in a.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Degrees of `phi^1(x0), ..., phi^m(x0)` reduced mod `p`.
    pub fn orbit_degrees(phi: &QuadMap, x0: &Poly, m: usize, p: u64) -> Vec<Option<usize>> {
        let g = reduce(phi.gamma(), p);
        let c = reduce(phi.c(), p);
        let mut x = reduce(x0, p);
        (0..m)
            .map(|_| {
                x = add(&square(&sub(&x, &g, p), p), &c, p);
                x.len().checked_sub(1)
            })
            .collect()
    }
}

/// Heights of the first `m` iterates of `x0`; reduction mod a prime can only lower a
/// degree, so the maximum over two primes is exact unless both kill a leading coefficient.
pub fn brute_heights(phi: &QuadMap, x0: &Poly, m: usize) -> Vec<u64> {
    let per_prime: Vec<_> = modp::PRIMES
        .iter()
        .map(|&p| modp::orbit_degrees(phi, x0, m, p))
        .collect();
    (0..m)
        .map(|i| {
            per_prime
                .iter()
                .map(|d| d[i].unwrap_or(0) as u64)
                .max()
                .unwrap()
        })
        .collect()
}

/// Fraction-free determinant.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Resultant of two integer coefficient lists (low degree first) via the Sylvester matrix.
pub fn sylvester_resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in g.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    bareiss_det(rows)
}

/// `disc(f) = (-1)^(d(d-1)/2) res(f, f') / lc(f)` for an integer polynomial of degree `d >= 1`.
pub fn discriminant(f: &[BigInt]) -> Rat {
    let d = f.len() - 1;
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let res = sylvester_resultant(f, &df);
    let signed = if (d * (d - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    };
    Rat::new(signed, f[d].clone())
}

/// `phi^m(x)` with `t` specialized to an integer, as an integer coefficient list.
pub fn specialized_iterate(phi: &QuadMap, t: i64, m: usize) -> Vec<BigInt> {
    let tq = int(t);
    let g = eval(phi.gamma(), &tq);
    let c = eval(phi.c(), &tq);
    assert!(g.is_integer() && c.is_integer());
    let (g, c) = (g.to_integer(), c.to_integer());
    let mut x = vec![BigInt::zero(), BigInt::one()];
    for _ in 0..m {
        let mut shifted = x.clone();
        shifted[0] -= &g;
        let mut sq = vec![BigInt::zero(); 2 * shifted.len() - 1];
        for (i, a) in shifted.iter().enumerate() {
            for (j, b) in shifted.iter().enumerate() {
                sq[i + j] += a * b;
            }
        }
        sq[0] += &c;
        x = sq;
    }
    x
}

/// `Some((sign, e))` when `q = sign * 2^e`.
pub fn signed_log2(q: &Rat) -> Option<(i8, u64)> {
    if !q.is_integer() || q.is_zero() {
        return None;
    }
    let n = q.to_integer();
    let sign = if n.is_negative() { -1 } else { 1 };
    let mag = n.abs();
    let e = mag.trailing_zeros()?;
    (mag >> e).is_one().then_some((sign, e))
}

/// Prints one acceptance line and returns whether it passed.
pub fn verdict(id: u32, name: &str, ok: bool, detail: &str) -> bool {
    println!(
        "[{}] criterion {id}: {name} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}
