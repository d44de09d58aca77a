//! One-sided coprimality certificates modulo random word-size primes.
//!
//! If `p` divides no denominator and neither leading coefficient of `a`, `b`, and
//! `gcd(a mod p, b mod p) = 1`, then `gcd(a, b) = 1` over Q: any common factor
//! over Z keeps its degree modulo such a `p`. A nontrivial gcd modulo `p` proves
//! nothing, so failure is reported as inconclusive, never as "not coprime".

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use super::Poly;

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A uniformly drawn prime in `[2^61, 2^62)`.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

fn reduce_int(c: &BigInt, p: u64) -> u64 {
    let r = c % BigInt::from(p);
    let r = if r < BigInt::zero() {
        r + BigInt::from(p)
    } else {
        r
    };
    r.to_u64().unwrap()
}

/// Image of a rational polynomial in F_p[t], or `None` if `p` divides a denominator.
pub fn reduce_mod(a: &Poly, p: u64) -> Option<Vec<u64>> {
    let mut out = Vec::with_capacity(a.coeffs().len());
    for c in a.coeffs() {
        let den = reduce_int(c.denom(), p);
        if den == 0 {
            return None;
        }
        out.push(mul_mod(reduce_int(c.numer(), p), inv_mod(den, p), p));
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    Some(out)
}

fn rem_mod(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    while a.len() > db && !a.is_empty() {
        let da = a.len() - 1;
        let f = mul_mod(a[da], inv, p);
        let shift = da - db;
        for (i, &bc) in b.iter().enumerate() {
            a[shift + i] = (a[shift + i] + p - mul_mod(f, bc, p)) % p;
        }
        while a.last() == Some(&0) {
            a.pop();
        }
    }
    a
}

/// Degree of `gcd(a, b)` in F_p[t]; both inputs nonzero.
pub fn gcd_degree_mod(a: &[u64], b: &[u64], p: u64) -> usize {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem_mod(a, &b, p);
        a = b;
        b = r;
    }
    a.len() - 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Coprimality {
    /// `gcd = 1` over Q, witnessed by this prime (`None` when an input is a unit).
    Coprime { prime: Option<u64> },
    /// No tried prime separated the inputs.
    Inconclusive { primes: Vec<u64> },
}

impl Coprimality {
    pub fn is_coprime(&self) -> bool {
        matches!(self, Coprimality::Coprime { .. })
    }
}

/// Attempts to certify `gcd(a, b) = 1` with up to `attempts` random primes.
pub fn certify_coprime<R: Rng + ?Sized>(
    a: &Poly,
    b: &Poly,
    attempts: usize,
    rng: &mut R,
) -> Coprimality {
    let mut tried = Vec::new();
    if a.is_zero() || b.is_zero() {
        return Coprimality::Inconclusive { primes: tried };
    }
    if a.is_constant() || b.is_constant() {
        // nonzero constants are units
        return Coprimality::Coprime { prime: None };
    }
    for _ in 0..attempts {
        let p = random_prime(rng);
        tried.push(p);
        let (Some(am), Some(bm)) = (reduce_mod(a, p), reduce_mod(b, p)) else {
            continue;
        };
        if am.len() != a.coeffs().len() || bm.len() != b.coeffs().len() {
            continue;
        }
        if gcd_degree_mod(&am, &bm, p) == 0 {
            return Coprimality::Coprime { prime: Some(p) };
        }
    }
    Coprimality::Inconclusive { primes: tried }
}

/// Square-freeness certificate: `gcd(g, g') = 1` modulo a prime.
pub fn certify_squarefree<R: Rng + ?Sized>(g: &Poly, attempts: usize, rng: &mut R) -> Coprimality {
    certify_coprime(g, &g.derivative(), attempts, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(2_305_843_009_213_693_951)); // 2^61 - 1
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
        assert!(!is_prime_u64(1));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = random_prime(&mut rng);
        assert!(p >= 1 << 61 && is_prime_u64(p));
    }

    #[test]
    fn coprimality_certificates() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = Poly::from_ints(&[2, 1]);
        let b = Poly::from_ints(&[5, 1]);
        assert!(certify_coprime(&a, &b, 3, &mut rng).is_coprime());
        let shared = Poly::from_ints(&[-1, 0, 1]);
        assert!(!certify_coprime(&shared, &Poly::from_ints(&[-1, 1]), 3, &mut rng).is_coprime());
        assert!(!certify_squarefree(&Poly::from_ints(&[1, 2, 1]), 3, &mut rng).is_coprime());
        assert!(certify_squarefree(&Poly::from_ints(&[1, 0, 1]), 3, &mut rng).is_coprime());
    }
}
