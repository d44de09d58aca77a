//! Greatest common divisors and square-free structure in Q[t].

use super::{intpoly, Poly, Rat};
use crate::error::{Error, Result};
use num_traits::{Signed, Zero};

/// Monic gcd over Q; `gcd(0, 0) = 0`.
///
/// Both inputs are scaled to primitive integer polynomials and reduced with the
/// subresultant remainder sequence, which keeps coefficient growth linear.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() && b.is_zero() {
        return Poly::zero();
    }
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let (_, ia) = a.to_primitive_ints();
    let (_, ib) = b.to_primitive_ints();
    Poly::from_bigints(intpoly::gcd(&ia, &ib)).monic()
}

/// `unit * prod factor^multiplicity`, each factor monic and square-free, pairwise coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareFreeDecomposition {
    pub unit: Rat,
    pub factors: Vec<(Poly, u32)>,
}

impl SquareFreeDecomposition {
    pub fn recompose(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (f, m)| {
                &acc * &f.pow(*m)
            })
    }
}

/// Yun's square-free decomposition.
pub fn squarefree_decompose(g: &Poly) -> Result<SquareFreeDecomposition> {
    let unit = g
        .lc()
        .cloned()
        .ok_or(Error::ZeroInput("squarefree_decompose"))?;
    let f = g.monic();
    let mut factors = Vec::new();
    if f.is_constant() {
        return Ok(SquareFreeDecomposition { unit, factors });
    }
    let df = f.derivative();
    let a0 = poly_gcd(&f, &df);
    if a0.is_one() {
        factors.push((f, 1));
        return Ok(SquareFreeDecomposition { unit, factors });
    }
    let mut b = f.div_exact(&a0)?;
    let c = df.div_exact(&a0)?;
    let mut d = &c - &b.derivative();
    let mut i = 1u32;
    while !b.is_constant() {
        let a = poly_gcd(&b, &d);
        if !a.is_constant() {
            factors.push((a.clone(), i));
        }
        b = b.div_exact(&a)?;
        let c = d.div_exact(&a)?;
        d = &c - &b.derivative();
        i += 1;
    }
    Ok(SquareFreeDecomposition { unit, factors })
}

/// Square-free split `g = u * d * y^2` with `d` monic square-free, `y` monic and
/// `u` a nonzero rational.
pub fn squarefree_part_split(g: &Poly) -> Result<(Poly, Poly, Rat)> {
    let dec = squarefree_decompose(g)?;
    let mut d = Poly::one();
    let mut y = Poly::one();
    for (f, m) in &dec.factors {
        if m % 2 == 1 {
            d = &d * f;
        }
        if *m >= 2 {
            y = &y * &f.pow(m / 2);
        }
    }
    Ok((d, y, dec.unit))
}

/// Exact square root of a rational, when it exists.
pub fn rat_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rat::new(n, d))
}

/// Square root in Q[t] with positive leading coefficient, if `g` is a square.
///
/// Cheap screens run first (parity of the degree, the leading coefficient, values at
/// a few integer points); survivors are solved by matching coefficients from the
/// top down and the candidate is squared back before being returned.
pub fn poly_sqrt_exact(g: &Poly) -> Option<Poly> {
    let Some(deg) = g.degree() else {
        return Some(Poly::zero());
    };
    if deg % 2 == 1 {
        return None;
    }
    let lead = rat_sqrt(g.lc().unwrap())?;
    for x in 0..4i64 {
        rat_sqrt(&g.eval(&Rat::from_integer(x.into())))?;
    }
    let half = deg / 2;
    // root = sum r_j t^j, r_half = lead; fill r_{half-1}, ..., r_0
    let mut r = vec![Rat::zero(); half + 1];
    r[half] = lead;
    let two_lead = &r[half] * Rat::from_integer(2.into());
    for i in 1..=half {
        let k = 2 * half - i;
        let mut acc = g.coeff(k);
        // coefficient of t^k in root^2, excluding the two terms that involve r_{half-i}
        for j in (half - i + 1)..=half {
            let other = k - j;
            if other > half - i && other <= half {
                acc -= &r[j] * &r[other];
            }
        }
        r[half - i] = acc / &two_lead;
    }
    let root = Poly::from_coeffs(r);
    (root.square() == *g).then_some(root)
}
