//! Resultants and discriminants.
//!
//! Sign conventions, fixed once for the whole crate:
//!
//! * `Res(A, B) = lc(A)^deg(B) * prod_{A(r)=0} B(r)`, the determinant of the
//!   Sylvester matrix with the rows of `A` on top. So `Res(x - p, x - q) = p - q`.
//! * `disc(A) = (-1)^(d(d-1)/2) * Res(A, A') / lc(A)` for `d = deg A`, so that
//!   `disc(a x^2 + b x + c) = b^2 - 4ac` and `disc((x - g)^2 + c) = -4c`.
//!   A polynomial of degree 1 has discriminant 1.
//!
//! Bivariate resultants are computed by specializing `t` at enough integer points,
//! taking exact univariate resultants there, and interpolating. The number of points
//! comes from an a-priori degree bound on the resultant, so the result is exact.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{intpoly, BiPoly, Poly, Rat};
use crate::error::{Error, Result};

/// Resultant of two univariate polynomials over Q.
pub fn poly_resultant(a: &Poly, b: &Poly) -> Rat {
    if a.is_zero() || b.is_zero() {
        return Rat::zero();
    }
    let (da, ia) = a.clear_denominators();
    let (db, ib) = b.clear_denominators();
    let (na, nb) = (ia.len() - 1, ib.len() - 1);
    let r = intpoly::resultant(&ia, &ib);
    let scale: BigInt = num_traits::pow(da, nb) * num_traits::pow(db, na);
    Rat::new(r, scale)
}

fn disc_sign(d: usize) -> bool {
    (d * (d - 1) / 2) % 2 == 1
}

/// Discriminant of a univariate polynomial over Q with the crate convention.
pub fn poly_discriminant(a: &Poly) -> Result<Rat> {
    let d = a.degree().ok_or(Error::ZeroInput("discriminant"))?;
    if d == 0 {
        return Err(Error::ConstantInput("discriminant"));
    }
    let r = poly_resultant(a, &a.derivative()) / a.lc().unwrap();
    Ok(if disc_sign(d) { -r } else { r })
}

/// Upper bound on `deg_t Res_x(a, b)`.
///
/// Takes the smaller of the Sylvester row-sum bound and the isobaric bound: if
/// `deg_t a_i <= w (m - i) + L_a` for all `i`, every term of the resultant has `n`
/// factors from `a` and `m` from `b` of total weight `mn`.
fn resultant_degree_bound(a: &BiPoly, b: &BiPoly) -> usize {
    let m = a.degree_x().unwrap();
    let n = b.degree_x().unwrap();
    let row = n * a.degree_t() + m * b.degree_t();

    // w as a fraction (num, den), the max over both inputs of (deg a_i - L)/(deg - i)
    let mut w = (0usize, 1usize);
    let mut offsets = [0usize; 2];
    for (slot, (p, deg)) in [(a, m), (b, n)].into_iter().enumerate() {
        let lead = p.lc().unwrap().height();
        offsets[slot] = lead;
        for (i, c) in p.coeffs().iter().enumerate().take(deg) {
            if c.is_zero() {
                continue;
            }
            let excess = c.height().saturating_sub(lead);
            let span = deg - i;
            if excess * w.1 > w.0 * span {
                w = (excess, span);
            }
        }
    }
    let iso = (w.0 * m * n) / w.1 + n * offsets[0] + m * offsets[1];
    row.min(iso)
}

/// Interpolates the polynomial through `(xs[i], ys[i])` (distinct nodes).
fn interpolate(xs: &[Rat], ys: &[Rat]) -> Poly {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let diff = &coef[i] - &coef[i - 1];
            coef[i] = if diff.is_zero() {
                diff
            } else {
                diff / (&xs[i] - &xs[i - j])
            };
        }
    }
    let mut acc = Poly::zero();
    for i in (0..n).rev() {
        let lin = Poly::from_coeffs(vec![-xs[i].clone(), Rat::one()]);
        acc = &(&acc * &lin) + &Poly::constant(coef[i].clone());
    }
    acc
}

/// Integer evaluation nodes 0, 1, -1, 2, -2, ...
fn nodes() -> impl Iterator<Item = Rat> {
    (0i64..).flat_map(|k| {
        let first = Rat::from_integer(k.into());
        let second = (k > 0).then(|| Rat::from_integer((-k).into()));
        std::iter::once(first).chain(second)
    })
}

/// `Res_x(a, b)` as a polynomial in `t`.
pub fn resultant_x(a: &BiPoly, b: &BiPoly) -> Result<Poly> {
    let m = a.degree_x().ok_or(Error::ZeroInput("resultant_x"))?;
    let n = b.degree_x().ok_or(Error::ZeroInput("resultant_x"))?;
    if m == 0 {
        return Ok(a.coeff(0).pow(n as u32));
    }
    if n == 0 {
        return Ok(b.coeff(0).pow(m as u32));
    }
    let bound = resultant_degree_bound(a, b);
    let (la, lb) = (a.lc().unwrap(), b.lc().unwrap());
    let mut xs = Vec::with_capacity(bound + 1);
    let mut ys = Vec::with_capacity(bound + 1);
    for t in nodes() {
        if xs.len() > bound {
            break;
        }
        // keep only nodes where neither leading coefficient vanishes
        if la.eval(&t).is_zero() || lb.eval(&t).is_zero() {
            continue;
        }
        ys.push(poly_resultant(&a.eval_t(&t), &b.eval_t(&t)));
        xs.push(t);
    }
    Ok(interpolate(&xs, &ys))
}

/// Discriminant in `x` over Q[t]. Uses a translation in `x` to remove the
/// subleading coefficient first when the leading coefficient is constant; the
/// discriminant is translation invariant and the degree bound gets much sharper.
pub fn disc_x(a: &BiPoly) -> Result<Poly> {
    let d = a.degree_x().ok_or(Error::ZeroInput("disc_x"))?;
    if d == 0 {
        return Err(Error::ConstantInput("disc_x"));
    }
    let lc = a.lc().unwrap().clone();
    let shifted;
    let a = if lc.is_constant() && d >= 2 && !a.coeff(d - 1).is_zero() {
        let denom = lc.constant_term() * Rat::from_integer(d.into());
        shifted = a.shift_x(&a.coeff(d - 1).scale(&-denom.recip()));
        &shifted
    } else {
        a
    };
    let r = resultant_x(a, &a.derivative_x())?;
    let q = r.div_exact(&lc)?;
    Ok(if disc_sign(d) { -q } else { q })
}

/// `p(s) = disc_t(c(t) + s)`, returned as a polynomial whose variable is `s`.
pub fn disc_t_shifted(c: &Poly) -> Result<Poly> {
    match c.degree() {
        None | Some(0) => return Err(Error::ConstantInput("disc_t_shifted")),
        _ => {}
    }
    // view c(t) + s as a polynomial in t whose coefficients live in Q[s]
    let coeffs = c
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, ck)| {
            if k == 0 {
                Poly::from_coeffs(vec![ck.clone(), Rat::one()])
            } else {
                Poly::constant(ck.clone())
            }
        })
        .collect();
    disc_x(&BiPoly::from_coeffs(coeffs))
}
