use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use super::{Poly, Rat};

/// Polynomial in `x` with coefficients in Q[t], lowest x-degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    coeffs: Vec<Poly>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![Poly::zero(), Poly::one()])
    }

    pub fn constant(c: Poly) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Poly {
        self.coeffs.get(k).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Largest t-degree among the coefficients.
    pub fn degree_t(&self) -> usize {
        self.coeffs.iter().map(Poly::height).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lc(&self) -> Option<&Poly> {
        self.coeffs.last()
    }

    pub fn derivative_x(&self) -> BiPoly {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&Rat::from_integer(k.into())))
                .collect(),
        )
    }

    pub fn square(&self) -> BiPoly {
        self * self
    }

    /// `self(x + s)` for `s` in Q[t].
    pub fn shift_x(&self, s: &Poly) -> BiPoly {
        let lin = BiPoly::from_coeffs(vec![s.clone(), Poly::one()]);
        let mut acc = BiPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &BiPoly::constant(c.clone());
        }
        acc
    }

    /// Specializes `t` to a rational value, giving a polynomial in `x` (returned as a
    /// [`Poly`] whose variable now stands for `x`).
    pub fn eval_t(&self, t: &Rat) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c.eval(t)).collect())
    }

    /// Evaluates at `x = value`.
    pub fn eval_x(&self, value: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c})*x^{k}"))
            .collect();
        if parts.is_empty() {
            write!(f, "BiPoly(0)")
        } else {
            write!(f, "BiPoly({})", parts.join(" + "))
        }
    }
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::from_coeffs((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::from_coeffs((0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let mut out = vec![Poly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        BiPoly::from_coeffs(out)
    }
}

impl Zero for BiPoly {
    fn zero() -> Self {
        BiPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: BiPoly) -> BiPoly {
        &self + &rhs
    }
}
