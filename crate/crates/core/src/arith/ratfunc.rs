use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::{poly_gcd, poly_sqrt_exact};
use super::{Poly, Rat};
use crate::error::{Error, Result};

/// Reduced fraction `num / den` in Q(t): `den` monic and `gcd(num, den) = 1`.
/// Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = poly_gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        let lc = den.lc().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFunc { num, den })
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn into_poly(self) -> Result<Poly> {
        if self.is_polynomial() {
            Ok(self.num)
        } else {
            Err(Error::NotPolynomial)
        }
    }

    /// Height `max(deg num, deg den)`; `h(0) = 0`.
    pub fn height(&self) -> usize {
        self.num.height().max(self.den.height())
    }

    pub fn recip(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        // reduced fractions stay reduced under powers
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Evaluates the polynomial `p` at this rational function.
    pub fn substitute_into(&self, p: &Poly) -> RatFunc {
        let mut acc = RatFunc::zero();
        for c in p.coeffs().iter().rev() {
            acc = &(&acc * self) + &RatFunc::constant(c.clone());
        }
        acc
    }

    /// True iff this is a nonzero square in Q(t).
    pub fn is_square(&self) -> Result<bool> {
        Ok(self.sqrt()?.is_some())
    }

    /// A square root in Q(t) (numerator with positive leading coefficient), if any.
    /// `num/den` is a square iff `num * den` is a square in Q[t].
    pub fn sqrt(&self) -> Result<Option<RatFunc>> {
        if self.is_zero() {
            return Err(Error::ZeroInput("is_square_ratfunc"));
        }
        let Some(root) = poly_sqrt_exact(&(&self.num * &self.den)) else {
            return Ok(None);
        };
        Ok(Some(RatFunc::new(root, self.den.clone())?))
    }
}

/// Membership test `a ∈ (K*)^2` for `K = Q(t)`.
pub fn is_square_ratfunc(a: &RatFunc) -> Result<bool> {
    a.is_square()
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).unwrap()
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = Result<RatFunc>;
    fn div(self, rhs: &RatFunc) -> Result<RatFunc> {
        Ok(self * &rhs.recip()?)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn reduction_normalizes() {
        // (2t^2 - 2) / (4t - 4) = (t + 1) / 2
        let f = RatFunc::new(Poly::from_ints(&[-2, 0, 2]), Poly::from_ints(&[-4, 4])).unwrap();
        assert_eq!(
            f,
            RatFunc::from_poly(Poly::from_coeffs(vec![q(1, 2), q(1, 2)]))
        );
        assert!(f.is_polynomial());
        assert_eq!(
            RatFunc::new(Poly::one(), Poly::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn heights() {
        assert_eq!(
            RatFunc::from_poly(Poly::from_ints(&[-1, 0, 0, 1])).height(),
            3
        );
        let f = RatFunc::new(
            Poly::from_ints(&[-1, 0, 0, 0, 0, -1, 1]),
            Poly::monomial(q(1, 1), 6),
        )
        .unwrap();
        assert_eq!(f.height(), 6);
        assert_eq!(RatFunc::constant(q(5, 1)).height(), 0);
        assert_eq!(RatFunc::zero().height(), 0);
    }

    #[test]
    fn squares() {
        let inv_t2 = RatFunc::new(Poly::one(), Poly::monomial(q(1, 1), 2)).unwrap();
        assert!(is_square_ratfunc(&inv_t2).unwrap());
        assert!(!is_square_ratfunc(&RatFunc::from_poly(Poly::from_ints(&[1, 0, 1]))).unwrap());
        assert!(is_square_ratfunc(&RatFunc::constant(q(9, 4))).unwrap());
        assert!(is_square_ratfunc(&RatFunc::zero()).is_err());
        let root = inv_t2.sqrt().unwrap().unwrap();
        assert_eq!(root, RatFunc::new(Poly::one(), Poly::t()).unwrap());
    }

    #[test]
    fn substitution() {
        // (t^3 - 1) at 1/t^2 = (1 - t^6) / t^6
        let f = RatFunc::new(Poly::one(), Poly::monomial(q(1, 1), 2)).unwrap();
        let got = f.substitute_into(&Poly::from_ints(&[-1, 0, 0, 1]));
        let want = RatFunc::new(
            Poly::from_ints(&[1, 0, 0, 0, 0, 0, -1]),
            Poly::monomial(q(1, 1), 6),
        )
        .unwrap();
        assert_eq!(got, want);
    }
}
