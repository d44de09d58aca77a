//! Text grammar for elements of Q[t] and Q(t).
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' digits)?
//! atom   := digits | 't' | '(' expr ')'
//! ```
//!
//! Rational literals are written `p/q`. Whitespace is ignored. Rendering produces
//! text in the same grammar, highest degree first, e.g. `t^3 - 1/2*t + 3` and
//! `(t^6 - t^5 - 1)/(t^6)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{Poly, Rat, RatFunc};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == b'*' {
                &acc * &rhs
            } else {
                if rhs.is_zero() {
                    return Err(Error::Parse {
                        pos: at,
                        msg: "division by zero".into(),
                    });
                }
                (&acc / &rhs)?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return self.err("expected a nonnegative integer exponent");
            }
            let Ok(e) = digits.parse::<u32>() else {
                return self.err("exponent too large");
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'0'..=b'9') => {
                let digits = self.digits();
                if self.src.get(self.pos) == Some(&b'.') {
                    return self.err("decimal literals are not supported; write p/q");
                }
                let n: BigInt = digits.parse().expect("digits");
                Ok(RatFunc::constant(Rat::from_integer(n)))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(RatFunc::from_poly(Poly::t()))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an element of Q(t).
pub fn parse_ratfunc(text: &str) -> Result<RatFunc> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let value = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(value)
}

/// Parses an element of Q[t]; rational functions with a nontrivial denominator are rejected.
pub fn parse_poly(text: &str) -> Result<Poly> {
    parse_ratfunc(text)?.into_poly()
}

fn write_rat(f: &mut fmt::Formatter<'_>, r: &Rat) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Renders a rational in the grammar (`3`, `-1/2`).
pub fn render_rat(r: &Rat) -> String {
    struct R<'a>(&'a Rat);
    impl fmt::Display for R<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_rat(f, self.0)
        }
    }
    R(r).to_string()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            if k == 0 {
                write_rat(f, &mag)?;
                continue;
            }
            if !mag.is_one() {
                write_rat(f, &mag)?;
                write!(f, "*")?;
            }
            if k == 1 {
                write!(f, "t")?;
            } else {
                write!(f, "t^{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num())
        } else {
            write!(f, "({})/({})", self.num(), self.den())
        }
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn parses_examples() {
        assert_eq!(
            parse_poly("t^3 - 1").unwrap(),
            Poly::from_ints(&[-1, 0, 0, 1])
        );
        assert_eq!(
            parse_poly("-(1/2)*t + 3").unwrap(),
            Poly::from_coeffs(vec![q(3, 1), q(-1, 2)])
        );
        let f = parse_ratfunc("(t^6-t^5-1)/t^6").unwrap();
        assert_eq!(f.num(), &Poly::from_ints(&[-1, 0, 0, 0, 0, -1, 1]));
        assert_eq!(f.den(), &Poly::monomial(q(1, 1), 6));
        assert_eq!(parse_ratfunc("1/t^2").unwrap().height(), 2);
        assert_eq!(
            parse_poly(" - t ^ 2 - 1 ").unwrap(),
            Poly::from_ints(&[-1, 0, -1])
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_poly("t +"),
            Err(Error::Parse { pos: 3, .. })
        ));
        assert!(matches!(parse_poly("1.5*t"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_poly("x + 1"),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(matches!(parse_poly("(t + 1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("t^-1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("1/(t - t)"), Err(Error::Parse { .. })));
        assert_eq!(parse_poly("1/t"), Err(Error::NotPolynomial));
    }

    #[test]
    fn renders_in_grammar() {
        assert_eq!(Poly::from_ints(&[-1, 0, 0, 1]).to_string(), "t^3 - 1");
        assert_eq!(
            Poly::from_coeffs(vec![q(3, 1), q(-1, 2)]).to_string(),
            "-1/2*t + 3"
        );
        assert_eq!(Poly::zero().to_string(), "0");
        let f = parse_ratfunc("(t^6-t^5-1)/t^6").unwrap();
        assert_eq!(f.to_string(), "(t^6 - t^5 - 1)/(t^6)");
        assert_eq!(parse_ratfunc(&f.to_string()).unwrap(), f);
    }
}
