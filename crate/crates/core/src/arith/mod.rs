//! Exact arithmetic in Q, Q[t], Q(t) and Q[t][x].

mod bipoly;
mod gcd;
mod intpoly;
pub mod modular;
mod parse;
mod poly;
mod ratfunc;
mod resultant;

/// Arbitrary-precision rational number.
pub type Rat = num_rational::BigRational;

pub use bipoly::BiPoly;
pub use gcd::{
    poly_gcd, poly_sqrt_exact, rat_sqrt, squarefree_decompose, squarefree_part_split,
    SquareFreeDecomposition,
};
pub use parse::{parse_poly, parse_ratfunc, render_rat};
pub use poly::Poly;
pub use ratfunc::{is_square_ratfunc, RatFunc};
pub use resultant::{disc_t_shifted, disc_x, poly_discriminant, poly_resultant, resultant_x};

/// Height of an element of Q(t): the larger of the numerator and denominator degrees.
pub fn height(f: &RatFunc) -> usize {
    f.height()
}
