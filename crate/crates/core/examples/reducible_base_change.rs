// A stable map whose base change by 1/t^2 is reducible.

use quadtower::arith::{parse_poly, parse_ratfunc};
use quadtower::dynamics::{base_change, factor_quadratic, QuadFactorization, QuadMap};
use quadtower::stability::certify_auto;

fn main() {
    let phi = QuadMap::new(parse_poly("t^3 - 1").unwrap(), parse_poly("-t").unwrap());
    println!("phi stable: {}", certify_auto(&phi, 8).summary());

    let psi = base_change(&phi, &parse_ratfunc("1/t^2").unwrap()).unwrap();
    println!("phi_f = (x - ({}))^2 + ({})", psi.gamma, psi.c);
    match factor_quadratic(&psi) {
        QuadFactorization::SplitLinear { root1, root2 } => {
            println!("phi_f = (x + ({}))(x + ({}))", -&root1, -&root2);
        }
        QuadFactorization::Irreducible => println!("phi_f is irreducible"),
    }
}
