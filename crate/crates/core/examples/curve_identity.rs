// Points on quadratic twists of Y^2 = (X - c) phi(X) coming from the critical orbit.

use quadtower::arith::parse_poly;
use quadtower::dynamics::QuadMap;
use quadtower::tower::{obstruction, verify_curve_identity};

fn main() {
    let phi = QuadMap::new(parse_poly("t").unwrap(), parse_poly("t^2 + 2").unwrap());
    for n in 2..=5 {
        let ob = obstruction(&phi, n).unwrap();
        let check = verify_curve_identity(&phi, n).unwrap();
        println!(
            "n = {n}: twist by d of degree {}, y of degree {}, identity holds: {}",
            ob.d.height(),
            ob.y.height(),
            check.holds
        );
    }
}
