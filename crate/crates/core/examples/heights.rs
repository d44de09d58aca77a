// Predicted and observed heights along the critical and zero orbits.

use quadtower::arith::parse_poly;
use quadtower::dynamics::{
    critical_orbit, predict_height_critical, predict_height_zero, zero_orbit, QuadMap,
};

fn main() {
    for (g, c) in [("t^2", "t"), ("t^2", "t^2 + t"), ("t^3", "t^3 + 5")] {
        let phi = QuadMap::new(parse_poly(g).unwrap(), parse_poly(c).unwrap());
        println!(
            "gamma = {}, c = {}: {:?}",
            phi.gamma(),
            phi.c(),
            phi.height_case()
        );
        let crit = critical_orbit(&phi, 5);
        let zero = zero_orbit(&phi, 5);
        for m in 1..=5 {
            let pc = predict_height_critical(&phi, m).unwrap();
            let pz = predict_height_zero(&phi, m).unwrap();
            println!(
                "  m = {m}: critical {} ({:?} {}), zero {} ({:?} {})",
                crit[m - 1].height(),
                pc.kind,
                pc.value,
                zero[m - 1].height(),
                pz.kind,
                pz.value
            );
        }
    }
}
