// Discriminants of the iterates and the recursion they satisfy.

use quadtower::arith::parse_poly;
use quadtower::dynamics::QuadMap;
use quadtower::tower::{discriminant_tower, DISCRIMINANT_LAW};

fn main() {
    for (g, c) in [("0", "t"), ("t", "t^2 - 3"), ("t^2 + 1", "2*t")] {
        let phi = QuadMap::new(parse_poly(g).unwrap(), parse_poly(c).unwrap());
        let tower = discriminant_tower(&phi, 4).unwrap();
        let degrees: Vec<usize> = tower.deltas.iter().map(|d| d.height()).collect();
        println!("gamma = {g}, c = {c}: degrees {degrees:?}");
        for s in &tower.steps {
            println!(
                "  m = {}: sign {}, power of two {:?}",
                s.m, s.sign, s.exponent
            );
        }
        println!("  {DISCRIMINANT_LAW}: {}", tower.law_holds);
    }
}
