// Certify stability of x^2 + t and walk the tower level by level.

use quadtower::arith::parse_poly;
use quadtower::dynamics::QuadMap;
use quadtower::stability::certify_auto;
use quadtower::tower::{certify_levels, LevelOptions, LevelWitness};

fn main() {
    let phi = QuadMap::monic_centered(parse_poly("t").unwrap());
    let cert = certify_auto(&phi, 8);
    println!("stability: {}", cert.summary());
    for w in &cert.orbit_witnesses {
        println!(
            "  adjusted orbit {}: degree {}, square: {}",
            w.n,
            w.value.height(),
            w.is_square
        );
    }

    let levels = certify_levels(&phi, 8, &cert, &LevelOptions::default()).unwrap();
    for r in &levels {
        let witness = match &r.witness {
            LevelWitness::CoprimePart { degree, .. } => {
                format!("new square-free factor of degree {degree}")
            }
            LevelWitness::NonSquares { elements } => format!("{} non-squares", elements.len()),
            LevelWitness::Square { element } => format!("square {element}"),
            LevelWitness::None { reason } => reason.clone(),
        };
        println!(
            "level {}: {:?} via {:?} ({witness})",
            r.n, r.verdict, r.method
        );
    }
}
