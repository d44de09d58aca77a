// x^2 - t^2 - 1 is stable but its second level is not maximal: the index is exactly 2.

use quadtower::arith::{parse_poly, parse_ratfunc};
use quadtower::bounds::{
    accumulate_conditional, accumulate_index, base_change_bound, PART1_HORIZON,
};
use quadtower::dynamics::{base_change, QuadMap};
use quadtower::stability::certify_auto;
use quadtower::tower::{certify_levels, obstruction, LevelOptions};

fn main() {
    let base = QuadMap::monic_centered(parse_poly("t").unwrap());
    let f = parse_ratfunc("-t^2 - 1").unwrap();
    let phi = base_change(&base, &f).unwrap().to_poly_map().unwrap();
    println!("phi = x^2 + ({})", phi.c());

    let ob = obstruction(&phi, 2).unwrap();
    println!(
        "phi^2(0) = {} = {} * ({})^2 * ({})",
        ob.value, ob.u, ob.y, ob.d
    );

    let cert = certify_auto(&phi, 8);
    let levels = certify_levels(&phi, 6, &cert, &LevelOptions::default()).unwrap();
    for r in &levels {
        println!("level {}: {:?}", r.n, r.verdict);
    }
    let conditional = accumulate_conditional(&levels, true).unwrap();
    let rigorous = accumulate_index(&levels, true, PART1_HORIZON).unwrap();
    println!(
        "log2 index: {} if later levels are maximal ({})",
        conditional.log2_bound,
        conditional.assumption.unwrap()
    );
    println!(
        "log2 index: at most {} unconditionally",
        rigorous.log2_bound
    );
    println!(
        "over the base: {}",
        base_change_bound(&rigorous, &f).unwrap().log2_bound
    );
}
