// Index bounds: the unequal-heights constant and the equal-heights threshold.

use quadtower::bounds::{accumulate_index, part1_bound, part2_threshold};

fn main() {
    let p1 = part1_bound();
    println!(
        "unequal heights: every level from {} on is maximal, log2 index <= {}",
        p1.threshold_level.unwrap(),
        p1.log2_bound
    );
    println!(
        "with no level certified: {}",
        accumulate_index(&[], true, 17).unwrap().log2_bound
    );
    for (hg, hb) in [(1, 1), (2, 1), (3, 1), (4, 3), (10, 1)] {
        let n0 = part2_threshold(hg, hb).unwrap();
        println!("h(gamma) = {hg}, h(gamma - c) = {hb}: maximal from level {n0}");
    }
}
