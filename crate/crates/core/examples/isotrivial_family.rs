// The maps (x - t^d)^2 + t^d + m: orbit constants, candidate levels and bounds.

use quadtower::arith::{parse_poly, render_rat};
use quadtower::bounds::{part3_count_bound, pink_bound};
use quadtower::dynamics::{classify, isotrivial_constants, QuadMap};
use quadtower::stability::certify_auto;
use quadtower::tower::{certify_levels, isotrivial_candidate_levels, LevelOptions, LevelVerdict};

fn main() {
    for d in 1..=4 {
        for m in 1..=3 {
            let phi = QuadMap::new(
                parse_poly(&format!("t^{d}")).unwrap(),
                parse_poly(&format!("t^{d} + {m}")).unwrap(),
            );
            let class = classify(&phi, 64);
            let consts: Vec<String> = isotrivial_constants(&phi, 4)
                .unwrap()
                .iter()
                .map(render_rat)
                .collect();
            let cert = certify_auto(&phi, 8);
            let levels = certify_levels(&phi, 8, &cert, &LevelOptions::exact()).unwrap();
            let maximal = levels
                .iter()
                .filter(|r| r.verdict == LevelVerdict::CertifiedMaximal)
                .count();
            let candidates = isotrivial_candidate_levels(&phi, 8).unwrap();
            println!(
                "d={d} m={m}: infinite orbit {}, c_n = [{}], stable {}, {maximal}/8 levels maximal, candidates {:?}, count <= {}, log2 index <= {}",
                class.pcf.is_infinite(),
                consts.join(", "),
                cert.is_stable(),
                candidates.levels,
                part3_count_bound(&phi).unwrap().log2_bound,
                pink_bound(&phi).unwrap().log2_bound,
            );
        }
    }
}
