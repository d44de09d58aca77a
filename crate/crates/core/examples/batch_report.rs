// Run the full pipeline on a few maps and print the JSON reports.

use quadtower::cli::{run_batch_str, OutputFormat};

fn main() {
    let jobs = "\
--gamma 0 --c t --max-level 4
--gamma 0 --c 't^2 + 1' --max-level 4 --base-change '(t + 1)/t'
--gamma t --c 't + 1' --max-level 4
";
    for item in run_batch_str(jobs, OutputFormat::Json) {
        println!("{}", item.render());
    }
}
