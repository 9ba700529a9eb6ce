//! Bounded arithmetic over unary numerals.
//!
//! `plus_comm` takes several seconds in a debug build; pass `--release`.

use mumall::kernel::RuleConfig;
use mumall::problem::parse_problem_file;
use mumall::search::{prove_with_stats, SearchBudget};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/problems/arith.mu");
    let pf = parse_problem_file(&std::fs::read_to_string(path).unwrap()).unwrap();
    let wanted: Vec<String> = std::env::args().skip(1).collect();

    for goal in &pf.goals {
        if !wanted.is_empty() && !wanted.contains(&goal.name) {
            continue;
        }
        let start = std::time::Instant::now();
        let (outcome, stats) =
            prove_with_stats(&pf.signature, &goal.sequent, &SearchBudget::default(), &RuleConfig::default());
        let size = outcome.certificate().map_or(0, |c| c.size());
        println!(
            "{}: {} in {:?}, {} search nodes, certificate of {} rules",
            goal.name,
            outcome.label(),
            start.elapsed(),
            stats.nodes,
            size
        );
    }
}
