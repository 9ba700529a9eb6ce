//! Reachability by unfolding, unreachability by a synthesized invariant.

use mumall::kernel::{Rule, RuleConfig};
use mumall::problem::parse_problem_file;
use mumall::search::{prove_with_stats, SearchBudget};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/problems/graph.mu");
    let pf = parse_problem_file(&std::fs::read_to_string(path).unwrap()).unwrap();

    for goal in &pf.goals {
        let (outcome, stats) =
            prove_with_stats(&pf.signature, &goal.sequent, &SearchBudget::default(), &RuleConfig::default());
        println!("{}: {} ({} nodes, {} inductions)", goal.name, outcome.label(), stats.nodes, stats.inductions);
        if let Some(c) = outcome.certificate() {
            for node in c.nodes() {
                if let Rule::MuLInd(inv) = &node.rule.rule {
                    println!("  invariant {inv}");
                }
            }
        }
    }
}
