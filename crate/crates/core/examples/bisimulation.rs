//! Bisimilarity by coinduction, and its refutation by induction on the
//! dual.

use mumall::kernel::{Rule, RuleConfig};
use mumall::problem::parse_problem_file;
use mumall::search::{prove_with_stats, SearchBudget};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/problems/bisim.mu");
    let pf = parse_problem_file(&std::fs::read_to_string(path).unwrap()).unwrap();

    for goal in &pf.goals {
        let (outcome, stats) =
            prove_with_stats(&pf.signature, &goal.sequent, &SearchBudget::default(), &RuleConfig::default());
        println!(
            "{}: {} ({} coinductions, {} inductions)",
            goal.name,
            outcome.label(),
            stats.coinductions,
            stats.inductions
        );
        if let Some(c) = outcome.certificate() {
            for node in c.nodes() {
                match &node.rule.rule {
                    Rule::NuRCoind(inv) => println!("  coinvariant {inv}"),
                    Rule::MuLInd(inv) => println!("  invariant {inv}"),
                    _ => {}
                }
            }
        }
    }
}
