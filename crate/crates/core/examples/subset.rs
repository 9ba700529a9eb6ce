//! Proves a finite subset inclusion with no fixed points involved.

use mumall::kernel::RuleConfig;
use mumall::problem::parse_problem_file;
use mumall::search::prove_mall;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/problems/subset.mu");
    let pf = parse_problem_file(&std::fs::read_to_string(path).unwrap()).unwrap();
    let goal = pf.goal("subset").unwrap();
    println!("goal: {}", goal.sequent);

    let outcome = prove_mall(&pf.signature, &goal.sequent, &RuleConfig::default()).unwrap();
    let c = outcome.certificate().expect("subset should be provable");
    for node in c.nodes() {
        println!("{:<10} {}", node.rule.rule.tag(), node.conclusion);
    }
}
