//! `nat n => nat n` over an infinite domain: hopeless by unfolding,
//! immediate once the fixed-point initial rule is allowed.

use mumall::kernel::RuleConfig;
use mumall::problem::parse_problem_file;
use mumall::search::{prove, SearchBudget};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/problems/nat.mu");
    let pf = parse_problem_file(&std::fs::read_to_string(path).unwrap()).unwrap();
    let goal = pf.goal("nat_id").unwrap();
    let budget = SearchBudget { max_unfoldings: 16, ..SearchBudget::default() };

    let without = prove(&pf.signature, &goal.sequent, &budget, &RuleConfig::default());
    println!("without init: {}", without.label());

    let config = RuleConfig { allow_init: true, ..RuleConfig::default() };
    let with = prove(&pf.signature, &goal.sequent, &budget, &config);
    println!("with init:    {}", with.label());
    for node in with.certificate().unwrap().nodes() {
        println!("  {:<8} {}", node.rule.rule.tag(), node.conclusion);
    }
}
