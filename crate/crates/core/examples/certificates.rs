//! Emit a certificate, reload it, verify it, and watch a tampered copy
//! get rejected.

use mumall::certificate::{canonicalize, serialize_certificate, verify_certificate, CertDocument};
use mumall::kernel::RuleConfig;
use mumall::problem::{parse_problem_file, problem_hash};
use mumall::search::{prove, SearchBudget};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/problems/graph.mu");
    let src = std::fs::read_to_string(path).unwrap();
    let pf = parse_problem_file(&src).unwrap();
    let goal = pf.goal("unreachable").unwrap();
    let config = RuleConfig::default();

    let outcome = prove(&pf.signature, &goal.sequent, &SearchBudget::default(), &config);
    let c = canonicalize(&pf.signature, outcome.certificate().unwrap());
    let hash = problem_hash(src.as_bytes());
    let doc = CertDocument::new(&hash, &goal.name, &config, &pf.signature, &c);
    let text = serialize_certificate(&doc);
    print!("{text}");

    match verify_certificate(text.as_bytes(), &hash, &pf.signature, &goal.sequent) {
        Ok(c) => println!("verified: {} rules", c.size()),
        Err(e) => println!("rejected: {e}"),
    }

    let tampered = text.replacen("rule MuLInd", "rule NuRCoind", 1);
    match verify_certificate(tampered.as_bytes(), &hash, &pf.signature, &goal.sequent) {
        Ok(_) => println!("tampered copy verified (unexpected)"),
        Err(e) => println!("tampered copy rejected: {e}"),
    }
}
