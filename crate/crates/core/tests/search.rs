mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::{load, Lts};
use mumall::formula::{Abstraction, Formula};
use mumall::kernel::{check_certificate, Rule, RuleConfig, Sequent};
use mumall::problem::parse_problem_file;
use mumall::search::synth::{finite_domain, synthesize_coinvariant, synthesize_invariant, tuple_set};
use mumall::search::{prove, prove_mall, prove_with_stats, SearchBudget, SearchOutcome};
use mumall::syntax::parse_sequent;
use mumall::term::{Signature, Term};

fn abc() -> Signature {
    Signature::from_entries([("a", 0), ("b", 0), ("c", 0)]).unwrap()
}

fn mall(sig: &Signature, src: &str) -> SearchOutcome {
    prove_mall(sig, &parse_sequent(src, sig).unwrap(), &RuleConfig::default()).unwrap()
}

#[test]
fn mall_examples() {
    let sig = abc();
    assert!(matches!(mall(&sig, "[] |- false"), SearchOutcome::NoProof));
    let c = mall(&sig, "[] |- a = b \\/ a = a");
    let c = c.certificate().unwrap();
    assert_eq!(c.rule.rule, Rule::OrR2);
    assert_eq!(c.premises[0].rule.rule, Rule::EqR);
}

#[test]
fn mall_respects_linearity() {
    let sig = abc();
    assert!(!mall(&sig, "[] |- a = a, a = a").is_proved());
    assert!(mall(&sig, "[] |- a = a /\\+ b = b").is_proved());
    assert!(!mall(&sig, "[] |- (a = a /\\+ b = b) /\\+ c = c, true+").is_proved());
    assert!(mall(&sig, "[] |- (a = a /\\+ b = b), true-").is_proved());
    assert!(mall(&sig, "[] a = b \\/- c = c |- c = c").is_proved());
}

#[test]
fn mall_rejects_fixed_points() {
    let (_, pf) = load("graph.mu");
    let g = pf.goal("reach").unwrap();
    assert!(prove_mall(&pf.signature, &g.sequent, &RuleConfig::default()).is_err());
}

#[test]
fn quantifier_witnesses() {
    let sig = abc();
    assert!(mall(&sig, "[] |- exists x, x = c").is_proved());
    assert!(mall(&sig, "[] |- all x, exists y, x = y").is_proved());
    assert!(!mall(&sig, "[] |- exists y, all x, x = y").is_proved());
    assert!(mall(&sig, "[] all x, x = a |- false").is_proved());
}

fn graph_goal(name: &str) -> (Signature, Sequent) {
    let (_, pf) = load("graph.mu");
    (pf.signature.clone(), pf.goal(name).unwrap().sequent.clone())
}

#[test]
fn reachability_is_proved_by_unfolding() {
    let (sig, s) = graph_goal("reach");
    let o = prove(&sig, &s, &SearchBudget::default(), &RuleConfig::default());
    let c = o.certificate().unwrap();
    assert_eq!(c.rule.rule, Rule::MuR);
    assert!(c.nodes().iter().any(|n| n.rule.rule == Rule::ExR(Term::constant("b"))));
    assert_eq!(c.count_rule("MuLInd"), 0);
}

#[test]
fn unreachability_needs_induction() {
    let (sig, s) = graph_goal("unreachable");
    let (o, stats) = prove_with_stats(&sig, &s, &SearchBudget::default(), &RuleConfig::default());
    let c = o.certificate().unwrap();
    assert_eq!(stats.inductions, 1);
    check_certificate(&sig, c, &RuleConfig::default()).unwrap();

    let no_induction = RuleConfig { allow_induction: false, ..RuleConfig::default() };
    let o = prove(&sig, &s, &SearchBudget::default(), &no_induction);
    assert!(matches!(o, SearchOutcome::BudgetExceeded(_)));
}

#[test]
fn budget_exceeded_reports_loops() {
    let (_, pf) = load("nat.mu");
    let g = pf.goal("nat_id").unwrap();
    let budget = SearchBudget { max_unfoldings: 8, ..SearchBudget::default() };
    match prove(&pf.signature, &g.sequent, &budget, &RuleConfig::default()) {
        SearchOutcome::BudgetExceeded(table) => assert!(!table.visited.is_empty()),
        other => panic!("{}", other.label()),
    }
}

#[test]
fn wall_clock_limit_is_honoured() {
    let (_, pf) = load("nat.mu");
    let g = pf.goal("nat_id").unwrap();
    let budget = SearchBudget {
        max_unfoldings: 10_000,
        wall_clock_ms: Some(200),
        ..SearchBudget::default()
    };
    let start = std::time::Instant::now();
    let o = prove(&pf.signature, &g.sequent, &budget, &RuleConfig::default());
    assert!(matches!(o, SearchOutcome::BudgetExceeded(_)));
    assert!(start.elapsed().as_millis() < 2000);
}

fn fixpoint(f: &Formula) -> Arc<Abstraction> {
    match f {
        Formula::Mu(abs, _) | Formula::Nu(abs, _) => abs.clone(),
        _ => panic!("not a fixed point: {f}"),
    }
}

#[test]
fn invariant_is_complement_of_visited() {
    let (sig, s) = graph_goal("unreachable");
    let path = fixpoint(&s.left[0]);
    let visited = vec![
        vec![Term::constant("c"), Term::constant("a")],
        vec![Term::constant("b"), Term::constant("a")],
    ];
    let inv = synthesize_invariant(&sig, &path, &visited).unwrap();
    let set = tuple_set(&inv).unwrap();
    assert_eq!(set.len(), 7);
    assert!(visited.iter().all(|u| !set.contains(u)));
}

#[test]
fn infinite_domain_has_no_invariant() {
    let (_, pf) = load("nat.mu");
    let g = pf.goal("nat_id").unwrap();
    let Formula::All(_, body) = &g.sequent.right[0] else { panic!() };
    let Formula::Imp(nat, _) = &**body else { panic!() };
    assert!(finite_domain(&pf.signature, &fixpoint(nat)).is_none());
    assert!(synthesize_invariant(&pf.signature, &fixpoint(nat), &[]).is_none());
}

#[test]
fn full_loop_gives_empty_invariant() {
    // Unfolding reaches `step` at an arbitrary pair, so the loop covers
    // the whole domain.
    let src = "signature a/0 b/0.\n\
               step X Y :- step Z W.\n\
               goal g: step a b |- .\n";
    let pf = parse_problem_file(src).unwrap();
    let s = &pf.goal("g").unwrap().sequent;
    let abs = fixpoint(&s.left[0]);
    let domain = finite_domain(&pf.signature, &abs).unwrap();
    let inv = synthesize_invariant(&pf.signature, &abs, &domain).unwrap();
    assert_eq!(inv.body, Formula::FalsePos);
    let (o, _) = prove_with_stats(&pf.signature, s, &SearchBudget::default(), &RuleConfig::default());
    let c = o.certificate().unwrap();
    let ind = c.nodes().into_iter().find(|n| matches!(n.rule.rule, Rule::MuLInd(_))).unwrap();
    assert_eq!(ind.premises[0].rule.rule, Rule::FalsePosL);
}

fn bisim_abs(lts: &Lts) -> (Signature, Arc<Abstraction>) {
    let pf = parse_problem_file(&lts.problem_source(0, 1)).unwrap();
    let s = &pf.goal("same").unwrap().sequent;
    (pf.signature.clone(), fixpoint(&s.right[0]))
}

fn coinvariant_pairs(lts: &Lts) -> BTreeSet<(usize, usize)> {
    let (sig, abs) = bisim_abs(lts);
    let inv = synthesize_coinvariant(&sig, &abs, &SearchBudget::default(), &RuleConfig::default(), None).unwrap();
    let state = |t: &Term| t.to_string().strip_prefix('s').and_then(|n| n.parse().ok());
    tuple_set(&inv)
        .unwrap()
        .iter()
        .filter_map(|u| Some((state(&u[0])?, state(&u[1])?)))
        .collect()
}

#[test]
fn coinvariant_on_identical_self_loops_is_full() {
    let lts = Lts { states: 2, trans: [(0, 0, 0), (1, 0, 1)].into_iter().collect() };
    assert_eq!(coinvariant_pairs(&lts).len(), 4);
}

#[test]
fn coinvariant_excludes_unmatched_step() {
    let lts = Lts { states: 2, trans: [(0, 0, 0)].into_iter().collect() };
    let pairs = coinvariant_pairs(&lts);
    assert!(!pairs.contains(&(0, 1)) && !pairs.contains(&(1, 0)));
    assert!(pairs.contains(&(0, 0)) && pairs.contains(&(1, 1)));
}

#[test]
fn coinvariant_agrees_with_partition_refinement() {
    use rand::SeedableRng;
    let mut rng = rand::rngs::StdRng::seed_from_u64(3);
    for _ in 0..4 {
        let lts = Lts::random(&mut rng, 3, 0.3);
        let classes = lts.bisimulation_classes();
        let expected: BTreeSet<(usize, usize)> = (0..3)
            .flat_map(|p| (0..3).map(move |q| (p, q)))
            .filter(|&(p, q)| classes[p] == classes[q])
            .collect();
        assert_eq!(coinvariant_pairs(&lts), expected, "{lts:?}");
    }
}

#[test]
fn empty_transition_relation_makes_everything_bisimilar() {
    let src = "signature s0/0 s1/0 a/0.\n\
               define trans X L Y := false.\n\
               codefine bisim X Y :=\n\
               (all L X1, trans X L X1 => exists Y1, trans Y L Y1 /\\+ bisim X1 Y1)\n\
               /\\- (all L Y1, trans Y L Y1 => exists X1, trans X L X1 /\\+ bisim X1 Y1).\n\
               goal g: |- bisim s0 s1.\n";
    let pf = parse_problem_file(src).unwrap();
    let s = &pf.goal("g").unwrap().sequent;
    let abs = fixpoint(&s.right[0]);
    let inv = synthesize_coinvariant(&pf.signature, &abs, &SearchBudget::default(), &RuleConfig::default(), None)
        .unwrap();
    // Labels are constants too, so the domain is all pairs of constants.
    assert_eq!(tuple_set(&inv).unwrap().len(), 9);
}
