mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use mumall::certificate::{deserialize_certificate, serialize_certificate, CertDocument};
use mumall::formula::Formula;
use mumall::kernel::{RuleConfig, Sequent};
use mumall::problem::parse_problem_file;
use mumall::search::prove_mall;
use mumall::syntax::parse_formula;
use mumall::term::{unify, Signature, Substitution, Symbol, Term};

fn fg_signature() -> Signature {
    Signature::from_entries([("a", 0), ("f", 1), ("g", 2)]).unwrap()
}

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::constant("a")),
        Just(Term::var("X")),
        Just(Term::var("Y")),
    ];
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("f", vec![t])),
            (inner.clone(), inner).prop_map(|(t, s)| Term::app("g", vec![t, s])),
        ]
    })
}

fn ground_terms() -> Vec<Term> {
    let sig = fg_signature();
    sig.terms_up_to(&BTreeSet::new(), 2)
}

fn vars_of(t: &Term, s: &Term) -> Vec<Symbol> {
    let mut vs = t.free_vars();
    vs.extend(s.free_vars());
    vs.into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn unify_agrees_with_brute_force(t in term_strategy(), s in term_strategy()) {
        let ground = ground_terms();
        let vars = vars_of(&t, &s);
        let mut witnesses = Vec::new();
        let mut assign = vec![0usize; vars.len()];
        loop {
            let sigma = Substitution::from_bindings(
                vars.iter().cloned().zip(assign.iter().map(|&i| ground[i].clone())),
            );
            if sigma.apply(&t) == sigma.apply(&s) {
                witnesses.push(sigma);
            }
            let mut k = 0;
            while k < assign.len() && assign[k] + 1 == ground.len() {
                assign[k] = 0;
                k += 1;
            }
            if k == assign.len() {
                break;
            }
            assign[k] += 1;
        }
        match unify(&t, &s) {
            None => prop_assert!(witnesses.is_empty()),
            Some(theta) => {
                prop_assert_eq!(theta.apply(&t), theta.apply(&s));
                prop_assert!(theta.is_idempotent());
                // Every ground unifier factors through the mgu.
                for sigma in &witnesses {
                    for v in &vars {
                        let via = sigma.apply(&theta.apply(&Term::Var(v.clone())));
                        prop_assert_eq!(via, sigma.apply(&Term::Var(v.clone())));
                    }
                }
            }
        }
    }

    #[test]
    fn rename_apart_is_disjoint(t in term_strategy()) {
        let avoid: BTreeSet<Symbol> = [Symbol::new("X")].into_iter().collect();
        let t1 = t.rename_apart(&avoid);
        let mut avoid2 = avoid.clone();
        avoid2.extend(t1.free_vars());
        avoid2.extend(t.free_vars());
        let t2 = t.rename_apart(&avoid2);
        prop_assert!(t1.free_vars().is_disjoint(&avoid));
        prop_assert!(t1.free_vars().is_disjoint(&t2.free_vars()));
        prop_assert_eq!(t1.free_vars().len(), t.free_vars().len());
        prop_assert!(unify(&t1, &t2).is_some() || !t.free_vars().is_empty());
    }

    #[test]
    fn substitution_is_idempotent_after_application(t in term_strategy(), s in term_strategy()) {
        if let Some(theta) = unify(&t, &s) {
            let once = theta.apply(&t);
            prop_assert_eq!(theta.apply(&once), once);
        }
    }

    #[test]
    fn dual_is_an_involution(seed in any::<u64>(), size in 1usize..16) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = common::random_formula(&mut rng, size, &mut Vec::new()).eliminate_imp().unwrap();
        let d = f.dual().unwrap();
        prop_assert_eq!(d.dual().unwrap(), f);
    }

    #[test]
    fn display_parses_back(seed in any::<u64>(), size in 1usize..16) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = common::random_formula(&mut rng, size, &mut Vec::new());
        let back = parse_formula(&f.to_string(), &common::abf_signature(), &[]).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn bound_renaming_preserves_provability(seed in any::<u64>(), size in 1usize..10) {
        let sig = common::abf_signature();
        let mut rng = StdRng::seed_from_u64(seed);
        let s = common::random_sequent(&mut rng, size);
        let renamed = Sequent::new(
            BTreeSet::new(),
            s.left.iter().map(rename_bound).collect(),
            s.right.iter().map(rename_bound).collect(),
        );
        let config = RuleConfig { witness_depth: 1, ..RuleConfig::default() };
        let a = prove_mall(&sig, &s, &config).unwrap().is_proved();
        let b = prove_mall(&sig, &renamed, &config).unwrap().is_proved();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn proofs_round_trip(seed in any::<u64>(), size in 1usize..10) {
        let sig = common::abf_signature();
        let mut rng = StdRng::seed_from_u64(seed);
        let s = common::random_sequent(&mut rng, size);
        let config = RuleConfig { witness_depth: 1, ..RuleConfig::default() };
        if let Some(c) = prove_mall(&sig, &s, &config).unwrap().certificate() {
            let doc = CertDocument::new(&"0".repeat(64), "g", &config, &sig, c);
            let text = serialize_certificate(&doc);
            let back = deserialize_certificate(text.as_bytes()).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(back.certificate().unwrap(), c.clone());
        }
    }

    #[test]
    fn problem_parser_never_panics(src in problem_like()) {
        let _ = parse_problem_file(&src);
    }

    #[test]
    fn certificate_parser_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..200), prefix in 0usize..3) {
        let header = ["", "muproof 1\n", "muproof 1\nproblem "][prefix];
        let mut input = header.as_bytes().to_vec();
        input.extend(bytes);
        let _ = deserialize_certificate(&input);
    }
}

fn rename_bound(f: &Formula) -> Formula {
    fn go(f: &Formula, map: &BTreeMap<Symbol, Symbol>) -> Formula {
        let rename = |t: &Term| {
            let theta = Substitution::from_bindings(map.iter().map(|(k, v)| (k.clone(), Term::Var(v.clone()))));
            theta.apply(t)
        };
        match f {
            Formula::All(x, b) | Formula::Ex(x, b) => {
                let y = Symbol::new(&format!("{x}q"));
                let mut inner = map.clone();
                inner.insert(x.clone(), y.clone());
                let body = Box::new(go(b, &inner));
                if matches!(f, Formula::All(..)) {
                    Formula::All(y, body)
                } else {
                    Formula::Ex(y, body)
                }
            }
            Formula::AndNeg(a, b) => Formula::and_neg(go(a, map), go(b, map)),
            Formula::AndPos(a, b) => Formula::and_pos(go(a, map), go(b, map)),
            Formula::OrPos(a, b) => Formula::or_pos(go(a, map), go(b, map)),
            Formula::OrNeg(a, b) => Formula::or_neg(go(a, map), go(b, map)),
            Formula::Imp(a, b) => Formula::imp(go(a, map), go(b, map)),
            Formula::Eq(t, s) => Formula::eq(rename(t), rename(s)),
            Formula::Neq(t, s) => Formula::neq(rename(t), rename(s)),
            other => other.clone(),
        }
    }
    go(f, &BTreeMap::new())
}

fn problem_like() -> impl Strategy<Value = String> {
    let pieces = prop_oneof![
        Just("signature"), Just("define"), Just("codefine"), Just("goal"), Just("all"), Just("exists"),
        Just("mu"), Just("nu"), Just("lambda"), Just("a/0"), Just("s/1"), Just("z/0"), Just("X"), Just("p"),
        Just("q"), Just("("), Just(")"), Just(","), Just("."), Just(":"), Just(":="), Just(":-"), Just("|-"),
        Just("="), Just("!="), Just("=>"), Just("/\\-"), Just("/\\+"), Just("\\/"), Just("\\/-"),
        Just("true-"), Just("true+"), Just("false"), Just("3"), Just("%"), Just("\n"), Just(";"), Just("é"),
    ];
    proptest::collection::vec(pieces, 0..40).prop_map(|v| v.join(" "))
}
