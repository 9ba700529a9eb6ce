//! Invariants and coinvariants over finite domains, represented as
//! explicit tuple sets `λx̄. ⋁ (x̄ = ū)`.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use crate::formula::{Abstraction, Formula, Lambda};
use crate::kernel::{RuleConfig, Sequent};
use crate::term::{unify_all, Signature, Symbol, Term};

use super::{SearchBudget, Searcher};

/// Domains larger than this are not enumerated.
const MAX_DOMAIN: usize = 1024;

fn constructors(f: &Formula, out: &mut BTreeSet<Symbol>) {
    use Formula::*;
    fn term(t: &Term, out: &mut BTreeSet<Symbol>) {
        if let Term::App(c, args) = t {
            out.insert(c.clone());
            args.iter().for_each(|a| term(a, out));
        }
    }
    match f {
        AndNeg(a, b) | OrNeg(a, b) | AndPos(a, b) | OrPos(a, b) | Imp(a, b) => {
            constructors(a, out);
            constructors(b, out);
        }
        Eq(t, s) | Neq(t, s) => {
            term(t, out);
            term(s, out);
        }
        All(_, b) | Ex(_, b) => constructors(b, out),
        Mu(abs, args) | Nu(abs, args) => {
            args.iter().for_each(|t| term(t, out));
            constructors(&abs.body, out);
        }
        PredVar(_, args) | Atom(_, args) => args.iter().for_each(|t| term(t, out)),
        TrueNeg | FalseNeg | TruePos | FalsePos => {}
    }
}

/// All argument tuples over the signature's constants, provided every
/// constructor the body mentions is a constant.
pub fn finite_domain(sig: &Signature, abs: &Abstraction) -> Option<Vec<Vec<Term>>> {
    let mut used = BTreeSet::new();
    constructors(&abs.body, &mut used);
    if used.iter().any(|c| sig.arity(c) != Some(0)) {
        return None;
    }
    let consts: Vec<Term> = sig.constants().into_iter().map(|c| Term::App(c, Vec::new())).collect();
    let size = consts.len().checked_pow(abs.arity() as u32)?;
    if consts.is_empty() || size > MAX_DOMAIN {
        return None;
    }
    let mut tuples = vec![Vec::new()];
    for _ in 0..abs.arity() {
        tuples = tuples
            .into_iter()
            .flat_map(|prefix: Vec<Term>| {
                consts.iter().map(move |c| {
                    let mut t = prefix.clone();
                    t.push(c.clone());
                    t
                })
            })
            .collect();
    }
    Some(tuples)
}

fn tuple_lambda(params: &[Symbol], tuples: &[Vec<Term>]) -> Lambda {
    let body = Formula::disjunction(tuples.iter().map(|u| {
        Formula::conjunction(
            params
                .iter()
                .zip(u)
                .map(|(p, t)| Formula::eq(Term::Var(p.clone()), t.clone())),
        )
    }));
    Lambda::new(params.to_vec(), body)
}

/// Reads back the tuple set of an invariant built by this module.
pub fn tuple_set(inv: &Lambda) -> Option<BTreeSet<Vec<Term>>> {
    fn disjuncts<'f>(f: &'f Formula, out: &mut Vec<&'f Formula>) {
        match f {
            Formula::OrPos(a, b) => {
                disjuncts(a, out);
                disjuncts(b, out);
            }
            Formula::FalsePos => {}
            _ => out.push(f),
        }
    }
    fn conjuncts<'f>(f: &'f Formula, out: &mut Vec<&'f Formula>) {
        match f {
            Formula::AndPos(a, b) => {
                conjuncts(a, out);
                conjuncts(b, out);
            }
            Formula::TruePos => {}
            _ => out.push(f),
        }
    }
    let mut ds = Vec::new();
    disjuncts(&inv.body, &mut ds);
    let mut set = BTreeSet::new();
    for d in ds {
        let mut cs = Vec::new();
        conjuncts(d, &mut cs);
        let mut tuple = vec![None; inv.params.len()];
        for c in cs {
            let Formula::Eq(Term::Var(x), t) = c else {
                return None;
            };
            let i = inv.params.iter().position(|p| p == x)?;
            if !t.is_ground() || tuple[i].is_some() {
                return None;
            }
            tuple[i] = Some(t.clone());
        }
        set.insert(tuple.into_iter().collect::<Option<Vec<_>>>()?);
    }
    Some(set)
}

/// The complement of the visited tuples within the finite domain. A
/// non-ground visited tuple stands for all of its ground instances.
pub fn synthesize_invariant(sig: &Signature, abs: &Abstraction, visited: &[Vec<Term>]) -> Option<Lambda> {
    let domain = finite_domain(sig, abs)?;
    let covered = |u: &Vec<Term>| {
        visited.iter().any(|v| {
            v.len() == u.len() && {
                let pairs: Vec<(Term, Term)> = v.iter().cloned().zip(u.iter().cloned()).collect();
                unify_all(&pairs).is_some()
            }
        })
    };
    let remaining: Vec<Vec<Term>> = domain.into_iter().filter(|u| !covered(u)).collect();
    Some(tuple_lambda(&abs.params, &remaining))
}

/// Greatest fixed point by downward iteration from the full domain: a
/// tuple survives a round when the body, with the current set for the
/// recursive calls, is provable at it.
pub fn synthesize_coinvariant(
    sig: &Signature,
    abs: &Arc<Abstraction>,
    budget: &SearchBudget,
    config: &RuleConfig,
    deadline: Option<Instant>,
) -> Option<Lambda> {
    let mut current = finite_domain(sig, abs)?;
    let mut config = config.clone();
    config.allow_induction = false;
    let mut searcher = Searcher::new(sig, config, budget.clone(), deadline);
    loop {
        let inv = tuple_lambda(&abs.params, &current);
        let mut next = Vec::with_capacity(current.len());
        for u in &current {
            let body = abs.instantiate(u, &|ts| inv.apply(ts)).ok()?;
            match searcher.search(&Sequent::goal(body), 0, 0) {
                Ok(_) => next.push(u.clone()),
                Err(f) if f.budget => return None,
                Err(_) => {}
            }
        }
        if next.len() == current.len() {
            return Some(inv);
        }
        current = next;
    }
}
