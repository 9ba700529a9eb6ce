#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::Rng;

use mumall::formula::Formula;
use mumall::kernel::Sequent;
use mumall::problem::{parse_problem_file, ProblemFile};
use mumall::term::{Signature, Symbol, Term};

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}

pub fn load(name: &str) -> (String, ProblemFile) {
    let src = std::fs::read_to_string(corpus_path(name)).unwrap();
    let pf = parse_problem_file(&src).unwrap_or_else(|e| panic!("{name}: {e}"));
    (src, pf)
}

pub fn ab_signature() -> Signature {
    Signature::from_entries([("a", 0), ("b", 0)]).unwrap()
}

/// Units and closed equality literals over `a` and `b`.
pub fn additive_atoms() -> Vec<Formula> {
    let consts = [Term::constant("a"), Term::constant("b")];
    let mut out = vec![Formula::TrueNeg, Formula::FalsePos];
    for t in &consts {
        for s in &consts {
            out.push(Formula::eq(t.clone(), s.clone()));
            out.push(Formula::neq(t.clone(), s.clone()));
        }
    }
    out
}

/// Every additive formula of depth at most `depth`, atoms having depth 1.
pub fn additive_upto(depth: usize) -> Vec<Formula> {
    let mut all = additive_atoms();
    for _ in 1..depth {
        let prev = all.clone();
        let mut next = additive_atoms();
        for x in &prev {
            for y in &prev {
                next.push(Formula::and_neg(x.clone(), y.clone()));
                next.push(Formula::or_pos(x.clone(), y.clone()));
            }
        }
        all = next;
    }
    all
}

/// Multisets of indices into a list of `n` items, of size at most `k`,
/// as non-decreasing index vectors.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == k {
            return;
        }
        for i in from..n {
            cur.push(i);
            go(n, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Two-sided rendering of a one-sided additive formula: an equation
/// `t = s` becomes `(t = s) /\+ true-`, so that the other formulas of the
/// sequent can be discarded.
pub fn render(f: &Formula) -> Formula {
    match f {
        Formula::Eq(..) => Formula::and_pos(f.clone(), Formula::TrueNeg),
        Formula::AndNeg(a, b) => Formula::and_neg(render(a), render(b)),
        Formula::OrPos(a, b) => Formula::or_pos(render(a), render(b)),
        _ => f.clone(),
    }
}

pub fn right_sequent(delta: &[Formula]) -> Sequent {
    Sequent::new(BTreeSet::new(), vec![], delta.iter().map(render).collect())
}

pub fn abf_signature() -> Signature {
    Signature::from_entries([("a", 0), ("b", 0), ("f", 1)]).unwrap()
}

fn random_term(rng: &mut StdRng, scope: &[Symbol], depth: usize) -> Term {
    if !scope.is_empty() && rng.gen_bool(0.4) {
        return Term::Var(scope[rng.gen_range(0..scope.len())].clone());
    }
    if depth > 0 && rng.gen_bool(0.3) {
        return Term::app("f", vec![random_term(rng, scope, depth - 1)]);
    }
    Term::constant(if rng.gen_bool(0.5) { "a" } else { "b" })
}

/// A closed fixed-point-free formula with at most `size` nodes.
pub fn random_formula(rng: &mut StdRng, size: usize, scope: &mut Vec<Symbol>) -> Formula {
    if size <= 1 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..6) {
            0 => [Formula::TrueNeg, Formula::TruePos, Formula::FalseNeg, Formula::FalsePos][rng.gen_range(0..4)].clone(),
            1 | 2 => Formula::neq(random_term(rng, scope, 1), random_term(rng, scope, 1)),
            _ => Formula::eq(random_term(rng, scope, 1), random_term(rng, scope, 1)),
        };
    }
    if size == 2 && scope.len() == 2 {
        return random_formula(rng, 1, scope);
    }
    let k = rng.gen_range(0..7);
    if size == 2 || (k >= 5 && scope.len() < 2) {
        let x = Symbol::new(["x", "y"][scope.len()]);
        scope.push(x.clone());
        let body = random_formula(rng, size - 1, scope);
        scope.pop();
        return if k % 2 == 0 {
            Formula::All(x, Box::new(body))
        } else {
            Formula::Ex(x, Box::new(body))
        };
    }
    let left = rng.gen_range(1..size - 1);
    let a = random_formula(rng, left, scope);
    let b = random_formula(rng, size - 1 - left, scope);
    match k % 5 {
        0 => Formula::and_neg(a, b),
        1 => Formula::and_pos(a, b),
        2 => Formula::or_pos(a, b),
        3 => Formula::or_neg(a, b),
        _ => Formula::imp(a, b),
    }
}

pub fn node_count(f: &Formula) -> usize {
    match f {
        Formula::AndNeg(a, b)
        | Formula::AndPos(a, b)
        | Formula::OrPos(a, b)
        | Formula::OrNeg(a, b)
        | Formula::Imp(a, b) => 1 + node_count(a) + node_count(b),
        Formula::All(_, b) | Formula::Ex(_, b) => 1 + node_count(b),
        _ => 1,
    }
}

/// One or two closed formulas spread over both sides, `size` nodes in all.
pub fn random_sequent(rng: &mut StdRng, size: usize) -> Sequent {
    let n = rng.gen_range(1..=2);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for _ in 0..n {
        let f = random_formula(rng, size / n, &mut Vec::new());
        if rng.gen_bool(0.35) {
            left.push(f);
        } else {
            right.push(f);
        }
    }
    Sequent::new(BTreeSet::new(), left, right)
}

/// A labelled transition system over states `s0..s{n-1}` and labels
/// `a`, `b`.
#[derive(Debug, Clone)]
pub struct Lts {
    pub states: usize,
    pub trans: BTreeSet<(usize, usize, usize)>,
}

pub const LABELS: [&str; 2] = ["a", "b"];

impl Lts {
    pub fn random(rng: &mut StdRng, states: usize, density: f64) -> Lts {
        let mut trans = BTreeSet::new();
        for s in 0..states {
            for l in 0..LABELS.len() {
                for t in 0..states {
                    if rng.gen_bool(density) {
                        trans.insert((s, l, t));
                    }
                }
            }
        }
        if trans.is_empty() {
            trans.insert((0, 0, 0));
        }
        Lts { states, trans }
    }

    /// States `s2`, `s3` copy the transitions of `s0`, `s1`, each target
    /// landing in either copy at random, so `s0 ~ s2` and `s1 ~ s3`.
    pub fn random_doubled(rng: &mut StdRng, density: f64) -> Lts {
        let half = Lts::random(rng, 2, density);
        let mut trans = BTreeSet::new();
        for &(s, l, t) in &half.trans {
            trans.insert((s, l, t + 2 * rng.gen_range(0..2)));
            trans.insert((s + 2, l, t + 2 * rng.gen_range(0..2)));
        }
        Lts { states: 4, trans }
    }

    /// Bisimilarity classes by naive partition refinement.
    pub fn bisimulation_classes(&self) -> Vec<usize> {
        let mut block = vec![0usize; self.states];
        loop {
            let mut ids: BTreeMap<(usize, BTreeSet<(usize, usize)>), usize> = BTreeMap::new();
            let next: Vec<usize> = (0..self.states)
                .map(|s| {
                    let moves: BTreeSet<(usize, usize)> = self
                        .trans
                        .iter()
                        .filter(|(x, _, _)| *x == s)
                        .map(|&(_, l, t)| (l, block[t]))
                        .collect();
                    let n = ids.len();
                    *ids.entry((block[s], moves)).or_insert(n)
                })
                .collect();
            let before: BTreeSet<usize> = block.iter().copied().collect();
            let after: BTreeSet<usize> = next.iter().copied().collect();
            block = next;
            if before.len() == after.len() {
                return block;
            }
        }
    }

    pub fn problem_source(&self, p: usize, q: usize) -> String {
        let states: Vec<String> = (0..self.states).map(|s| format!("s{s}/0")).collect();
        let mut src = format!("signature {} a/0 b/0.\n", states.join(" "));
        for &(s, l, t) in &self.trans {
            src.push_str(&format!("trans s{s} {} s{t}.\n", LABELS[l]));
        }
        src.push_str(
            "codefine bisim X Y :=\n\
             \x20   (all L X1, trans X L X1 => exists Y1, trans Y L Y1 /\\+ bisim X1 Y1)\n\
             \x20   /\\- (all L Y1, trans Y L Y1 => exists X1, trans X L X1 /\\+ bisim X1 Y1).\n",
        );
        src.push_str(&format!("goal same: |- bisim s{p} s{q}.\n"));
        src.push_str(&format!("goal different: bisim s{p} s{q} |- .\n"));
        src
    }
}
