//! Proof search.
//!
//! The engine applies axioms and invertible rules eagerly, unfolds fixed
//! points, and backtracks over the remaining choices. Sequents on the
//! current branch are tabled so that loops are cut; a loop through a left
//! µ over a finite domain triggers invariant synthesis.

pub mod oracle;
pub mod synth;

pub use oracle::{additive_oracle, is_additive, OracleError};
pub use synth::{finite_domain, synthesize_coinvariant, synthesize_invariant, tuple_set};

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::time::{Duration, Instant};

use thiserror::Error;

use std::sync::Arc;

use crate::formula::{unfold, Abstraction, Formula, Lambda};
use crate::kernel::{
    all_splits, check_certificate, expand_rule, fresh_eigenvariable, Certificate, Rule, RuleApp,
    RuleConfig, Sequent,
};
use crate::term::{unify, unify_all, Signature, Symbol, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    /// µ/ν unfoldings allowed along one branch.
    pub max_unfoldings: usize,
    pub max_depth: usize,
    pub witness_depth: usize,
    pub wall_clock_ms: Option<u64>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_unfoldings: 64,
            max_depth: 4096,
            witness_depth: 3,
            wall_clock_ms: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    InProgress,
    Failed,
    Proved,
}

/// Canonical sequents encountered while searching, with the fate of each.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoopTable {
    pub visited: BTreeMap<String, Status>,
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Proved(Certificate),
    NoProof,
    BudgetExceeded(LoopTable),
}

impl SearchOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchOutcome::Proved(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            SearchOutcome::Proved(c) => Some(c),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Proved(_) => "PROVED",
            SearchOutcome::NoProof => "NO-PROOF",
            SearchOutcome::BudgetExceeded(_) => "BUDGET-EXCEEDED",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub inductions: u64,
    pub coinductions: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("sequent contains fixed points")]
    NotFixpointFree,
}

/// Decision procedure for fixed-point-free sequents. Complete relative
/// to the witness-depth bound.
pub fn prove_mall(sig: &Signature, s: &Sequent, config: &RuleConfig) -> Result<SearchOutcome, SearchError> {
    if !s.is_fixpoint_free() {
        return Err(SearchError::NotFixpointFree);
    }
    let budget = SearchBudget {
        max_unfoldings: 0,
        max_depth: usize::MAX,
        witness_depth: config.witness_depth,
        wall_clock_ms: None,
    };
    let (outcome, _) = prove_with_stats(sig, s, &budget, config);
    Ok(outcome)
}

pub fn prove(sig: &Signature, s: &Sequent, budget: &SearchBudget, config: &RuleConfig) -> SearchOutcome {
    prove_with_stats(sig, s, budget, config).0
}

pub fn prove_with_stats(
    sig: &Signature,
    s: &Sequent,
    budget: &SearchBudget,
    config: &RuleConfig,
) -> (SearchOutcome, SearchStats) {
    let mut config = config.clone();
    config.witness_depth = budget.witness_depth;
    let deadline = budget
        .wall_clock_ms
        .map(|ms| Instant::now() + Duration::from_millis(ms));
    let mut searcher = Searcher::new(sig, config.clone(), budget.clone(), deadline);
    let result = searcher.search(s, 0, 0);
    let stats = searcher.stats;
    let outcome = match result {
        Ok(cert) => {
            if let Err(e) = check_certificate(sig, &cert, &config) {
                panic!("search produced a certificate the kernel rejects: {e}\n{cert:?}");
            }
            SearchOutcome::Proved(cert)
        }
        Err(fail) if fail.is_definitive() && s.is_fixpoint_free() => SearchOutcome::NoProof,
        Err(_) => SearchOutcome::BudgetExceeded(searcher.table),
    };
    (outcome, stats)
}

/// Why a subtree failed. Failures that depend on a loop to a sequent still
/// on the stack, or on an exhausted budget, are not final.
#[derive(Debug, Clone, Default)]
pub(crate) struct Fail {
    pub(crate) loops: BTreeSet<usize>,
    pub(crate) budget: bool,
}

impl Fail {
    fn definitive() -> Self {
        Fail::default()
    }

    fn budget() -> Self {
        Fail {
            loops: BTreeSet::new(),
            budget: true,
        }
    }

    fn is_definitive(&self) -> bool {
        self.loops.is_empty() && !self.budget
    }

    fn merge(&mut self, other: Fail) {
        self.loops.extend(other.loops);
        self.budget |= other.budget;
    }
}

type Res = Result<Certificate, Fail>;

/// Proved subtrees larger than this are not cached.
const CACHE_LIMIT: usize = 256;
/// Reported loop-table entries are capped.
const TABLE_LIMIT: usize = 4096;

pub(crate) struct Searcher<'a> {
    sig: &'a Signature,
    config: RuleConfig,
    budget: SearchBudget,
    deadline: Option<Instant>,
    aborted: bool,
    stats: SearchStats,
    stack: Vec<String>,
    on_stack: HashMap<String, usize>,
    proved: HashMap<Sequent, Certificate>,
    failed: HashSet<Sequent>,
    table: LoopTable,
    /// Left µ instances unfolded so far: abstraction key and arguments.
    log: Vec<(String, Vec<Term>)>,
    coinvariants: HashMap<String, Option<Lambda>>,
}

impl<'a> Searcher<'a> {
    pub(crate) fn new(
        sig: &'a Signature,
        config: RuleConfig,
        budget: SearchBudget,
        deadline: Option<Instant>,
    ) -> Self {
        Searcher {
            sig,
            config,
            budget,
            deadline,
            aborted: false,
            stats: SearchStats::default(),
            stack: Vec::new(),
            on_stack: HashMap::new(),
            proved: HashMap::new(),
            failed: HashSet::new(),
            table: LoopTable::default(),
            log: Vec::new(),
            coinvariants: HashMap::new(),
        }
    }

    fn note(&mut self, key: &str, status: Status) {
        if self.table.visited.len() < TABLE_LIMIT || self.table.visited.contains_key(key) {
            self.table.visited.insert(key.to_string(), status);
        }
    }

    pub(crate) fn search(&mut self, s: &Sequent, depth: usize, unfolds: usize) -> Res {
        if self.aborted {
            return Err(Fail::budget());
        }
        self.stats.nodes += 1;
        if self.stats.nodes % 256 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.aborted = true;
                    return Err(Fail::budget());
                }
            }
        }
        if let Some(c) = self.proved.get(s) {
            return Ok(c.clone());
        }
        if self.failed.contains(s) {
            return Err(Fail::definitive());
        }
        if depth > self.budget.max_depth {
            return Err(Fail::budget());
        }
        // Fixed-point-free sequents shrink at every step and cannot loop.
        let key = if s.is_fixpoint_free() {
            None
        } else {
            Some(s.canonical_key())
        };
        let index = self.stack.len();
        if let Some(k) = &key {
            if let Some(&i) = self.on_stack.get(k) {
                let k = k.clone();
                self.note(&k, Status::InProgress);
                return Err(Fail {
                    loops: BTreeSet::from([i]),
                    budget: false,
                });
            }
            self.on_stack.insert(k.clone(), index);
        }
        self.stack.push(key.clone().unwrap_or_default());
        let mut result = self.expand_node(s, depth, unfolds);
        self.stack.pop();
        if let Some(k) = &key {
            self.on_stack.remove(k);
        }
        match &mut result {
            Ok(c) => {
                if c.size() <= CACHE_LIMIT {
                    self.proved.insert(s.clone(), c.clone());
                }
                if let Some(k) = &key {
                    self.note(k, Status::Proved);
                }
            }
            Err(f) => {
                f.loops.retain(|&i| i < index);
                if f.is_definitive() {
                    self.failed.insert(s.clone());
                }
                if let Some(k) = &key {
                    if !f.is_definitive() {
                        self.note(k, Status::Failed);
                    }
                }
            }
        }
        result
    }

    /// Searches all premises of a rule application in order.
    fn apply(&mut self, s: &Sequent, app: RuleApp, depth: usize, unfolds: usize) -> Res {
        let premises = match expand_rule(self.sig, s, &app) {
            Ok(p) => p,
            Err(_) => return Err(Fail::definitive()),
        };
        let mut subs = Vec::with_capacity(premises.len());
        for p in &premises {
            subs.push(self.search(p, depth + 1, unfolds)?);
        }
        Ok(Certificate {
            conclusion: s.clone(),
            rule: app,
            premises: subs,
        })
    }

    fn expand_node(&mut self, s: &Sequent, depth: usize, unfolds: usize) -> Res {
        if let Some(app) = self.axiom(s) {
            return self.apply(s, app, depth, unfolds);
        }
        if let Some(app) = self.invertible(s) {
            return self.apply(s, app, depth, unfolds);
        }
        if let Some(r) = self.fixpoints(s, depth, unfolds) {
            return r;
        }
        let mut fail = Fail::definitive();
        for app in self.choices(s) {
            match self.apply(s, app, depth, unfolds) {
                Ok(c) => return Ok(c),
                Err(f) => fail.merge(f),
            }
            if self.aborted {
                break;
            }
        }
        Err(fail)
    }

    fn axiom(&self, s: &Sequent) -> Option<RuleApp> {
        use Formula as F;
        let alone = s.left.len() + s.right.len() == 1;
        for (i, f) in s.right.iter().enumerate() {
            let rule = match f {
                F::TrueNeg => Some(Rule::TrueNegR),
                F::Neq(t, u) if unify(t, u).is_none() => Some(Rule::NeqRClash),
                F::TruePos if alone => Some(Rule::TruePosR),
                F::Eq(t, u) if alone && t == u => Some(Rule::EqR),
                _ => None,
            };
            if let Some(r) = rule {
                return Some(RuleApp::new(r, i));
            }
        }
        for (i, f) in s.left.iter().enumerate() {
            let rule = match f {
                F::FalsePos => Some(Rule::FalsePosL),
                F::Eq(t, u) if unify(t, u).is_none() => Some(Rule::EqLClash),
                F::FalseNeg if alone => Some(Rule::FalseNegL),
                F::Neq(t, u) if alone && t == u => Some(Rule::NeqL),
                _ => None,
            };
            if let Some(r) = rule {
                return Some(RuleApp::new(r, i));
            }
        }
        if self.config.allow_init && s.left.len() == 1 && s.right.len() == 1 {
            for rule in [Rule::MuInit, Rule::NuInit] {
                let app = RuleApp::new(rule, 0);
                if expand_rule(self.sig, s, &app).is_ok() {
                    return Some(app);
                }
            }
        }
        None
    }

    /// The first invertible rule, preferring those that do not branch.
    fn invertible(&self, s: &Sequent) -> Option<RuleApp> {
        use Formula as F;
        let mut branching = None;
        for (i, f) in s.left.iter().enumerate() {
            let rule = match f {
                F::Eq(t, u) => unify(t, u).map(Rule::EqLUnify),
                F::AndPos(..) => Some(Rule::AndPosL),
                F::TruePos => Some(Rule::TruePosL),
                F::Ex(x, _) => Some(Rule::ExL(fresh_eigenvariable(self.sig, &s.vars, x))),
                F::OrPos(..) => {
                    branching.get_or_insert(RuleApp::new(Rule::OrL, i));
                    None
                }
                _ => None,
            };
            if let Some(r) = rule {
                return Some(RuleApp::new(r, i));
            }
        }
        for (i, f) in s.right.iter().enumerate() {
            let rule = match f {
                F::Neq(t, u) => unify(t, u).map(Rule::NeqRUnify),
                F::Imp(..) => Some(Rule::ImpR),
                F::OrNeg(..) => Some(Rule::OrNegR),
                F::FalseNeg => Some(Rule::FalseNegR),
                F::All(x, _) => Some(Rule::AllR(fresh_eigenvariable(self.sig, &s.vars, x))),
                F::AndNeg(..) => {
                    branching.get_or_insert(RuleApp::new(Rule::AndNegR, i));
                    None
                }
                _ => None,
            };
            if let Some(r) = rule {
                return Some(RuleApp::new(r, i));
            }
        }
        branching
    }

    /// Fixed-point step, if the sequent has one to work on.
    fn fixpoints(&mut self, s: &Sequent, depth: usize, unfolds: usize) -> Option<Res> {
        let left_mu = pick(s.left.iter().enumerate().filter(|(_, f)| matches!(f, Formula::Mu(..))));
        let left_nu = s.left.iter().position(|f| matches!(f, Formula::Nu(..)));
        let right_nu = s.right.iter().position(|f| matches!(f, Formula::Nu(..)));
        let right_mu = pick(s.right.iter().enumerate().filter(|(_, f)| matches!(f, Formula::Mu(..))));
        if left_mu.is_none() && left_nu.is_none() && right_nu.is_none() && right_mu.is_none() {
            return None;
        }
        if unfolds >= self.budget.max_unfoldings {
            // Coinduction needs no unfolding; still worth a try.
            if let Some(i) = right_nu {
                if let Some(r) = self.try_coinduction(s, i, depth, unfolds) {
                    return Some(Ok(r));
                }
            }
            return Some(Err(Fail::budget()));
        }
        if let Some(i) = left_mu {
            return Some(self.unfold_left_mu(s, i, depth, unfolds));
        }
        if let Some(i) = left_nu {
            return Some(self.apply(s, RuleApp::new(Rule::NuL, i), depth, unfolds + 1));
        }
        if let Some(i) = right_nu {
            if let Some(c) = self.try_coinduction(s, i, depth, unfolds) {
                return Some(Ok(c));
            }
            return Some(self.apply(s, RuleApp::new(Rule::NuRUnfold, i), depth, unfolds + 1));
        }
        let i = right_mu?;
        Some(self.apply(s, RuleApp::new(Rule::MuR, i), depth, unfolds + 1))
    }

    fn unfold_left_mu(&mut self, s: &Sequent, i: usize, depth: usize, unfolds: usize) -> Res {
        let here = self.stack.len() - 1;
        // Entries stay after this node returns: an enclosing induction
        // needs every tuple its exploration reached.
        let log_start = self.log.len();
        if let Formula::Mu(abs, args) = &s.left[i] {
            self.log.push((abs_key(abs), args.clone()));
        }
        let result = self.apply(s, RuleApp::new(Rule::MuLUnfold, i), depth, unfolds + 1);
        let fail = match result {
            Ok(c) => return Ok(c),
            Err(f) => f,
        };
        let looped = fail.loops.contains(&here) || fail.budget;
        if looped && self.config.allow_induction && !self.aborted {
            if let Some(c) = self.try_induction(s, i, log_start, depth, unfolds) {
                return Ok(c);
            }
        }
        Err(fail)
    }

    fn try_induction(
        &mut self,
        s: &Sequent,
        i: usize,
        log_start: usize,
        depth: usize,
        unfolds: usize,
    ) -> Option<Certificate> {
        let Formula::Mu(abs, _) = &s.left[i] else {
            return None;
        };
        let key = abs_key(abs);
        let visited: Vec<Vec<Term>> = self.log[log_start..]
            .iter()
            .filter(|(k, _)| *k == key)
            .map(|(_, args)| args.clone())
            .collect();
        let inv = synthesize_invariant(self.sig, abs, &visited)?;
        self.stats.inductions += 1;
        self.apply(s, RuleApp::new(Rule::MuLInd(inv), i), depth, unfolds).ok()
    }

    fn try_coinduction(&mut self, s: &Sequent, i: usize, depth: usize, unfolds: usize) -> Option<Certificate> {
        if !self.config.allow_induction || self.aborted {
            return None;
        }
        let Formula::Nu(abs, _) = &s.right[i] else {
            return None;
        };
        let key = abs_key(abs);
        let inv = match self.coinvariants.get(&key) {
            Some(cached) => cached.clone(),
            None => {
                let computed = synthesize_coinvariant(self.sig, abs, &self.budget, &self.config, self.deadline);
                self.coinvariants.insert(key, computed.clone());
                computed
            }
        }?;
        self.stats.coinductions += 1;
        self.apply(s, RuleApp::new(Rule::NuRCoind(inv), i), depth, unfolds).ok()
    }

    /// Non-invertible alternatives, in the order they are tried.
    fn choices(&self, s: &Sequent) -> Vec<RuleApp> {
        use Formula as F;
        let mut out = Vec::new();
        for (i, f) in s.right.iter().enumerate() {
            match f {
                F::OrPos(..) => {
                    out.push(RuleApp::new(Rule::OrR1, i));
                    out.push(RuleApp::new(Rule::OrR2, i));
                }
                F::Ex(x, body) => {
                    for t in self.witnesses(s, x, body) {
                        out.push(RuleApp::new(Rule::ExR(t), i));
                    }
                }
                F::AndPos(..) => {
                    for sp in all_splits(s.left.len(), s.right.len() - 1) {
                        out.push(RuleApp::new(Rule::AndPosR(sp), i));
                    }
                }
                _ => {}
            }
        }
        for (i, f) in s.left.iter().enumerate() {
            match f {
                F::AndNeg(..) => {
                    out.push(RuleApp::new(Rule::AndNegL1, i));
                    out.push(RuleApp::new(Rule::AndNegL2, i));
                }
                F::All(x, body) => {
                    for t in self.witnesses(s, x, body) {
                        out.push(RuleApp::new(Rule::AllL(t), i));
                    }
                }
                F::Imp(..) => {
                    for sp in all_splits(s.left.len() - 1, s.right.len()) {
                        out.push(RuleApp::new(Rule::ImpL(sp), i));
                    }
                }
                F::OrNeg(..) => {
                    for sp in all_splits(s.left.len() - 1, s.right.len()) {
                        out.push(RuleApp::new(Rule::OrNegL(sp), i));
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// Witness candidates for a quantifier over `x`: terms forced by the
    /// body's equations, then terms already in the sequent, then every
    /// term up to the witness depth.
    fn witnesses(&self, s: &Sequent, x: &Symbol, body: &Formula) -> Vec<Term> {
        let mut out: Vec<Term> = Vec::new();
        let push = |t: Term, out: &mut Vec<Term>| {
            if !out.contains(&t) && self.sig.check_term(&t, &s.vars).is_ok() {
                out.push(t);
            }
        };
        let mut pairs = Vec::new();
        equations(body, &mut pairs);
        if let Some(theta) = unify_all(&pairs) {
            if let Some(t) = theta.get(x) {
                push(t.clone(), &mut out);
            }
        }
        let mut terms = Vec::new();
        for f in s.formulas() {
            f.terms_into(&mut terms);
        }
        let mut subterms = Vec::new();
        for t in &terms {
            t.subterms_into(&mut subterms);
        }
        for t in subterms {
            push(t, &mut out);
        }
        for t in self.sig.terms_up_to(&s.vars, self.config.witness_depth) {
            push(t, &mut out);
        }
        out
    }
}

/// Top-level equations of a positive conjunction, looking through ∃.
fn equations(f: &Formula, out: &mut Vec<(Term, Term)>) {
    match f {
        Formula::AndPos(a, b) => {
            equations(a, out);
            equations(b, out);
        }
        Formula::Ex(_, b) => equations(b, out),
        Formula::Eq(t, u) => out.push((t.clone(), u.clone())),
        _ => {}
    }
}

/// Number of disjuncts of an unfolded fixed point whose equations can
/// still be satisfied.
fn viable_cases(f: &Formula) -> usize {
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
    let mut ds = Vec::new();
    disjuncts(f, &mut ds);
    ds.into_iter()
        .filter(|d| {
            let mut pairs = Vec::new();
            equations(d, &mut pairs);
            unify_all(&pairs).is_some()
        })
        .count()
}

/// Chooses which fixed point to unfold: fewest viable cases, then most
/// non-variable arguments, then position.
fn pick<'f>(candidates: impl Iterator<Item = (usize, &'f Formula)>) -> Option<usize> {
    candidates
        .map(|(i, f)| {
            let cases = unfold(f).map(|u| viable_cases(&u)).unwrap_or(usize::MAX);
            let rigid = match f {
                Formula::Mu(_, args) | Formula::Nu(_, args) => {
                    args.iter().filter(|t| !matches!(t, Term::Var(_))).count()
                }
                _ => 0,
            };
            (cases, std::cmp::Reverse(rigid), i)
        })
        .min()
        .map(|(_, _, i)| i)
}

pub(crate) fn abs_key(abs: &Arc<Abstraction>) -> String {
    Formula::Mu(abs.clone(), Vec::new()).alpha_key()
}
