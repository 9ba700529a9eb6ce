//! Two-sided sequents, the inference rules, and the certificate checker.
//!
//! `expand_rule` is the single trusted step: given a conclusion and a rule
//! instance it computes the premises or rejects the instance. The checker
//! only ever replays `expand_rule`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::formula::{check_monotonic, join, unfold, Abstraction, Formula, Lambda, LogicError};
use crate::term::{fresh_name, unify, Signature, Substitution, Symbol, Term};

/// `𝒳; Γ ⊢ Δ`. Both multisets are kept sorted so that positions are
/// deterministic for equal multisets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub vars: BTreeSet<Symbol>,
    pub left: Vec<Formula>,
    pub right: Vec<Formula>,
}

impl Sequent {
    pub fn new(vars: BTreeSet<Symbol>, mut left: Vec<Formula>, mut right: Vec<Formula>) -> Self {
        left.sort();
        right.sort();
        Sequent { vars, left, right }
    }

    pub fn goal(right: Formula) -> Self {
        Sequent::new(BTreeSet::new(), Vec::new(), vec![right])
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.left.iter().chain(self.right.iter())
    }

    pub fn connective_count(&self) -> usize {
        self.formulas().map(Formula::connective_count).sum()
    }

    pub fn is_fixpoint_free(&self) -> bool {
        self.formulas().all(Formula::is_fixpoint_free)
    }

    /// Checks every term against the signature and every free variable
    /// against `vars`; fixed-point bodies must be closed and monotonic.
    pub fn check_well_formed(&self, sig: &Signature) -> Result<(), KernelError> {
        for v in &self.vars {
            if sig.contains(v) {
                return Err(KernelError::Malformed(format!(
                    "eigenvariable `{v}` clashes with a constructor"
                )));
            }
        }
        for f in self.formulas() {
            if f.has_free_pred_var() {
                return Err(KernelError::Malformed(format!("free predicate variable in `{f}`")));
            }
            check_formula(sig, f, &self.vars)?;
        }
        Ok(())
    }

    /// Key identifying the sequent up to reordering, renaming of bound
    /// variables, and renaming of eigenvariables.
    pub fn canonical_key(&self) -> String {
        let placeholder = Substitution::from_bindings(
            self.vars.iter().map(|v| (v.clone(), Term::var("_"))),
        );
        fn order<'a>(fs: &'a [Formula], placeholder: &Substitution) -> Vec<&'a Formula> {
            let mut keyed: Vec<(String, &Formula)> =
                fs.iter().map(|f| (f.subst(placeholder).alpha_key(), f)).collect();
            keyed.sort_by(|a, b| a.0.cmp(&b.0));
            keyed.into_iter().map(|(_, f)| f).collect()
        }
        let left = order(&self.left, &placeholder);
        let right = order(&self.right, &placeholder);
        let mut seen: Vec<Symbol> = Vec::new();
        for f in left.iter().chain(right.iter()) {
            let mut terms = Vec::new();
            f.terms_into(&mut terms);
            for t in terms {
                for v in ordered_vars(&t) {
                    if self.vars.contains(&v) && !seen.contains(&v) {
                        seen.push(v);
                    }
                }
            }
        }
        let unused = self.vars.len() - seen.len();
        let renaming = Substitution::from_bindings(
            seen.iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), Term::var(&format!("${i}")))),
        );
        let render = |fs: &[&Formula]| {
            let mut keys: Vec<String> = fs.iter().map(|f| f.subst(&renaming).alpha_key()).collect();
            keys.sort();
            keys.join(" , ")
        };
        format!("{}+{} ; {} |- {}", seen.len(), unused, render(&left), render(&right))
    }

    /// Key identifying the sequent up to reordering and bound-variable
    /// renaming only.
    pub fn exact_key(&self) -> String {
        let mut left: Vec<String> = self.left.iter().map(Formula::alpha_key).collect();
        let mut right: Vec<String> = self.right.iter().map(Formula::alpha_key).collect();
        left.sort();
        right.sort();
        format!("{} ; {} |- {}", join(&self.vars.iter().cloned().collect::<Vec<_>>()), left.join(" , "), right.join(" , "))
    }

    pub fn equivalent(&self, other: &Sequent) -> bool {
        self == other || self.canonical_key() == other.canonical_key()
    }
}

fn ordered_vars(t: &Term) -> Vec<Symbol> {
    let mut out = Vec::new();
    fn go(t: &Term, out: &mut Vec<Symbol>) {
        match t {
            Term::Var(v) => out.push(v.clone()),
            Term::App(_, args) => args.iter().for_each(|a| go(a, out)),
        }
    }
    go(t, &mut out);
    out
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<Symbol> = self.vars.iter().cloned().collect();
        write!(f, "[{}] ", join(&vars))?;
        if !self.left.is_empty() {
            write!(f, "{} ", join(&self.left))?;
        }
        f.write_str("|-")?;
        if !self.right.is_empty() {
            write!(f, " {}", join(&self.right))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn check_formula(sig: &Signature, f: &Formula, scope: &BTreeSet<Symbol>) -> Result<(), KernelError> {
    use Formula::*;
    let term = |t: &Term, scope: &BTreeSet<Symbol>| {
        sig.check_term(t, scope)
            .map_err(|e| KernelError::Malformed(e.to_string()))
    };
    match f {
        AndNeg(a, b) | OrNeg(a, b) | AndPos(a, b) | OrPos(a, b) | Imp(a, b) => {
            check_formula(sig, a, scope)?;
            check_formula(sig, b, scope)
        }
        TrueNeg | FalseNeg | TruePos | FalsePos => Ok(()),
        Eq(t, s) | Neq(t, s) => {
            term(t, scope)?;
            term(s, scope)
        }
        All(x, b) | Ex(x, b) => {
            if sig.contains(x) {
                return Err(KernelError::Malformed(format!(
                    "bound variable `{x}` clashes with a constructor"
                )));
            }
            let mut inner = scope.clone();
            inner.insert(x.clone());
            check_formula(sig, b, &inner)
        }
        Mu(abs, args) | Nu(abs, args) => {
            args.iter().try_for_each(|t| term(t, scope))?;
            check_abstraction(sig, abs)
        }
        PredVar(p, args) => {
            // only reachable inside an abstraction body
            let _ = p;
            args.iter().try_for_each(|t| term(t, scope))
        }
        Atom(p, _) => Err(KernelError::Malformed(format!("undesugared predicate `{p}`"))),
    }
}

fn check_abstraction(sig: &Signature, abs: &Abstraction) -> Result<(), KernelError> {
    abs.validate().map_err(|e| KernelError::Malformed(e.to_string()))?;
    if !check_monotonic(abs) {
        return Err(KernelError::Malformed(format!(
            "fixed point `{}` is not monotonic",
            abs.pred_var
        )));
    }
    let scope: BTreeSet<Symbol> = abs.params.iter().cloned().collect();
    check_formula(sig, &abs.body, &scope)
}

/// Which multiset a rule's principal formula lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Context partition for a multiplicative rule: positions (among the side
/// formulas, principal removed) that go to the first premise. Everything
/// else goes to the second.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Split {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self.left.iter().map(|i| i.to_string()).collect();
        let r: Vec<String> = self.right.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}|{}]", l.join(","), r.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    AndNegR,
    AndNegL1,
    AndNegL2,
    OrL,
    FalsePosL,
    OrR1,
    OrR2,
    AndPosR(Split),
    AndPosL,
    TruePosR,
    TruePosL,
    TrueNegR,
    OrNegR,
    OrNegL(Split),
    FalseNegR,
    FalseNegL,
    ImpR,
    ImpL(Split),
    ExR(Term),
    AllR(Symbol),
    AllL(Term),
    ExL(Symbol),
    EqR,
    NeqL,
    EqLClash,
    NeqRClash,
    EqLUnify(Substitution),
    NeqRUnify(Substitution),
    MuR,
    NuL,
    MuLUnfold,
    NuRUnfold,
    MuLInd(Lambda),
    NuRCoind(Lambda),
    MuInit,
    NuInit,
    Cut(Formula, Split),
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        use Rule::*;
        match self {
            AndNegR => "AndNegR",
            AndNegL1 => "AndNegL1",
            AndNegL2 => "AndNegL2",
            OrL => "OrL",
            FalsePosL => "FalsePosL",
            OrR1 => "OrR1",
            OrR2 => "OrR2",
            AndPosR(_) => "AndPosR",
            AndPosL => "AndPosL",
            TruePosR => "TruePosR",
            TruePosL => "TruePosL",
            TrueNegR => "TrueNegR",
            OrNegR => "OrNegR",
            OrNegL(_) => "OrNegL",
            FalseNegR => "FalseNegR",
            FalseNegL => "FalseNegL",
            ImpR => "ImpR",
            ImpL(_) => "ImpL",
            ExR(_) => "ExR",
            AllR(_) => "AllR",
            AllL(_) => "AllL",
            ExL(_) => "ExL",
            EqR => "EqR",
            NeqL => "NeqL",
            EqLClash => "EqLClash",
            NeqRClash => "NeqRClash",
            EqLUnify(_) => "EqLUnify",
            NeqRUnify(_) => "NeqRUnify",
            MuR => "MuR",
            NuL => "NuL",
            MuLUnfold => "MuLUnfold",
            NuRUnfold => "NuRUnfold",
            MuLInd(_) => "MuLInd",
            NuRCoind(_) => "NuRCoind",
            MuInit => "MuInit",
            NuInit => "NuInit",
            Cut(..) => "Cut",
        }
    }

    /// Side of the principal formula; `None` for rules without one.
    pub fn side(&self) -> Option<Side> {
        use Rule::*;
        match self {
            AndNegR | OrR1 | OrR2 | AndPosR(_) | TruePosR | TrueNegR | OrNegR | FalseNegR | ImpR
            | ExR(_) | AllR(_) | EqR | NeqRClash | NeqRUnify(_) | MuR | NuRUnfold | NuRCoind(_) => {
                Some(Side::Right)
            }
            AndNegL1 | AndNegL2 | OrL | FalsePosL | AndPosL | TruePosL | OrNegL(_) | FalseNegL
            | ImpL(_) | AllL(_) | ExL(_) | NeqL | EqLClash | EqLUnify(_) | NuL | MuLUnfold
            | MuLInd(_) => Some(Side::Left),
            MuInit | NuInit | Cut(..) => None,
        }
    }

    /// Whether the rule belongs to the fixed-point-free, cut-free fragment.
    pub fn is_mall(&self) -> bool {
        use Rule::*;
        !matches!(
            self,
            MuR | NuL | MuLUnfold | NuRUnfold | MuLInd(_) | NuRCoind(_) | MuInit | NuInit | Cut(..)
        )
    }
}

/// A rule together with the position of its principal formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleApp {
    pub rule: Rule,
    pub principal: usize,
}

impl RuleApp {
    pub fn new(rule: Rule, principal: usize) -> Self {
        RuleApp { rule, principal }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleConfig {
    pub allow_cut: bool,
    pub allow_init: bool,
    pub allow_induction: bool,
    pub witness_depth: usize,
    pub enumerate_splits: bool,
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            allow_cut: false,
            allow_init: false,
            allow_induction: true,
            witness_depth: 3,
            enumerate_splits: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("no formula at {side} position {index}")]
    NoPrincipal { side: Side, index: usize },
    #[error("{rule} does not apply to `{formula}`")]
    PrincipalMismatch { rule: &'static str, formula: String },
    #[error("{0} needs the sequent to contain only its principal formula")]
    ContextNotEmpty(&'static str),
    #[error("terms `{0}` and `{1}` are unifiable")]
    Unifiable(String, String),
    #[error("terms `{0}` and `{1}` are not unifiable")]
    NotUnifiable(String, String),
    #[error("stale unifier {given}; expected {expected}")]
    StaleMgu { given: String, expected: String },
    #[error("eigenvariable `{0}` is not fresh")]
    NotFresh(Symbol),
    #[error("initial rule needs two identical fixed points")]
    InitMismatch,
    #[error("invalid invariant: {0}")]
    BadInvariant(String),
    #[error("invalid split: {0}")]
    BadSplit(String),
    #[error("malformed: {0}")]
    Malformed(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

struct Parts<'a> {
    principal: &'a Formula,
    left: Vec<Formula>,
    right: Vec<Formula>,
}

fn take(s: &Sequent, side: Side, index: usize) -> Result<Parts<'_>, KernelError> {
    let list = match side {
        Side::Left => &s.left,
        Side::Right => &s.right,
    };
    let principal = list.get(index).ok_or(KernelError::NoPrincipal { side, index })?;
    let mut left = s.left.clone();
    let mut right = s.right.clone();
    match side {
        Side::Left => {
            left.remove(index);
        }
        Side::Right => {
            right.remove(index);
        }
    }
    Ok(Parts {
        principal,
        left,
        right,
    })
}

fn mismatch(rule: &Rule, f: &Formula) -> KernelError {
    KernelError::PrincipalMismatch {
        rule: rule.tag(),
        formula: f.to_string(),
    }
}

fn split_context(
    split: &Split,
    left: &[Formula],
    right: &[Formula],
) -> Result<((Vec<Formula>, Vec<Formula>), (Vec<Formula>, Vec<Formula>)), KernelError> {
    fn part(idx: &[usize], items: &[Formula]) -> Result<(Vec<Formula>, Vec<Formula>), KernelError> {
        let mut seen = BTreeSet::new();
        for w in idx.windows(2) {
            if w[0] >= w[1] {
                return Err(KernelError::BadSplit("indices must be strictly increasing".into()));
            }
        }
        for &i in idx {
            if i >= items.len() {
                return Err(KernelError::BadSplit(format!("index {i} out of range")));
            }
            seen.insert(i);
        }
        let first = items.iter().enumerate().filter(|(i, _)| seen.contains(i)).map(|(_, f)| f.clone()).collect();
        let second = items.iter().enumerate().filter(|(i, _)| !seen.contains(i)).map(|(_, f)| f.clone()).collect();
        Ok((first, second))
    }
    let (l1, l2) = part(&split.left, left)?;
    let (r1, r2) = part(&split.right, right)?;
    Ok(((l1, r1), (l2, r2)))
}

fn with(mut v: Vec<Formula>, f: Formula) -> Vec<Formula> {
    v.push(f);
    v
}

fn subst_all(fs: &[Formula], theta: &Substitution) -> Vec<Formula> {
    fs.iter().map(|f| f.subst(theta)).collect()
}

/// Premises of `app` applied to `s`, or why the instance is invalid.
pub fn expand_rule(sig: &Signature, s: &Sequent, app: &RuleApp) -> Result<Vec<Sequent>, KernelError> {
    use Formula as F;
    use Rule::*;
    let vars = &s.vars;
    let seq = |l: Vec<Formula>, r: Vec<Formula>| Sequent::new(vars.clone(), l, r);
    let rule = &app.rule;

    let Some(side) = rule.side() else {
        return expand_structural(s, app);
    };
    let Parts {
        principal,
        left,
        right,
    } = take(s, side, app.principal)?;
    let only = |name| {
        if left.is_empty() && right.is_empty() {
            Ok(())
        } else {
            Err(KernelError::ContextNotEmpty(name))
        }
    };
    let fresh_ok = |y: &Symbol| {
        if vars.contains(y) || sig.contains(y) || y.as_str().starts_with('_') {
            Err(KernelError::NotFresh(y.clone()))
        } else {
            Ok(())
        }
    };
    let witness_ok = |t: &Term| {
        sig.check_term(t, vars)
            .map_err(|e| KernelError::Malformed(format!("witness `{t}`: {e}")))
    };

    Ok(match (rule, principal) {
        (AndNegR, F::AndNeg(a, b)) => vec![
            seq(left.clone(), with(right.clone(), (**a).clone())),
            seq(left, with(right, (**b).clone())),
        ],
        (AndNegL1, F::AndNeg(a, _)) => vec![seq(with(left, (**a).clone()), right)],
        (AndNegL2, F::AndNeg(_, b)) => vec![seq(with(left, (**b).clone()), right)],
        (OrL, F::OrPos(a, b)) => vec![
            seq(with(left.clone(), (**a).clone()), right.clone()),
            seq(with(left, (**b).clone()), right),
        ],
        (FalsePosL, F::FalsePos) => vec![],
        (OrR1, F::OrPos(a, _)) => vec![seq(left, with(right, (**a).clone()))],
        (OrR2, F::OrPos(_, b)) => vec![seq(left, with(right, (**b).clone()))],
        (AndPosR(split), F::AndPos(a, b)) => {
            let ((l1, r1), (l2, r2)) = split_context(split, &left, &right)?;
            vec![seq(l1, with(r1, (**a).clone())), seq(l2, with(r2, (**b).clone()))]
        }
        (AndPosL, F::AndPos(a, b)) => {
            vec![seq(with(with(left, (**a).clone()), (**b).clone()), right)]
        }
        (TruePosR, F::TruePos) => {
            only("TruePosR")?;
            vec![]
        }
        (TruePosL, F::TruePos) => vec![seq(left, right)],
        (TrueNegR, F::TrueNeg) => vec![],
        (OrNegR, F::OrNeg(a, b)) => {
            vec![seq(left, with(with(right, (**a).clone()), (**b).clone()))]
        }
        (OrNegL(split), F::OrNeg(a, b)) => {
            let ((l1, r1), (l2, r2)) = split_context(split, &left, &right)?;
            vec![seq(with(l1, (**a).clone()), r1), seq(with(l2, (**b).clone()), r2)]
        }
        (FalseNegR, F::FalseNeg) => vec![seq(left, right)],
        (FalseNegL, F::FalseNeg) => {
            only("FalseNegL")?;
            vec![]
        }
        (ImpR, F::Imp(a, b)) => vec![seq(with(left, (**a).clone()), with(right, (**b).clone()))],
        (ImpL(split), F::Imp(a, b)) => {
            let ((l1, r1), (l2, r2)) = split_context(split, &left, &right)?;
            vec![seq(l1, with(r1, (**a).clone())), seq(with(l2, (**b).clone()), r2)]
        }
        (ExR(t), F::Ex(x, b)) | (AllL(t), F::All(x, b)) => {
            witness_ok(t)?;
            let inst = b.subst(&Substitution::singleton(x.clone(), t.clone()));
            if matches!(rule, ExR(_)) {
                vec![seq(left, with(right, inst))]
            } else {
                vec![seq(with(left, inst), right)]
            }
        }
        (AllR(y), F::All(x, b)) | (ExL(y), F::Ex(x, b)) => {
            fresh_ok(y)?;
            let inst = b.subst(&Substitution::singleton(x.clone(), Term::Var(y.clone())));
            let mut vars = vars.clone();
            vars.insert(y.clone());
            if matches!(rule, AllR(_)) {
                vec![Sequent::new(vars, left, with(right, inst))]
            } else {
                vec![Sequent::new(vars, with(left, inst), right)]
            }
        }
        (EqR, F::Eq(t, u)) | (NeqL, F::Neq(t, u)) => {
            only(rule.tag())?;
            if t != u {
                return Err(mismatch(rule, principal));
            }
            vec![]
        }
        (EqLClash, F::Eq(t, u)) | (NeqRClash, F::Neq(t, u)) => {
            if unify(t, u).is_some() {
                return Err(KernelError::Unifiable(t.to_string(), u.to_string()));
            }
            vec![]
        }
        (EqLUnify(theta), F::Eq(t, u)) | (NeqRUnify(theta), F::Neq(t, u)) => {
            let expected =
                unify(t, u).ok_or_else(|| KernelError::NotUnifiable(t.to_string(), u.to_string()))?;
            if &expected != theta {
                return Err(KernelError::StaleMgu {
                    given: theta.to_string(),
                    expected: expected.to_string(),
                });
            }
            vec![Sequent::new(
                theta.apply_to_context(vars),
                subst_all(&left, theta),
                subst_all(&right, theta),
            )]
        }
        (MuR, F::Mu(..)) | (NuRUnfold, F::Nu(..)) => vec![seq(left, with(right, unfold(principal)?))],
        (NuL, F::Nu(..)) | (MuLUnfold, F::Mu(..)) => vec![seq(with(left, unfold(principal)?), right)],
        (MuLInd(inv), F::Mu(abs, args)) => {
            let (params, body) = invariance(abs, inv)?;
            let pvars: BTreeSet<Symbol> = params.iter().cloned().collect();
            let xs: Vec<Term> = params.iter().map(|p| Term::Var(p.clone())).collect();
            vec![
                seq(with(left, inv.apply(args)), right),
                Sequent::new(pvars, vec![body], vec![inv.apply(&xs)]),
            ]
        }
        (NuRCoind(inv), F::Nu(abs, args)) => {
            let (params, body) = invariance(abs, inv)?;
            let pvars: BTreeSet<Symbol> = params.iter().cloned().collect();
            let xs: Vec<Term> = params.iter().map(|p| Term::Var(p.clone())).collect();
            vec![
                seq(left, with(right, inv.apply(args))),
                Sequent::new(pvars, vec![inv.apply(&xs)], vec![body]),
            ]
        }
        _ => return Err(mismatch(rule, principal)),
    })
}

/// Fresh parameters and `B S x̄` for an induction or coinduction step.
fn invariance(abs: &Arc<Abstraction>, inv: &Lambda) -> Result<(Vec<Symbol>, Formula), KernelError> {
    inv.validate()
        .map_err(|e| KernelError::BadInvariant(e.to_string()))?;
    if inv.params.len() != abs.arity() {
        return Err(KernelError::BadInvariant(format!(
            "arity {} does not match fixed point arity {}",
            inv.params.len(),
            abs.arity()
        )));
    }
    let params = abs.params.clone();
    let xs: Vec<Term> = params.iter().map(|p| Term::Var(p.clone())).collect();
    let body = abs.instantiate(&xs, &|ts| inv.apply(ts))?;
    Ok((params, body))
}

fn expand_structural(s: &Sequent, app: &RuleApp) -> Result<Vec<Sequent>, KernelError> {
    if app.principal != 0 {
        return Err(KernelError::NoPrincipal {
            side: Side::Left,
            index: app.principal,
        });
    }
    match &app.rule {
        Rule::MuInit | Rule::NuInit => {
            let ok = s.left.len() == 1
                && s.right.len() == 1
                && match (&app.rule, &s.left[0], &s.right[0]) {
                    (Rule::MuInit, Formula::Mu(..), Formula::Mu(..))
                    | (Rule::NuInit, Formula::Nu(..), Formula::Nu(..)) => s.left[0].alpha_eq(&s.right[0]),
                    _ => false,
                };
            if ok {
                Ok(vec![])
            } else {
                Err(KernelError::InitMismatch)
            }
        }
        Rule::Cut(b, split) => {
            if let Some(v) = b.free_vars().into_iter().find(|v| !s.vars.contains(v)) {
                return Err(KernelError::Malformed(format!("cut formula mentions `{v}`")));
            }
            let ((l1, r1), (l2, r2)) = split_context(split, &s.left, &s.right)?;
            Ok(vec![
                Sequent::new(s.vars.clone(), l1, with(r1, b.clone())),
                Sequent::new(s.vars.clone(), with(l2, b.clone()), r2),
            ])
        }
        other => Err(KernelError::Malformed(format!("{} needs a principal side", other.tag()))),
    }
}

/// Every split of the side formulas into the two premises.
pub fn all_splits(n_left: usize, n_right: usize) -> Vec<Split> {
    let n = n_left + n_right;
    assert!(n < 24, "context too large to enumerate splits");
    (0u32..(1u32 << n))
        .map(|mask| Split {
            left: (0..n_left).filter(|i| mask & (1 << i) != 0).collect(),
            right: (0..n_right).filter(|j| mask & (1 << (n_left + j)) != 0).collect(),
        })
        .collect()
}

fn splits_for(config: &RuleConfig, n_left: usize, n_right: usize) -> Vec<Split> {
    if config.enumerate_splits {
        all_splits(n_left, n_right)
    } else {
        let all = Split {
            left: (0..n_left).collect(),
            right: (0..n_right).collect(),
        };
        let mut v = vec![Split::default()];
        if all != Split::default() {
            v.push(all);
        }
        v
    }
}

/// A name based on `x` that is neither an eigenvariable nor a constructor.
pub fn fresh_eigenvariable(sig: &Signature, vars: &BTreeSet<Symbol>, x: &Symbol) -> Symbol {
    let mut used = vars.clone();
    used.extend(sig.iter().map(|(c, _)| c.clone()));
    if !used.contains(x) && !x.as_str().starts_with('_') {
        return x.clone();
    }
    fresh_name(x, &used)
}

/// All rule instances that `expand_rule` accepts on `s`, with witnesses
/// bounded by `config.witness_depth`. Induction, coinduction and cut are
/// not enumerated.
pub fn list_applicable_rules(sig: &Signature, s: &Sequent, config: &RuleConfig) -> Vec<RuleApp> {
    use Formula as F;
    use Rule::*;
    let mut candidates: Vec<RuleApp> = Vec::new();
    let witnesses = sig.terms_up_to(&s.vars, config.witness_depth);
    for (i, f) in s.left.iter().enumerate() {
        let (nl, nr) = (s.left.len() - 1, s.right.len());
        let rules: Vec<Rule> = match f {
            F::AndNeg(..) => vec![AndNegL1, AndNegL2],
            F::OrPos(..) => vec![OrL],
            F::FalsePos => vec![FalsePosL],
            F::AndPos(..) => vec![AndPosL],
            F::TruePos => vec![TruePosL],
            F::OrNeg(..) => splits_for(config, nl, nr).into_iter().map(OrNegL).collect(),
            F::FalseNeg => vec![FalseNegL],
            F::Imp(..) => splits_for(config, nl, nr).into_iter().map(ImpL).collect(),
            F::All(..) => witnesses.iter().cloned().map(AllL).collect(),
            F::Ex(x, _) => vec![ExL(fresh_eigenvariable(sig, &s.vars, x))],
            F::Neq(..) => vec![NeqL],
            F::Eq(t, u) => match unify(t, u) {
                Some(theta) => vec![EqLUnify(theta)],
                None => vec![EqLClash],
            },
            F::Nu(..) => vec![NuL],
            F::Mu(..) => vec![MuLUnfold],
            _ => vec![],
        };
        candidates.extend(rules.into_iter().map(|r| RuleApp::new(r, i)));
    }
    for (i, f) in s.right.iter().enumerate() {
        let (nl, nr) = (s.left.len(), s.right.len() - 1);
        let rules: Vec<Rule> = match f {
            F::AndNeg(..) => vec![AndNegR],
            F::OrPos(..) => vec![OrR1, OrR2],
            F::AndPos(..) => splits_for(config, nl, nr).into_iter().map(AndPosR).collect(),
            F::TruePos => vec![TruePosR],
            F::TrueNeg => vec![TrueNegR],
            F::OrNeg(..) => vec![OrNegR],
            F::FalseNeg => vec![FalseNegR],
            F::Imp(..) => vec![ImpR],
            F::Ex(..) => witnesses.iter().cloned().map(ExR).collect(),
            F::All(x, _) => vec![AllR(fresh_eigenvariable(sig, &s.vars, x))],
            F::Eq(..) => vec![EqR],
            F::Neq(t, u) => match unify(t, u) {
                Some(theta) => vec![NeqRUnify(theta)],
                None => vec![NeqRClash],
            },
            F::Mu(..) => vec![MuR],
            F::Nu(..) => vec![NuRUnfold],
            _ => vec![],
        };
        candidates.extend(rules.into_iter().map(|r| RuleApp::new(r, i)));
    }
    if config.allow_init {
        candidates.push(RuleApp::new(MuInit, 0));
        candidates.push(RuleApp::new(NuInit, 0));
    }
    candidates
        .into_iter()
        .filter(|app| expand_rule(sig, s, app).is_ok())
        .collect()
}

/// A sequent-calculus derivation with the conclusion stored at every node.
#[derive(Clone, PartialEq, Eq)]
pub struct Certificate {
    pub conclusion: Sequent,
    pub rule: RuleApp,
    pub premises: Vec<Certificate>,
}

impl fmt::Debug for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(c: &Certificate, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            writeln!(f, "{:indent$}{} @{}  {}", "", c.rule.rule.tag(), c.rule.principal, c.conclusion, indent = depth * 2)?;
            c.premises.iter().try_for_each(|p| go(p, depth + 1, f))
        }
        go(self, 0, f)
    }
}

/// The rule skeleton of a derivation, without intermediate conclusions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTree {
    pub rule: RuleApp,
    pub premises: Vec<ProofTree>,
}

impl Certificate {
    pub fn tree(&self) -> ProofTree {
        ProofTree {
            rule: self.rule.clone(),
            premises: self.premises.iter().map(Certificate::tree).collect(),
        }
    }

    /// Pre-order iterator over all nodes.
    pub fn nodes(&self) -> Vec<&Certificate> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(c) = stack.pop() {
            out.push(c);
            stack.extend(c.premises.iter().rev());
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Certificate::size).sum::<usize>()
    }

    pub fn count_rule(&self, tag: &str) -> usize {
        self.nodes().iter().filter(|n| n.rule.rule.tag() == tag).count()
    }
}

/// A checker verdict pointing at the first failing node.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("check failed at node {}: {reason}", path_string(.path))]
pub struct CheckError {
    /// Premise indices from the root to the failing node.
    pub path: Vec<usize>,
    pub reason: String,
}

pub fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        let parts: Vec<String> = path.iter().map(|i| i.to_string()).collect();
        format!("root/{}", parts.join("/"))
    }
}

fn permitted(rule: &Rule, config: &RuleConfig) -> Result<(), String> {
    match rule {
        Rule::MuInit | Rule::NuInit if !config.allow_init => Err(format!("{} is disabled", rule.tag())),
        Rule::Cut(..) if !config.allow_cut => Err("Cut is disabled".into()),
        Rule::MuLInd(_) | Rule::NuRCoind(_) if !config.allow_induction => {
            Err(format!("{} is disabled", rule.tag()))
        }
        _ => Ok(()),
    }
}

/// Replays every node through `expand_rule`.
pub fn check_certificate(sig: &Signature, c: &Certificate, config: &RuleConfig) -> Result<(), CheckError> {
    c.conclusion.check_well_formed(sig).map_err(|e| CheckError {
        path: vec![],
        reason: e.to_string(),
    })?;
    let mut path = Vec::new();
    check_node(sig, c, config, &mut path)
}

fn check_node(
    sig: &Signature,
    c: &Certificate,
    config: &RuleConfig,
    path: &mut Vec<usize>,
) -> Result<(), CheckError> {
    let fail = |path: &Vec<usize>, reason: String| CheckError {
        path: path.clone(),
        reason,
    };
    permitted(&c.rule.rule, config).map_err(|r| fail(path, r))?;
    let premises =
        expand_rule(sig, &c.conclusion, &c.rule).map_err(|e| fail(path, format!("{}: {e}", c.rule.rule.tag())))?;
    if premises.len() != c.premises.len() {
        return Err(fail(
            path,
            format!(
                "{} yields {} premises but the certificate has {}",
                c.rule.rule.tag(),
                premises.len(),
                c.premises.len()
            ),
        ));
    }
    for (i, (expected, sub)) in premises.iter().zip(&c.premises).enumerate() {
        path.push(i);
        if !expected.equivalent(&sub.conclusion) {
            return Err(fail(
                path,
                format!("premise is `{}` but expected `{}`", sub.conclusion, expected),
            ));
        }
        check_node(sig, sub, config, path)?;
        path.pop();
    }
    Ok(())
}

/// Rebuilds a full certificate from a conclusion and a rule skeleton.
pub fn rebuild(sig: &Signature, conclusion: &Sequent, tree: &ProofTree) -> Result<Certificate, CheckError> {
    fn go(
        sig: &Signature,
        conclusion: &Sequent,
        tree: &ProofTree,
        path: &mut Vec<usize>,
    ) -> Result<Certificate, CheckError> {
        let premises = expand_rule(sig, conclusion, &tree.rule).map_err(|e| CheckError {
            path: path.clone(),
            reason: format!("{}: {e}", tree.rule.rule.tag()),
        })?;
        if premises.len() != tree.premises.len() {
            return Err(CheckError {
                path: path.clone(),
                reason: format!(
                    "{} yields {} premises but the certificate has {}",
                    tree.rule.rule.tag(),
                    premises.len(),
                    tree.premises.len()
                ),
            });
        }
        let mut subs = Vec::with_capacity(premises.len());
        for (i, (p, t)) in premises.iter().zip(&tree.premises).enumerate() {
            path.push(i);
            subs.push(go(sig, p, t, path)?);
            path.pop();
        }
        Ok(Certificate {
            conclusion: conclusion.clone(),
            rule: tree.rule.clone(),
            premises: subs,
        })
    }
    go(sig, conclusion, tree, &mut Vec::new())
}

/// Renames eigenvariable `from` to `to` throughout a certificate.
pub fn rename_eigenvariable(c: &Certificate, from: &Symbol, to: &Symbol) -> Certificate {
    let theta = Substitution::singleton(from.clone(), Term::Var(to.clone()));
    let rename_set = |vars: &BTreeSet<Symbol>| -> BTreeSet<Symbol> {
        vars.iter().map(|v| if v == from { to.clone() } else { v.clone() }).collect()
    };
    let conclusion = Sequent::new(
        rename_set(&c.conclusion.vars),
        subst_all(&c.conclusion.left, &theta),
        subst_all(&c.conclusion.right, &theta),
    );
    let rename_sub = |s: &Substitution| -> Substitution {
        Substitution::from_bindings(s.iter().map(|(k, v)| {
            let k = if k == from { to.clone() } else { k.clone() };
            (k, theta.apply(v))
        }))
    };
    let rule = match &c.rule.rule {
        Rule::AllR(y) if y == from => Rule::AllR(to.clone()),
        Rule::ExL(y) if y == from => Rule::ExL(to.clone()),
        Rule::ExR(t) => Rule::ExR(theta.apply(t)),
        Rule::AllL(t) => Rule::AllL(theta.apply(t)),
        Rule::EqLUnify(s) => Rule::EqLUnify(rename_sub(s)),
        Rule::NeqRUnify(s) => Rule::NeqRUnify(rename_sub(s)),
        Rule::Cut(b, sp) => Rule::Cut(b.subst(&theta), sp.clone()),
        other => other.clone(),
    };
    // Positions may move after renaming; recompute them from the formula.
    let principal = match rule.side() {
        Some(side) => {
            let (old, new) = match side {
                Side::Left => (&c.conclusion.left, &conclusion.left),
                Side::Right => (&c.conclusion.right, &conclusion.right),
            };
            let target = old[c.rule.principal].subst(&theta);
            new.iter().position(|f| *f == target).unwrap_or(c.rule.principal)
        }
        None => c.rule.principal,
    };
    Certificate {
        conclusion,
        rule: RuleApp::new(rule, principal),
        premises: c.premises.iter().map(|p| rename_eigenvariable(p, from, to)).collect(),
    }
}

/// Formula multiset helper used by tests and the search engine.
pub fn multiset_counts(fs: &[Formula]) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for f in fs {
        *m.entry(f.alpha_key()).or_insert(0) += 1;
    }
    m
}
