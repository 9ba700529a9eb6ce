//! The polarized formula language: connectives, fixed-point abstractions,
//! capture-avoiding substitution, duality, monotonicity and unfolding.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use thiserror::Error;

use crate::term::{fresh_name, Substitution, Symbol, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("predicate variable `{0}` occurs free")]
    FreePredVar(Symbol),
    #[error("implication must be eliminated before dualizing")]
    ImplicationInDual,
    #[error("`{name}` expects {expected} arguments, found {found}")]
    Arity {
        name: Symbol,
        expected: usize,
        found: usize,
    },
    #[error("not a fixed-point formula")]
    NotFixpoint,
    #[error("unbound predicate `{0}`")]
    UnboundPredicate(Symbol),
    #[error("definition `{0}` is not monotonic")]
    NotMonotonic(Symbol),
    #[error("abstraction `{name}` has free variable `{var}`")]
    OpenAbstraction { name: Symbol, var: Symbol },
    #[error("definitions {0:?} are mutually recursive")]
    MutualRecursion(Vec<Symbol>),
    #[error("predicate `{0}` defined twice")]
    DuplicateDefinition(Symbol),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fixpoint {
    Mu,
    Nu,
}

impl Fixpoint {
    pub fn dual(self) -> Self {
        match self {
            Fixpoint::Mu => Fixpoint::Nu,
            Fixpoint::Nu => Fixpoint::Mu,
        }
    }
}

/// A fixed-point body `λp λx̄. body`. The body mentions no free term
/// variables besides the parameters and no predicate variable besides `p`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Abstraction {
    pub pred_var: Symbol,
    pub params: Vec<Symbol>,
    pub body: Formula,
}

impl fmt::Debug for Abstraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; {}; {}", self.pred_var, join(&self.params), self.body)
    }
}

impl Abstraction {
    /// Checks closedness and the arity of every recursive occurrence.
    pub fn new(pred_var: Symbol, params: Vec<Symbol>, body: Formula) -> Result<Self, LogicError> {
        let abs = Abstraction {
            pred_var,
            params,
            body,
        };
        abs.validate()?;
        Ok(abs)
    }

    pub fn validate(&self) -> Result<(), LogicError> {
        let fv = self.body.free_vars();
        if let Some(var) = fv.iter().find(|v| !self.params.contains(v)) {
            return Err(LogicError::OpenAbstraction {
                name: self.pred_var.clone(),
                var: var.clone(),
            });
        }
        let mut preds = Vec::new();
        self.body.pred_var_uses(&mut preds);
        for (p, n) in preds {
            if p != self.pred_var {
                return Err(LogicError::FreePredVar(p));
            }
            if n != self.params.len() {
                return Err(LogicError::Arity {
                    name: p,
                    expected: self.params.len(),
                    found: n,
                });
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn is_recursive(&self) -> bool {
        let mut preds = Vec::new();
        self.body.pred_var_uses(&mut preds);
        !preds.is_empty()
    }

    /// `B S`: the body with every recursive call replaced by `replacement`,
    /// instantiated at `args`.
    pub fn instantiate(
        &self,
        args: &[Term],
        replacement: &dyn Fn(&[Term]) -> Formula,
    ) -> Result<Formula, LogicError> {
        if args.len() != self.params.len() {
            return Err(LogicError::Arity {
                name: self.pred_var.clone(),
                expected: self.params.len(),
                found: args.len(),
            });
        }
        let replaced = self.body.replace_pred(&self.pred_var, replacement);
        let theta = Substitution::from_bindings(
            self.params.iter().cloned().zip(args.iter().cloned()),
        );
        Ok(replaced.subst(&theta))
    }

    /// The abstraction of the dual fixed point.
    pub fn dual(&self) -> Result<Abstraction, LogicError> {
        Ok(Abstraction {
            pred_var: self.pred_var.clone(),
            params: self.params.clone(),
            body: self.body.dual_with(Some(&self.pred_var))?,
        })
    }

    fn alpha_key(&self, out: &mut String, env: &mut Vec<Symbol>) {
        let depth = env.len();
        out.push_str("λ");
        env.push(self.pred_var.clone());
        for p in &self.params {
            env.push(p.clone());
        }
        let _ = write!(out, "{}.", self.params.len());
        self.body.alpha_key_into(out, env);
        env.truncate(depth);
    }
}

/// Positivity check: every occurrence of the predicate variable sits under
/// an even number of implication antecedents.
pub fn check_monotonic(a: &Abstraction) -> bool {
    a.body.occurs_only_positively(&a.pred_var, true)
}

/// A closed predicate `λx̄. body`, used as an induction invariant or
/// coinduction coinvariant.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lambda {
    pub params: Vec<Symbol>,
    pub body: Formula,
}

impl fmt::Debug for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lambda({}; {})", join(&self.params), self.body)
    }
}

impl Lambda {
    pub fn new(params: Vec<Symbol>, body: Formula) -> Self {
        Lambda { params, body }
    }

    /// Closed with no predicate variables.
    pub fn validate(&self) -> Result<(), LogicError> {
        if let Some(var) = self.body.free_vars().into_iter().find(|v| !self.params.contains(v)) {
            return Err(LogicError::OpenAbstraction {
                name: Symbol::new("lambda"),
                var,
            });
        }
        let mut preds = Vec::new();
        self.body.pred_var_uses(&mut preds);
        if let Some((p, _)) = preds.into_iter().next() {
            return Err(LogicError::FreePredVar(p));
        }
        Ok(())
    }

    pub fn apply(&self, args: &[Term]) -> Formula {
        let theta =
            Substitution::from_bindings(self.params.iter().cloned().zip(args.iter().cloned()));
        self.body.subst(&theta)
    }

    pub fn alpha_eq(&self, other: &Lambda) -> bool {
        self.params.len() == other.params.len()
            && self.alpha_key() == other.alpha_key()
    }

    pub fn alpha_key(&self) -> String {
        let mut out = String::new();
        let mut env: Vec<Symbol> = self.params.clone();
        self.body.alpha_key_into(&mut out, &mut env);
        out
    }
}

/// µMALL⁼ formulas. `Atom` is a reference to a named definition and only
/// appears before desugaring.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    AndNeg(Box<Formula>, Box<Formula>),
    TrueNeg,
    OrNeg(Box<Formula>, Box<Formula>),
    FalseNeg,
    AndPos(Box<Formula>, Box<Formula>),
    TruePos,
    OrPos(Box<Formula>, Box<Formula>),
    FalsePos,
    Imp(Box<Formula>, Box<Formula>),
    Eq(Term, Term),
    Neq(Term, Term),
    All(Symbol, Box<Formula>),
    Ex(Symbol, Box<Formula>),
    Mu(Arc<Abstraction>, Vec<Term>),
    Nu(Arc<Abstraction>, Vec<Term>),
    PredVar(Symbol, Vec<Term>),
    Atom(Symbol, Vec<Term>),
}

use Formula::*;

impl Formula {
    pub fn and_neg(a: Formula, b: Formula) -> Formula {
        AndNeg(Box::new(a), Box::new(b))
    }
    pub fn and_pos(a: Formula, b: Formula) -> Formula {
        AndPos(Box::new(a), Box::new(b))
    }
    pub fn or_pos(a: Formula, b: Formula) -> Formula {
        OrPos(Box::new(a), Box::new(b))
    }
    pub fn or_neg(a: Formula, b: Formula) -> Formula {
        OrNeg(Box::new(a), Box::new(b))
    }
    pub fn imp(a: Formula, b: Formula) -> Formula {
        Imp(Box::new(a), Box::new(b))
    }
    pub fn all(x: &str, b: Formula) -> Formula {
        All(Symbol::new(x), Box::new(b))
    }
    pub fn ex(x: &str, b: Formula) -> Formula {
        Ex(Symbol::new(x), Box::new(b))
    }
    pub fn eq(t: Term, s: Term) -> Formula {
        Eq(t, s)
    }
    pub fn neq(t: Term, s: Term) -> Formula {
        Neq(t, s)
    }

    /// Right-nested disjunction; the empty disjunction is `false`.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return FalsePos;
        };
        while let Some(f) = items.pop() {
            acc = Formula::or_pos(f, acc);
        }
        acc
    }

    /// Right-nested ∧⁺; the empty conjunction is `true+`.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return TruePos;
        };
        while let Some(f) = items.pop() {
            acc = Formula::and_pos(f, acc);
        }
        acc
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut out, &mut Vec::new());
        out
    }

    fn free_vars_into(&self, out: &mut BTreeSet<Symbol>, bound: &mut Vec<Symbol>) {
        let add = |t: &Term, out: &mut BTreeSet<Symbol>, bound: &Vec<Symbol>| {
            for v in t.free_vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            AndNeg(a, b) | OrNeg(a, b) | AndPos(a, b) | OrPos(a, b) | Imp(a, b) => {
                a.free_vars_into(out, bound);
                b.free_vars_into(out, bound);
            }
            TrueNeg | FalseNeg | TruePos | FalsePos => {}
            Eq(t, s) | Neq(t, s) => {
                add(t, out, bound);
                add(s, out, bound);
            }
            All(x, b) | Ex(x, b) => {
                bound.push(x.clone());
                b.free_vars_into(out, bound);
                bound.pop();
            }
            Mu(_, args) | Nu(_, args) | PredVar(_, args) | Atom(_, args) => {
                args.iter().for_each(|t| add(t, out, bound))
            }
        }
    }

    /// Terms occurring at the formula level (fixed-point bodies excluded).
    pub fn terms_into(&self, out: &mut Vec<Term>) {
        match self {
            AndNeg(a, b) | OrNeg(a, b) | AndPos(a, b) | OrPos(a, b) | Imp(a, b) => {
                a.terms_into(out);
                b.terms_into(out);
            }
            TrueNeg | FalseNeg | TruePos | FalsePos => {}
            Eq(t, s) | Neq(t, s) => {
                out.push(t.clone());
                out.push(s.clone());
            }
            All(_, b) | Ex(_, b) => b.terms_into(out),
            Mu(_, args) | Nu(_, args) | PredVar(_, args) | Atom(_, args) => {
                out.extend(args.iter().cloned())
            }
        }
    }

    fn pred_var_uses(&self, out: &mut Vec<(Symbol, usize)>) {
        match self {
            AndNeg(a, b) | OrNeg(a, b) | AndPos(a, b) | OrPos(a, b) | Imp(a, b) => {
                a.pred_var_uses(out);
                b.pred_var_uses(out);
            }
            All(_, b) | Ex(_, b) => b.pred_var_uses(out),
            PredVar(p, args) => out.push((p.clone(), args.len())),
            _ => {}
        }
    }

    pub fn has_free_pred_var(&self) -> bool {
        let mut out = Vec::new();
        self.pred_var_uses(&mut out);
        !out.is_empty()
    }

    pub fn is_fixpoint_free(&self) -> bool {
        match self {
            AndNeg(a, b) | OrNeg(a, b) | AndPos(a, b) | OrPos(a, b) | Imp(a, b) => {
                a.is_fixpoint_free() && b.is_fixpoint_free()
            }
            All(_, b) | Ex(_, b) => b.is_fixpoint_free(),
            Mu(..) | Nu(..) | PredVar(..) | Atom(..) => false,
            _ => true,
        }
    }

    pub fn has_atoms(&self) -> bool {
        match self {
            AndNeg(a, b) | OrNeg(a, b) | AndPos(a, b) | OrPos(a, b) | Imp(a, b) => {
                a.has_atoms() || b.has_atoms()
            }
            All(_, b) | Ex(_, b) => b.has_atoms(),
            Atom(..) => true,
            _ => false,
        }
    }

    /// Number of logical connectives, counting equations, units and
    /// fixed-point or predicate applications as one each.
    pub fn connective_count(&self) -> usize {
        match self {
            AndNeg(a, b) | OrNeg(a, b) | AndPos(a, b) | OrPos(a, b) | Imp(a, b) => {
                1 + a.connective_count() + b.connective_count()
            }
            All(_, b) | Ex(_, b) => 1 + b.connective_count(),
            _ => 1,
        }
    }

    /// Capture-avoiding simultaneous substitution of terms for free
    /// variables.
    pub fn subst(&self, theta: &Substitution) -> Formula {
        if theta.is_empty() {
            return self.clone();
        }
        match self {
            AndNeg(a, b) => Formula::and_neg(a.subst(theta), b.subst(theta)),
            OrNeg(a, b) => Formula::or_neg(a.subst(theta), b.subst(theta)),
            AndPos(a, b) => Formula::and_pos(a.subst(theta), b.subst(theta)),
            OrPos(a, b) => Formula::or_pos(a.subst(theta), b.subst(theta)),
            Imp(a, b) => Formula::imp(a.subst(theta), b.subst(theta)),
            TrueNeg | FalseNeg | TruePos | FalsePos => self.clone(),
            Eq(t, s) => Eq(theta.apply(t), theta.apply(s)),
            Neq(t, s) => Neq(theta.apply(t), theta.apply(s)),
            All(x, b) => {
                let (x, b) = subst_binder(x, b, theta);
                All(x, Box::new(b))
            }
            Ex(x, b) => {
                let (x, b) = subst_binder(x, b, theta);
                Ex(x, Box::new(b))
            }
            Mu(abs, args) => Mu(abs.clone(), args.iter().map(|t| theta.apply(t)).collect()),
            Nu(abs, args) => Nu(abs.clone(), args.iter().map(|t| theta.apply(t)).collect()),
            PredVar(p, args) => PredVar(p.clone(), args.iter().map(|t| theta.apply(t)).collect()),
            Atom(p, args) => Atom(p.clone(), args.iter().map(|t| theta.apply(t)).collect()),
        }
    }

    /// Replaces each application of predicate variable `p` (outside nested
    /// fixed points, which are closed).
    pub fn replace_pred(&self, p: &Symbol, f: &dyn Fn(&[Term]) -> Formula) -> Formula {
        match self {
            AndNeg(a, b) => Formula::and_neg(a.replace_pred(p, f), b.replace_pred(p, f)),
            OrNeg(a, b) => Formula::or_neg(a.replace_pred(p, f), b.replace_pred(p, f)),
            AndPos(a, b) => Formula::and_pos(a.replace_pred(p, f), b.replace_pred(p, f)),
            OrPos(a, b) => Formula::or_pos(a.replace_pred(p, f), b.replace_pred(p, f)),
            Imp(a, b) => Formula::imp(a.replace_pred(p, f), b.replace_pred(p, f)),
            All(x, b) => All(x.clone(), Box::new(b.replace_pred(p, f))),
            Ex(x, b) => Ex(x.clone(), Box::new(b.replace_pred(p, f))),
            PredVar(q, args) if q == p => f(args),
            _ => self.clone(),
        }
    }

    /// `dual` of an implication-free formula with no free predicate
    /// variables.
    pub fn dual(&self) -> Result<Formula, LogicError> {
        self.dual_with(None)
    }

    fn dual_with(&self, bound: Option<&Symbol>) -> Result<Formula, LogicError> {
        let d = |f: &Formula| f.dual_with(bound);
        Ok(match self {
            AndNeg(a, b) => Formula::or_pos(d(a)?, d(b)?),
            OrPos(a, b) => Formula::and_neg(d(a)?, d(b)?),
            AndPos(a, b) => Formula::or_neg(d(a)?, d(b)?),
            OrNeg(a, b) => Formula::and_pos(d(a)?, d(b)?),
            TrueNeg => FalsePos,
            FalsePos => TrueNeg,
            TruePos => FalseNeg,
            FalseNeg => TruePos,
            Imp(..) => return Err(LogicError::ImplicationInDual),
            Eq(t, s) => Neq(t.clone(), s.clone()),
            Neq(t, s) => Eq(t.clone(), s.clone()),
            All(x, b) => Ex(x.clone(), Box::new(d(b)?)),
            Ex(x, b) => All(x.clone(), Box::new(d(b)?)),
            Mu(abs, args) => Nu(Arc::new(abs.dual()?), args.clone()),
            Nu(abs, args) => Mu(Arc::new(abs.dual()?), args.clone()),
            PredVar(p, _) if Some(p) == bound => self.clone(),
            PredVar(p, _) => return Err(LogicError::FreePredVar(p.clone())),
            Atom(p, _) => return Err(LogicError::UnboundPredicate(p.clone())),
        })
    }

    /// Rewrites `A => B` as `dual(A) \/- B` throughout.
    pub fn eliminate_imp(&self) -> Result<Formula, LogicError> {
        let e = |f: &Formula| f.eliminate_imp();
        Ok(match self {
            AndNeg(a, b) => Formula::and_neg(e(a)?, e(b)?),
            OrNeg(a, b) => Formula::or_neg(e(a)?, e(b)?),
            AndPos(a, b) => Formula::and_pos(e(a)?, e(b)?),
            OrPos(a, b) => Formula::or_pos(e(a)?, e(b)?),
            Imp(a, b) => Formula::or_neg(e(a)?.dual()?, e(b)?),
            All(x, b) => All(x.clone(), Box::new(e(b)?)),
            Ex(x, b) => Ex(x.clone(), Box::new(e(b)?)),
            Mu(abs, args) => Mu(Arc::new(abs.without_imp()?), args.clone()),
            Nu(abs, args) => Nu(Arc::new(abs.without_imp()?), args.clone()),
            _ => self.clone(),
        })
    }

    fn occurs_only_positively(&self, p: &Symbol, positive: bool) -> bool {
        match self {
            AndNeg(a, b) | OrNeg(a, b) | AndPos(a, b) | OrPos(a, b) => {
                a.occurs_only_positively(p, positive) && b.occurs_only_positively(p, positive)
            }
            Imp(a, b) => {
                a.occurs_only_positively(p, !positive) && b.occurs_only_positively(p, positive)
            }
            All(_, b) | Ex(_, b) => b.occurs_only_positively(p, positive),
            PredVar(q, _) => q != p || positive,
            _ => true,
        }
    }

    /// Canonical rendering up to renaming of bound variables.
    pub fn alpha_key(&self) -> String {
        let mut out = String::new();
        self.alpha_key_into(&mut out, &mut Vec::new());
        out
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self == other || self.alpha_key() == other.alpha_key()
    }

    fn alpha_key_into(&self, out: &mut String, env: &mut Vec<Symbol>) {
        let bin = |out: &mut String, env: &mut Vec<Symbol>, op: &str, a: &Formula, b: &Formula| {
            out.push('(');
            a.alpha_key_into(out, env);
            out.push_str(op);
            b.alpha_key_into(out, env);
            out.push(')');
        };
        match self {
            AndNeg(a, b) => bin(out, env, "&-", a, b),
            OrNeg(a, b) => bin(out, env, "|-", a, b),
            AndPos(a, b) => bin(out, env, "&+", a, b),
            OrPos(a, b) => bin(out, env, "|", a, b),
            Imp(a, b) => bin(out, env, ">", a, b),
            TrueNeg => out.push_str("T-"),
            FalseNeg => out.push_str("F-"),
            TruePos => out.push_str("T+"),
            FalsePos => out.push_str("F"),
            Eq(t, s) => {
                term_key(t, out, env);
                out.push('=');
                term_key(s, out, env);
            }
            Neq(t, s) => {
                term_key(t, out, env);
                out.push_str("!=");
                term_key(s, out, env);
            }
            All(x, b) | Ex(x, b) => {
                out.push_str(if matches!(self, All(..)) { "A." } else { "E." });
                env.push(x.clone());
                b.alpha_key_into(out, env);
                env.pop();
            }
            Mu(abs, args) | Nu(abs, args) => {
                out.push_str(if matches!(self, Mu(..)) { "mu[" } else { "nu[" });
                abs.alpha_key(out, &mut Vec::new());
                out.push(']');
                args_key(args, out, env);
            }
            PredVar(p, args) => {
                match env.iter().rposition(|v| v == p) {
                    Some(i) => {
                        let _ = write!(out, "#{i}");
                    }
                    None => {
                        let _ = write!(out, "?{p}");
                    }
                }
                args_key(args, out, env);
            }
            Atom(p, args) => {
                let _ = write!(out, "@{p}");
                args_key(args, out, env);
            }
        }
    }
}

impl Abstraction {
    fn without_imp(&self) -> Result<Abstraction, LogicError> {
        Ok(Abstraction {
            pred_var: self.pred_var.clone(),
            params: self.params.clone(),
            body: self.body.eliminate_imp_open(&self.pred_var)?,
        })
    }
}

impl Formula {
    fn eliminate_imp_open(&self, p: &Symbol) -> Result<Formula, LogicError> {
        let e = |f: &Formula| f.eliminate_imp_open(p);
        Ok(match self {
            AndNeg(a, b) => Formula::and_neg(e(a)?, e(b)?),
            OrNeg(a, b) => Formula::or_neg(e(a)?, e(b)?),
            AndPos(a, b) => Formula::and_pos(e(a)?, e(b)?),
            OrPos(a, b) => Formula::or_pos(e(a)?, e(b)?),
            Imp(a, b) => Formula::or_neg(e(a)?.dual_with(Some(p))?, e(b)?),
            All(x, b) => All(x.clone(), Box::new(e(b)?)),
            Ex(x, b) => Ex(x.clone(), Box::new(e(b)?)),
            _ => self.eliminate_imp()?,
        })
    }
}

fn term_key(t: &Term, out: &mut String, env: &[Symbol]) {
    match t {
        Term::Var(x) => match env.iter().rposition(|v| v == x) {
            Some(i) => {
                let _ = write!(out, "#{i}");
            }
            None => {
                let _ = write!(out, "{x}");
            }
        },
        Term::App(c, args) => {
            let _ = write!(out, "{c}");
            if !args.is_empty() {
                args_key(args, out, env);
            }
        }
    }
}

fn args_key(args: &[Term], out: &mut String, env: &[Symbol]) {
    out.push('(');
    for (i, t) in args.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        term_key(t, out, env);
    }
    out.push(')');
}

fn subst_binder(x: &Symbol, body: &Formula, theta: &Substitution) -> (Symbol, Formula) {
    let theta = theta.without(x);
    if theta.is_empty() {
        return (x.clone(), body.clone());
    }
    let fv = body.free_vars();
    if !theta.domain().any(|v| fv.contains(v)) {
        return (x.clone(), body.clone());
    }
    let range = theta.range_vars();
    if range.contains(x) {
        let mut used = range;
        used.extend(fv);
        used.extend(theta.domain().cloned());
        used.insert(x.clone());
        let y = fresh_name(x, &used);
        let renamed = body.subst(&Substitution::singleton(x.clone(), Term::Var(y.clone())));
        (y, renamed.subst(&theta))
    } else {
        (x.clone(), body.subst(&theta))
    }
}

/// `B(µB) t̄` for `µB t̄`, and likewise for ν.
pub fn unfold(fp: &Formula) -> Result<Formula, LogicError> {
    match fp {
        Mu(abs, args) => {
            let a = abs.clone();
            abs.instantiate(args, &move |ts| Mu(a.clone(), ts.to_vec()))
        }
        Nu(abs, args) => {
            let a = abs.clone();
            abs.instantiate(args, &move |ts| Nu(a.clone(), ts.to_vec()))
        }
        _ => Err(LogicError::NotFixpoint),
    }
}

pub(crate) fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AndNeg(a, b) => write!(f, "({a} /\\- {b})"),
            OrNeg(a, b) => write!(f, "({a} \\/- {b})"),
            AndPos(a, b) => write!(f, "({a} /\\+ {b})"),
            OrPos(a, b) => write!(f, "({a} \\/ {b})"),
            Imp(a, b) => write!(f, "({a} => {b})"),
            TrueNeg => f.write_str("true-"),
            FalseNeg => f.write_str("false-"),
            TruePos => f.write_str("true+"),
            FalsePos => f.write_str("false"),
            Eq(t, s) => write!(f, "{t} = {s}"),
            Neq(t, s) => write!(f, "{t} != {s}"),
            All(x, b) => write!(f, "(all {x}, {b})"),
            Ex(x, b) => write!(f, "(exists {x}, {b})"),
            Mu(abs, args) | Nu(abs, args) => {
                let kw = if matches!(self, Mu(..)) { "mu" } else { "nu" };
                write!(
                    f,
                    "{kw}({}; {}; {})({})",
                    abs.pred_var,
                    join(&abs.params),
                    abs.body,
                    join(args)
                )
            }
            PredVar(p, args) | Atom(p, args) => write!(f, "{p}({})", join(args)),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: &str) -> Term {
        Term::constant(n)
    }
    fn v(n: &str) -> Term {
        Term::var(n)
    }

    fn adj() -> Arc<Abstraction> {
        let pair = |u: &str, w: &str| {
            Formula::and_pos(Formula::eq(v("x"), c(u)), Formula::eq(v("y"), c(w)))
        };
        Arc::new(
            Abstraction::new(
                "A".into(),
                vec!["x".into(), "y".into()],
                Formula::disjunction([pair("a", "b"), pair("b", "c"), pair("c", "b")]),
            )
            .unwrap(),
        )
    }

    #[test]
    fn unfold_adjacency() {
        let f = Mu(adj(), vec![c("a"), c("c")]);
        let pair = |u: &str, w: &str, x: &str, y: &str| {
            Formula::and_pos(Formula::eq(c(u), c(w)), Formula::eq(c(x), c(y)))
        };
        let expected = Formula::disjunction([
            pair("a", "a", "c", "b"),
            pair("a", "b", "c", "c"),
            pair("a", "c", "c", "b"),
        ]);
        assert_eq!(unfold(&f).unwrap(), expected);
    }

    #[test]
    fn unfold_nonrecursive_body() {
        let abs = Arc::new(
            Abstraction::new("A".into(), vec!["x".into()], Formula::eq(v("x"), v("x"))).unwrap(),
        );
        let f = Mu(abs, vec![v("z")]);
        assert_eq!(unfold(&f).unwrap(), Formula::eq(v("z"), v("z")));
    }

    #[test]
    fn unfold_arity_mismatch() {
        let f = Mu(adj(), vec![c("a")]);
        assert!(matches!(unfold(&f), Err(LogicError::Arity { .. })));
    }

    #[test]
    fn duals_of_units_and_equations() {
        assert_eq!(TrueNeg.dual().unwrap(), FalsePos);
        assert_eq!(Formula::eq(c("a"), c("b")).dual().unwrap(), Formula::neq(c("a"), c("b")));
        assert_eq!(TruePos.dual().unwrap(), FalseNeg);
    }

    #[test]
    fn dual_is_involutive_on_fixed_points() {
        let f = Mu(adj(), vec![c("a"), c("c")]);
        assert_eq!(f.dual().unwrap().dual().unwrap(), f);
    }

    #[test]
    fn dual_rejects_implication_and_free_pred_vars() {
        assert_eq!(Formula::imp(TrueNeg, TrueNeg).dual(), Err(LogicError::ImplicationInDual));
        assert!(matches!(PredVar("P".into(), vec![]).dual(), Err(LogicError::FreePredVar(_))));
    }

    #[test]
    fn monotonicity() {
        let neg = Abstraction {
            pred_var: "A".into(),
            params: vec!["x".into()],
            body: Formula::imp(PredVar("A".into(), vec![v("x")]), FalsePos),
        };
        assert!(!check_monotonic(&neg));
        let even = Abstraction {
            pred_var: "A".into(),
            params: vec!["x".into()],
            body: Formula::imp(
                Formula::imp(PredVar("A".into(), vec![v("x")]), FalsePos),
                FalsePos,
            ),
        };
        assert!(check_monotonic(&even));
        assert!(check_monotonic(&adj()));
    }

    #[test]
    fn substitution_avoids_capture() {
        // (exists y, x = y)[x := y]
        let f = Formula::ex("y", Formula::eq(v("x"), v("y")));
        let g = f.subst(&Substitution::singleton("x".into(), v("y")));
        match &g {
            Ex(z, body) => {
                assert_ne!(z.as_str(), "y");
                assert_eq!(**body, Formula::eq(v("y"), Term::Var(z.clone())));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn bound_variables_are_not_substituted() {
        let f = Formula::all("x", Formula::eq(v("x"), c("a")));
        assert_eq!(f.subst(&Substitution::singleton("x".into(), c("b"))), f);
    }

    #[test]
    fn alpha_equivalence() {
        let f = Formula::all("x", Formula::eq(v("x"), c("a")));
        let g = Formula::all("y", Formula::eq(v("y"), c("a")));
        assert!(f.alpha_eq(&g));
        assert!(!f.alpha_eq(&Formula::all("y", Formula::eq(v("x"), c("a")))));
    }

    #[test]
    fn open_abstraction_rejected() {
        let r = Abstraction::new("A".into(), vec!["x".into()], Formula::eq(v("x"), v("q")));
        assert!(matches!(r, Err(LogicError::OpenAbstraction { .. })));
    }
}
