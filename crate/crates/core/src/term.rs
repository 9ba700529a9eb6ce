//! Ranked signatures, first-order terms over eigenvariables, substitutions
//! and most-general unification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Interned identifier used for constructors, variables and predicates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part of the name before any generated `__n` suffix.
    pub fn base(&self) -> &str {
        match self.0.find("__") {
            Some(i) if i > 0 => &self.0[..i],
            _ => &self.0,
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("constructor `{0}` declared twice")]
    Duplicate(Symbol),
    #[error("signature has no constructor of arity 0, so it has no closed terms")]
    NoConstants,
    #[error("unknown constructor `{0}`")]
    Unknown(Symbol),
    #[error("constructor `{name}` expects {expected} arguments, found {found}")]
    Arity {
        name: Symbol,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` is not in scope")]
    UnboundVariable(Symbol),
}

/// A ranked signature: constructor names with their arities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    entries: BTreeMap<Symbol, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<'a>(
        entries: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Self, SignatureError> {
        let mut sig = Signature::new();
        for (name, arity) in entries {
            sig.declare(Symbol::new(name), arity)?;
        }
        sig.validate()?;
        Ok(sig)
    }

    pub fn declare(&mut self, name: Symbol, arity: usize) -> Result<(), SignatureError> {
        if self.entries.contains_key(&name) {
            return Err(SignatureError::Duplicate(name));
        }
        self.entries.insert(name, arity);
        Ok(())
    }

    /// Checks that closed terms exist.
    pub fn validate(&self) -> Result<(), SignatureError> {
        if self.entries.values().any(|&a| a == 0) {
            Ok(())
        } else {
            Err(SignatureError::NoConstants)
        }
    }

    pub fn arity(&self, name: &Symbol) -> Option<usize> {
        self.entries.get(name).copied()
    }

    pub fn contains(&self, name: &Symbol) -> bool {
        self.entries.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, usize)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn constants(&self) -> Vec<Symbol> {
        self.entries
            .iter()
            .filter(|(_, &a)| a == 0)
            .map(|(k, _)| k.clone())
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether `z/0` and `s/1` are both declared, enabling numeral sugar.
    pub fn has_numerals(&self) -> bool {
        self.arity(&Symbol::new("z")) == Some(0) && self.arity(&Symbol::new("s")) == Some(1)
    }

    /// Checks arities and that every variable is drawn from `vars`.
    pub fn check_term(&self, t: &Term, vars: &BTreeSet<Symbol>) -> Result<(), SignatureError> {
        match t {
            Term::Var(v) => {
                if vars.contains(v) {
                    Ok(())
                } else {
                    Err(SignatureError::UnboundVariable(v.clone()))
                }
            }
            Term::App(c, args) => {
                let expected = self
                    .arity(c)
                    .ok_or_else(|| SignatureError::Unknown(c.clone()))?;
                if expected != args.len() {
                    return Err(SignatureError::Arity {
                        name: c.clone(),
                        expected,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a, vars))
            }
        }
    }

    /// All terms over the signature and `vars` of depth at most `depth`
    /// (constants and variables have depth 1), ordered by depth.
    pub fn terms_up_to(&self, vars: &BTreeSet<Symbol>, depth: usize) -> Vec<Term> {
        let mut by_depth: Vec<Vec<Term>> = Vec::new();
        let mut all: Vec<Term> = Vec::new();
        for d in 1..=depth {
            let mut layer = Vec::new();
            if d == 1 {
                layer.extend(vars.iter().map(|v| Term::Var(v.clone())));
                layer.extend(self.constants().into_iter().map(|c| Term::App(c, Vec::new())));
            } else {
                for (c, arity) in self.iter().filter(|(_, a)| *a > 0) {
                    // at least one argument must come from the previous layer
                    let prev = &by_depth[d - 2];
                    let pool = &all;
                    for combo in product(pool, arity) {
                        if combo.iter().any(|t| prev.contains(t)) {
                            layer.push(Term::App(c.clone(), combo));
                        }
                    }
                }
            }
            all.extend(layer.iter().cloned());
            by_depth.push(layer);
        }
        all
    }
}

fn product(pool: &[Term], n: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * pool.len());
        for prefix in &out {
            for t in pool {
                let mut v = prefix.clone();
                v.push(t.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// A first-order term. Variables are eigenvariables bound by a sequent
/// context or by an enclosing quantifier.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Symbol),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Symbol::new(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::App(Symbol::new(name), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(Symbol::new(name), args)
    }

    /// `s(s(...z))` with `n` applications of `s`.
    pub fn numeral(n: usize) -> Term {
        let mut t = Term::constant("z");
        for _ in 0..n {
            t = Term::App(Symbol::new("s"), vec![t]);
        }
        t
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn occurs(&self, v: &Symbol) -> bool {
        match self {
            Term::Var(x) => x == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    pub fn free_vars_into(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.free_vars_into(out)),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut out);
        out
    }

    /// Every subterm, including the term itself, in pre-order.
    pub fn subterms_into(&self, out: &mut Vec<Term>) {
        out.push(self.clone());
        if let Term::App(_, args) = self {
            args.iter().for_each(|a| a.subterms_into(out));
        }
    }

    pub fn rename_var(&self, from: &Symbol, to: &Symbol) -> Term {
        match self {
            Term::Var(x) if x == from => Term::Var(to.clone()),
            Term::Var(_) => self.clone(),
            Term::App(c, args) => {
                Term::App(c.clone(), args.iter().map(|a| a.rename_var(from, to)).collect())
            }
        }
    }

    /// Renames every variable injectively to a name outside `avoid`.
    pub fn rename_apart(&self, avoid: &BTreeSet<Symbol>) -> Term {
        let mut used = avoid.clone();
        let mut theta = Substitution::new();
        for v in self.free_vars() {
            let fresh = fresh_name(&v, &used);
            used.insert(fresh.clone());
            theta.bindings.insert(v, Term::Var(fresh));
        }
        theta.apply(self)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::App(c, args) if args.is_empty() => write!(f, "{c}"),
            Term::App(c, args) => {
                write!(f, "{c}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Smallest `base__n` not in `used`.
pub fn fresh_name(v: &Symbol, used: &BTreeSet<Symbol>) -> Symbol {
    let base = v.base();
    (0..)
        .map(|i| Symbol::new(&format!("{base}__{i}")))
        .find(|s| !used.contains(s))
        .expect("unbounded supply of names")
}

/// Caller-owned supply of fresh eigenvariable names.
#[derive(Debug, Clone, Default)]
pub struct Fresh {
    next: usize,
}

impl Fresh {
    pub fn new() -> Self {
        Self::default()
    }

    /// A name derived from `hint` that is outside `avoid`.
    pub fn name(&mut self, hint: &Symbol, avoid: &BTreeSet<Symbol>) -> Symbol {
        loop {
            let s = Symbol::new(&format!("{}__{}", hint.base(), self.next));
            self.next += 1;
            if !avoid.contains(&s) {
                return s;
            }
        }
    }
}

/// A finite map from variables to terms, kept fully resolved so that
/// applying it twice is the same as applying it once.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Substitution {
    bindings: BTreeMap<Symbol, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: Symbol, t: Term) -> Self {
        let mut s = Self::new();
        s.bindings.insert(v, t);
        s
    }

    /// Builds a substitution from explicit bindings, without resolving them.
    pub fn from_bindings(bindings: impl IntoIterator<Item = (Symbol, Term)>) -> Self {
        Substitution {
            bindings: bindings.into_iter().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn get(&self, v: &Symbol) -> Option<&Term> {
        self.bindings.get(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Term)> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Symbol> {
        self.bindings.keys()
    }

    pub fn range_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for t in self.bindings.values() {
            t.free_vars_into(&mut out);
        }
        out
    }

    pub fn without(&self, v: &Symbol) -> Substitution {
        let mut s = self.clone();
        s.bindings.remove(v);
        s
    }

    /// Simultaneous replacement.
    pub fn apply(&self, t: &Term) -> Term {
        if self.bindings.is_empty() {
            return t.clone();
        }
        match t {
            Term::Var(x) => self.bindings.get(x).cloned().unwrap_or_else(|| t.clone()),
            Term::App(c, args) => Term::App(c.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        let range = self.range_vars();
        self.bindings.keys().all(|k| !range.contains(k))
    }

    /// `self` after `first`: (self ∘ first)(t) = self(first(t)).
    pub fn compose(&self, first: &Substitution) -> Substitution {
        let mut bindings: BTreeMap<Symbol, Term> = first
            .bindings
            .iter()
            .map(|(k, v)| (k.clone(), self.apply(v)))
            .collect();
        for (k, v) in &self.bindings {
            bindings.entry(k.clone()).or_insert_with(|| v.clone());
        }
        bindings.retain(|k, v| !matches!(v, Term::Var(x) if x == k));
        Substitution { bindings }
    }

    /// θ𝒳: drop the domain, add the variables of the range.
    pub fn apply_to_context(&self, vars: &BTreeSet<Symbol>) -> BTreeSet<Symbol> {
        let mut out: BTreeSet<Symbol> = vars
            .iter()
            .filter(|v| !self.bindings.contains_key(*v))
            .cloned()
            .collect();
        for v in vars {
            if let Some(t) = self.bindings.get(v) {
                t.free_vars_into(&mut out);
            }
        }
        out
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} := {v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Most general unifier of `t` and `s`, or `None` when they are not
/// unifiable. When two variables meet, the lexicographically larger one is
/// bound to the smaller, so the result is canonical.
pub fn unify(t: &Term, s: &Term) -> Option<Substitution> {
    unify_all(&[(t.clone(), s.clone())])
}

/// Simultaneous unifier of a list of equations.
pub fn unify_all(pairs: &[(Term, Term)]) -> Option<Substitution> {
    let mut theta = Substitution::new();
    let mut work: Vec<(Term, Term)> = pairs.iter().rev().cloned().collect();
    while let Some((a, b)) = work.pop() {
        let a = theta.apply(&a);
        let b = theta.apply(&b);
        match (&a, &b) {
            _ if a == b => {}
            (Term::Var(x), Term::Var(y)) => {
                let (big, small) = if x > y { (x, y) } else { (y, x) };
                bind(&mut theta, big.clone(), Term::Var(small.clone()));
            }
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if other.occurs(x) {
                    return None;
                }
                bind(&mut theta, x.clone(), other.clone());
            }
            (Term::App(f, fa), Term::App(g, ga)) => {
                if f != g || fa.len() != ga.len() {
                    return None;
                }
                for (l, r) in fa.iter().zip(ga.iter()).rev() {
                    work.push((l.clone(), r.clone()));
                }
            }
        }
    }
    Some(theta)
}

fn bind(theta: &mut Substitution, v: Symbol, t: Term) {
    let single = Substitution::singleton(v.clone(), t.clone());
    for value in theta.bindings.values_mut() {
        *value = single.apply(value);
    }
    theta.bindings.insert(v, t);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }
    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn single_binding() {
        let theta = Substitution::singleton("x".into(), c("z"));
        let t = Term::app("s", vec![v("x")]);
        assert_eq!(theta.apply(&t), Term::app("s", vec![c("z")]));
    }

    #[test]
    fn empty_substitution_is_identity() {
        let t = Term::app("g", vec![c("a"), c("b")]);
        assert_eq!(Substitution::new().apply(&t), t);
    }

    #[test]
    fn structural_decomposition() {
        let t = Term::app("g", vec![v("X"), Term::app("f", vec![c("a")])]);
        let s = Term::app("g", vec![c("b"), v("Y")]);
        let theta = unify(&t, &s).unwrap();
        assert_eq!(theta.get(&"X".into()), Some(&c("b")));
        assert_eq!(theta.get(&"Y".into()), Some(&Term::app("f", vec![c("a")])));
        assert_eq!(theta.len(), 2);
    }

    #[test]
    fn occurs_check() {
        assert_eq!(unify(&v("X"), &Term::app("f", vec![v("X")])), None);
    }

    #[test]
    fn variable_tie_break_binds_larger_name() {
        let theta = unify(&Term::app("s", vec![v("X")]), &Term::app("s", vec![v("Y")])).unwrap();
        assert_eq!(theta.get(&"Y".into()), Some(&v("X")));
        assert_eq!(theta.len(), 1);
        let back = unify(&Term::app("s", vec![v("Y")]), &Term::app("s", vec![v("X")])).unwrap();
        assert_eq!(theta, back);
    }

    #[test]
    fn chained_bindings_resolve() {
        let t = Term::app("g", vec![v("x"), v("y")]);
        let s = Term::app("g", vec![Term::app("s", vec![v("y")]), c("a")]);
        let theta = unify(&t, &s).unwrap();
        assert!(theta.is_idempotent());
        assert_eq!(theta.get(&"x".into()), Some(&Term::app("s", vec![c("a")])));
    }

    #[test]
    fn rename_apart_avoids_names() {
        let avoid: BTreeSet<Symbol> = ["x".into()].into_iter().collect();
        let t = Term::app("f", vec![v("x")]);
        let r = t.rename_apart(&avoid);
        let fv = r.free_vars();
        assert_eq!(fv.len(), 1);
        assert!(fv.is_disjoint(&avoid));
        assert_eq!(c("a").rename_apart(&avoid), c("a"));
    }

    #[test]
    fn context_update_after_mgu() {
        let vars: BTreeSet<Symbol> = ["x".into(), "y".into()].into_iter().collect();
        let theta = Substitution::singleton("x".into(), Term::app("s", vec![v("w")]));
        let out = theta.apply_to_context(&vars);
        let expected: BTreeSet<Symbol> = ["w".into(), "y".into()].into_iter().collect();
        assert_eq!(out, expected);
    }

    #[test]
    fn term_enumeration_by_depth() {
        let sig = Signature::from_entries([("a", 0), ("f", 1)]).unwrap();
        let ts = sig.terms_up_to(&BTreeSet::new(), 3);
        assert_eq!(ts, vec![c("a"), Term::app("f", vec![c("a")]), Term::app("f", vec![Term::app("f", vec![c("a")])])]);
    }

    #[test]
    fn signature_needs_a_constant() {
        assert_eq!(
            Signature::from_entries([("f", 1), ("g", 2)]),
            Err(SignatureError::NoConstants)
        );
    }
}
