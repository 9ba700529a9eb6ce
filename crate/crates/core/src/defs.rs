//! Named fixed-point definitions and their compilation into inline µ/ν
//! expressions.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::formula::{check_monotonic, Abstraction, Fixpoint, Formula, LogicError};
use crate::term::{Symbol, Term};

/// One named definition. Its body refers to itself through the
/// abstraction's predicate variable and to other definitions through
/// `Formula::Atom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub kind: Fixpoint,
    pub abstraction: Abstraction,
}

#[derive(Debug, Clone, Default)]
pub struct Definitions {
    entries: BTreeMap<Symbol, Definition>,
    resolved: BTreeMap<Symbol, (Fixpoint, Arc<Abstraction>)>,
}

impl Definitions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: Symbol, def: Definition) -> Result<(), LogicError> {
        if self.entries.contains_key(&name) {
            return Err(LogicError::DuplicateDefinition(name));
        }
        self.entries.insert(name, def);
        self.resolved.clear();
        Ok(())
    }

    pub fn get(&self, name: &Symbol) -> Option<&Definition> {
        self.entries.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &Symbol> {
        self.entries.keys()
    }

    pub fn arity(&self, name: &Symbol) -> Option<usize> {
        self.entries.get(name).map(|d| d.abstraction.arity())
    }

    /// Resolves every definition to a closed fixed point, rejecting mutual
    /// recursion and non-monotonic bodies.
    pub fn finalize(&mut self) -> Result<(), LogicError> {
        self.resolved.clear();
        let names: Vec<Symbol> = self.entries.keys().cloned().collect();
        for name in names {
            let mut stack = Vec::new();
            self.resolve(&name, &mut stack)?;
        }
        Ok(())
    }

    fn resolve(
        &mut self,
        name: &Symbol,
        stack: &mut Vec<Symbol>,
    ) -> Result<(Fixpoint, Arc<Abstraction>), LogicError> {
        if let Some(r) = self.resolved.get(name) {
            return Ok(r.clone());
        }
        if let Some(pos) = stack.iter().position(|n| n == name) {
            return Err(LogicError::MutualRecursion(stack[pos..].to_vec()));
        }
        let def = self
            .entries
            .get(name)
            .cloned()
            .ok_or_else(|| LogicError::UnboundPredicate(name.clone()))?;
        stack.push(name.clone());
        let mut deps = Vec::new();
        collect_atoms(&def.abstraction.body, &mut deps);
        for dep in &deps {
            self.resolve(dep, stack)?;
        }
        stack.pop();
        let body = self.inline(&def.abstraction.body)?;
        let abs = Abstraction::new(
            def.abstraction.pred_var.clone(),
            def.abstraction.params.clone(),
            body,
        )?;
        if !check_monotonic(&abs) {
            return Err(LogicError::NotMonotonic(name.clone()));
        }
        let entry = (def.kind, Arc::new(abs));
        self.resolved.insert(name.clone(), entry.clone());
        Ok(entry)
    }

    /// The compiled fixed point for `name`, available after `finalize`.
    pub fn resolved(&self, name: &Symbol) -> Option<(Fixpoint, Arc<Abstraction>)> {
        self.resolved.get(name).cloned()
    }

    pub fn instance(&self, name: &Symbol, args: Vec<Term>) -> Result<Formula, LogicError> {
        let (kind, abs) = self
            .resolved(name)
            .ok_or_else(|| LogicError::UnboundPredicate(name.clone()))?;
        if abs.arity() != args.len() {
            return Err(LogicError::Arity {
                name: name.clone(),
                expected: abs.arity(),
                found: args.len(),
            });
        }
        Ok(match kind {
            Fixpoint::Mu => Formula::Mu(abs, args),
            Fixpoint::Nu => Formula::Nu(abs, args),
        })
    }

    fn inline(&self, f: &Formula) -> Result<Formula, LogicError> {
        use Formula::*;
        let d = |g: &Formula| self.inline(g);
        Ok(match f {
            AndNeg(a, b) => Formula::and_neg(d(a)?, d(b)?),
            OrNeg(a, b) => Formula::or_neg(d(a)?, d(b)?),
            AndPos(a, b) => Formula::and_pos(d(a)?, d(b)?),
            OrPos(a, b) => Formula::or_pos(d(a)?, d(b)?),
            Imp(a, b) => Formula::imp(d(a)?, d(b)?),
            All(x, b) => All(x.clone(), Box::new(d(b)?)),
            Ex(x, b) => Ex(x.clone(), Box::new(d(b)?)),
            Atom(p, args) => self.instance(p, args.clone())?,
            _ => f.clone(),
        })
    }
}

fn collect_atoms(f: &Formula, out: &mut Vec<Symbol>) {
    use Formula::*;
    match f {
        AndNeg(a, b) | OrNeg(a, b) | AndPos(a, b) | OrPos(a, b) | Imp(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        All(_, b) | Ex(_, b) => collect_atoms(b, out),
        Atom(p, _) => {
            if !out.contains(p) {
                out.push(p.clone())
            }
        }
        _ => {}
    }
}

/// Replaces every named predicate by its compiled fixed point.
pub fn desugar(f: &Formula, defs: &Definitions) -> Result<Formula, LogicError> {
    if !f.has_atoms() {
        return Ok(f.clone());
    }
    defs.inline(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    fn def(kind: Fixpoint, p: &str, params: &[&str], body: Formula) -> Definition {
        Definition {
            kind,
            abstraction: Abstraction {
                pred_var: p.into(),
                params: params.iter().map(|s| Symbol::new(s)).collect(),
                body,
            },
        }
    }

    #[test]
    fn unbound_name_reported() {
        let defs = Definitions::new();
        let f = Formula::Atom("nope".into(), vec![]);
        assert_eq!(desugar(&f, &defs), Err(LogicError::UnboundPredicate("nope".into())));
    }

    #[test]
    fn units_pass_through() {
        assert_eq!(desugar(&Formula::TrueNeg, &Definitions::new()).unwrap(), Formula::TrueNeg);
    }

    #[test]
    fn mutual_recursion_rejected() {
        let mut defs = Definitions::new();
        defs.insert("p".into(), def(Fixpoint::Mu, "p", &["X"], Formula::Atom("q".into(), vec![v("X")])))
            .unwrap();
        defs.insert("q".into(), def(Fixpoint::Mu, "q", &["X"], Formula::Atom("p".into(), vec![v("X")])))
            .unwrap();
        assert!(matches!(defs.finalize(), Err(LogicError::MutualRecursion(_))));
    }

    #[test]
    fn non_monotonic_rejected() {
        let mut defs = Definitions::new();
        let body = Formula::imp(Formula::PredVar("p".into(), vec![v("X")]), Formula::FalsePos);
        defs.insert("p".into(), def(Fixpoint::Mu, "p", &["X"], body)).unwrap();
        assert_eq!(defs.finalize(), Err(LogicError::NotMonotonic("p".into())));
    }

    #[test]
    fn desugar_is_idempotent() {
        let mut defs = Definitions::new();
        defs.insert("p".into(), def(Fixpoint::Nu, "p", &["X"], Formula::PredVar("p".into(), vec![v("X")])))
            .unwrap();
        defs.finalize().unwrap();
        let f = Formula::Atom("p".into(), vec![Term::constant("a")]);
        let once = desugar(&f, &defs).unwrap();
        assert!(matches!(once, Formula::Nu(..)));
        assert_eq!(desugar(&once, &defs).unwrap(), once);
    }
}
