//! Problem files: signatures, definitions (direct or as Horn clauses) and
//! named goals.
//!
//! ```text
//! signature a/0 b/0 c/0.
//! step a b.  step b c.  step c b.
//! path X Z :- step X Z.
//! path X Z :- step X Y, path Y Z.
//! define adj X Y := step X Y \/ step Y X.
//! goal reach: |- path a c.
//! goal stuck: path c a |- .
//! ```

use std::collections::{BTreeMap, BTreeSet};

use sha2::{Digest, Sha256};

use crate::defs::{desugar, Definition, Definitions};
use crate::formula::{Abstraction, Fixpoint, Formula};
use crate::kernel::Sequent;
use crate::syntax::{is_capitalized, lex, FreeVars, ParseError, Parser, Tok, Token, KEYWORDS};
use crate::term::{fresh_name, Signature, Substitution, Symbol, Term};

#[derive(Debug, Clone)]
pub struct Goal {
    pub name: String,
    /// The goal as written, with named predicates.
    pub written: Sequent,
    /// The goal with every named predicate replaced by its fixed point.
    pub sequent: Sequent,
}

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub signature: Signature,
    pub definitions: Definitions,
    pub goals: Vec<Goal>,
}

impl ProblemFile {
    pub fn goal(&self, name: &str) -> Option<&Goal> {
        self.goals.iter().find(|g| g.name == name)
    }
}

/// Lowercase hex SHA-256 of the file contents.
pub fn problem_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

struct Clause {
    head: Vec<Term>,
    body: Vec<Formula>,
    /// Clause variables in order of first occurrence.
    vars: Vec<Symbol>,
}

enum Group {
    Define(Fixpoint, Abstraction),
    Horn(Vec<Clause>),
}

fn statements(toks: &[Token]) -> Vec<&[Token]> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut depth = 0i32;
    for (i, t) in toks.iter().enumerate() {
        match t.tok {
            Tok::LParen | Tok::LBracket => depth += 1,
            Tok::RParen | Tok::RBracket => depth -= 1,
            Tok::Dot if depth <= 0 => {
                out.push(&toks[start..=i]);
                start = i + 1;
                depth = 0;
            }
            Tok::Eof => {
                if start < i {
                    out.push(&toks[start..=i]);
                }
            }
            _ => {}
        }
    }
    out
}

fn keyword(stmt: &[Token]) -> Option<&str> {
    match &stmt.first()?.tok {
        Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => Some(s.as_str()),
        _ => None,
    }
}

fn err_at(t: &Token, message: impl Into<String>) -> ParseError {
    ParseError {
        line: t.line,
        col: t.col,
        offset: t.offset,
        message: message.into(),
    }
}

/// Copies a statement's tokens, turning the final `.` into `Eof`.
fn owned(stmt: &[Token]) -> Vec<Token> {
    let mut v: Vec<Token> = stmt.to_vec();
    if let Some(last) = v.last_mut() {
        if last.tok == Tok::Dot {
            last.tok = Tok::Eof;
        }
    }
    v
}

fn missing_dot(stmt: &[Token]) -> Option<ParseError> {
    let last = stmt.last()?;
    if last.tok == Tok::Eof {
        let at = if stmt.len() >= 2 { &stmt[stmt.len() - 2] } else { last };
        return Some(err_at(at, "missing `.` at end of statement"));
    }
    None
}

pub fn parse_problem_file(src: &str) -> Result<ProblemFile, ParseError> {
    let toks = lex(src)?;
    let stmts = statements(&toks);
    for s in &stmts {
        if let Some(e) = missing_dot(s) {
            return Err(e);
        }
    }
    let stmts: Vec<Vec<Token>> = stmts.iter().map(|s| owned(s)).collect();
    let empty = BTreeMap::new();

    // Pass 1: the signature.
    let mut sig = Signature::new();
    for stmt in stmts.iter().filter(|s| keyword(s) == Some("signature")) {
        let mut p = Parser::new(stmt, &sig, &empty);
        p.next();
        let mut decls = Vec::new();
        while !p.at_end() {
            let at = p.position();
            let name = p.name()?;
            if name.as_str().contains("__") {
                return Err(err_at(&stmt[at], format!("`{name}`: names may not contain `__`")));
            }
            p.expect(Tok::Slash)?;
            let arity = p.nat()?;
            decls.push((at, name, arity));
        }
        for (at, name, arity) in decls {
            sig.declare(name, arity).map_err(|e| err_at(&stmt[at], e.to_string()))?;
        }
    }
    if let Some(first) = stmts.first() {
        sig.validate().map_err(|e| err_at(&first[0], e.to_string()))?;
    }

    // Pass 2: predicate names and arities.
    let mut predicates: BTreeMap<Symbol, usize> = BTreeMap::new();
    let mut kinds: BTreeMap<Symbol, &'static str> = BTreeMap::new();
    for stmt in &stmts {
        let (name, arity, kind) = match keyword(stmt) {
            Some("signature") | Some("goal") => continue,
            Some(kw @ ("define" | "codefine")) => {
                let mut p = Parser::new(stmt, &sig, &empty);
                p.next();
                let name = p.ident()?;
                let mut n = 0;
                while *p.peek() != Tok::Define {
                    p.ident()?;
                    n += 1;
                }
                (name, n, if kw == "define" { "define" } else { "codefine" })
            }
            Some(other) => return Err(err_at(&stmt[0], format!("unexpected keyword `{other}`"))),
            None => {
                let mut p = Parser::new(stmt, &sig, &empty);
                p.free_policy = FreeVars::Collect;
                let name = p.ident()?;
                let mut n = 0;
                while !matches!(p.peek(), Tok::Horn | Tok::Eof) {
                    if p.eat(&Tok::LParen) {
                        loop {
                            p.term()?;
                            n += 1;
                            if !p.eat(&Tok::Comma) {
                                break;
                            }
                        }
                        p.expect(Tok::RParen)?;
                    } else {
                        p.term()?;
                        n += 1;
                    }
                }
                (name, n, "clause")
            }
        };
        let at = &stmt[if kind == "clause" { 0 } else { 1 }];
        if sig.contains(&name) {
            return Err(err_at(at, format!("predicate `{name}` clashes with a constructor")));
        }
        if name.as_str().contains("__") {
            return Err(err_at(at, format!("`{name}`: names may not contain `__`")));
        }
        match (predicates.get(&name), kinds.get(&name)) {
            (Some(&a), Some(&k)) => {
                if k != "clause" || kind != "clause" {
                    return Err(err_at(at, format!("predicate `{name}` defined twice")));
                }
                if a != arity {
                    return Err(err_at(
                        at,
                        format!("predicate `{name}` has arity {a} but this clause has {arity} arguments"),
                    ));
                }
            }
            _ => {
                predicates.insert(name.clone(), arity);
                kinds.insert(name, kind);
            }
        }
    }

    // Pass 3: bodies and goals.
    let mut groups: Vec<(Symbol, Group, usize)> = Vec::new();
    let mut goals: Vec<(String, Sequent, usize)> = Vec::new();
    for (si, stmt) in stmts.iter().enumerate() {
        match keyword(stmt) {
            Some("signature") => {}
            Some(kw @ ("define" | "codefine")) => {
                let mut p = Parser::new(stmt, &sig, &predicates);
                p.next();
                let name = p.ident()?;
                let mut params = Vec::new();
                while *p.peek() != Tok::Define {
                    let x = p.binder()?;
                    if params.contains(&x) {
                        return Err(p.error_here(format!("parameter `{x}` repeated")));
                    }
                    params.push(x);
                }
                p.expect(Tok::Define)?;
                p.push_scope(params.iter().cloned());
                p.push_predicate(name.clone(), params.len());
                let body = p.formula()?;
                if !p.at_end() {
                    return Err(p.error_here(format!("unexpected {}", p.peek())));
                }
                let kind = if kw == "define" { Fixpoint::Mu } else { Fixpoint::Nu };
                let abs = Abstraction {
                    pred_var: name.clone(),
                    params,
                    body,
                };
                groups.push((name, Group::Define(kind, abs), si));
            }
            Some(_) => {
                let mut p = Parser::new(stmt, &sig, &predicates);
                p.next();
                let name = match p.next() {
                    Tok::Ident(s) | Tok::Num(s) => s,
                    other => return Err(err_at(&stmt[1], format!("expected a goal name, found {other}"))),
                };
                p.expect(Tok::Colon)?;
                p.free_policy = FreeVars::Collect;
                let left = p.formula_list(&Tok::Turnstile, &Tok::Turnstile)?;
                p.expect(Tok::Turnstile)?;
                let right = p.formula_list(&Tok::Eof, &Tok::Eof)?;
                if !p.at_end() {
                    return Err(p.error_here(format!("unexpected {}", p.peek())));
                }
                if goals.iter().any(|(n, _, _)| *n == name) {
                    return Err(err_at(&stmt[1], format!("goal `{name}` declared twice")));
                }
                let vars: BTreeSet<Symbol> = p.free.iter().cloned().collect();
                goals.push((name, Sequent::new(vars, left, right), si));
            }
            None => {
                let mut p = Parser::new(stmt, &sig, &predicates);
                p.free_policy = FreeVars::Collect;
                let name = p.ident()?;
                let arity = predicates[&name];
                p.push_predicate(name.clone(), arity);
                let head = p.args(arity)?;
                let mut body = Vec::new();
                if p.eat(&Tok::Horn) {
                    body = p.formula_list(&Tok::Eof, &Tok::Eof)?;
                }
                if !p.at_end() {
                    return Err(p.error_here(format!("unexpected {}", p.peek())));
                }
                let clause = Clause {
                    head,
                    body,
                    vars: p.free.clone(),
                };
                match groups.iter_mut().find(|(n, _, _)| *n == name) {
                    Some((_, Group::Horn(cs), _)) => cs.push(clause),
                    _ => groups.push((name, Group::Horn(vec![clause]), si)),
                }
            }
        }
    }

    let mut defs = Definitions::new();
    for (name, group, si) in groups {
        let at = &stmts[si][0];
        let def = match group {
            Group::Define(kind, abstraction) => Definition { kind, abstraction },
            Group::Horn(clauses) => Definition {
                kind: Fixpoint::Mu,
                abstraction: compile_clauses(&sig, &name, &clauses),
            },
        };
        defs.insert(name, def).map_err(|e| err_at(at, e.to_string()))?;
    }
    defs.finalize().map_err(|e| {
        let at = stmts.first().map(|s| &s[0]).expect("definitions come from statements");
        err_at(at, e.to_string())
    })?;

    let mut out = Vec::new();
    for (name, written, si) in goals {
        let at = &stmts[si][0];
        let conv = |fs: &[Formula]| -> Result<Vec<Formula>, ParseError> {
            fs.iter()
                .map(|f| desugar(f, &defs).map_err(|e| err_at(at, e.to_string())))
                .collect()
        };
        let sequent = Sequent::new(written.vars.clone(), conv(&written.left)?, conv(&written.right)?);
        out.push(Goal {
            name,
            written,
            sequent,
        });
    }
    Ok(ProblemFile {
        signature: sig,
        definitions: defs,
        goals: out,
    })
}

/// One µ body from a group of Horn clauses: the disjunction of the
/// clause bodies, each with its head unified against the parameters and
/// its remaining variables existentially quantified.
fn compile_clauses(sig: &Signature, name: &Symbol, clauses: &[Clause]) -> Abstraction {
    let arity = clauses[0].head.len();
    let first = &clauses[0].head;
    let distinct_vars = first.iter().all(|t| matches!(t, Term::Var(_)))
        && first.iter().collect::<BTreeSet<_>>().len() == arity;
    let params: Vec<Symbol> = if distinct_vars {
        first
            .iter()
            .map(|t| match t {
                Term::Var(v) => v.clone(),
                Term::App(..) => unreachable!(),
            })
            .collect()
    } else {
        let mut used: BTreeSet<Symbol> = sig.iter().map(|(c, _)| c.clone()).collect();
        (1..=arity)
            .map(|i| {
                let base = Symbol::new(&format!("X{i}"));
                let x = if used.contains(&base) { fresh_name(&base, &used) } else { base };
                used.insert(x.clone());
                x
            })
            .collect()
    };
    let disjuncts: Vec<Formula> = clauses.iter().map(|c| {
        let mut mapping: BTreeMap<Symbol, Term> = BTreeMap::new();
        let mut eqs: Vec<(usize, Term)> = Vec::new();
        for (i, t) in c.head.iter().enumerate() {
            match t {
                Term::Var(v) if !mapping.contains_key(v) => {
                    mapping.insert(v.clone(), Term::Var(params[i].clone()));
                }
                _ => eqs.push((i, t.clone())),
            }
        }
        let mut avoid: BTreeSet<Symbol> = params.iter().cloned().collect();
        avoid.extend(sig.iter().map(|(c, _)| c.clone()));
        let mut existentials = Vec::new();
        for v in &c.vars {
            if mapping.contains_key(v) {
                continue;
            }
            let x = if avoid.contains(v) || !is_capitalized(v.as_str()) {
                fresh_name(v, &avoid)
            } else {
                v.clone()
            };
            avoid.insert(x.clone());
            mapping.insert(v.clone(), Term::Var(x.clone()));
            existentials.push(x);
        }
        let theta = Substitution::from_bindings(mapping);
        let mut conjuncts: Vec<Formula> = eqs
            .into_iter()
            .map(|(i, t)| Formula::eq(Term::Var(params[i].clone()), theta.apply(&t)))
            .collect();
        conjuncts.extend(c.body.iter().map(|f| f.subst(&theta)));
        let mut f = Formula::conjunction(conjuncts);
        for x in existentials.into_iter().rev() {
            f = Formula::Ex(x, Box::new(f));
        }
        f
    }).collect();
    Abstraction {
        pred_var: name.clone(),
        params,
        body: Formula::disjunction(disjuncts),
    }
}
