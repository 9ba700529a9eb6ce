//! Lexer and expression parser for the surface grammar shared by problem
//! files and certificates.
//!
//! Identifiers are resolved by scope: bound variables first, then
//! constructors, then (where the caller allows it) free capitalized
//! variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::formula::{Abstraction, Formula, Lambda};
use crate::kernel::Sequent;
use crate::term::{Signature, Symbol, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Dot,
    Define,
    Horn,
    Turnstile,
    Eq,
    Neq,
    Imp,
    AndNeg,
    AndPos,
    OrPos,
    OrNeg,
    Slash,
    Pipe,
    TrueNeg,
    TruePos,
    FalseNeg,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) | Tok::Num(s) => return write!(f, "`{s}`"),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Define => ":=",
            Tok::Horn => ":-",
            Tok::Turnstile => "|-",
            Tok::Eq => "=",
            Tok::Neq => "!=",
            Tok::Imp => "=>",
            Tok::AndNeg => "/\\-",
            Tok::AndPos => "/\\+",
            Tok::OrPos => "\\/",
            Tok::OrNeg => "\\/-",
            Tok::Slash => "/",
            Tok::Pipe => "|",
            Tok::TrueNeg => "true-",
            Tok::TruePos => "true+",
            Tok::FalseNeg => "false-",
            Tok::Eof => return f.write_str("end of input"),
        };
        write!(f, "`{s}`")
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    pub offset: usize,
}

pub const KEYWORDS: &[&str] = &[
    "all", "exists", "mu", "nu", "lambda", "signature", "define", "codefine", "goal", "false",
    "true",
];

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    let (mut line, mut col) = (1, 1);
    let err = |line, col, offset, message: String| ParseError {
        line,
        col,
        offset,
        message,
    };
    while i < bytes.len() {
        let (offset, c) = bytes[i];
        let peek = |k: usize| bytes.get(i + k).map(|p| p.1);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c == '%' {
            while i < bytes.len() && bytes[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let (tok, len) = if c.is_ascii_digit() {
            let mut j = i;
            while j < bytes.len() && bytes[j].1.is_ascii_digit() {
                j += 1;
            }
            if j < bytes.len() && is_ident_char(bytes[j].1) {
                return Err(err(line, col, offset, "identifiers may not start with a digit".into()));
            }
            let s: String = bytes[i..j].iter().map(|p| p.1).collect();
            (Tok::Num(s), j - i)
        } else if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < bytes.len() && is_ident_char(bytes[j].1) {
                j += 1;
            }
            let s: String = bytes[i..j].iter().map(|p| p.1).collect();
            let next = bytes.get(j).map(|p| p.1);
            match (s.as_str(), next) {
                ("true", Some('-')) => (Tok::TrueNeg, j - i + 1),
                ("true", Some('+')) => (Tok::TruePos, j - i + 1),
                ("false", Some('-')) => (Tok::FalseNeg, j - i + 1),
                ("true", _) => {
                    return Err(err(line, col, offset, "expected `true-` or `true+`".into()));
                }
                _ => (Tok::Ident(s), j - i),
            }
        } else {
            match (c, peek(1), peek(2)) {
                ('/', Some('\\'), Some('-')) => (Tok::AndNeg, 3),
                ('/', Some('\\'), Some('+')) => (Tok::AndPos, 3),
                ('\\', Some('/'), Some('-')) => (Tok::OrNeg, 3),
                ('\\', Some('/'), _) => (Tok::OrPos, 2),
                (':', Some('='), _) => (Tok::Define, 2),
                (':', Some('-'), _) => (Tok::Horn, 2),
                ('|', Some('-'), _) => (Tok::Turnstile, 2),
                ('!', Some('='), _) => (Tok::Neq, 2),
                ('=', Some('>'), _) => (Tok::Imp, 2),
                ('=', _, _) => (Tok::Eq, 1),
                ('(', _, _) => (Tok::LParen, 1),
                (')', _, _) => (Tok::RParen, 1),
                ('[', _, _) => (Tok::LBracket, 1),
                (']', _, _) => (Tok::RBracket, 1),
                (',', _, _) => (Tok::Comma, 1),
                (';', _, _) => (Tok::Semi, 1),
                (':', _, _) => (Tok::Colon, 1),
                ('.', _, _) => (Tok::Dot, 1),
                ('/', _, _) => (Tok::Slash, 1),
                ('|', _, _) => (Tok::Pipe, 1),
                _ => return Err(err(line, col, offset, format!("unexpected character `{c}`"))),
            }
        };
        out.push(Token {
            tok,
            line,
            col,
            offset,
        });
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
        offset: src.len(),
    });
    Ok(out)
}

/// What to do with an identifier that is neither bound nor a constructor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeVars {
    Reject,
    /// Capitalized identifiers become free variables, collected in order.
    Collect,
    /// Every such identifier is a variable. Used for certificate data,
    /// where the kernel checks variable scoping afterwards.
    Any,
}

pub fn is_capitalized(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_uppercase())
}

pub struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    pub sig: &'a Signature,
    /// Named predicates and their arities; parsed as `Formula::Atom`.
    pub predicates: &'a BTreeMap<Symbol, usize>,
    pred_scope: Vec<(Symbol, usize)>,
    scope: Vec<Symbol>,
    pub free_policy: FreeVars,
    pub free: Vec<Symbol>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Token], sig: &'a Signature, predicates: &'a BTreeMap<Symbol, usize>) -> Self {
        Parser {
            toks,
            pos: 0,
            sig,
            predicates,
            pred_scope: Vec::new(),
            scope: Vec::new(),
            free_policy: FreeVars::Reject,
            free: Vec::new(),
        }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos.min(self.toks.len() - 1)].tok
    }


    pub fn next(&mut self) -> Tok {
        let t = self.peek().clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos.min(self.toks.len() - 1)];
        ParseError {
            line: t.line,
            col: t.col,
            offset: t.offset,
            message: message.into(),
        }
    }

    pub fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {tok}, found {}", self.peek())))
        }
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn at_end(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn ident(&mut self) -> PResult<Symbol> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok(Symbol::new(&s))
            }
            other => Err(self.error_here(format!("expected an identifier, found {other}"))),
        }
    }

    /// Identifier or numeral used as a name (constructor declarations).
    pub fn name(&mut self) -> PResult<Symbol> {
        if let Tok::Num(s) = self.peek().clone() {
            self.next();
            return Ok(Symbol::new(&s));
        }
        self.ident()
    }

    pub fn nat(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Num(s) => {
                self.next();
                s.parse().map_err(|_| self.error_here("number too large"))
            }
            other => Err(self.error_here(format!("expected a number, found {other}"))),
        }
    }

    /// A fresh binder name; must not be a constructor.
    pub fn binder(&mut self) -> PResult<Symbol> {
        let x = self.ident()?;
        if self.sig.contains(&x) {
            return Err(self.error_here(format!("bound variable `{x}` shadows a constructor")));
        }
        Ok(x)
    }

    pub fn push_scope(&mut self, vars: impl IntoIterator<Item = Symbol>) -> usize {
        let mark = self.scope.len();
        self.scope.extend(vars);
        mark
    }

    pub fn pop_scope(&mut self, mark: usize) {
        self.scope.truncate(mark);
    }

    pub fn push_predicate(&mut self, p: Symbol, arity: usize) {
        self.pred_scope.push((p, arity));
    }

    pub fn pop_predicate(&mut self) {
        self.pred_scope.pop();
    }

    fn bound_pred(&self, p: &Symbol) -> Option<usize> {
        self.pred_scope.iter().rev().find(|(q, _)| q == p).map(|(_, a)| *a)
    }

    fn is_predicate(&self, p: &Symbol) -> bool {
        self.bound_pred(p).is_some() || self.predicates.contains_key(p)
    }

    // ---- terms ----

    pub fn term(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Num(s) => {
                self.next();
                let sym = Symbol::new(&s);
                if self.sig.arity(&sym) == Some(0) {
                    Ok(Term::App(sym, Vec::new()))
                } else if self.sig.has_numerals() {
                    let n: usize = s.parse().map_err(|_| self.error_here("numeral too large"))?;
                    if n > 100_000 {
                        return Err(self.error_here("numeral too large"));
                    }
                    Ok(Term::numeral(n))
                } else {
                    Err(self.error_here(format!(
                        "numeral `{s}` needs a constant `{s}` or constructors z/0 and s/1"
                    )))
                }
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                let sym = Symbol::new(&s);
                if self.scope.contains(&sym) {
                    return Ok(Term::Var(sym));
                }
                if let Some(arity) = self.sig.arity(&sym) {
                    let args = self.args(arity)?;
                    return Ok(Term::App(sym, args));
                }
                let free = match self.free_policy {
                    FreeVars::Reject => false,
                    FreeVars::Collect => is_capitalized(&s),
                    FreeVars::Any => true,
                };
                if free {
                    if !self.free.contains(&sym) {
                        self.free.push(sym.clone());
                    }
                    return Ok(Term::Var(sym));
                }
                self.pos -= 1;
                Err(self.error_here(format!("unknown constructor or unbound variable `{s}`")))
            }
            other => Err(self.error_here(format!("expected a term, found {other}"))),
        }
    }

    /// Exactly `arity` arguments, given as `(t1, ..., tn)` groups and/or
    /// juxtaposed terms.
    pub fn args(&mut self, arity: usize) -> PResult<Vec<Term>> {
        let mut args = Vec::with_capacity(arity);
        while args.len() < arity {
            if *self.peek() == Tok::LParen {
                self.next();
                loop {
                    args.push(self.term()?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RParen)?;
            } else {
                args.push(self.term()?);
            }
        }
        if args.len() > arity {
            return Err(self.error_here(format!("expected {arity} arguments, found {}", args.len())));
        }
        Ok(args)
    }

    /// `(t1, ..., tn)` with possibly zero terms.
    fn arg_list(&mut self) -> PResult<Vec<Term>> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    // ---- formulas ----

    pub fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.formula()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let lhs = self.conjunction()?;
        match self.peek() {
            Tok::OrPos => {
                self.next();
                Ok(Formula::or_pos(lhs, self.disjunction()?))
            }
            Tok::OrNeg => {
                self.next();
                Ok(Formula::or_neg(lhs, self.disjunction()?))
            }
            _ => Ok(lhs),
        }
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let lhs = self.unary()?;
        match self.peek() {
            Tok::AndNeg => {
                self.next();
                Ok(Formula::and_neg(lhs, self.conjunction()?))
            }
            Tok::AndPos => {
                self.next();
                Ok(Formula::and_pos(lhs, self.conjunction()?))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> PResult<Formula> {
        if let Tok::Ident(kw) = self.peek().clone() {
            if kw == "all" || kw == "exists" {
                self.next();
                let mut xs = vec![self.binder()?];
                while !self.eat(&Tok::Comma) {
                    xs.push(self.binder()?);
                }
                let mark = self.push_scope(xs.iter().cloned());
                let body = self.formula();
                self.pop_scope(mark);
                let mut body = body?;
                for x in xs.into_iter().rev() {
                    body = if kw == "all" {
                        Formula::All(x, Box::new(body))
                    } else {
                        Formula::Ex(x, Box::new(body))
                    };
                }
                return Ok(body);
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::TrueNeg => {
                self.next();
                Ok(Formula::TrueNeg)
            }
            Tok::TruePos => {
                self.next();
                Ok(Formula::TruePos)
            }
            Tok::FalseNeg => {
                self.next();
                Ok(Formula::FalseNeg)
            }
            Tok::Ident(s) if s == "false" => {
                self.next();
                Ok(Formula::FalsePos)
            }
            Tok::Ident(s) if s == "mu" || s == "nu" => {
                self.next();
                let abs = self.abstraction()?;
                let args = self.arg_list()?;
                if args.len() != abs.arity() {
                    return Err(self.error_here(format!(
                        "fixed point of arity {} applied to {} arguments",
                        abs.arity(),
                        args.len()
                    )));
                }
                let abs = Arc::new(abs);
                Ok(if s == "mu" {
                    Formula::Mu(abs, args)
                } else {
                    Formula::Nu(abs, args)
                })
            }
            Tok::LParen => {
                let start = self.pos;
                let free_len = self.free.len();
                if let Ok(eq) = self.equation() {
                    return Ok(eq);
                }
                self.pos = start;
                self.free.truncate(free_len);
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) if self.is_predicate(&Symbol::new(&s)) && !self.scope.contains(&Symbol::new(&s)) => {
                self.next();
                let p = Symbol::new(&s);
                if let Some(arity) = self.bound_pred(&p) {
                    let args = self.args(arity)?;
                    return Ok(Formula::PredVar(p, args));
                }
                let arity = self.predicates[&p];
                let args = self.args(arity)?;
                Ok(Formula::Atom(p, args))
            }
            _ => self.equation(),
        }
    }

    fn equation(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        match self.next() {
            Tok::Eq => Ok(Formula::Eq(lhs, self.term()?)),
            Tok::Neq => Ok(Formula::Neq(lhs, self.term()?)),
            other => {
                self.pos -= 1;
                Err(self.error_here(format!("expected `=` or `!=` after a term, found {other}")))
            }
        }
    }

    /// `(p; X1, ..., Xn; BODY)` after `mu` or `nu`.
    fn abstraction(&mut self) -> PResult<Abstraction> {
        self.expect(Tok::LParen)?;
        let p = self.ident()?;
        self.expect(Tok::Semi)?;
        let params = self.binder_list(Tok::Semi)?;
        self.expect(Tok::Semi)?;
        // Abstractions are closed: the body sees only its own parameters.
        let outer = std::mem::take(&mut self.scope);
        let outer_preds = std::mem::take(&mut self.pred_scope);
        let policy = self.free_policy;
        self.free_policy = FreeVars::Reject;
        self.scope = params.clone();
        self.pred_scope.push((p.clone(), params.len()));
        let body = self.formula();
        self.scope = outer;
        self.pred_scope = outer_preds;
        self.free_policy = policy;
        let body = body?;
        self.expect(Tok::RParen)?;
        Abstraction::new(p, params, body).map_err(|e| self.error_here(e.to_string()))
    }

    fn binder_list(&mut self, end: Tok) -> PResult<Vec<Symbol>> {
        let mut params = Vec::new();
        if *self.peek() == end {
            return Ok(params);
        }
        loop {
            let x = self.binder()?;
            if params.contains(&x) {
                return Err(self.error_here(format!("parameter `{x}` repeated")));
            }
            params.push(x);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(params)
    }

    /// `lambda(X1, ..., Xn; BODY)`.
    pub fn lambda(&mut self) -> PResult<Lambda> {
        match self.next() {
            Tok::Ident(s) if s == "lambda" => {}
            other => {
                self.pos -= 1;
                return Err(self.error_here(format!("expected `lambda`, found {other}")));
            }
        }
        self.expect(Tok::LParen)?;
        let params = self.binder_list(Tok::Semi)?;
        self.expect(Tok::Semi)?;
        let outer = std::mem::replace(&mut self.scope, params.clone());
        let policy = std::mem::replace(&mut self.free_policy, FreeVars::Reject);
        let body = self.formula();
        self.scope = outer;
        self.free_policy = policy;
        let body = body?;
        self.expect(Tok::RParen)?;
        let lam = Lambda::new(params, body);
        lam.validate().map_err(|e| self.error_here(e.to_string()))?;
        Ok(lam)
    }

    /// Comma-separated formulas up to (not including) `stop` or `stop2`.
    pub fn formula_list(&mut self, stop: &Tok, stop2: &Tok) -> PResult<Vec<Formula>> {
        let mut out = Vec::new();
        if self.peek() == stop || self.peek() == stop2 {
            return Ok(out);
        }
        loop {
            out.push(self.formula()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(out)
    }

    /// `[x, y] F1, F2 |- G1, G2`.
    pub fn sequent(&mut self) -> PResult<Sequent> {
        self.expect(Tok::LBracket)?;
        let vars = self.binder_list(Tok::RBracket)?;
        self.expect(Tok::RBracket)?;
        let mark = self.push_scope(vars.iter().cloned());
        let left = self.formula_list(&Tok::Turnstile, &Tok::Turnstile);
        let result = left.and_then(|left| {
            self.expect(Tok::Turnstile)?;
            let right = self.formula_list(&Tok::Eof, &Tok::Eof)?;
            Ok((left, right))
        });
        self.pop_scope(mark);
        let (left, right) = result?;
        let vars: BTreeSet<Symbol> = vars.into_iter().collect();
        Ok(Sequent::new(vars, left, right))
    }
}

fn parse_all<T>(
    src: &str,
    sig: &Signature,
    f: impl FnOnce(&mut Parser<'_>) -> PResult<T>,
) -> PResult<T> {
    let toks = lex(src)?;
    let preds = BTreeMap::new();
    let mut p = Parser::new(&toks, sig, &preds);
    let out = f(&mut p)?;
    if !p.at_end() {
        return Err(p.error_here(format!("unexpected {}", p.peek())));
    }
    Ok(out)
}

/// Parses a term whose variables must come from `vars`.
pub fn parse_term(src: &str, sig: &Signature, vars: &[Symbol]) -> PResult<Term> {
    parse_all(src, sig, |p| {
        p.push_scope(vars.iter().cloned());
        p.term()
    })
}

/// Parses a closed (or `vars`-scoped) formula with inline fixed points.
pub fn parse_formula(src: &str, sig: &Signature, vars: &[Symbol]) -> PResult<Formula> {
    parse_all(src, sig, |p| {
        p.push_scope(vars.iter().cloned());
        p.formula()
    })
}

pub fn parse_lambda(src: &str, sig: &Signature) -> PResult<Lambda> {
    parse_all(src, sig, |p| p.lambda())
}

pub fn parse_sequent(src: &str, sig: &Signature) -> PResult<Sequent> {
    parse_all(src, sig, |p| p.sequent())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::from_entries([("a", 0), ("b", 0), ("z", 0), ("s", 1), ("f", 2)]).unwrap()
    }

    #[test]
    fn juxtaposition_and_parens_agree() {
        let s = sig();
        let x = [Symbol::new("X")];
        let t1 = parse_term("f (s X) a", &s, &x).unwrap();
        let t2 = parse_term("f(s(X), a)", &s, &x).unwrap();
        assert_eq!(t1, t2);
    }

    #[test]
    fn numerals_expand() {
        assert_eq!(parse_term("2", &sig(), &[]).unwrap(), Term::numeral(2));
    }

    #[test]
    fn precedence() {
        let f = parse_formula("a = a /\\+ b = b \\/ a = b => true-", &sig(), &[]).unwrap();
        let expected = Formula::imp(
            Formula::or_pos(
                Formula::and_pos(
                    Formula::eq(Term::constant("a"), Term::constant("a")),
                    Formula::eq(Term::constant("b"), Term::constant("b")),
                ),
                Formula::eq(Term::constant("a"), Term::constant("b")),
            ),
            Formula::TrueNeg,
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn parenthesized_term_in_equation() {
        let f = parse_formula("(s a) = s (a)", &sig(), &[]).unwrap();
        assert_eq!(f, Formula::eq(Term::app("s", vec![Term::constant("a")]), Term::app("s", vec![Term::constant("a")])));
    }

    #[test]
    fn display_round_trips() {
        let s = sig();
        let src = "mu(p; X; X = z \\/ (exists Y, X = s Y /\\+ p Y))(s (s z))";
        let f = parse_formula(src, &s, &[]).unwrap();
        let again = parse_formula(&f.to_string(), &s, &[]).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn unbound_variable_rejected() {
        let e = parse_formula("X = a", &sig(), &[]).unwrap_err();
        assert_eq!((e.line, e.col), (1, 1));
    }

    #[test]
    fn sequent_syntax() {
        let s = parse_sequent("[x] x = a |- x = a, true-", &sig()).unwrap();
        assert_eq!(s.vars.len(), 1);
        assert_eq!(s.left.len(), 1);
        assert_eq!(s.right.len(), 2);
    }

    #[test]
    fn binder_cannot_shadow_constructor() {
        assert!(parse_formula("all a, a = a", &sig(), &[]).is_err());
    }
}
