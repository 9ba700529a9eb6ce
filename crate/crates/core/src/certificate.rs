//! Line-based certificate files.
//!
//! ```text
//! muproof 1
//! problem <sha256 of the problem file>
//! goal <name>
//! config cut=false init=false induction=true witness-depth=3
//! signature a/0 s/1
//! conclusion [x] F |- G
//! rule AllR right:0 fresh=x
//!   rule EqR right:0
//! digest <sha256 of every preceding byte>
//! ```
//!
//! Only the root sequent is stored. Node lines are indented two spaces
//! per depth and carry the rule tag, the principal position and at most
//! a split followed by one data field, which runs to the end of the line.
//! Premises are recomputed by the kernel when the tree is rebuilt.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::formula::Formula;
use crate::kernel::{fresh_eigenvariable, path_string, rebuild, rename_eigenvariable, Certificate, CheckError, ProofTree, Rule, RuleApp, RuleConfig, Sequent, Side, Split};
use crate::syntax::{lex, FreeVars, ParseError, Parser};
use crate::term::{Signature, Substitution, Symbol};

pub const FORMAT_VERSION: &str = "1";
const MAGIC: &str = "muproof";

#[derive(Debug, Clone, PartialEq)]
pub struct CertDocument {
    pub problem_hash: String,
    pub goal_name: String,
    pub config: RuleConfig,
    pub signature: Signature,
    pub conclusion: Sequent,
    pub tree: ProofTree,
    /// The digest as recorded in the file.
    pub digest: String,
}

impl CertDocument {
    pub fn new(problem_hash: &str, goal_name: &str, config: &RuleConfig, sig: &Signature, cert: &Certificate) -> Self {
        let mut doc = CertDocument {
            problem_hash: problem_hash.to_string(),
            goal_name: goal_name.to_string(),
            config: config.clone(),
            signature: sig.clone(),
            conclusion: cert.conclusion.clone(),
            tree: cert.tree(),
            digest: String::new(),
        };
        doc.digest = digest_hex(body(&doc).as_bytes());
        doc
    }

    pub fn digest_matches(&self) -> bool {
        self.digest == digest_hex(body(self).as_bytes())
    }

    /// Recomputes every intermediate sequent from the root.
    pub fn certificate(&self) -> Result<Certificate, CheckError> {
        rebuild(&self.signature, &self.conclusion, &self.tree)
    }
}

/// Renames every eigenvariable to the name the kernel would pick by
/// default for its quantifier, so that certificates differing only in
/// eigenvariable names become identical.
pub fn canonicalize(sig: &Signature, c: &Certificate) -> Certificate {
    let mut premises: Vec<Certificate> = c.premises.clone();
    let bound = match (&c.rule.rule, c.rule.rule.side()) {
        (Rule::AllR(y), Some(Side::Right)) | (Rule::ExL(y), Some(Side::Left)) => {
            let side = if matches!(c.rule.rule, Rule::AllR(_)) {
                &c.conclusion.right
            } else {
                &c.conclusion.left
            };
            match side.get(c.rule.principal) {
                Some(Formula::All(x, _) | Formula::Ex(x, _)) => Some((y.clone(), x.clone())),
                _ => None,
            }
        }
        _ => None,
    };
    let mut rule = c.rule.clone();
    if let Some((y, x)) = bound {
        let z = fresh_eigenvariable(sig, &c.conclusion.vars, &x);
        if z != y {
            let temp = Symbol::new(&format!("_{z}"));
            premises = premises
                .iter()
                .map(|p| rename_eigenvariable(&rename_eigenvariable(p, &z, &temp), &y, &z))
                .collect();
            rule.rule = match rule.rule {
                Rule::AllR(_) => Rule::AllR(z),
                _ => Rule::ExL(z),
            };
        }
    }
    Certificate {
        conclusion: c.conclusion.clone(),
        rule,
        premises: premises.iter().map(|p| canonicalize(sig, p)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("byte {offset} (line {line}{}): {message}", node.as_ref().map(|p| format!(", node {}", path_string(p))).unwrap_or_default())]
    Syntax {
        offset: usize,
        line: usize,
        /// The node whose line is malformed, when there is one.
        node: Option<Vec<usize>>,
        message: String,
    },
    #[error("node {}: {message}", path_string(.path))]
    Node { path: Vec<usize>, message: String },
}

pub fn digest_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn rule_data(rule: &Rule) -> (Option<&Split>, Option<String>) {
    match rule {
        Rule::AndPosR(sp) | Rule::OrNegL(sp) | Rule::ImpL(sp) => (Some(sp), None),
        Rule::ExR(t) | Rule::AllL(t) => (None, Some(format!("witness={t}"))),
        Rule::AllR(x) | Rule::ExL(x) => (None, Some(format!("fresh={x}"))),
        Rule::EqLUnify(theta) | Rule::NeqRUnify(theta) => {
            let parts: Vec<String> = theta.iter().map(|(v, t)| format!("{v} := {t}")).collect();
            (None, Some(format!("mgu=[{}]", parts.join(", "))))
        }
        Rule::MuLInd(inv) | Rule::NuRCoind(inv) => (None, Some(format!("invariant={inv}"))),
        Rule::Cut(b, sp) => (Some(sp), Some(format!("formula={b}"))),
        _ => (None, None),
    }
}

fn premise_count(tag: &str) -> Option<usize> {
    Some(match tag {
        "FalsePosL" | "TruePosR" | "TrueNegR" | "FalseNegL" | "EqR" | "NeqL" | "EqLClash" | "NeqRClash"
        | "MuInit" | "NuInit" => 0,
        "AndNegR" | "OrL" | "AndPosR" | "OrNegL" | "ImpL" | "MuLInd" | "NuRCoind" | "Cut" => 2,
        "AndNegL1" | "AndNegL2" | "OrR1" | "OrR2" | "AndPosL" | "TruePosL" | "OrNegR" | "FalseNegR" | "ImpR"
        | "ExR" | "AllR" | "AllL" | "ExL" | "EqLUnify" | "NeqRUnify" | "MuR" | "NuL" | "MuLUnfold"
        | "NuRUnfold" => 1,
        _ => return None,
    })
}

fn write_node(out: &mut String, tree: &ProofTree, depth: usize) {
    let rule = &tree.rule.rule;
    out.push_str(&"  ".repeat(depth));
    out.push_str("rule ");
    out.push_str(rule.tag());
    if let Some(side) = rule.side() {
        out.push_str(&format!(" {side}:{}", tree.rule.principal));
    }
    let (split, data) = rule_data(rule);
    if let Some(sp) = split {
        out.push_str(&format!(" split={sp}"));
    }
    if let Some(d) = data {
        out.push(' ');
        out.push_str(&d);
    }
    out.push('\n');
    for p in &tree.premises {
        write_node(out, p, depth + 1);
    }
}

fn body(doc: &CertDocument) -> String {
    let c = &doc.config;
    let sig: Vec<String> = doc.signature.iter().map(|(f, n)| format!(" {f}/{n}")).collect();
    let mut out = format!(
        "{MAGIC} {FORMAT_VERSION}\nproblem {}\ngoal {}\nconfig cut={} init={} induction={} witness-depth={}\nsignature{}\nconclusion {}\n",
        doc.problem_hash,
        doc.goal_name,
        c.allow_cut,
        c.allow_init,
        c.allow_induction,
        c.witness_depth,
        sig.concat(),
        doc.conclusion,
    );
    write_node(&mut out, &doc.tree, 0);
    out
}

/// Writes the document, including its recorded digest.
pub fn serialize_certificate(doc: &CertDocument) -> String {
    format!("{}digest {}\n", body(doc), doc.digest)
}

struct Line<'a> {
    no: usize,
    offset: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, col: usize, message: impl Into<String>) -> CertError {
        CertError::Syntax {
            offset: self.offset + col,
            line: self.no,
            node: None,
            message: message.into(),
        }
    }

    fn field<'s>(&'s self, key: &str) -> Result<&'s str, CertError> {
        self.text
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix(' '))
            .ok_or_else(|| self.err(0, format!("expected `{key}` line")))
    }

    fn rest_col(&self, rest: &str) -> usize {
        self.text.len() - rest.len()
    }

    fn parse_err(&self, col: usize, e: ParseError) -> CertError {
        self.err(col + e.offset, e.message)
    }
}

fn lines(src: &str) -> Result<Vec<Line<'_>>, CertError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for (i, chunk) in src.split_inclusive('\n').enumerate() {
        let text = chunk.strip_suffix('\n').ok_or(CertError::Syntax {
            offset: offset + chunk.len(),
            line: i + 1,
            node: None,
            message: "missing final newline".into(),
        })?;
        out.push(Line { no: i + 1, offset, text });
        offset += chunk.len();
    }
    Ok(out)
}

fn parse_bool(line: &Line<'_>, col: usize, s: &str) -> Result<bool, CertError> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(line.err(col, format!("expected `true` or `false`, found `{s}`"))),
    }
}

fn parse_config(line: &Line<'_>) -> Result<RuleConfig, CertError> {
    let rest = line.field("config")?;
    let mut config = RuleConfig::default();
    let keys = ["cut", "init", "induction", "witness-depth"];
    let mut col = line.rest_col(rest);
    let parts: Vec<&str> = rest.split(' ').collect();
    if parts.len() != keys.len() {
        return Err(line.err(col, "expected four config entries"));
    }
    for (part, key) in parts.iter().zip(keys) {
        let value = part
            .strip_prefix(key)
            .and_then(|v| v.strip_prefix('='))
            .ok_or_else(|| line.err(col, format!("expected `{key}=`")))?;
        let vcol = col + key.len() + 1;
        match key {
            "cut" => config.allow_cut = parse_bool(line, vcol, value)?,
            "init" => config.allow_init = parse_bool(line, vcol, value)?,
            "induction" => config.allow_induction = parse_bool(line, vcol, value)?,
            _ => {
                config.witness_depth = value
                    .parse()
                    .map_err(|_| line.err(vcol, format!("bad witness depth `{value}`")))?
            }
        }
        col += part.len() + 1;
    }
    Ok(config)
}

fn parse_signature(line: &Line<'_>) -> Result<Signature, CertError> {
    let rest = line.text.strip_prefix("signature").ok_or_else(|| line.err(0, "expected `signature` line"))?;
    let mut sig = Signature::new();
    let mut col = "signature".len();
    if rest.is_empty() {
        return Ok(sig);
    }
    for entry in rest.strip_prefix(' ').ok_or_else(|| line.err(col, "expected a space"))?.split(' ') {
        col += 1;
        let (name, arity) = entry
            .rsplit_once('/')
            .ok_or_else(|| line.err(col, format!("expected `name/arity`, found `{entry}`")))?;
        let arity: usize = arity.parse().map_err(|_| line.err(col, format!("bad arity in `{entry}`")))?;
        sig.declare(Symbol::new(name), arity).map_err(|e| line.err(col, e.to_string()))?;
        col += entry.len();
    }
    sig.validate().map_err(|e| line.err(0, e.to_string()))?;
    Ok(sig)
}

/// Runs `f` on a parser over `src` that treats unbound names as
/// variables, requiring all input to be consumed.
fn with_parser<T>(
    line: &Line<'_>,
    col: usize,
    src: &str,
    sig: &Signature,
    f: impl FnOnce(&mut Parser<'_>) -> Result<T, ParseError>,
) -> Result<T, CertError> {
    let toks = lex(src).map_err(|e| line.parse_err(col, e))?;
    let preds = BTreeMap::new();
    let mut p = Parser::new(&toks, sig, &preds);
    p.free_policy = FreeVars::Any;
    let out = f(&mut p).map_err(|e| line.parse_err(col, e))?;
    if !p.at_end() {
        let e = p.error_here(format!("unexpected {}", p.peek()));
        return Err(line.parse_err(col, e));
    }
    Ok(out)
}

fn parse_split(line: &Line<'_>, col: usize, s: &str) -> Result<Split, CertError> {
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| line.err(col, "expected `[..|..]`"))?;
    let (l, r) = inner.split_once('|').ok_or_else(|| line.err(col, "expected `|` in split"))?;
    let nums = |part: &str| -> Result<Vec<usize>, CertError> {
        if part.is_empty() {
            return Ok(Vec::new());
        }
        part.split(',')
            .map(|n| {
                n.parse::<usize>()
                    .map_err(|_| line.err(col, format!("bad split index `{n}`")))
            })
            .collect()
    };
    Ok(Split {
        left: nums(l)?,
        right: nums(r)?,
    })
}

/// Parses the text after the position of a node line.
fn parse_rule(line: &Line<'_>, col: usize, tag: &str, rest: &str, sig: &Signature) -> Result<Rule, CertError> {
    let (split, data, data_col) = {
        let mut split = None;
        let mut rest = rest;
        let mut col = col;
        if let Some(r) = rest.strip_prefix(" split=") {
            let end = r.find(' ').unwrap_or(r.len());
            split = Some(parse_split(line, col + 7, &r[..end])?);
            col += 7 + end;
            rest = &r[end..];
        }
        match rest.strip_prefix(' ') {
            Some(r) => (split, Some(r), col + 1),
            None if rest.is_empty() => (split, None, col),
            None => return Err(line.err(col, "expected a space")),
        }
    };
    let value = |key: &str| -> Result<(&str, usize), CertError> {
        let d = data.ok_or_else(|| line.err(data_col, format!("{tag} needs `{key}=`")))?;
        let v = d
            .strip_prefix(key)
            .and_then(|v| v.strip_prefix('='))
            .ok_or_else(|| line.err(data_col, format!("expected `{key}=`")))?;
        Ok((v, data_col + key.len() + 1))
    };
    let need_split = || split.clone().ok_or_else(|| line.err(col, format!("{tag} needs `split=`")));
    let rule = match tag {
        "AndPosR" | "OrNegL" | "ImpL" => {
            let sp = need_split()?;
            match tag {
                "AndPosR" => Rule::AndPosR(sp),
                "OrNegL" => Rule::OrNegL(sp),
                _ => Rule::ImpL(sp),
            }
        }
        "ExR" | "AllL" => {
            let (v, c) = value("witness")?;
            let t = with_parser(line, c, v, sig, |p| p.term())?;
            if tag == "ExR" {
                Rule::ExR(t)
            } else {
                Rule::AllL(t)
            }
        }
        "AllR" | "ExL" => {
            let (v, c) = value("fresh")?;
            let x = with_parser(line, c, v, sig, |p| p.ident())?;
            if tag == "AllR" {
                Rule::AllR(x)
            } else {
                Rule::ExL(x)
            }
        }
        "EqLUnify" | "NeqRUnify" => {
            let (v, c) = value("mgu")?;
            let theta = with_parser(line, c, v, sig, |p| {
                p.expect(crate::syntax::Tok::LBracket)?;
                let mut bindings = Vec::new();
                if !p.eat(&crate::syntax::Tok::RBracket) {
                    loop {
                        let x = p.ident()?;
                        p.expect(crate::syntax::Tok::Define)?;
                        bindings.push((x, p.term()?));
                        if !p.eat(&crate::syntax::Tok::Comma) {
                            break;
                        }
                    }
                    p.expect(crate::syntax::Tok::RBracket)?;
                }
                Ok(bindings)
            })?;
            let n = theta.len();
            let theta = Substitution::from_bindings(theta);
            if theta.len() != n {
                return Err(line.err(c, "repeated variable in mgu"));
            }
            if tag == "EqLUnify" {
                Rule::EqLUnify(theta)
            } else {
                Rule::NeqRUnify(theta)
            }
        }
        "MuLInd" | "NuRCoind" => {
            let (v, c) = value("invariant")?;
            let inv = with_parser(line, c, v, sig, |p| p.lambda())?;
            if tag == "MuLInd" {
                Rule::MuLInd(inv)
            } else {
                Rule::NuRCoind(inv)
            }
        }
        "Cut" => {
            let sp = need_split()?;
            let (v, c) = value("formula")?;
            let b = with_parser(line, c, v, sig, |p| p.formula())?;
            Rule::Cut(b, sp)
        }
        _ => {
            if split.is_some() || data.is_some() {
                return Err(line.err(col, format!("{tag} takes no data")));
            }
            return simple_rule(tag).ok_or_else(|| line.err(0, format!("unknown rule `{tag}`")));
        }
    };
    if split.is_some() && !matches!(rule, Rule::AndPosR(_) | Rule::OrNegL(_) | Rule::ImpL(_) | Rule::Cut(..)) {
        return Err(line.err(col, format!("{tag} takes no split")));
    }
    if data.is_some() && matches!(rule, Rule::AndPosR(_) | Rule::OrNegL(_) | Rule::ImpL(_)) {
        return Err(line.err(data_col, format!("{tag} takes only a split")));
    }
    Ok(rule)
}

fn simple_rule(tag: &str) -> Option<Rule> {
    use Rule::*;
    Some(match tag {
        "AndNegR" => AndNegR,
        "AndNegL1" => AndNegL1,
        "AndNegL2" => AndNegL2,
        "OrL" => OrL,
        "FalsePosL" => FalsePosL,
        "OrR1" => OrR1,
        "OrR2" => OrR2,
        "AndPosL" => AndPosL,
        "TruePosR" => TruePosR,
        "TruePosL" => TruePosL,
        "TrueNegR" => TrueNegR,
        "OrNegR" => OrNegR,
        "FalseNegR" => FalseNegR,
        "FalseNegL" => FalseNegL,
        "ImpR" => ImpR,
        "EqR" => EqR,
        "NeqL" => NeqL,
        "EqLClash" => EqLClash,
        "NeqRClash" => NeqRClash,
        "MuR" => MuR,
        "NuL" => NuL,
        "MuLUnfold" => MuLUnfold,
        "NuRUnfold" => NuRUnfold,
        "MuInit" => MuInit,
        "NuInit" => NuInit,
        _ => return None,
    })
}

fn parse_node(line: &Line<'_>, depth: usize, sig: &Signature) -> Result<RuleApp, CertError> {
    let indent = 2 * depth;
    let text = line.text;
    if text.len() < indent || !text[..indent].bytes().all(|b| b == b' ') || text[indent..].starts_with(' ') {
        return Err(line.err(0, format!("expected indentation of {indent} spaces")));
    }
    let rest = text[indent..]
        .strip_prefix("rule ")
        .ok_or_else(|| line.err(indent, "expected `rule`"))?;
    let mut col = indent + 5;
    let tag_len = rest.find(' ').unwrap_or(rest.len());
    let tag = &rest[..tag_len];
    if premise_count(tag).is_none() {
        return Err(line.err(col, format!("unknown rule `{tag}`")));
    }
    col += tag_len;
    let mut rest = &rest[tag_len..];
    let sided = !matches!(tag, "MuInit" | "NuInit" | "Cut");
    let mut principal = 0;
    if sided {
        let r = rest.strip_prefix(' ').ok_or_else(|| line.err(col, "expected a position"))?;
        let end = r.find(' ').unwrap_or(r.len());
        let pos = &r[..end];
        let (side, idx) = pos
            .split_once(':')
            .ok_or_else(|| line.err(col + 1, format!("expected `side:index`, found `{pos}`")))?;
        let side = match side {
            "left" => Side::Left,
            "right" => Side::Right,
            _ => return Err(line.err(col + 1, format!("bad side `{side}`"))),
        };
        principal = idx
            .parse()
            .map_err(|_| line.err(col + 1, format!("bad principal index `{idx}`")))?;
        col += 1 + end;
        rest = &r[end..];
        let rule = parse_rule(line, col, tag, rest, sig)?;
        if rule.side() != Some(side) {
            return Err(line.err(col, format!("{tag} acts on the {} side", rule.side().unwrap())));
        }
        return Ok(RuleApp::new(rule, principal));
    }
    let rule = parse_rule(line, col, tag, rest, sig)?;
    Ok(RuleApp::new(rule, principal))
}

fn parse_tree(
    lines: &[Line<'_>],
    next: &mut usize,
    path: &mut Vec<usize>,
    sig: &Signature,
) -> Result<ProofTree, CertError> {
    let line = lines.get(*next).ok_or_else(|| CertError::Syntax {
        offset: lines.last().map_or(0, |l| l.offset + l.text.len() + 1),
        line: lines.len() + 1,
        node: Some(path.clone()),
        message: "missing premise".into(),
    })?;
    *next += 1;
    let rule = parse_node(line, path.len(), sig).map_err(|e| match e {
        CertError::Syntax { offset, line, message, .. } => CertError::Syntax {
            offset,
            line,
            node: Some(path.clone()),
            message,
        },
        e => e,
    })?;
    let n = premise_count(rule.rule.tag()).unwrap_or(0);
    let mut premises = Vec::with_capacity(n);
    for i in 0..n {
        path.push(i);
        premises.push(parse_tree(lines, next, path, sig)?);
        path.pop();
    }
    Ok(ProofTree { rule, premises })
}

/// Parses and validates a certificate file. Every structural error is
/// reported with its byte offset; any byte sequence other than the one
/// `serialize_certificate` would produce for the result is rejected.
/// The digest is only checked for shape here; `verify_certificate`
/// compares it after the proof itself has been checked.
pub fn deserialize_certificate(src: &[u8]) -> Result<CertDocument, CertError> {
    let text = std::str::from_utf8(src).map_err(|e| CertError::Syntax {
        offset: e.valid_up_to(),
        line: src[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1,
        node: None,
        message: "invalid UTF-8".into(),
    })?;
    let lines = lines(text)?;
    if lines.len() < 8 {
        let last = lines.last();
        return Err(CertError::Syntax {
            offset: text.len(),
            line: last.map_or(1, |l| l.no + 1),
            node: None,
            message: "truncated certificate".into(),
        });
    }
    let version = lines[0].field(MAGIC)?;
    if version != FORMAT_VERSION {
        return Err(lines[0].err(MAGIC.len() + 1, format!("unsupported format version `{version}`")));
    }
    let problem_hash = lines[1].field("problem")?;
    if problem_hash.len() != 64 || !problem_hash.bytes().all(|b| b.is_ascii_hexdigit() && !b.is_ascii_uppercase()) {
        return Err(lines[1].err(8, "expected a lowercase sha256 hex digest"));
    }
    let goal_name = lines[2].field("goal")?;
    if goal_name.is_empty() || goal_name.contains(' ') {
        return Err(lines[2].err(5, "bad goal name"));
    }
    let config = parse_config(&lines[3])?;
    let signature = parse_signature(&lines[4])?;
    let concl_src = lines[5].field("conclusion")?;
    let conclusion = {
        let toks = lex(concl_src).map_err(|e| lines[5].parse_err(11, e))?;
        let preds = BTreeMap::new();
        let mut p = Parser::new(&toks, &signature, &preds);
        let s = p.sequent().map_err(|e| lines[5].parse_err(11, e))?;
        if !p.at_end() {
            let e = p.error_here(format!("unexpected {}", p.peek()));
            return Err(lines[5].parse_err(11, e));
        }
        s
    };
    let digest_line = lines.last().unwrap();
    let digest = digest_line.field("digest")?;
    let mut next = 6;
    let body_lines = &lines[..lines.len() - 1];
    let tree = parse_tree(body_lines, &mut next, &mut Vec::new(), &signature)?;
    if next != body_lines.len() {
        return Err(body_lines[next].err(0, "trailing node after the proof tree"));
    }
    if digest.len() != 64 || !digest.bytes().all(|b| b.is_ascii_hexdigit() && !b.is_ascii_uppercase()) {
        return Err(digest_line.err(7, "expected a lowercase sha256 hex digest"));
    }
    let doc = CertDocument {
        problem_hash: problem_hash.to_string(),
        goal_name: goal_name.to_string(),
        config,
        signature,
        conclusion,
        tree,
        digest: digest.to_string(),
    };
    let canonical = serialize_certificate(&doc);
    if canonical.as_bytes() != src {
        let offset = canonical
            .bytes()
            .zip(src.iter())
            .position(|(a, &b)| a != b)
            .unwrap_or(canonical.len().min(src.len()));
        let line = src[..offset].iter().filter(|&&b| b == b'\n').count() + 1;
        return Err(CertError::Syntax {
            offset,
            line,
            node: None,
            message: "not in canonical form".into(),
        });
    }
    Ok(doc)
}

/// Deserializes, rebuilds and checks a certificate against the goal it
/// claims to prove, then compares the digest.
pub fn verify_certificate(
    src: &[u8],
    problem_hash: &str,
    sig: &Signature,
    goal: &Sequent,
) -> Result<Certificate, VerifyError> {
    let doc = deserialize_certificate(src)?;
    if doc.problem_hash != problem_hash {
        return Err(VerifyError::Mismatch("problem hash differs from the problem file".into()));
    }
    if &doc.signature != sig {
        return Err(VerifyError::Mismatch("signature differs from the problem file".into()));
    }
    if !doc.conclusion.equivalent(goal) {
        return Err(VerifyError::Mismatch(format!("conclusion is not the goal `{}`", doc.goal_name)));
    }
    let cert = doc.certificate().map_err(|e| CertError::Node {
        path: e.path,
        message: e.reason,
    })?;
    crate::kernel::check_certificate(sig, &cert, &doc.config).map_err(|e| CertError::Node {
        path: e.path,
        message: e.reason,
    })?;
    if !doc.digest_matches() {
        return Err(VerifyError::Mismatch("digest does not match the certificate contents".into()));
    }
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error("{0}")]
    Mismatch(String),
}
