//! First-order formulas over `∈` and `=`: parsing, printing, the set-theory
//! axioms, relativization, classical satisfaction over finite transitive
//! sets, and boolean truth values with the forcing relation.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! formula := quant | iff
//! quant   := ("forall" | "exists") IDENT formula
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("or" and)*
//! and     := unary ("and" unary)*
//! unary   := "not" unary | "(" formula ")" | atom
//! atom    := term ("in" | "=") term
//! term    := IDENT | HF-literal
//! ```
//!
//! `∀ ∃ ¬ ∧ ∨ → ↔ ∈` are accepted as synonyms, and `∅` as the empty literal.
//! Identifiers resolve to bound variables first, then to constants.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::boolalg::{Element, FinBoolAlg, Subset};
use crate::hfset::{parse_literal_prefix, HfError, HfSet};
use crate::names::{FilterView, NameError, NameId, NameTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unresolved identifier {0:?}")]
    Unresolved(String),
    #[error("literal {0} is not a member of the model")]
    LiteralOutsideModel(HfSet),
    #[error("model is not transitive: {missing} is in {member} but not in the model")]
    NotTransitive { member: HfSet, missing: HfSet },
    #[error("unknown axiom {0:?}")]
    UnknownAxiom(String),
    #[error("schema formula must not mention {0:?} free")]
    Capture(String),
    #[error("the zero condition forces nothing")]
    ZeroCondition,
    #[error("condition does not belong to the names' algebra")]
    ForeignCondition,
    #[error("name id {0} is not in the table")]
    UnknownName(usize),
    #[error("malformed model document: {0}")]
    Format(String),
    #[error(transparent)]
    Name(#[from] NameError),
}

impl From<HfError> for LogicError {
    fn from(e: HfError) -> Self {
        match e {
            HfError::Syntax { pos, msg } => LogicError::Syntax { pos, msg },
            other => LogicError::Format(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Ident(String),
    Lit(HfSet),
}

impl Term {
    pub fn ident(s: &str) -> Term {
        Term::Ident(s.to_string())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Ident(s) => f.write_str(s),
            Term::Lit(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Mem(Term, Term),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

/// Shorthand constructors.
impl Formula {
    pub fn mem(a: &str, b: &str) -> Formula {
        Formula::Mem(Term::ident(a), Term::ident(b))
    }

    pub fn eq(a: &str, b: &str) -> Formula {
        Formula::Eq(Term::ident(a), Term::ident(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(x: &str, a: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(a))
    }

    pub fn exists(x: &str, a: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(a))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Mem(..) | Formula::Eq(..))
    }

    /// Identifiers occurring free, in sorted order.
    pub fn free_idents(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Mem(a, b) | Formula::Eq(a, b) => {
                    for t in [a, b] {
                        if let Term::Ident(s) = t {
                            if !bound.contains(s) {
                                out.insert(s.clone());
                            }
                        }
                    }
                }
                Formula::Not(a) => go(a, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Forall(x, a) | Formula::Exists(x, a) => {
                    bound.push(x.clone());
                    go(a, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every identifier, bound or free.
    pub fn all_idents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Mem(a, b) | Formula::Eq(a, b) => {
                for t in [a, b] {
                    if let Term::Ident(s) = t {
                        out.insert(s.clone());
                    }
                }
            }
            Formula::Forall(x, _) | Formula::Exists(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    pub fn literals(&self) -> BTreeSet<HfSet> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Mem(a, b) | Formula::Eq(a, b) = f {
                for t in [a, b] {
                    if let Term::Lit(x) = t {
                        out.insert(x.clone());
                    }
                }
            }
        });
        out
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Mem(..) | Formula::Eq(..) => 0,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    fn visit(&self, g: &mut dyn FnMut(&Formula)) {
        g(self);
        match self {
            Formula::Mem(..) | Formula::Eq(..) => {}
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.visit(g),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(g);
                b.visit(g);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => 0,
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) | Formula::Mem(..) | Formula::Eq(..) => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Formula::Mem(a, b) => write!(f, "{a} in {b}"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(a) => {
                f.write_str("not ")?;
                if a.is_atomic() {
                    write!(f, "({a})")
                } else {
                    a.write_at(f, 5)
                }
            }
            Formula::And(a, b) => binary(f, a, matches!(**a, Formula::And(..)), " and ", b),
            Formula::Or(a, b) => binary(f, a, matches!(**a, Formula::Or(..)), " or ", b),
            Formula::Implies(a, b) => binary(f, a, false, " -> ", b),
            Formula::Iff(a, b) => binary(f, a, false, " <-> ", b),
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                let q = if matches!(self, Formula::Forall(..)) { "forall" } else { "exists" };
                write!(f, "{q} {x} ")?;
                if a.precedence() == 0 {
                    a.write_at(f, 0)
                } else {
                    f.write_str("(")?;
                    a.write_at(f, 0)?;
                    f.write_str(")")
                }
            }
        }
    }
}

/// Compound operands are parenthesized, except a left operand chaining the
/// same `and`/`or`.
fn binary(f: &mut fmt::Formatter<'_>, a: &Formula, chain: bool, op: &str, b: &Formula) -> fmt::Result {
    a.write_at(f, if chain { 0 } else { 5 })?;
    f.write_str(op)?;
    b.write_at(f, 5)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl FromStr for Formula {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, LogicError> {
        parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Lit(HfSet),
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
    Iff,
    In,
    Eq,
    Forall,
    Exists,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Lit(x) => format!("literal {x}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Not => "'not'".into(),
            Tok::And => "'and'".into(),
            Tok::Or => "'or'".into(),
            Tok::Implies => "'->'".into(),
            Tok::Iff => "'<->'".into(),
            Tok::In => "'in'".into(),
            Tok::Eq => "'='".into(),
            Tok::Forall => "'forall'".into(),
            Tok::Exists => "'exists'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

const CHECK_ACCENT: char = '\u{030C}';

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, LogicError> {
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos, msg: &str| LogicError::Syntax { pos, msg: msg.to_string() };
    while i < src.len() {
        let rest = &src[i..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let start = i;
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            '∀' => Some(Tok::Forall),
            '∃' => Some(Tok::Exists),
            '¬' => Some(Tok::Not),
            '∧' => Some(Tok::And),
            '∨' => Some(Tok::Or),
            '→' => Some(Tok::Implies),
            '↔' => Some(Tok::Iff),
            '∈' => Some(Tok::In),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, start));
            i += c.len_utf8();
        } else if rest.starts_with("<->") {
            out.push((Tok::Iff, start));
            i += 3;
        } else if rest.starts_with("->") {
            out.push((Tok::Implies, start));
            i += 2;
        } else if c == '[' {
            let (set, end) = parse_literal_prefix(src, i)?;
            out.push((Tok::Lit(set), start));
            i = end;
        } else if c == '∅' {
            i += c.len_utf8();
            if src[i..].starts_with(CHECK_ACCENT) {
                i += CHECK_ACCENT.len_utf8();
            }
            out.push((Tok::Lit(HfSet::empty()), start));
        } else if is_ident_start(c) {
            let len = rest.find(|ch: char| !is_ident_char(ch)).unwrap_or(rest.len());
            let word = &rest[..len];
            let tok = match word {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                "not" => Tok::Not,
                "and" => Tok::And,
                "or" => Tok::Or,
                "in" => Tok::In,
                _ => Tok::Ident(word.to_string()),
            };
            out.push((tok, start));
            i += len;
        } else {
            return Err(err(start, &format!("unexpected character {c:?}")));
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, LogicError> {
        Err(LogicError::Syntax {
            pos: self.pos(),
            msg: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        match self.peek() {
            Tok::Forall | Tok::Exists => {
                let universal = self.bump() == Tok::Forall;
                let Tok::Ident(x) = self.peek().clone() else {
                    return self.fail("a variable after the quantifier");
                };
                self.bump();
                let body = Box::new(self.formula()?);
                Ok(if universal { Formula::Forall(x, body) } else { Formula::Exists(x, body) })
            }
            _ => self.iff(),
        }
    }

    fn iff(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            lhs = Formula::iff(lhs, self.imp()?);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            return Ok(Formula::implies(lhs, self.imp()?));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                if *self.peek() != Tok::RParen {
                    return self.fail("')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::Forall | Tok::Exists => self.fail("an atom or '(' (parenthesize quantifiers inside connectives)"),
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, LogicError> {
        let a = self.term()?;
        let membership = match self.peek() {
            Tok::In => true,
            Tok::Eq => false,
            _ => return self.fail("'in' or '='"),
        };
        self.bump();
        let b = self.term()?;
        Ok(if membership { Formula::Mem(a, b) } else { Formula::Eq(a, b) })
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Term::Ident(s))
            }
            Tok::Lit(x) => {
                self.bump();
                Ok(Term::Lit(x))
            }
            _ => self.fail("an identifier or set literal"),
        }
    }
}

pub fn parse(src: &str) -> Result<Formula, LogicError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.fail("end of input");
    }
    Ok(f)
}

fn p(src: &str) -> Formula {
    parse(src).expect("built-in formula parses")
}

pub const AXIOM_NAMES: [&str; 6] = ["extensionality", "pairing", "union", "powerset", "infinity", "foundation"];

/// The non-schema axioms. Infinity is spelled out in `∈`/`=` since the
/// language has no `∅` or `x ∪ {x}` terms.
pub fn axiom(name: &str) -> Result<Formula, LogicError> {
    let text = match name {
        "extensionality" => "forall x forall y (x = y <-> (forall z (z in x <-> z in y)))",
        "pairing" => "forall x forall y exists z forall w (w in z <-> (w = x or w = y))",
        "union" => "forall x exists y forall z (z in y <-> (exists w (z in w and w in x)))",
        "powerset" => "forall x exists y forall z (z in y <-> (forall w (w in z -> w in x)))",
        "infinity" => {
            "exists y ((exists e ((forall u (not (u in e))) and e in y)) and \
             (forall x (x in y -> (exists s (s in y and (forall w (w in s <-> (w in x or w = x))))))))"
        }
        "foundation" => "forall x exists y (y in x and (forall z (z in x -> not (z in y))))",
        other => return Err(LogicError::UnknownAxiom(other.to_string())),
    };
    Ok(p(text))
}

fn reject_free(phi: &Formula, reserved: &[&str]) -> Result<(), LogicError> {
    let free = phi.free_idents();
    match reserved.iter().find(|r| free.contains(**r)) {
        Some(r) => Err(LogicError::Capture(r.to_string())),
        None => Ok(()),
    }
}

/// `∀x ∃y ∀z (z ∈ y ↔ (z ∈ x ∧ φ(z)))`
pub fn separation(phi: &Formula) -> Result<Formula, LogicError> {
    reject_free(phi, &["x", "y"])?;
    let body = Formula::iff(Formula::mem("z", "y"), Formula::and(Formula::mem("z", "x"), phi.clone()));
    Ok(Formula::forall("x", Formula::exists("y", Formula::forall("z", body))))
}

/// `∀x ∃y ∀z (z ∈ y ↔ ∃w (w ∈ x ∧ φ(w, z)))`
pub fn replacement(phi: &Formula) -> Result<Formula, LogicError> {
    reject_free(phi, &["x", "y"])?;
    let inner = Formula::exists("w", Formula::and(Formula::mem("w", "x"), phi.clone()));
    let body = Formula::iff(Formula::mem("z", "y"), inner);
    Ok(Formula::forall("x", Formula::exists("y", Formula::forall("z", body))))
}

/// Bounds every quantifier by a fresh constant, returned alongside.
pub fn relativize(phi: &Formula) -> (Formula, String) {
    let used = phi.all_idents();
    let mut m = "M".to_string();
    let mut k = 0;
    while used.contains(&m) {
        k += 1;
        m = format!("M{k}");
    }
    fn go(f: &Formula, m: &str) -> Formula {
        let guard = |x: &str| Formula::mem(x, m);
        match f {
            Formula::Mem(..) | Formula::Eq(..) => f.clone(),
            Formula::Not(a) => Formula::not(go(a, m)),
            Formula::And(a, b) => Formula::and(go(a, m), go(b, m)),
            Formula::Or(a, b) => Formula::or(go(a, m), go(b, m)),
            Formula::Implies(a, b) => Formula::implies(go(a, m), go(b, m)),
            Formula::Iff(a, b) => Formula::iff(go(a, m), go(b, m)),
            Formula::Forall(x, a) => Formula::forall(x, Formula::implies(guard(x), go(a, m))),
            Formula::Exists(x, a) => Formula::exists(x, Formula::and(guard(x), go(a, m))),
        }
    }
    (go(phi, &m), m)
}

/// What the shared evaluator needs from a semantics.
trait Semantics {
    type Obj: Clone;
    type Truth: Copy + Eq;

    fn domain(&self) -> &[Self::Obj];
    fn constant(&self, ident: &str) -> Option<Self::Obj>;
    fn literal(&self, x: &HfSet) -> Result<Self::Obj, LogicError>;
    fn mem(&mut self, a: &Self::Obj, b: &Self::Obj) -> Self::Truth;
    fn eq(&mut self, a: &Self::Obj, b: &Self::Obj) -> Self::Truth;
    fn top(&self) -> Self::Truth;
    fn bottom(&self) -> Self::Truth;
    fn not(&self, a: Self::Truth) -> Self::Truth;
    fn and(&self, a: Self::Truth, b: Self::Truth) -> Self::Truth;
    fn or(&self, a: Self::Truth, b: Self::Truth) -> Self::Truth;
}

struct Evaluator<'a, S: Semantics> {
    sem: &'a mut S,
    env: Vec<(&'a str, usize)>,
    memo: HashMap<(*const Formula, Vec<usize>), S::Truth>,
}

impl<'a, S: Semantics> Evaluator<'a, S> {
    fn new(sem: &'a mut S) -> Self {
        Evaluator { sem, env: Vec::new(), memo: HashMap::new() }
    }

    fn term(&self, t: &Term) -> Result<S::Obj, LogicError> {
        match t {
            Term::Lit(x) => self.sem.literal(x),
            Term::Ident(s) => {
                if let Some((_, i)) = self.env.iter().rev().find(|(v, _)| v == s) {
                    return Ok(self.sem.domain()[*i].clone());
                }
                self.sem.constant(s).ok_or_else(|| LogicError::Unresolved(s.clone()))
            }
        }
    }

    fn eval(&mut self, f: &'a Formula) -> Result<S::Truth, LogicError> {
        let key = (f as *const Formula, self.env.iter().map(|(_, i)| *i).collect::<Vec<_>>());
        if let Some(&t) = self.memo.get(&key) {
            return Ok(t);
        }
        let t = match f {
            Formula::Mem(a, b) => {
                let (a, b) = (self.term(a)?, self.term(b)?);
                self.sem.mem(&a, &b)
            }
            Formula::Eq(a, b) => {
                let (a, b) = (self.term(a)?, self.term(b)?);
                self.sem.eq(&a, &b)
            }
            Formula::Not(a) => {
                let v = self.eval(a)?;
                self.sem.not(v)
            }
            Formula::And(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                self.sem.and(x, y)
            }
            Formula::Or(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                self.sem.or(x, y)
            }
            Formula::Implies(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                let nx = self.sem.not(x);
                self.sem.or(nx, y)
            }
            Formula::Iff(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                let (nx, ny) = (self.sem.not(x), self.sem.not(y));
                let both = self.sem.and(x, y);
                let neither = self.sem.and(nx, ny);
                self.sem.or(both, neither)
            }
            Formula::Forall(x, a) => self.quantify(x, a, true)?,
            Formula::Exists(x, a) => self.quantify(x, a, false)?,
        };
        self.memo.insert(key, t);
        Ok(t)
    }

    fn quantify(&mut self, x: &'a str, body: &'a Formula, universal: bool) -> Result<S::Truth, LogicError> {
        let (mut acc, stop) =
            if universal { (self.sem.top(), self.sem.bottom()) } else { (self.sem.bottom(), self.sem.top()) };
        for i in 0..self.sem.domain().len() {
            self.env.push((x, i));
            let v = self.eval(body);
            self.env.pop();
            let v = v?;
            acc = if universal { self.sem.and(acc, v) } else { self.sem.or(acc, v) };
            if acc == stop {
                break;
            }
        }
        Ok(acc)
    }
}

struct Classical<'c> {
    universe: Vec<HfSet>,
    constants: &'c BTreeMap<String, HfSet>,
}

impl Semantics for Classical<'_> {
    type Obj = HfSet;
    type Truth = bool;

    fn domain(&self) -> &[HfSet] {
        &self.universe
    }

    fn constant(&self, ident: &str) -> Option<HfSet> {
        self.constants.get(ident).cloned()
    }

    fn literal(&self, x: &HfSet) -> Result<HfSet, LogicError> {
        Ok(x.clone())
    }

    fn mem(&mut self, a: &HfSet, b: &HfSet) -> bool {
        b.contains(a)
    }

    fn eq(&mut self, a: &HfSet, b: &HfSet) -> bool {
        a == b
    }

    fn top(&self) -> bool {
        true
    }

    fn bottom(&self) -> bool {
        false
    }

    fn not(&self, a: bool) -> bool {
        !a
    }

    fn and(&self, a: bool, b: bool) -> bool {
        a && b
    }

    fn or(&self, a: bool, b: bool) -> bool {
        a || b
    }
}

/// Classical truth with quantifiers over `universe` and the given constants.
pub fn satisfies(universe: &[HfSet], constants: &BTreeMap<String, HfSet>, phi: &Formula) -> Result<bool, LogicError> {
    let mut sem = Classical { universe: universe.to_vec(), constants };
    Evaluator::new(&mut sem).eval(phi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitiveModel {
    carrier: BTreeSet<HfSet>,
    constants: BTreeMap<String, HfSet>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    elements: Vec<String>,
    #[serde(default)]
    constants: BTreeMap<String, String>,
}

impl TransitiveModel {
    pub fn new<I: IntoIterator<Item = HfSet>>(elements: I) -> Result<Self, LogicError> {
        let carrier: BTreeSet<HfSet> = elements.into_iter().collect();
        for member in &carrier {
            if let Some(missing) = member.iter().find(|y| !carrier.contains(*y)) {
                return Err(LogicError::NotTransitive { member: member.clone(), missing: missing.clone() });
            }
        }
        Ok(TransitiveModel { carrier, constants: BTreeMap::new() })
    }

    /// The von Neumann ordinal `n = {0, ..., n-1}`.
    pub fn ordinal(n: usize) -> Self {
        Self::new((0..n).map(HfSet::von_neumann)).expect("ordinals are transitive")
    }

    /// `{"elements": ["[]", "[[]]"], "constants": {"zero": "[]"}}`
    pub fn from_json(text: &str) -> Result<Self, LogicError> {
        let doc: ModelDoc = serde_json::from_str(text).map_err(|e| LogicError::Format(e.to_string()))?;
        let elements = doc.elements.iter().map(|s| s.parse::<HfSet>()).collect::<Result<Vec<_>, _>>()?;
        let mut model = Self::new(elements)?;
        for (k, v) in doc.constants {
            let x: HfSet = v.parse()?;
            model.add_constant(k, x)?;
        }
        Ok(model)
    }

    pub fn add_constant(&mut self, name: impl Into<String>, x: HfSet) -> Result<(), LogicError> {
        if !self.carrier.contains(&x) {
            return Err(LogicError::LiteralOutsideModel(x));
        }
        self.constants.insert(name.into(), x);
        Ok(())
    }

    pub fn elements(&self) -> impl Iterator<Item = &HfSet> {
        self.carrier.iter()
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn constants(&self) -> &BTreeMap<String, HfSet> {
        &self.constants
    }

    /// The carrier as a single set.
    pub fn as_set(&self) -> HfSet {
        HfSet::from_elements(self.carrier.iter().cloned())
    }
}

/// `M ⊨ φ`, quantifiers ranging over the carrier.
pub fn models(m: &TransitiveModel, phi: &Formula) -> Result<bool, LogicError> {
    if let Some(x) = phi.literals().into_iter().find(|x| !m.carrier.contains(x)) {
        return Err(LogicError::LiteralOutsideModel(x));
    }
    let universe: Vec<HfSet> = m.carrier.iter().cloned().collect();
    satisfies(&universe, &m.constants, phi)
}

/// The names that quantifiers range over, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameContext {
    ids: Vec<NameId>,
}

impl NameContext {
    pub fn new(ids: Vec<NameId>) -> Self {
        NameContext { ids }
    }

    /// Every labelled name of the table, in label order.
    pub fn labelled(table: &NameTable<FinBoolAlg>) -> Self {
        NameContext { ids: table.labelled().map(|(_, id)| id).collect() }
    }

    pub fn ids(&self) -> &[NameId] {
        &self.ids
    }

    fn validate(&self, table: &NameTable<FinBoolAlg>) -> Result<(), LogicError> {
        match self.ids.iter().find(|id| id.index() >= table.len()) {
            Some(id) => Err(LogicError::UnknownName(id.index())),
            None => Ok(()),
        }
    }
}

struct Boolean<'t> {
    table: NameTable<FinBoolAlg>,
    labels: &'t NameTable<FinBoolAlg>,
    ctx: Vec<NameId>,
    checks: HashMap<HfSet, NameId>,
    in_memo: HashMap<(NameId, NameId), Element>,
    sub_memo: HashMap<(NameId, NameId), Element>,
}

impl Boolean<'_> {
    fn alg(&self) -> &FinBoolAlg {
        self.table.carrier()
    }

    /// `[[m ∈ n]] = ⋁_{(n′,q) ∈ n} q ∧ [[m = n′]]`
    fn member(&mut self, m: NameId, n: NameId) -> Element {
        if let Some(&v) = self.in_memo.get(&(m, n)) {
            return v;
        }
        let mut acc = self.alg().zero();
        for (child, q) in self.table.entries(n).to_vec() {
            let e = self.equal(m, child);
            acc = self.join(acc, self.meet(q, e));
        }
        self.in_memo.insert((m, n), acc);
        acc
    }

    /// `[[m ⊆ n]] = ⋀_{(m′,p) ∈ m} ¬p ∨ [[m′ ∈ n]]`
    fn subset(&mut self, m: NameId, n: NameId) -> Element {
        if let Some(&v) = self.sub_memo.get(&(m, n)) {
            return v;
        }
        let mut acc = self.alg().one();
        for (child, p) in self.table.entries(m).to_vec() {
            let inside = self.member(child, n);
            let np = self.complement(p);
            acc = self.meet(acc, self.join(np, inside));
        }
        self.sub_memo.insert((m, n), acc);
        acc
    }

    fn equal(&mut self, m: NameId, n: NameId) -> Element {
        let a = self.subset(m, n);
        let b = self.subset(n, m);
        self.meet(a, b)
    }

    fn meet(&self, a: Element, b: Element) -> Element {
        self.alg().meet(a, b).expect("one algebra")
    }

    fn join(&self, a: Element, b: Element) -> Element {
        self.alg().join(a, b).expect("one algebra")
    }

    fn complement(&self, a: Element) -> Element {
        self.alg().complement(a).expect("one algebra")
    }
}

impl Semantics for Boolean<'_> {
    type Obj = NameId;
    type Truth = Element;

    fn domain(&self) -> &[NameId] {
        &self.ctx
    }

    fn constant(&self, ident: &str) -> Option<NameId> {
        self.labels.lookup(ident)
    }

    fn literal(&self, x: &HfSet) -> Result<NameId, LogicError> {
        Ok(self.checks[x])
    }

    fn mem(&mut self, a: &NameId, b: &NameId) -> Element {
        self.member(*a, *b)
    }

    fn eq(&mut self, a: &NameId, b: &NameId) -> Element {
        self.equal(*a, *b)
    }

    fn top(&self) -> Element {
        self.alg().one()
    }

    fn bottom(&self) -> Element {
        self.alg().zero()
    }

    fn not(&self, a: Element) -> Element {
        self.complement(a)
    }

    fn and(&self, a: Element, b: Element) -> Element {
        self.meet(a, b)
    }

    fn or(&self, a: Element, b: Element) -> Element {
        self.join(a, b)
    }
}

/// The truth value `[[φ]]`. Literals stand for their check names;
/// quantifiers range over `ctx`; other identifiers are table labels.
pub fn bval(phi: &Formula, table: &NameTable<FinBoolAlg>, ctx: &NameContext) -> Result<Element, LogicError> {
    ctx.validate(table)?;
    let mut work = table.clone();
    let checks: HashMap<HfSet, NameId> = phi
        .literals()
        .into_iter()
        .map(|x| {
            let id = work.check(&x);
            (x, id)
        })
        .collect();
    let mut sem = Boolean {
        table: work,
        labels: table,
        ctx: ctx.ids.clone(),
        checks,
        in_memo: HashMap::new(),
        sub_memo: HashMap::new(),
    };
    Evaluator::new(&mut sem).eval(phi)
}

/// `p ⊩ φ` iff `p ≤ [[φ]]`.
pub fn forces(p: Element, phi: &Formula, table: &NameTable<FinBoolAlg>, ctx: &NameContext) -> Result<bool, LogicError> {
    let alg = table.carrier();
    if !alg.owns(p) {
        return Err(LogicError::ForeignCondition);
    }
    if p == alg.zero() {
        return Err(LogicError::ZeroCondition);
    }
    let v = bval(phi, table, ctx)?;
    Ok(alg.leq(p, v).expect("one algebra"))
}

/// `M[G] ⊨ φ`: names denote their values under `G`, quantifiers range over
/// the values of the context names.
pub fn models_extension<G: FilterView<Element> + ?Sized>(
    table: &NameTable<FinBoolAlg>,
    ctx: &NameContext,
    g: &G,
    phi: &Formula,
) -> Result<bool, LogicError> {
    ctx.validate(table)?;
    let universe = table.eval_all(&ctx.ids, g)?;
    let labelled: Vec<(&str, NameId)> = table.labelled().collect();
    let ids: Vec<NameId> = labelled.iter().map(|(_, id)| *id).collect();
    let values = table.eval_all(&ids, g)?;
    let constants: BTreeMap<String, HfSet> = labelled.iter().map(|(l, _)| l.to_string()).zip(values).collect();
    satisfies(&universe, &constants, phi)
}

/// The definition of forcing read literally: `M[G] ⊨ φ` for every
/// ultrafilter `G` containing `p`.
pub fn forces_by_ultrafilters(
    p: Element,
    phi: &Formula,
    table: &NameTable<FinBoolAlg>,
    ctx: &NameContext,
) -> Result<bool, LogicError> {
    let alg = table.carrier();
    if !alg.owns(p) {
        return Err(LogicError::ForeignCondition);
    }
    if p == alg.zero() {
        return Err(LogicError::ZeroCondition);
    }
    let ultrafilters: Vec<Subset> = alg.ultrafilters().into_iter().filter(|g| g.contains(p)).collect();
    for g in &ultrafilters {
        if !models_extension(table, ctx, g, phi)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hf(s: &str) -> HfSet {
        s.parse().unwrap()
    }

    #[test]
    fn pairing_parses_and_prints_verbatim() {
        let src = "forall x forall y exists z forall w (w in z <-> (w = x or w = y))";
        let f = parse(src).unwrap();
        assert_eq!(f.to_string(), src);
        assert_eq!(f, axiom("pairing").unwrap());
        let unicode = parse("∀x ∀y ∃z ∀w (w ∈ z ↔ (w = x ∨ w = y))").unwrap();
        assert_eq!(unicode, f);
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("a in b or c in d and e in f -> g = h -> i = j").unwrap();
        let want = Formula::implies(
            Formula::or(Formula::mem("a", "b"), Formula::and(Formula::mem("c", "d"), Formula::mem("e", "f"))),
            Formula::implies(Formula::eq("g", "h"), Formula::eq("i", "j")),
        );
        assert_eq!(f, want);
        let g = parse("a = a <-> b = b <-> c = c").unwrap();
        assert_eq!(g, Formula::iff(Formula::iff(Formula::eq("a", "a"), Formula::eq("b", "b")), Formula::eq("c", "c")));
        assert_eq!(parse("not (a in b)").unwrap(), Formula::not(Formula::mem("a", "b")));
        assert_eq!(parse("not a in b").unwrap(), Formula::not(Formula::mem("a", "b")));
        let q = parse("forall x x in y -> y = y").unwrap();
        assert_eq!(q, Formula::forall("x", Formula::implies(Formula::mem("x", "y"), Formula::eq("y", "y"))));
        assert_eq!(q.to_string(), "forall x (x in y -> y = y)");
        let nested = Formula::implies(Formula::forall("x", Formula::eq("x", "x")), Formula::eq("a", "a"));
        assert_eq!(nested.to_string(), "(forall x (x = x)) -> a = a");
        assert_eq!(parse(&nested.to_string()).unwrap(), nested);
    }

    #[test]
    fn literals_in_terms() {
        let f = parse("[] in [[],[[]]] and ∅̌ = ∅").unwrap();
        assert_eq!(f.literals().len(), 2);
        assert_eq!(f.to_string(), "[] in [[],[[]]] and [] = []");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let cases = [
            ("a in", 4),
            ("forall (x = x)", 7),
            ("a in b and forall x (x = x)", 11),
            ("(a = b", 6),
            ("a # b", 2),
            ("a in [[],", 9),
            ("a = b c", 6),
        ];
        for (src, pos) in cases {
            match parse(src) {
                Err(LogicError::Syntax { pos: got, .. }) => assert_eq!(got, pos, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }

    #[test]
    fn relativization() {
        let (r, m) = relativize(&parse("forall x (x = x)").unwrap());
        assert_eq!(m, "M");
        assert_eq!(r.to_string(), "forall x (x in M -> x = x)");
        let (r, _) = relativize(&parse("exists x (x in y)").unwrap());
        assert_eq!(r.to_string(), "exists x (x in M and x in y)");
        let qf = parse("a in b").unwrap();
        assert_eq!(relativize(&qf).0, qf);
        let (_, fresh) = relativize(&parse("forall M (M = M)").unwrap());
        assert_eq!(fresh, "M1");
    }

    #[test]
    fn classical_examples() {
        let three = TransitiveModel::ordinal(3);
        assert!(models(&three, &axiom("extensionality").unwrap()).unwrap());
        assert!(!models(&three, &axiom("pairing").unwrap()).unwrap());
        let one = TransitiveModel::ordinal(1);
        assert!(models(&one, &parse("exists x (x = x)").unwrap()).unwrap());
        assert!(matches!(models(&one, &parse("[[]] in [[]]").unwrap()), Err(LogicError::LiteralOutsideModel(_))));
        assert!(matches!(models(&one, &parse("a = a").unwrap()), Err(LogicError::Unresolved(_))));
        let sep = separation(&parse("z = z").unwrap()).unwrap();
        assert!(models(&three, &sep).unwrap());
        assert!(matches!(separation(&parse("x = z").unwrap()), Err(LogicError::Capture(_))));
        assert!(matches!(axiom("choice"), Err(LogicError::UnknownAxiom(_))));
        assert!(matches!(TransitiveModel::new([hf("[[[]]]")]), Err(LogicError::NotTransitive { .. })));
    }

    #[test]
    fn boolean_examples() {
        let b = FinBoolAlg::standard(2).unwrap();
        let a1 = b.element_from_labels(&["a"]).unwrap();
        let a2 = b.element_from_labels(&["b"]).unwrap();
        let mut t = NameTable::new(b.clone());
        let e = t.check(&HfSet::empty());
        let n = t.insert([(e, a1)]).unwrap();
        t.set_label("n", n).unwrap();
        let ctx = NameContext::labelled(&t);
        let v = |s: &str| bval(&parse(s).unwrap(), &t, &ctx).unwrap();
        assert_eq!(v("[] = []"), b.one());
        assert_eq!(v("[] in n"), a1);
        assert_eq!(v("n = []"), a2);
        assert!(forces(a1, &parse("[] in n").unwrap(), &t, &ctx).unwrap());
        assert!(!forces(b.one(), &parse("[] in n").unwrap(), &t, &ctx).unwrap());
        assert_eq!(forces(b.zero(), &parse("[] in n").unwrap(), &t, &ctx), Err(LogicError::ZeroCondition));
        let [ga, gb] = <[Subset; 2]>::try_from(b.ultrafilters()).unwrap();
        let phi = parse("[] in n").unwrap();
        assert!(models_extension(&t, &ctx, &ga, &phi).unwrap());
        assert!(!models_extension(&t, &ctx, &gb, &phi).unwrap());
    }
}
