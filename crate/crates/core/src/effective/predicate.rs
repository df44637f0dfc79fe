//! Bounded-quantifier arithmetic over the naturals.
//!
//! A predicate definition looks like
//!
//! ```text
//! P(n) := exists y < n . y * y = n
//! ```
//!
//! Grammar (EBNF):
//!
//! ```text
//! definition := IDENT "(" [ IDENT { "," IDENT } ] ")" ":=" formula
//! formula    := quantifier | disjunction
//! quantifier := ( "forall" | "exists" ) IDENT "<" term "." formula
//! disjunction:= conjunction { "or" conjunction }
//! conjunction:= negation { "and" negation }
//! negation   := "not" negation | quantifier | atom
//! atom       := "true" | "false" | term CMP term | "(" formula ")"
//! CMP        := "=" | "!=" | "<" | "<=" | ">" | ">="
//! term       := product { "+" product }
//! product    := factor { ( "*" | "mod" ) factor }
//! factor     := NAT | IDENT | "(" term ")"
//! ```
//!
//! A quantifier body extends as far to the right as possible. `#` starts a
//! comment that runs to the end of the line.
//!
//! Arithmetic saturates at `u64::MAX`, and `a mod 0 = a`, so every term is
//! total and evaluation always terminates.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(u64),
    LParen,
    RParen,
    Comma,
    Define,
    Dot,
    Plus,
    Star,
    Mod,
    Cmp(CmpOp),
    And,
    Or,
    Not,
    Forall,
    Exists,
    True,
    False,
}

/// Comparison operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    fn apply(self, a: u64, b: u64) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Arithmetic term. Variables are resolved to environment slots at parse time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Nat(u64),
    Var { slot: usize, name: String },
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Mod(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Const(bool),
    Cmp(CmpOp, Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Bounded {
        quantifier: Quantifier,
        var: String,
        bound: Term,
        body: Box<Formula>,
    },
}

/// A parsed, closed predicate definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateSpec {
    name: String,
    params: Vec<String>,
    body: Formula,
}

impl PredicateSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }

    /// Evaluates the predicate at `args`, which must match the parameter list.
    pub fn eval(&self, args: &[u64]) -> Result<bool> {
        if args.len() != self.params.len() {
            return Err(Error::Arity {
                name: self.name.clone(),
                expected: self.params.len(),
                found: args.len(),
            });
        }
        Ok(self.eval_unchecked(args))
    }

    /// Evaluation without the arity check. Panics on a short argument list.
    pub fn eval_unchecked(&self, args: &[u64]) -> bool {
        let mut env = Vec::with_capacity(self.params.len() + 4);
        env.extend_from_slice(args);
        eval_formula(&self.body, &mut env)
    }

    /// Fails with an arity error unless the predicate takes exactly `n` arguments.
    pub fn expect_arity(&self, n: usize) -> Result<()> {
        if self.params.len() == n {
            Ok(())
        } else {
            Err(Error::Arity {
                name: self.name.clone(),
                expected: n,
                found: self.params.len(),
            })
        }
    }
}

fn eval_term(t: &Term, env: &[u64]) -> u64 {
    match t {
        Term::Nat(n) => *n,
        Term::Var { slot, .. } => env[*slot],
        Term::Add(a, b) => eval_term(a, env).saturating_add(eval_term(b, env)),
        Term::Mul(a, b) => eval_term(a, env).saturating_mul(eval_term(b, env)),
        Term::Mod(a, b) => {
            let a = eval_term(a, env);
            match eval_term(b, env) {
                0 => a,
                b => a % b,
            }
        }
    }
}

fn eval_formula(f: &Formula, env: &mut Vec<u64>) -> bool {
    match f {
        Formula::Const(b) => *b,
        Formula::Cmp(op, a, b) => op.apply(eval_term(a, env), eval_term(b, env)),
        Formula::Not(a) => !eval_formula(a, env),
        Formula::And(a, b) => eval_formula(a, env) && eval_formula(b, env),
        Formula::Or(a, b) => eval_formula(a, env) || eval_formula(b, env),
        Formula::Bounded {
            quantifier,
            bound,
            body,
            ..
        } => {
            let bound = eval_term(bound, env);
            env.push(0);
            let slot = env.len() - 1;
            let mut result = matches!(quantifier, Quantifier::Forall);
            for v in 0..bound {
                env[slot] = v;
                let holds = eval_formula(body, env);
                match quantifier {
                    Quantifier::Forall if !holds => {
                        result = false;
                        break;
                    }
                    Quantifier::Exists if holds => {
                        result = true;
                        break;
                    }
                    _ => {}
                }
            }
            env.pop();
            result
        }
    }
}

// ---------------------------------------------------------------------------
// Rendering

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Nat(n) => write!(f, "{n}"),
            Term::Var { name, .. } => f.write_str(name),
            Term::Add(a, b) => write!(f, "({a} + {b})"),
            Term::Mul(a, b) => write!(f, "({a} * {b})"),
            Term::Mod(a, b) => write!(f, "({a} mod {b})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(true) => f.write_str("true"),
            Formula::Const(false) => f.write_str("false"),
            Formula::Cmp(op, a, b) => write!(f, "{a} {} {b}", op.symbol()),
            Formula::Not(a) => write!(f, "not ({a})"),
            Formula::And(a, b) => write!(f, "({a} and {b})"),
            Formula::Or(a, b) => write!(f, "({a} or {b})"),
            Formula::Bounded {
                quantifier,
                var,
                bound,
                body,
            } => {
                let q = match quantifier {
                    Quantifier::Forall => "forall",
                    Quantifier::Exists => "exists",
                };
                write!(f, "({q} {var} < {bound} . {body})")
            }
        }
    }
}

impl fmt::Display for PredicateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) := {}", self.name, self.params.join(", "), self.body)
    }
}

// ---------------------------------------------------------------------------
// Lexing

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let two = |a: u8, b: u8| c == a && bytes.get(i + 1) == Some(&b);
        let tok = if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i].parse::<u64>().map_err(|_| Error::Syntax {
                pos: start,
                message: "numeral out of range".into(),
            })?;
            out.push((Tok::Nat(n), start));
            continue;
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &src[start..i];
            let tok = match word {
                "mod" => Tok::Mod,
                "and" => Tok::And,
                "or" => Tok::Or,
                "not" => Tok::Not,
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                "true" => Tok::True,
                "false" => Tok::False,
                _ => Tok::Ident(word.to_string()),
            };
            out.push((tok, start));
            continue;
        } else if two(b':', b'=') {
            i += 2;
            Tok::Define
        } else if two(b'!', b'=') {
            i += 2;
            Tok::Cmp(CmpOp::Ne)
        } else if two(b'<', b'=') {
            i += 2;
            Tok::Cmp(CmpOp::Le)
        } else if two(b'>', b'=') {
            i += 2;
            Tok::Cmp(CmpOp::Ge)
        } else {
            i += 1;
            match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b'.' => Tok::Dot,
                b'+' => Tok::Plus,
                b'*' => Tok::Star,
                b'=' => Tok::Cmp(CmpOp::Eq),
                b'<' => Tok::Cmp(CmpOp::Lt),
                b'>' => Tok::Cmp(CmpOp::Gt),
                _ => {
                    return Err(Error::Syntax {
                        pos: start,
                        message: format!("unexpected character {:?}", c as char),
                    })
                }
            }
        };
        out.push((tok, start));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parsing

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
    scope: Vec<String>,
}

enum PErr {
    Syntax(usize, String),
    Unbound(usize, String),
}

impl PErr {
    fn pos(&self) -> usize {
        match self {
            PErr::Syntax(p, _) | PErr::Unbound(p, _) => *p,
        }
    }
}

impl From<PErr> for Error {
    fn from(e: PErr) -> Self {
        match e {
            PErr::Syntax(pos, message) => Error::Syntax { pos, message },
            PErr::Unbound(pos, name) => Error::Unbound { pos, name },
        }
    }
}

type PResult<T> = std::result::Result<T, PErr>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(PErr::Syntax(self.offset(), msg.into()))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail("expected identifier"),
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        match self.peek() {
            Some(Tok::Forall) | Some(Tok::Exists) => self.quantifier(),
            _ => self.disjunction(),
        }
    }

    fn quantifier(&mut self) -> PResult<Formula> {
        let quantifier = if self.eat(&Tok::Forall) {
            Quantifier::Forall
        } else {
            self.expect(&Tok::Exists, "quantifier")?;
            Quantifier::Exists
        };
        let var = self.ident()?;
        self.expect(&Tok::Cmp(CmpOp::Lt), "'<' after bound variable")?;
        // The bound is evaluated outside the scope of the new variable.
        let bound = self.term()?;
        self.expect(&Tok::Dot, "'.' after quantifier bound")?;
        self.scope.push(var.clone());
        let body = self.formula();
        self.scope.pop();
        Ok(Formula::Bounded {
            quantifier,
            var,
            bound,
            body: Box::new(body?),
        })
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let rhs = self.conjunction()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.negation()?;
        while self.eat(&Tok::And) {
            let rhs = self.negation()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn negation(&mut self) -> PResult<Formula> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::Not(Box::new(self.negation()?)))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => self.quantifier(),
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Formula> {
        match self.peek() {
            Some(Tok::True) => {
                self.pos += 1;
                return Ok(Formula::Const(true));
            }
            Some(Tok::False) => {
                self.pos += 1;
                return Ok(Formula::Const(false));
            }
            _ => {}
        }
        let save = self.pos;
        match self.comparison() {
            Ok(f) => Ok(f),
            Err(cmp_err) if self.toks.get(save).map(|(t, _)| t) == Some(&Tok::LParen) => {
                self.pos = save + 1;
                let grouped = self
                    .formula()
                    .and_then(|f| self.expect(&Tok::RParen, "')'").map(|_| f));
                match grouped {
                    Ok(f) => Ok(f),
                    Err(group_err) => {
                        // Report whichever reading got further.
                        if group_err.pos() >= cmp_err.pos() {
                            Err(group_err)
                        } else {
                            Err(cmp_err)
                        }
                    }
                }
            }
            Err(e) => Err(e),
        }
    }

    fn comparison(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        let op = match self.peek() {
            Some(Tok::Cmp(op)) => *op,
            _ => return self.fail("expected comparison operator"),
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok(Formula::Cmp(op, lhs, rhs))
    }

    fn term(&mut self) -> PResult<Term> {
        let mut lhs = self.product()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.product()?;
            lhs = Term::Add(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> PResult<Term> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(&Tok::Star) {
                let rhs = self.factor()?;
                lhs = Term::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.eat(&Tok::Mod) {
                let rhs = self.factor()?;
                lhs = Term::Mod(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> PResult<Term> {
        match self.peek().cloned() {
            Some(Tok::Nat(n)) => {
                self.pos += 1;
                Ok(Term::Nat(n))
            }
            Some(Tok::Ident(name)) => {
                let at = self.offset();
                self.pos += 1;
                match self.scope.iter().rposition(|v| *v == name) {
                    Some(slot) => Ok(Term::Var { slot, name }),
                    None => Err(PErr::Unbound(at, name)),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => self.fail("expected term"),
        }
    }
}

/// Parses a definition `NAME(params) := formula`.
pub fn parse_predicate(text: &str) -> Result<PredicateSpec> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: text.len(),
        scope: Vec::new(),
    };
    let to_err = Error::from;
    let name = p.ident().map_err(to_err)?;
    p.expect(&Tok::LParen, "'('").map_err(to_err)?;
    let mut params = Vec::new();
    if !p.eat(&Tok::RParen) {
        loop {
            let v = p.ident().map_err(to_err)?;
            if params.contains(&v) {
                return Err(Error::Syntax {
                    pos: p.offset(),
                    message: format!("duplicate parameter {v}"),
                });
            }
            params.push(v);
            if p.eat(&Tok::RParen) {
                break;
            }
            p.expect(&Tok::Comma, "',' or ')'").map_err(to_err)?;
        }
    }
    p.expect(&Tok::Define, "':='").map_err(to_err)?;
    p.scope = params.clone();
    let body = p.formula().map_err(to_err)?;
    if p.pos != toks.len() {
        return Err(Error::Syntax {
            pos: p.offset(),
            message: "unexpected trailing input".into(),
        });
    }
    Ok(PredicateSpec { name, params, body })
}
