//! Identity DSL: products, associators, commutators, anti-commutators and
//! Jacobians over named variables, plus variety-definition files.
//!
//! ```text
//! file      := block+
//! block     := "variety" NAME "{" (identity ";")* | "free" "}"
//! identity  := expr "=" expr
//! expr      := ["+"|"-"] term (("+"|"-") term)*
//! term      := [rational ["*"]] product | "0"
//! product   := factor ["*" factor]
//! factor    := VAR | "(" expr ")" | "(" expr "," expr "," expr ")"
//!            | "[" expr "," expr "]" | "{" expr "," expr "}"
//!            | "J(" expr "," expr "," expr ")" | "J[" expr "," expr "," expr "]"
//! rational  := INT ["/" INT]
//! ```
//!
//! A chain such as `a*b*c` is rejected: there is no implicit association.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::monomial::{Generator, Monomial};
use crate::polynomial::{Polynomial, Rational};

/// How bracket sugar is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BracketMode {
    /// `[a,b] = a*b - b*a`, `{a,b} = a*b + b*a`, `J` built from commutators.
    #[default]
    Expand,
    /// The text is an identity of a derived algebra: `*`, `[,]` and `{,}`
    /// all denote its single product, and `J(a,b,c)` is the cyclic sum
    /// `(a*b)*c + (b*c)*a + (c*a)*b` of that product.
    Derived,
}

/// An identity `lhs - rhs = 0` over named variables. Variable `i` (0-based
/// in `vars`) is the generator `x_{i+1}` of `poly`.
#[derive(Clone, PartialEq, Eq)]
pub struct Identity {
    pub name: Option<String>,
    pub vars: Vec<String>,
    pub poly: Polynomial,
    pub multilinear: bool,
}

impl Identity {
    pub fn new(vars: Vec<String>, poly: Polynomial) -> Self {
        let multilinear = is_multilinear(&poly, vars.len());
        Identity {
            name: None,
            vars,
            poly,
            multilinear,
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn degree(&self) -> u32 {
        self.poly.terms().next().map_or(0, |(m, _)| m.degree())
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    /// Renders `poly = 0` with variable names.
    pub fn render(&self) -> String {
        format!("{} = 0", self.poly.render_with(&self.vars))
    }
}

impl fmt::Debug for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = &self.name {
            write!(f, "{n}: ")?;
        }
        f.write_str(&self.render())
    }
}

fn is_multilinear(p: &Polynomial, nvars: usize) -> bool {
    p.terms().all(|(m, _)| {
        let d = m.multidegree();
        d.counts().len() == nvars && d.is_multilinear()
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyDef {
    pub name: String,
    pub identities: Vec<Identity>,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    mode: BracketMode,
    vars: Vec<String>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, mode: BracketMode) -> Self {
        Parser {
            src,
            pos: 0,
            mode,
            vars: Vec::new(),
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        loop {
            let rest = &self.src[self.pos..];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') || trimmed.starts_with("//") {
                let end = trimmed.find('\n').unwrap_or(trimmed.len());
                self.pos += end;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn peek2(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().nth(1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn ident(&mut self, allow_dash: bool) -> Option<String> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_' || (allow_dash && c == '-')))
            .map_or(rest.len(), |(i, _)| i);
        self.pos += end;
        Some(rest[..end].to_string())
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let end = rest
            .char_indices()
            .find(|&(_, c)| !c.is_ascii_digit())
            .map_or(rest.len(), |(i, _)| i);
        if end == 0 {
            return None;
        }
        self.pos += end;
        rest[..end].parse().ok()
    }

    fn var(&mut self, name: String) -> Polynomial {
        let idx = match self.vars.iter().position(|v| *v == name) {
            Some(i) => i,
            None => {
                self.vars.push(name);
                self.vars.len() - 1
            }
        };
        Polynomial::monomial(Monomial::leaf(
            Generator::new(idx as u16 + 1).expect("index >= 1"),
        ))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero();
        let mut sign = Rational::one();
        if self.eat('-') {
            sign = -sign;
        } else {
            self.eat('+');
        }
        loop {
            let t = self.term()?;
            acc.add_scaled(&t, &sign);
            if self.eat('+') {
                sign = Rational::one();
            } else if self.eat('-') {
                sign = -Rational::one();
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let start = self.pos;
        if let Some(n) = self.integer() {
            let mut c = Rational::from_integer(n);
            if self.eat('/') {
                let d = self
                    .integer()
                    .ok_or_else(|| self.err("expected denominator"))?;
                if d.is_zero() {
                    return Err(self.err("zero denominator"));
                }
                c /= Rational::from_integer(d);
            }
            let has_factor = self.eat('*')
                || matches!(self.peek(), Some(ch) if ch.is_ascii_alphabetic() || "([{".contains(ch));
            if !has_factor {
                if c.is_zero() {
                    return Ok(Polynomial::zero());
                }
                self.pos = start;
                return Err(self.err("constant terms are not allowed"));
            }
            let p = self.product()?;
            return Ok(p.scale(&c));
        }
        self.product()
    }

    fn product(&mut self) -> Result<Polynomial> {
        let left = self.factor()?;
        if !self.eat('*') {
            return Ok(left);
        }
        let right = self.factor()?;
        if self.peek() == Some('*') {
            return Err(self.err("ambiguous product: parenthesize nested products"));
        }
        Ok(self.mul(&left, &right))
    }

    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a * b
    }

    fn commutator(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        match self.mode {
            BracketMode::Expand => &(a * b) - &(b * a),
            BracketMode::Derived => a * b,
        }
    }

    fn anticommutator(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        match self.mode {
            BracketMode::Expand => &(a * b) + &(b * a),
            BracketMode::Derived => a * b,
        }
    }

    fn jacobian(&self, a: &Polynomial, b: &Polynomial, c: &Polynomial) -> Polynomial {
        let br = |x: &Polynomial, y: &Polynomial| self.commutator(x, y);
        let t1 = br(&br(a, b), c);
        let t2 = br(&br(b, c), a);
        let t3 = br(&br(c, a), b);
        &(&t1 + &t2) + &t3
    }

    /// Comma-separated expressions up to `close`.
    fn args(&mut self, close: char) -> Result<Vec<Polynomial>> {
        let mut out = vec![self.expr()?];
        while self.eat(',') {
            out.push(self.expr()?);
        }
        self.expect(close)?;
        Ok(out)
    }

    fn arity(&self, form: &str, expected: usize, got: &[Polynomial]) -> Result<()> {
        if got.len() != expected {
            return Err(Error::Arity {
                form: form.to_string(),
                expected,
                found: got.len(),
            });
        }
        Ok(())
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let args = self.args(')')?;
                match args.len() {
                    1 => Ok(args.into_iter().next().unwrap()),
                    3 => {
                        let ab_c = &(&args[0] * &args[1]) * &args[2];
                        let a_bc = &args[0] * &(&args[1] * &args[2]);
                        Ok(&ab_c - &a_bc)
                    }
                    _ => self.arity("(,,)", 3, &args).map(|_| unreachable!()),
                }
            }
            Some('[') => {
                self.pos += 1;
                let args = self.args(']')?;
                self.arity("[,]", 2, &args)?;
                Ok(self.commutator(&args[0], &args[1]))
            }
            Some('{') => {
                self.pos += 1;
                let args = self.args('}')?;
                self.arity("{,}", 2, &args)?;
                Ok(self.anticommutator(&args[0], &args[1]))
            }
            Some('J') if matches!(self.peek2(), Some('(') | Some('[')) => {
                self.pos += 1;
                let close = if self.eat('(') {
                    ')'
                } else {
                    self.expect('[')?;
                    ']'
                };
                let args = self.args(close)?;
                self.arity("J", 3, &args)?;
                Ok(self.jacobian(&args[0], &args[1], &args[2]))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.ident(false).expect("identifier start");
                Ok(self.var(name))
            }
            Some(c) if c.is_ascii_digit() => Err(self.err("unexpected number")),
            Some(c) if "+-*/=;,)]}".contains(c) => Err(self.err(format!("unexpected `{c}`"))),
            Some(c) => Err(Error::UnknownSymbol(c.to_string())),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn identity(&mut self) -> Result<Identity> {
        let lhs = self.expr()?;
        self.expect('=')?;
        let rhs = self.expr()?;
        let vars = std::mem::take(&mut self.vars);
        Ok(Identity::new(vars, &lhs - &rhs))
    }
}

/// Parses an expression; returns the polynomial and its variable names in
/// order of first appearance.
pub fn parse_expression(text: &str, mode: BracketMode) -> Result<(Polynomial, Vec<String>)> {
    let mut p = Parser::new(text, mode);
    let e = p.expr()?;
    if !p.at_end() {
        return Err(p.err("trailing input"));
    }
    Ok((e, p.vars))
}

/// Parses `LHS = RHS`. A bare expression is read as `expr = 0`.
pub fn parse_identity(text: &str, mode: BracketMode) -> Result<Identity> {
    let mut p = Parser::new(text, mode);
    let lhs = p.expr()?;
    let rhs = if p.eat('=') {
        p.expr()?
    } else {
        Polynomial::zero()
    };
    if !p.at_end() {
        return Err(p.err("trailing input"));
    }
    Ok(Identity::new(p.vars, &lhs - &rhs))
}

/// Parses `E0 = E1 = ... = Ek` into the identities `E0 - E1`, `E1 - E2`, ...
/// over a shared variable list. A single `E0 = E1` gives one identity.
pub fn parse_identity_chain(text: &str, mode: BracketMode) -> Result<Vec<Identity>> {
    let mut p = Parser::new(text, mode);
    let mut sides = vec![p.expr()?];
    while p.eat('=') {
        sides.push(p.expr()?);
    }
    if !p.at_end() {
        return Err(p.err("trailing input"));
    }
    if sides.len() == 1 {
        sides.push(Polynomial::zero());
    }
    Ok(sides
        .windows(2)
        .map(|w| Identity::new(p.vars.clone(), &w[0] - &w[1]))
        .collect())
}

pub fn parse_variety_file(text: &str) -> Result<Vec<VarietyDef>> {
    let mut p = Parser::new(text, BracketMode::Expand);
    let mut out: Vec<VarietyDef> = Vec::new();
    let mut seen = HashSet::new();
    while !p.at_end() {
        match p.ident(false).as_deref() {
            Some("variety") => {}
            _ => return Err(p.err("expected `variety`")),
        }
        let name = p
            .ident(true)
            .ok_or_else(|| p.err("expected variety name"))?;
        if !seen.insert(name.clone()) {
            return Err(Error::DuplicateVariety(name));
        }
        p.expect('{')?;
        let mut identities = Vec::new();
        let save = p.pos;
        if p.ident(false).as_deref() == Some("free") {
            p.eat(';');
            p.expect('}')?;
        } else {
            p.pos = save;
            while !p.eat('}') {
                identities.push(p.identity()?);
                if !p.eat(';') {
                    p.expect('}')?;
                    break;
                }
            }
            if identities.is_empty() {
                return Err(Error::EmptyVariety(name));
            }
        }
        out.push(VarietyDef { name, identities });
    }
    Ok(out)
}
