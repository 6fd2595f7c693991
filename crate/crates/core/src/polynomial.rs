//! Polynomials of the free magma with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MultiDegree, TermOrder};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Finite linear combination of monomials. Terms are kept in deg-lex order
/// and no stored coefficient is zero.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m);
        match slot {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, c: &Rational) {
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in deg-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        let mut out = Polynomial::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn leading_monomial(&self, order: TermOrder) -> Result<&Monomial> {
        self.terms
            .keys()
            .max_by(|a, b| order.compare(a, b))
            .ok_or(Error::EmptySupport)
    }

    /// Common multidegree of all terms; `None` for the zero polynomial.
    pub fn multidegree(&self) -> Result<Option<MultiDegree>> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Ok(None);
        };
        let d = first.multidegree();
        if it.any(|m| m.multidegree() != d) {
            return Err(Error::Inhomogeneous);
        }
        Ok(Some(d))
    }

    /// Replaces leaf `x_i` by `args[i-1]` and expands bilinearly.
    pub fn substitute(&self, args: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_scaled(&eval_monomial(m, args), c);
        }
        out
    }

    /// Replaces leaf `x_i` by the monomial `args[i-1]`.
    pub fn substitute_monomials(&self, args: &[Monomial]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.substitute(args), c.clone());
        }
        out
    }

    pub fn relabel(&self, map: &[u16]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.relabel(map), c.clone());
        }
        out
    }

    /// Renders with leaf `x_i` printed as `names[i-1]`.
    pub fn render_with(&self, names: &[String]) -> String {
        render(self, |m| render_monomial_named(m, names))
    }

    /// Renders with a custom monomial printer.
    pub fn render_by(&self, mono: impl Fn(&Monomial) -> String) -> String {
        render(self, mono)
    }
}

fn eval_monomial(m: &Monomial, args: &[Polynomial]) -> Polynomial {
    match m.factors() {
        None => args[m.as_leaf().unwrap().index() as usize - 1].clone(),
        Some((l, r)) => &eval_monomial(&l, args) * &eval_monomial(&r, args),
    }
}

pub fn render_monomial_named(m: &Monomial, names: &[String]) -> String {
    match m.factors() {
        None => names[m.as_leaf().unwrap().index() as usize - 1].clone(),
        Some((l, r)) => format!(
            "({}*{})",
            render_monomial_named(&l, names),
            render_monomial_named(&r, names)
        ),
    }
}

fn render(p: &Polynomial, mono: impl Fn(&Monomial) -> String) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (m, c)) in p.terms.iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if !a.is_one() {
            s.push_str(&format!("{a}*"));
        }
        s.push_str(&mono(m));
    }
    s
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, |m| m.to_string()))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Monomial> for Polynomial {
    fn from(m: Monomial) -> Self {
        Polynomial::monomial(m)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

/// Free magma product extended bilinearly.
impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(Monomial::product(a, b), ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(k: u16) -> Polynomial {
        Monomial::x(k).into()
    }

    #[test]
    fn leaf_product() {
        assert_eq!((&x(1) * &x(2)).to_string(), "(x1*x2)");
    }

    #[test]
    fn bilinearity() {
        let p = &(&x(1) - &x(2)) * &x(3);
        assert_eq!(p.to_string(), "(x1*x3) - (x2*x3)");
    }

    #[test]
    fn degree_additivity() {
        let a = &x(1) * &x(2);
        let p = &a * &a;
        assert_eq!(p.to_string(), "((x1*x2)*(x1*x2))");
        assert_eq!(p.multidegree().unwrap(), Some(MultiDegree::new(vec![2, 2])));
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = &(&x(1) + &x(2)) - &x(2);
        assert_eq!(p, x(1));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn leading_monomials() {
        let p = &x(1) + &x(2);
        assert_eq!(
            p.leading_monomial(TermOrder::DegLex).unwrap(),
            &Monomial::x(2)
        );
        let q = &(&x(3) * &x(1)) - &(&x(1) * &x(3));
        assert_eq!(
            q.leading_monomial(TermOrder::RightDegLex)
                .unwrap()
                .to_string(),
            "(x1*x3)"
        );
        assert_eq!(
            Polynomial::zero().leading_monomial(TermOrder::DegLex),
            Err(Error::EmptySupport)
        );
    }

    #[test]
    fn inhomogeneous_detected() {
        let p = &x(1) + &(&x(1) * &x(2));
        assert_eq!(p.multidegree(), Err(Error::Inhomogeneous));
    }
}
