//! Rule-based normal forms for perm and binary-perm monomials.
//!
//! Perm: flatten and sort every letter after the first.
//!
//! Binary-perm, degree at least five: a monomial `L*R` is rewritten from the
//! normal forms of `L` and `R`. Components of degree at most four are read
//! off the explicit degree-3 and degree-4 bases. A product of two basis
//! words is unfolded with the oriented identities
//!
//! ```text
//! square-product: (ab)(cd)    -> -((ca)d)b + (a(cd))b + ((cd)a)b
//! tail-rotation:  ((ab)c)d    -> ((ad)b)c
//! right-nested:   a((bc)d)    -> ((ac)b)d
//! inner-flatten:  ((a(bc))d)e -> (((ab)c)d)e
//! mixed-flatten:  (a(bc))(de) -> (((ab)c)d)e
//! ```
//!
//! and every left-normed word has its tail sorted: tail-rotation cycles the
//! first three tail letters and tail-swap exchanges adjacent tail letters
//! from the third on, which together generate all tail permutations.
//! Each unfolding step recurses only on monomials of smaller degree, so the
//! procedure terminates.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::bases::binary_perm_basis;
use crate::error::{Error, Result};
use crate::monomial::{Generator, Monomial, MultiDegree};
use crate::polynomial::Polynomial;
use crate::registry::Registry;
use crate::variety::{Engine, NormalFormer};

/// Left-normed word with the same first letter and the remaining letters
/// sorted.
pub fn sort_tail(m: &Monomial) -> Monomial {
    let mut leaves: Vec<Generator> = m.leaves().collect();
    leaves[1..].sort();
    Monomial::left_normed(&leaves)
}

enum Kind {
    Perm,
    BinaryPerm {
        engine: Box<Engine>,
        tables: Mutex<HashMap<MultiDegree, Arc<NormalFormer>>>,
        memo: Mutex<HashMap<Monomial, Polynomial>>,
    },
}

pub struct Rewriter {
    kind: Kind,
}

impl Rewriter {
    /// Supported varieties: `perm` and `binary-perm`.
    pub fn new(variety: &str) -> Result<Self> {
        let kind = match variety {
            "perm" => Kind::Perm,
            "binary-perm" => Kind::BinaryPerm {
                engine: Box::new(Engine::new(Registry::builtin().variety("binary-perm")?)),
                tables: Mutex::new(HashMap::new()),
                memo: Mutex::new(HashMap::new()),
            },
            other => {
                return Err(Error::Unsupported(format!(
                    "no rewrite rules for variety `{other}`"
                )))
            }
        };
        Ok(Rewriter { kind })
    }

    /// Normal form of `m` as a combination of sorted-tail left-normed
    /// words. Binary-perm requires degree at least five.
    pub fn rewrite(&self, m: &Monomial) -> Result<Polynomial> {
        match &self.kind {
            Kind::Perm => Ok(sort_tail(m).into()),
            Kind::BinaryPerm { .. } => {
                if m.degree() < 5 {
                    return Err(Error::Unsupported(format!(
                        "binary-perm rewriting needs degree >= 5, got {}",
                        m.degree()
                    )));
                }
                self.nf(m)
            }
        }
    }

    pub fn rewrite_polynomial(&self, p: &Polynomial) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            out.add_scaled(&self.rewrite(m)?, c);
        }
        Ok(out)
    }

    /// Normal form in the binary-perm basis of any degree.
    fn nf(&self, m: &Monomial) -> Result<Polynomial> {
        let Kind::BinaryPerm {
            engine,
            tables,
            memo,
        } = &self.kind
        else {
            unreachable!("binary-perm only");
        };
        if let Some(p) = memo.lock().unwrap().get(m) {
            return Ok(p.clone());
        }
        let out = if m.degree() <= 4 {
            let d = m.multidegree();
            let table = {
                let cached = tables.lock().unwrap().get(&d).cloned();
                match cached {
                    Some(t) => t,
                    None => {
                        let t = Arc::new(engine.normal_former(&d, &binary_perm_basis(&d))?);
                        tables.lock().unwrap().insert(d, t.clone());
                        t
                    }
                }
            };
            table.normal_polynomial(&m.clone().into())?
        } else {
            let (l, r) = m.factors().expect("degree >= 5");
            let (nl, nr) = (self.nf(&l)?, self.nf(&r)?);
            let mut out = Polynomial::zero();
            for (a, ca) in nl.terms() {
                for (b, cb) in nr.terms() {
                    out.add_scaled(&self.combine(a, b)?, &(ca * cb));
                }
            }
            out
        };
        memo.lock().unwrap().insert(m.clone(), out.clone());
        Ok(out)
    }

    /// Normal form of `a*b` for basis words `a`, `b` of total degree at
    /// least five.
    fn combine(&self, a: &Monomial, b: &Monomial) -> Result<Polynomial> {
        let mul = |u: &Monomial, v: &Monomial| Monomial::product(u, v);
        let stuck = || Error::Invalid(format!("no rule for ({a})*({b})"));
        match b.degree() {
            1 => {
                let w = mul(a, b);
                if w.is_left_normed() {
                    return Ok(sort_tail(&w).into());
                }
                // inner-flatten: ((x(yz))w)b -> (((xy)z)w)b
                let (a1, w1) = a.factors().ok_or_else(stuck)?;
                let (x, yz) = a1.factors().ok_or_else(stuck)?;
                let (y, z) = yz.factors().ok_or_else(stuck)?;
                let u = mul(&mul(&mul(&mul(&x, &y), &z), &w1), b);
                if u.is_left_normed() {
                    Ok(sort_tail(&u).into())
                } else {
                    Err(stuck())
                }
            }
            2 => {
                let (y, z) = b.factors().expect("degree 2");
                let yz = mul(&y, &z);
                if a.is_left_normed() && a.degree() >= 3 {
                    // tail-rotation: ((a'' s) t)(yz) -> ((a'' (yz)) s) t
                    let (a1, t) = a.factors().expect("degree >= 3");
                    let (a2, s) = a1.factors().expect("degree >= 2");
                    return self.times(&mul(&mul(&a2, &yz), &s), &t);
                }
                match a.degree() {
                    3 => {
                        // mixed-flatten: (x(uv))(yz) -> (((xu)v)y)z
                        let (x, uv) = a.factors().expect("degree 3");
                        let (u, v) = uv.factors().ok_or_else(stuck)?;
                        let w = mul(&mul(&mul(&mul(&x, &u), &v), &y), &z);
                        Ok(sort_tail(&w).into())
                    }
                    4 => {
                        // tail-rotation: ((x(uv))w)(yz) -> ((x(yz))(uv))w
                        let (a1, w) = a.factors().expect("degree 4");
                        let (x, uv) = a1.factors().ok_or_else(stuck)?;
                        self.times(&mul(&mul(&x, &yz), &uv), &w)
                    }
                    _ => Err(stuck()),
                }
            }
            _ => {
                let (b1, last) = b.factors().expect("degree >= 3");
                if b.is_left_normed() {
                    // right-nested: a((b'' y)z) -> ((a y) b'') z
                    let (b2, y) = b1.factors().expect("degree >= 2");
                    return self.times(&mul(&mul(a, &y), &b2), &last);
                }
                if b.degree() == 3 {
                    // square-product: (a1 a2)(x(yz)) -> -((x a1)(yz)) a2 + (a1(x(yz))) a2 + ((x(yz)) a1) a2
                    let (x, yz) = (b1, last);
                    let (a1, a2) = a.factors().ok_or_else(stuck)?;
                    let terms = [
                        (-1, mul(&mul(&x, &a1), &yz)),
                        (1, mul(&a1, b)),
                        (1, mul(b, &a1)),
                    ];
                    let mut out = Polynomial::zero();
                    for (c, zed) in terms {
                        let p = self.times(&zed, &a2)?;
                        out.add_scaled(&p, &crate::polynomial::rat(c));
                    }
                    return Ok(out);
                }
                // right-nested: a((x(yz))w) -> ((a(yz))x)w
                let (x, yz) = b1.factors().ok_or_else(stuck)?;
                self.times(&mul(&mul(a, &yz), &x), &last)
            }
        }
    }

    /// Normal form of `z * w` for a basis word `w`, normalizing `z` first.
    fn times(&self, z: &Monomial, w: &Monomial) -> Result<Polynomial> {
        let nz = self.nf(z)?;
        let mut out = Polynomial::zero();
        for (a, c) in nz.terms() {
            out.add_scaled(&self.combine(a, w)?, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn perm_flattens() {
        let r = Rewriter::new("perm").unwrap();
        assert_eq!(r.rewrite(&m("x1*(x2*x3)")).unwrap(), m("(x1*x2)*x3").into());
        assert_eq!(r.rewrite(&m("(x2*x3)*x1")).unwrap(), m("(x2*x1)*x3").into());
    }

    #[test]
    fn tail_swap_at_the_end() {
        let r = Rewriter::new("binary-perm").unwrap();
        assert_eq!(
            r.rewrite(&m("(((x1*x2)*x3)*x5)*x4")).unwrap(),
            m("(((x1*x2)*x3)*x4)*x5").into()
        );
        assert_eq!(
            r.rewrite(&m("((x1*(x2*x3))*x4)*x5")).unwrap(),
            m("(((x1*x2)*x3)*x4)*x5").into()
        );
    }

    #[test]
    fn unsupported_inputs() {
        assert!(matches!(Rewriter::new("lie"), Err(Error::Unsupported(_))));
        let r = Rewriter::new("binary-perm").unwrap();
        assert!(r.rewrite(&m("(x1*x2)*x3")).is_err());
    }
}
