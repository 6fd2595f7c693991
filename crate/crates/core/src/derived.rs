//! Derived algebras `A(-)` and `A(+)`: the same space with product
//! `[a,b] = ab - ba` or `{a,b} = ab + ba`.
//!
//! A word of the derived algebra is a magma monomial read in the derived
//! product. Its expansion is a polynomial of the host algebra. The
//! multilinear identities of the derived algebra at a multidegree are the
//! kernel of the evaluation map from the free magma component to the host
//! quotient.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::linalg::{nullspace, SparseMatrix, SparseVec};
use crate::monomial::{enumerate_monomials, Generator, Monomial, MultiDegree, TermOrder};
use crate::parser::Identity;
use crate::polynomial::Polynomial;
use crate::variety::{Engine, Variety};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    /// Commutator.
    Minus,
    /// Anti-commutator.
    Plus,
}

impl std::str::FromStr for Sign {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "minus" | "-" => Ok(Sign::Minus),
            "plus" | "+" => Ok(Sign::Plus),
            _ => Err(crate::Error::Invalid(format!("unknown sign `{s}`"))),
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Minus => "minus",
            Sign::Plus => "plus",
        })
    }
}

/// Full polarization. Each homogeneous component is handled separately; a
/// variable of multiplicity `k` is replaced by `k` fresh variables summed
/// over all `k!` placements. Variables absent from a component are dropped.
pub fn linearize(f: &Identity) -> Vec<Identity> {
    let mut by_degree: BTreeMap<MultiDegree, Polynomial> = BTreeMap::new();
    for (m, c) in f.poly.terms() {
        by_degree
            .entry(m.multidegree())
            .or_default()
            .add_term(m.clone(), c.clone());
    }
    by_degree
        .into_iter()
        .map(|(d, p)| {
            let mut out = linearize_component(&d, &p, &f.vars);
            out.name = f.name.clone();
            out
        })
        .collect()
}

fn linearize_component(d: &MultiDegree, p: &Polynomial, names: &[String]) -> Identity {
    // fresh letters of old letter i: first[i] .. first[i] + count - 1
    let mut first = vec![0u16; d.width() + 1];
    let mut vars = Vec::new();
    for (i, &k) in d.counts().iter().enumerate() {
        first[i + 1] = vars.len() as u16 + 1;
        let name = names
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("x{}", i + 1));
        if k == 1 {
            vars.push(name);
        } else {
            for j in 1..=k {
                vars.push(format!("{name}{j}"));
            }
        }
    }
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let leaves: Vec<u16> = m.leaves().map(|g| g.index()).collect();
        for labels in placements(&leaves, d, &first) {
            out.add_term(m.with_leaves(&labels), c.clone());
        }
    }
    Identity::new(vars, out)
}

/// All ways to give the occurrences of each letter distinct fresh copies.
fn placements(leaves: &[u16], d: &MultiDegree, first: &[u16]) -> Vec<Vec<Generator>> {
    let mut out = Vec::new();
    let mut taken: Vec<Vec<bool>> = d
        .counts()
        .iter()
        .map(|&k| vec![false; k as usize])
        .collect();
    let mut cur = Vec::with_capacity(leaves.len());
    fn rec(
        pos: usize,
        leaves: &[u16],
        first: &[u16],
        taken: &mut Vec<Vec<bool>>,
        cur: &mut Vec<Generator>,
        out: &mut Vec<Vec<Generator>>,
    ) {
        if pos == leaves.len() {
            out.push(cur.clone());
            return;
        }
        let l = leaves[pos] as usize;
        for j in 0..taken[l - 1].len() {
            if taken[l - 1][j] {
                continue;
            }
            taken[l - 1][j] = true;
            cur.push(Generator::new(first[l] + j as u16).expect("positive"));
            rec(pos + 1, leaves, first, taken, cur, out);
            cur.pop();
            taken[l - 1][j] = false;
        }
    }
    rec(0, leaves, first, &mut taken, &mut cur, &mut out);
    out
}

/// Expansion of a derived-algebra word into the host free magma.
pub fn expand_bracket(w: &Monomial, sign: Sign) -> Polynomial {
    match w.factors() {
        None => w.clone().into(),
        Some((u, v)) => {
            let (a, b) = (expand_bracket(&u, sign), expand_bracket(&v, sign));
            match sign {
                Sign::Minus => &(&a * &b) - &(&b * &a),
                Sign::Plus => &(&a * &b) + &(&b * &a),
            }
        }
    }
}

pub fn expand_polynomial(p: &Polynomial, sign: Sign) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        out.add_scaled(&expand_bracket(m, sign), c);
    }
    out
}

/// A magma word read in the derived product: `[u,v]` or `{u,v}`.
pub fn render_bracket(w: &Monomial, sign: Sign) -> String {
    match w.factors() {
        None => w.to_string(),
        Some((u, v)) => {
            let (u, v) = (render_bracket(&u, sign), render_bracket(&v, sign));
            match sign {
                Sign::Minus => format!("[{u},{v}]"),
                Sign::Plus => format!("{{{u},{v}}}"),
            }
        }
    }
}

pub fn render_bracket_polynomial(p: &Polynomial, sign: Sign) -> String {
    p.render_by(|m| render_bracket(m, sign))
}

/// The host word with the same parenthesization as the bracket word.
pub fn tilde(w: &Monomial) -> Monomial {
    w.clone()
}

/// Good words of multidegree `d`, in deg-lex order: a letter, or `vw` with
/// good `v < w` in deg-lex.
pub fn good_words(d: &MultiDegree) -> Vec<Monomial> {
    good_words_in(d, TermOrder::DegLex)
}

/// Good words whose factors are compared in `order`; the result is still
/// listed in deg-lex order.
pub fn good_words_in(d: &MultiDegree, order: TermOrder) -> Vec<Monomial> {
    let mut memo = BTreeMap::new();
    good_rec(d, order, &mut memo)
}

fn good_rec(
    d: &MultiDegree,
    order: TermOrder,
    memo: &mut BTreeMap<MultiDegree, Vec<Monomial>>,
) -> Vec<Monomial> {
    if let Some(v) = memo.get(d) {
        return v.clone();
    }
    let out = if d.degree() == 1 {
        vec![Monomial::leaf(d.support()[0])]
    } else {
        let mut out = Vec::new();
        for a in d.proper_parts() {
            let b = d.checked_sub(&a).expect("part fits");
            let left = good_rec(&a, order, memo);
            let right = good_rec(&b, order, memo);
            for v in &left {
                for w in right.iter().filter(|w| order.compare(v, w).is_lt()) {
                    out.push(Monomial::product(v, w));
                }
            }
        }
        out.sort();
        out
    };
    memo.insert(d.clone(), out.clone());
    out
}

/// Membership in the basis of the free right-commutative algebra:
/// `(...((x w1) w2) ...) wn` with `w1 <= ... <= wn`, each `wi` again a
/// basis monomial.
pub fn is_nap_basis(m: &Monomial) -> bool {
    let (_, args) = m.spine();
    args.windows(2).all(|p| p[0] <= p[1]) && args.iter().all(is_nap_basis)
}

/// The leading monomial of the commutator expansion under right deg-lex is
/// the word itself, and that word is a basis monomial of the free
/// right-commutative algebra.
pub fn leading_word_check(w: &Monomial) -> bool {
    let e = expand_bracket(w, Sign::Minus);
    match e.leading_monomial(TermOrder::RightDegLex) {
        Ok(lead) => *lead == tilde(w) && is_nap_basis(lead),
        Err(_) => false,
    }
}

/// The evaluation map of one multidegree together with its kernel size.
pub struct KernelSpace {
    multidegree: MultiDegree,
    sign: Sign,
    monomials: Vec<Monomial>,
    /// per magma monomial: its value in the host quotient
    values: Vec<Polynomial>,
    eval_rank: usize,
}

impl KernelSpace {
    pub fn multidegree(&self) -> &MultiDegree {
        &self.multidegree
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn total(&self) -> usize {
        self.monomials.len()
    }

    pub fn eval_rank(&self) -> usize {
        self.eval_rank
    }

    pub fn dimension(&self) -> usize {
        self.total() - self.eval_rank
    }

    /// Value in the host quotient (canonical basis) of a derived-algebra
    /// polynomial of this multidegree.
    pub fn evaluate(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            let i = self
                .monomials
                .binary_search(m)
                .expect("monomial of this multidegree");
            out.add_scaled(&self.values[i], c);
        }
        out
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.evaluate(p).is_zero()
    }

    /// A basis of the kernel as derived-algebra polynomials.
    pub fn basis(&self) -> Vec<Polynomial> {
        let (m, _) = self.eval_matrix();
        nullspace(&m)
            .into_iter()
            .map(|v| {
                let mut p = Polynomial::zero();
                for (c, x) in v {
                    p.add_term(self.monomials[c as usize].clone(), x);
                }
                p
            })
            .collect()
    }

    /// Rows indexed by host quotient monomials, columns by magma monomials.
    fn eval_matrix(&self) -> (SparseMatrix, usize) {
        let mut rows: BTreeMap<Monomial, SparseVec> = BTreeMap::new();
        for (j, v) in self.values.iter().enumerate() {
            for (m, c) in v.terms() {
                rows.entry(m.clone())
                    .or_default()
                    .push((j as u32, c.clone()));
            }
        }
        let n = rows.len();
        let mut mat = SparseMatrix::new(self.monomials.len());
        for (_, r) in rows {
            mat.push_row(r);
        }
        (mat, n)
    }
}

/// Builds the evaluation map of `host` with the given sign at `d`.
pub fn derived_kernel(host: &Engine, sign: Sign, d: &MultiDegree) -> KernelSpace {
    use rayon::prelude::*;
    let space = host.consequences(d);
    let monomials = enumerate_monomials(d);
    let values: Vec<Polynomial> = monomials
        .par_iter()
        .map(|m| {
            space
                .reduce(&expand_bracket(m, sign))
                .expect("same multidegree")
        })
        .collect();
    let mut k = KernelSpace {
        multidegree: d.clone(),
        sign,
        monomials,
        values,
        eval_rank: 0,
    };
    let (m, _) = k.eval_matrix();
    k.eval_rank = crate::linalg::rank(&m);
    k
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationVerdict {
    pub multidegree: MultiDegree,
    pub kernel_dim: usize,
    pub closure_dim: usize,
    /// Every consequence of the candidates evaluates to zero.
    pub sound: bool,
    pub generates: bool,
}

impl GenerationVerdict {
    pub fn gap(&self) -> i64 {
        self.kernel_dim as i64 - self.closure_dim as i64
    }
}

/// Compares the consequences of `candidates` in the free magma at `d` with
/// the kernel of the evaluation map into `host`.
pub fn generates_all(
    candidates: &[Identity],
    host: &Engine,
    sign: Sign,
    d: &MultiDegree,
) -> GenerationVerdict {
    let kernel = derived_kernel(host, sign, d);
    generates_with_kernel(candidates, &kernel)
}

pub fn generates_with_kernel(candidates: &[Identity], kernel: &KernelSpace) -> GenerationVerdict {
    let closure = Engine::new(Variety::new("candidates", candidates.to_vec()));
    let space = closure.consequences(&kernel.multidegree);
    let sound = space
        .echelon()
        .rows()
        .iter()
        .all(|r| kernel.contains(&space.from_coords(r)));
    let kernel_dim = kernel.dimension();
    let closure_dim = space.rank();
    GenerationVerdict {
        multidegree: kernel.multidegree.clone(),
        kernel_dim,
        closure_dim,
        sound,
        generates: sound && kernel_dim == closure_dim,
    }
}

/// Whether `f`, read in the derived product, holds in `host(sign)`.
pub fn holds_in_derived(host: &Engine, sign: Sign, f: &Identity) -> bool {
    linearize(f).iter().all(|g| {
        let Ok(Some(d)) = g.poly.multidegree() else {
            return true;
        };
        let space = host.consequences(&d);
        space
            .reduce(&expand_polynomial(&g.poly, sign))
            .map(|r| r.is_zero())
            .unwrap_or(false)
    })
}
