//! Graded components of relatively free algebras.
//!
//! The T-ideal component at multidegree `d` is built from smaller
//! components. A spanning set is
//!
//! * `I_a * M_b` and `Q_a * I_b` for every split `a + b = d`, where `I` is
//!   a consequence space, `M` all monomials and `Q` the quotient basis;
//! * `f(q_1, ..., q_k)` for every defining identity `f` and quotient basis
//!   monomials `q_i` whose multidegrees add up to `d`.
//!
//! Substituting arbitrary monomials instead of quotient basis monomials adds
//! nothing: the difference lies in the product part. [`SubstitutionMode`]
//! keeps the unreduced construction available as a cross-check.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::derived::linearize;
use crate::error::{Error, Result};
use crate::linalg::{rref_int_rows, to_int_row, EchelonForm, Eliminator, SparseVec};
use crate::monomial::{enumerate_monomials, Monomial, MultiDegree};
use crate::parser::{Identity, VarietyDef};
use crate::polynomial::{Polynomial, Rational};

pub const REPORT_FORMAT: u32 = 1;

/// A named set of multilinear identities.
#[derive(Clone, Debug)]
pub struct Variety {
    name: String,
    identities: Vec<Identity>,
}

impl Variety {
    /// Linearizes every identity that is not multilinear.
    pub fn new(name: &str, identities: Vec<Identity>) -> Self {
        let identities = identities
            .into_iter()
            .flat_map(|f| {
                if f.multilinear {
                    vec![f]
                } else {
                    linearize(&f)
                }
            })
            .filter(|f| !f.poly.is_zero())
            .collect();
        Variety {
            name: name.to_string(),
            identities,
        }
    }

    pub fn from_def(def: &VarietyDef) -> Self {
        Self::new(&def.name, def.identities.clone())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn identities(&self) -> &[Identity] {
        &self.identities
    }

    /// Variety with the identities of both.
    pub fn join(&self, name: &str, extra: &[Identity]) -> Variety {
        let mut ids = self.identities.clone();
        ids.extend(extra.iter().cloned());
        Variety::new(name, ids)
    }

    /// Stable 64-bit FNV-1a digest of the rendered identities, in hex.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        for f in &self.identities {
            for b in f.poly.to_string().bytes().chain(std::iter::once(b';')) {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        }
        format!("{h:016x}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SubstitutionMode {
    /// Substitute quotient basis monomials only.
    #[default]
    QuotientBasis,
    /// Substitute every monomial and multiply by every monomial.
    AllMonomials,
}

/// One graded component: monomials as columns and the consequence space
/// in reduced echelon form.
#[derive(Debug)]
pub struct ComponentSpace {
    multidegree: MultiDegree,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
    echelon: EchelonForm,
}

impl ComponentSpace {
    fn new(multidegree: MultiDegree, monomials: Vec<Monomial>, echelon: EchelonForm) -> Self {
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        ComponentSpace {
            multidegree,
            monomials,
            index,
            echelon,
        }
    }

    fn relabeled(&self, map: &[u16]) -> ComponentSpace {
        let d = MultiDegree::new({
            let mut counts = vec![0; *map.iter().max().unwrap_or(&0) as usize];
            for (i, &c) in self.multidegree.counts().iter().enumerate() {
                counts[map[i] as usize - 1] = c;
            }
            counts
        });
        let monomials = self.monomials.iter().map(|m| m.relabel(map)).collect();
        ComponentSpace::new(d, monomials, self.echelon.clone())
    }

    pub fn multidegree(&self) -> &MultiDegree {
        &self.multidegree
    }

    /// Columns, in deg-lex order.
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn echelon(&self) -> &EchelonForm {
        &self.echelon
    }

    pub fn total(&self) -> usize {
        self.monomials.len()
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn dimension(&self) -> usize {
        self.total() - self.rank()
    }

    pub fn column(&self, m: &Monomial) -> Option<u32> {
        self.index.get(m).copied()
    }

    /// The canonical quotient basis: monomials at non-pivot columns.
    pub fn basis(&self) -> Vec<Monomial> {
        self.free_columns()
            .into_iter()
            .map(|c| self.monomials[c as usize].clone())
            .collect()
    }

    fn free_columns(&self) -> Vec<u32> {
        self.echelon.free_columns()
    }

    /// Coordinates of `p` over the monomial columns.
    pub fn coords(&self, p: &Polynomial) -> Result<SparseVec> {
        let mut v: SparseVec = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let col = self.column(m).ok_or_else(|| Error::WrongMultiDegree {
                monomial: m.to_string(),
                expected: self.multidegree.to_string(),
            })?;
            v.push((col, c.clone()));
        }
        v.sort_by_key(|(c, _)| *c);
        Ok(v)
    }

    pub fn from_coords(&self, v: &[(u32, Rational)]) -> Polynomial {
        let mut p = Polynomial::zero();
        for (c, x) in v {
            p.add_term(self.monomials[*c as usize].clone(), x.clone());
        }
        p
    }

    /// Residue of `p` modulo the consequence space, as a polynomial in the
    /// canonical quotient basis. Zero iff `p` is a consequence.
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        let v = self.coords(p)?;
        Ok(self.from_coords(&self.echelon.reduce(&v)))
    }
}

/// Dimension record for one component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub format: u32,
    pub variety: String,
    pub multidegree: MultiDegree,
    pub total: usize,
    pub rank: usize,
    pub dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
}

impl ComponentReport {
    pub fn text(&self) -> String {
        let mut s = format!(
            "{} {}: total {}, rank {}, dimension {}",
            self.variety, self.multidegree, self.total, self.rank, self.dimension
        );
        if let Some(b) = &self.basis {
            for m in b {
                s.push_str("\n  ");
                s.push_str(m);
            }
        }
        s
    }

    pub fn json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Outcome of a consequence test. `residues` holds one nonzero residue per
/// failing multilinear piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsequenceVerdict {
    pub holds: bool,
    pub residues: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum BasisVerdict {
    Basis,
    WrongCount { expected: usize, found: usize },
    Dependent { independent: usize, found: usize },
}

impl BasisVerdict {
    pub fn is_basis(&self) -> bool {
        matches!(self, BasisVerdict::Basis)
    }
}

type IntRow = Vec<(u32, BigInt)>;

/// Computes and caches the graded components of one variety.
pub struct Engine {
    variety: Variety,
    mode: SubstitutionMode,
    cache: Mutex<HashMap<MultiDegree, Arc<ComponentSpace>>>,
}

impl Engine {
    pub fn new(variety: Variety) -> Self {
        Self::with_mode(variety, SubstitutionMode::default())
    }

    pub fn with_mode(variety: Variety, mode: SubstitutionMode) -> Self {
        Engine {
            variety,
            mode,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn variety(&self) -> &Variety {
        &self.variety
    }

    /// The consequence space at `d`. Components are computed once per
    /// letter pattern and relabeled for other letters.
    pub fn consequences(&self, d: &MultiDegree) -> Arc<ComponentSpace> {
        let (c, map) = d.compress();
        let base = self.compressed(&c);
        if &c == d {
            base
        } else {
            Arc::new(base.relabeled(&map))
        }
    }

    fn compressed(&self, d: &MultiDegree) -> Arc<ComponentSpace> {
        if let Some(s) = self.cache.lock().unwrap().get(d) {
            return s.clone();
        }
        let s = Arc::new(self.compute(d));
        self.cache
            .lock()
            .unwrap()
            .entry(d.clone())
            .or_insert(s)
            .clone()
    }

    fn compute(&self, d: &MultiDegree) -> ComponentSpace {
        let monomials = enumerate_monomials(d);
        let ncols = monomials.len();
        if self.variety.identities.is_empty() || d.degree() < 2 {
            return ComponentSpace::new(d.clone(), monomials, EchelonForm::empty(ncols));
        }
        let index: HashMap<&Monomial, u32> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m, i as u32))
            .collect();
        let col = |m: &Monomial| index[m];

        let splits: Vec<(Arc<ComponentSpace>, Arc<ComponentSpace>)> = d
            .proper_parts()
            .iter()
            .map(|a| {
                let b = d.checked_sub(a).expect("part fits");
                (self.consequences(a), self.consequences(&b))
            })
            .collect();
        let all = self.mode == SubstitutionMode::AllMonomials;

        let mut rows: Vec<IntRow> = splits
            .par_iter()
            .flat_map_iter(|(a, b)| {
                let mut out = Vec::new();
                let a_rows: Vec<IntRow> = a.echelon.rows().iter().map(|r| to_int_row(r)).collect();
                let b_rows: Vec<IntRow> = b.echelon.rows().iter().map(|r| to_int_row(r)).collect();
                for r in &a_rows {
                    for m in &b.monomials {
                        out.push(sorted(r.iter().map(|(c, v)| {
                            (
                                col(&Monomial::product(&a.monomials[*c as usize], m)),
                                v.clone(),
                            )
                        })));
                    }
                }
                let lefts: Vec<u32> = if all {
                    (0..a.total() as u32).collect()
                } else {
                    a.free_columns()
                };
                for q in lefts {
                    let qm = &a.monomials[q as usize];
                    for s in &b_rows {
                        out.push(sorted(s.iter().map(|(c, v)| {
                            (
                                col(&Monomial::product(qm, &b.monomials[*c as usize])),
                                v.clone(),
                            )
                        })));
                    }
                }
                out
            })
            .collect();

        for f in &self.variety.identities {
            let k = f.arity();
            if k == 0 || f.degree() as usize != k || k as u32 > d.degree() {
                continue;
            }
            let comps = d.compositions(k);
            let subst: Vec<IntRow> = comps
                .par_iter()
                .flat_map_iter(|parts| {
                    let choices: Vec<Vec<Monomial>> = parts
                        .iter()
                        .map(|p| {
                            let s = self.consequences(p);
                            if all {
                                s.monomials.clone()
                            } else {
                                s.basis()
                            }
                        })
                        .collect();
                    let mut out = Vec::new();
                    for args in cartesian(&choices) {
                        let p = f.poly.substitute_monomials(&args);
                        let v: SparseVec = sorted(p.terms().map(|(m, c)| (col(m), c.clone())));
                        out.push(to_int_row(&v));
                    }
                    out
                })
                .collect();
            rows.extend(subst);
        }
        let echelon = rref_int_rows(ncols, rows);
        ComponentSpace::new(d.clone(), monomials, echelon)
    }

    pub fn dimension(&self, d: &MultiDegree, with_basis: bool) -> ComponentReport {
        let s = self.consequences(d);
        ComponentReport {
            format: REPORT_FORMAT,
            variety: self.variety.name.clone(),
            multidegree: d.clone(),
            total: s.total(),
            rank: s.rank(),
            dimension: s.dimension(),
            basis: with_basis.then(|| s.basis().iter().map(|m| m.to_string()).collect()),
        }
    }

    /// Tests whether `f` holds in the variety. Non-multilinear input is
    /// linearized first; each piece is tested at its own multidegree.
    pub fn is_consequence(&self, f: &Identity) -> ConsequenceVerdict {
        let pieces = if f.multilinear {
            vec![f.clone()]
        } else {
            linearize(f)
        };
        let mut residues = Vec::new();
        for g in pieces {
            let Ok(Some(d)) = g.poly.multidegree() else {
                continue;
            };
            let r = self
                .consequences(&d)
                .reduce(&g.poly)
                .expect("terms lie in their own component");
            if !r.is_zero() {
                residues.push(r);
            }
        }
        ConsequenceVerdict {
            holds: residues.is_empty(),
            residues,
        }
    }

    pub fn verify_basis(&self, d: &MultiDegree, candidates: &[Monomial]) -> Result<BasisVerdict> {
        for m in candidates {
            if &m.multidegree() != d {
                return Err(Error::WrongMultiDegree {
                    monomial: m.to_string(),
                    expected: d.to_string(),
                });
            }
        }
        let s = self.consequences(d);
        let dim = s.dimension();
        if candidates.len() != dim {
            return Ok(BasisVerdict::WrongCount {
                expected: dim,
                found: candidates.len(),
            });
        }
        let mut e = Eliminator::new(s.total());
        for m in candidates {
            let v = vec![(s.column(m).expect("checked multidegree"), Rational::one())];
            e.insert(&s.echelon.reduce(&v));
        }
        Ok(if e.rank() == dim {
            BasisVerdict::Basis
        } else {
            BasisVerdict::Dependent {
                independent: e.rank(),
                found: candidates.len(),
            }
        })
    }

    /// Prepares coordinate extraction in a verified basis of `d`.
    pub fn normal_former(&self, d: &MultiDegree, basis: &[Monomial]) -> Result<NormalFormer> {
        let verdict = self.verify_basis(d, basis)?;
        if !verdict.is_basis() {
            return Err(Error::BasisRejected(format!("{verdict:?}")));
        }
        NormalFormer::new(self.consequences(d), basis.to_vec())
    }

    /// Coordinates of `p` in `basis`, which must be a basis of the
    /// component containing `p`.
    pub fn normal_form(&self, p: &Polynomial, basis: &[Monomial]) -> Result<Vec<Rational>> {
        let d = match p.multidegree()? {
            Some(d) => d,
            None => match basis.first() {
                Some(m) => m.multidegree(),
                None => return Ok(Vec::new()),
            },
        };
        self.normal_former(&d, basis)?.coords(p)
    }
}

fn sorted<T>(it: impl Iterator<Item = (u32, T)>) -> Vec<(u32, T)> {
    let mut v: Vec<(u32, T)> = it.collect();
    v.sort_by_key(|(c, _)| *c);
    v
}

/// All tuples picking one element from each list, first index slowest.
fn cartesian(lists: &[Vec<Monomial>]) -> Vec<Vec<Monomial>> {
    let mut out = vec![Vec::new()];
    for l in lists {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                l.iter().map(move |m| {
                    let mut t = prefix.clone();
                    t.push(m.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Expresses classes of one component in a fixed basis.
pub struct NormalFormer {
    space: Arc<ComponentSpace>,
    basis: Vec<Monomial>,
    /// quotient column -> its coordinates in `basis`
    inverse: HashMap<u32, SparseVec>,
}

impl NormalFormer {
    fn new(space: Arc<ComponentSpace>, basis: Vec<Monomial>) -> Result<Self> {
        let free = space.free_columns();
        let pos: HashMap<u32, u32> = free
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as u32))
            .collect();
        let n = free.len() as u32;
        // rows [residue of b_i | e_i]; the reduced form is [I | R^-1]
        let mut e = Eliminator::new(2 * free.len());
        for (i, m) in basis.iter().enumerate() {
            let col = space.column(m).expect("verified basis");
            let mut row: SparseVec = space
                .echelon
                .reduce(&[(col, Rational::one())])
                .into_iter()
                .map(|(c, x)| (pos[&c], x))
                .collect();
            row.push((n + i as u32, Rational::one()));
            e.insert(&row);
        }
        let reduced = e.finish();
        let mut inverse = HashMap::new();
        for (row, &p) in reduced.rows().iter().zip(reduced.pivots()) {
            if p >= n {
                return Err(Error::BasisRejected("singular basis".into()));
            }
            let coords = row
                .iter()
                .filter(|(c, _)| *c >= n)
                .map(|(c, x)| (c - n, x.clone()))
                .collect();
            inverse.insert(free[p as usize], coords);
        }
        Ok(NormalFormer {
            space,
            basis,
            inverse,
        })
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn coords(&self, p: &Polynomial) -> Result<Vec<Rational>> {
        if let Some(d) = p.multidegree()? {
            if &d != self.space.multidegree() {
                return Err(Error::WrongMultiDegree {
                    monomial: p.to_string(),
                    expected: self.space.multidegree().to_string(),
                });
            }
        }
        let residue = self.space.echelon.reduce(&self.space.coords(p)?);
        let mut out = vec![Rational::zero(); self.basis.len()];
        for (c, x) in residue {
            for (i, y) in &self.inverse[&c] {
                out[*i as usize] += &x * y;
            }
        }
        Ok(out)
    }

    /// The combination of basis monomials with the coordinates of `p`.
    pub fn normal_polynomial(&self, p: &Polynomial) -> Result<Polynomial> {
        let c = self.coords(p)?;
        let mut out = Polynomial::zero();
        for (m, x) in self.basis.iter().zip(c) {
            out.add_term(m.clone(), x);
        }
        Ok(out)
    }
}
