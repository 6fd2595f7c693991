//! Exact sparse linear algebra over the rationals.
//!
//! Forward elimination is fraction-free on primitive integer rows; the
//! result is brought to reduced row echelon form at the end. The reduced
//! form of a row space is unique, so the output does not depend on the order
//! in which rows are supplied.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polynomial::Rational;

/// Sorted `(column, value)` pairs without zero entries.
pub type SparseVec = Vec<(u32, Rational)>;

type IntRow = Vec<(u32, BigInt)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix {
            ncols,
            rows: Vec::new(),
        }
    }

    /// Adds a row given as arbitrary `(column, value)` pairs; duplicates are
    /// summed and zeros dropped.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (u32, Rational)>) {
        let row = normalize_entries(entries);
        debug_assert!(row.iter().all(|(c, _)| (*c as usize) < self.ncols));
        self.rows.push(row);
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::new(ncols);
        for r in rows {
            m.push_row(
                r.iter()
                    .enumerate()
                    .map(|(j, &v)| (j as u32, Rational::from_integer(v.into()))),
            );
        }
        m
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                cols[*j as usize].push((i as u32, v.clone()));
            }
        }
        SparseMatrix {
            ncols: self.rows.len(),
            rows: cols,
        }
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &[(u32, Rational)]) -> Vec<Rational> {
        let dense: BTreeMap<u32, &Rational> = v.iter().map(|(c, x)| (*c, x)).collect();
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter_map(|(c, a)| dense.get(c).map(|x| a * *x))
                    .fold(Rational::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    /// Matrix-market style dump: header `%%exact-rational`, then
    /// `nrows ncols nnz`, then `row col num/den` lines (1-based).
    pub fn to_market_string(&self) -> String {
        let nnz: usize = self.rows.iter().map(Vec::len).sum();
        let mut s = String::from("%%exact-rational\n");
        let _ = writeln!(s, "{} {} {}", self.rows.len(), self.ncols, nnz);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                let _ = writeln!(s, "{} {} {}/{}", i + 1, j + 1, v.numer(), v.denom());
            }
        }
        s
    }

    pub fn from_market_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim) != Some("%%exact-rational") {
            return Err(Error::Invalid("missing %%exact-rational header".into()));
        }
        let bad = || Error::Invalid("malformed matrix dump".into());
        let dims: Vec<usize> = lines
            .next()
            .ok_or_else(bad)?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if dims.len() != 3 {
            return Err(bad());
        }
        let mut entries: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); dims[0]];
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let i: usize = parts[0].parse().map_err(|_| bad())?;
            let j: u32 = parts[1].parse().map_err(|_| bad())?;
            let (n, d) = parts[2].split_once('/').ok_or_else(bad)?;
            let v = Rational::new(
                n.parse::<BigInt>().map_err(|_| bad())?,
                d.parse::<BigInt>().map_err(|_| bad())?,
            );
            if i == 0 || i > dims[0] || j == 0 || j as usize > dims[1] {
                return Err(bad());
            }
            entries[i - 1].push((j - 1, v));
        }
        let mut m = SparseMatrix::new(dims[1]);
        for e in entries {
            m.push_row(e);
        }
        Ok(m)
    }
}

fn normalize_entries(entries: impl IntoIterator<Item = (u32, Rational)>) -> SparseVec {
    let mut acc: BTreeMap<u32, Rational> = BTreeMap::new();
    for (c, v) in entries {
        *acc.entry(c).or_insert_with(Rational::zero) += v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Reduced row echelon form: pivot columns strictly increasing, pivot entries
/// equal to one, pivot columns zero in every other row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonForm {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<u32>,
    /// column -> index into `rows`
    pivot_of: Vec<u32>,
}

const NO_PIVOT: u32 = u32::MAX;

impl EchelonForm {
    pub fn empty(ncols: usize) -> Self {
        EchelonForm {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_of: vec![NO_PIVOT; ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[u32] {
        &self.pivots
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_of[col as usize] != NO_PIVOT
    }

    /// Columns without a pivot, increasing.
    pub fn free_columns(&self) -> Vec<u32> {
        (0..self.ncols as u32)
            .filter(|&c| !self.is_pivot(c))
            .collect()
    }

    /// Reduces `v` modulo the row space. The residue is supported on free
    /// columns only and is zero iff `v` lies in the row space.
    pub fn reduce(&self, v: &[(u32, Rational)]) -> SparseVec {
        let mut acc: BTreeMap<u32, Rational> = BTreeMap::new();
        for (c, x) in v {
            let p = self.pivot_of[*c as usize];
            if p == NO_PIVOT {
                *acc.entry(*c).or_insert_with(Rational::zero) += x;
            } else {
                // pivot rows carry only free columns besides their pivot
                for (c2, y) in self.rows[p as usize].iter().skip(1) {
                    *acc.entry(*c2).or_insert_with(Rational::zero) -= x * y;
                }
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    pub fn in_rowspace(&self, v: &[(u32, Rational)]) -> (bool, SparseVec) {
        let r = self.reduce(v);
        (r.is_empty(), r)
    }

    pub fn to_matrix(&self) -> SparseMatrix {
        SparseMatrix {
            ncols: self.ncols,
            rows: self.rows.clone(),
        }
    }
}

/// Primitive integer multiple of a rational row with positive leading entry.
pub(crate) fn to_int_row(row: &[(u32, Rational)]) -> Vec<(u32, BigInt)> {
    if row.is_empty() {
        return Vec::new();
    }
    let l = row
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let ints: IntRow = row
        .iter()
        .map(|(c, v)| (*c, v.numer() * (&l / v.denom())))
        .collect();
    make_primitive(ints)
}

fn make_primitive(mut row: IntRow) -> IntRow {
    if row.is_empty() {
        return row;
    }
    let mut g = BigInt::zero();
    for (_, v) in &row {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    let neg = row[0].1.is_negative();
    if !g.is_one() || neg {
        let g = if neg { -g } else { g };
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    row
}

/// `a * x - b * y` on sorted sparse rows.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental fraction-free eliminator. Rows are kept primitive, each
/// headed by its pivot column.
#[derive(Clone, Debug)]
pub struct Eliminator {
    ncols: usize,
    pivot_rows: Vec<Option<IntRow>>,
    rank: usize,
}

impl Eliminator {
    pub fn new(ncols: usize) -> Self {
        Eliminator {
            ncols,
            pivot_rows: vec![None; ncols],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `row` by the current pivots; returns the primitive residue.
    fn reduce_int(&self, mut row: IntRow) -> IntRow {
        let mut k = 0;
        while k < row.len() {
            let col = row[k].0;
            if let Some(p) = &self.pivot_rows[col as usize] {
                let a = &p[0].1;
                let b = row[k].1.clone();
                let g = a.gcd(&b);
                row = make_primitive(combine(&(a / &g), &row, &(b / &g), p));
                // entries before `col` are untouched
                while k < row.len() && row[k].0 < col {
                    k += 1;
                }
            } else {
                k += 1;
            }
        }
        row
    }

    /// Inserts a row; returns true if it increased the rank.
    pub fn insert(&mut self, row: &[(u32, Rational)]) -> bool {
        self.insert_int(to_int_row(row))
    }

    fn insert_int(&mut self, row: IntRow) -> bool {
        let r = make_primitive(self.reduce_int(row));
        if r.is_empty() {
            return false;
        }
        let c = r[0].0 as usize;
        self.pivot_rows[c] = Some(r);
        self.rank += 1;
        true
    }

    /// Back-substitutes and normalizes pivots to one.
    pub fn finish(self) -> EchelonForm {
        let ncols = self.ncols;
        let mut reduced: Vec<Option<IntRow>> = vec![None; ncols];
        for c in (0..ncols).rev() {
            let Some(row) = &self.pivot_rows[c] else {
                continue;
            };
            let mut row = row.clone();
            let mut k = 1;
            while k < row.len() {
                let col = row[k].0 as usize;
                if let Some(p) = &reduced[col] {
                    let a = &p[0].1;
                    let b = row[k].1.clone();
                    let g = a.gcd(&b);
                    row = make_primitive(combine(&(a / &g), &row, &(b / &g), p));
                    // the entry at `col` is gone; the next candidate sits at `k`
                } else {
                    k += 1;
                }
            }
            reduced[c] = Some(row);
        }
        let mut rows = Vec::with_capacity(self.rank);
        let mut pivots = Vec::with_capacity(self.rank);
        let mut pivot_of = vec![NO_PIVOT; ncols];
        for (c, row) in reduced.into_iter().enumerate() {
            if let Some(row) = row {
                let lead = row[0].1.clone();
                let r: SparseVec = row
                    .into_iter()
                    .map(|(j, v)| (j, Rational::new(v, lead.clone())))
                    .collect();
                pivot_of[c] = rows.len() as u32;
                pivots.push(c as u32);
                rows.push(r);
            }
        }
        EchelonForm {
            ncols,
            rows,
            pivots,
            pivot_of,
        }
    }
}

/// Reduced row echelon form of `m`. Rows are processed by leading column,
/// sparsest first, so that pivots are chosen at the smallest column and the
/// shortest candidate row.
pub fn rref(m: &SparseMatrix) -> EchelonForm {
    rref_rows(m.ncols, m.rows.iter().map(|r| to_int_row(r)).collect())
}

pub(crate) fn rref_int_rows(ncols: usize, rows: Vec<Vec<(u32, BigInt)>>) -> EchelonForm {
    rref_rows(ncols, rows.into_iter().map(make_primitive).collect())
}

fn rref_rows(ncols: usize, mut rows: Vec<IntRow>) -> EchelonForm {
    rows.retain(|r| !r.is_empty());
    rows.sort_by(|a, b| {
        a[0].0
            .cmp(&b[0].0)
            .then(a.len().cmp(&b.len()))
            .then_with(|| a.cmp(b))
    });
    rows.dedup();
    let mut e = Eliminator::new(ncols);
    for r in rows {
        e.insert_int(r);
    }
    e.finish()
}

/// Basis of the right kernel `{v : m v = 0}`, one vector per free column,
/// each scaled so its lowest-index entry is one.
pub fn nullspace(m: &SparseMatrix) -> Vec<SparseVec> {
    let e = rref(m);
    let mut out = Vec::new();
    // entries of each pivot row in free columns, gathered by free column
    let mut by_free: BTreeMap<u32, Vec<(u32, Rational)>> = BTreeMap::new();
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        for (c, v) in row.iter().skip(1) {
            by_free.entry(*c).or_default().push((p, -v.clone()));
        }
    }
    for f in e.free_columns() {
        let mut v: SparseVec = by_free.remove(&f).unwrap_or_default();
        v.push((f, Rational::one()));
        v.sort_by_key(|(c, _)| *c);
        let lead = v[0].1.clone();
        if !lead.is_one() {
            for (_, x) in v.iter_mut() {
                *x = &*x / &lead;
            }
        }
        out.push(v);
    }
    out
}

pub fn rank(m: &SparseMatrix) -> usize {
    rref(m).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn identity_full_rank() {
        let m = SparseMatrix::from_dense(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let e = rref(&m);
        assert_eq!(e.rank(), 3);
        assert_eq!(e.pivots(), &[0, 1, 2]);
    }

    #[test]
    fn dependent_rows() {
        let m = SparseMatrix::from_dense(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn zero_matrix() {
        let m = SparseMatrix::from_dense(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(rank(&m), 0);
    }

    #[test]
    fn nullspace_examples() {
        let id = SparseMatrix::from_dense(&[vec![1, 0], vec![0, 1]]);
        assert!(nullspace(&id).is_empty());
        let one = SparseMatrix::from_dense(&[vec![1, 1]]);
        assert_eq!(nullspace(&one), vec![vec![(0, r(1)), (1, r(-1))]]);
        let m = SparseMatrix::from_dense(&[vec![1, 0, -1]]);
        assert_eq!(nullspace(&m).len(), 2);
    }

    #[test]
    fn rowspace_membership() {
        let e = rref(&SparseMatrix::from_dense(&[vec![1, 0], vec![0, 1]]));
        assert!(e.in_rowspace(&[(0, r(3)), (1, r(5))]).0);
        let e = rref(&SparseMatrix::from_dense(&[vec![1, 1]]));
        let (ok, res) = e.in_rowspace(&[(0, r(1))]);
        assert!(!ok);
        // x0 - x1*(...) : eliminating the pivot leaves -1 on column 1
        assert_eq!(res, vec![(1, r(-1))]);
        let e = EchelonForm::empty(2);
        assert!(e.in_rowspace(&[]).0);
    }

    #[test]
    fn rational_entries() {
        let mut m = SparseMatrix::new(2);
        m.push_row([
            (0, Rational::new(1.into(), 2.into())),
            (1, Rational::new(1.into(), 3.into())),
        ]);
        let e = rref(&m);
        assert_eq!(
            e.rows()[0],
            vec![(0, r(1)), (1, Rational::new(2.into(), 3.into()))]
        );
    }

    #[test]
    fn market_round_trip() {
        let mut m = SparseMatrix::new(3);
        m.push_row([(0, r(2)), (2, Rational::new((-1).into(), 3.into()))]);
        m.push_row([]);
        let text = m.to_market_string();
        assert!(text.starts_with("%%exact-rational\n2 3 2\n1 1 2/1\n1 3 -1/3\n"));
        assert_eq!(SparseMatrix::from_market_str(&text).unwrap(), m);
    }

    fn random_matrix(rng: &mut impl Rng, nrows: usize, ncols: usize, density: f64) -> SparseMatrix {
        let mut m = SparseMatrix::new(ncols);
        for _ in 0..nrows {
            let mut row: Vec<(u32, Rational)> = Vec::new();
            for c in 0..ncols as u32 {
                if rng.gen_bool(density) {
                    let n: i64 = rng.gen_range(-5..=5);
                    let d: i64 = rng.gen_range(1..=4);
                    row.push((c, Rational::new(n.into(), d.into())));
                }
            }
            m.push_row(row);
        }
        m
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 20, 30, 0.15);
            assert_eq!(rank(&m), rank(&m.transpose()));
        }
    }

    #[test]
    fn shuffled_rows_give_identical_echelon() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let m = random_matrix(&mut rng, 15, 12, 0.3);
            let e = rref(&m);
            let mut rows = m.rows().to_vec();
            rows.shuffle(&mut rng);
            let mut m2 = SparseMatrix::new(m.ncols());
            for r in rows {
                m2.push_row(r);
            }
            assert_eq!(rref(&m2), e);
        }
    }

    proptest! {
        #[test]
        fn nullspace_vectors_are_annihilated(seed in any::<u64>()) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, 8, 10, 0.4);
            let ns = nullspace(&m);
            prop_assert_eq!(ns.len(), m.ncols() - rank(&m));
            for v in &ns {
                prop_assert!(m.apply(v).iter().all(Zero::is_zero));
                prop_assert!(v[0].1.is_one());
            }
        }

        #[test]
        fn echelon_invariants(seed in any::<u64>()) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, 10, 10, 0.3);
            let e = rref(&m);
            prop_assert!(e.pivots().windows(2).all(|w| w[0] < w[1]));
            for (row, &p) in e.rows().iter().zip(e.pivots()) {
                prop_assert_eq!(row[0].0, p);
                prop_assert!(row[0].1.is_one());
                for &q in e.pivots() {
                    if q != p {
                        prop_assert!(row.iter().all(|(c, _)| *c != q));
                    }
                }
            }
            for row in m.rows() {
                prop_assert!(e.in_rowspace(row).0);
            }
        }
    }
}
