//! Nonassociative monomials (binary trees over an ordered alphabet),
//! multidegrees, and the two term orders on monomials.
//!
//! A monomial is stored in prefix form: `0` marks an internal node followed
//! by its left and right subtrees, any other code `k` is the leaf `x_k`.
//! The derived `Ord` on [`Monomial`] is deg-lex.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A letter `x_k` of the ordered alphabet `x_1 < x_2 < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(u16);

impl Generator {
    pub fn new(index: u16) -> Result<Self> {
        if index == 0 {
            return Err(Error::Invalid("generator index must be at least 1".into()));
        }
        Ok(Generator(index))
    }

    pub fn index(self) -> u16 {
        self.0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Count of each generator in a monomial. Trailing zeros are trimmed so
/// that `(1,1,0)` and `(1,1)` compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree(Vec<u32>);

impl MultiDegree {
    pub fn new(mut counts: Vec<u32>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        MultiDegree(counts)
    }

    /// The multilinear multidegree `(1,1,...,1)` with `n` letters.
    pub fn multilinear(n: usize) -> Self {
        MultiDegree(vec![1; n])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of alphabet positions covered (index of the last used letter).
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn count(&self, g: Generator) -> u32 {
        self.0.get(g.0 as usize - 1).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.iter().all(|&c| c == 1)
    }

    /// Letters that occur at least once, in increasing order.
    pub fn support(&self) -> Vec<Generator> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| Generator(i as u16 + 1))
            .collect()
    }

    /// Drops unused letters. Returns the compressed multidegree together with
    /// the map from compressed letter `i+1` to the original letter.
    pub fn compress(&self) -> (MultiDegree, Vec<u16>) {
        let letters: Vec<u16> = self.support().iter().map(|g| g.0).collect();
        let counts = self.0.iter().copied().filter(|&c| c > 0).collect();
        (MultiDegree(counts), letters)
    }

    pub fn add(&self, other: &MultiDegree) -> MultiDegree {
        let n = self.0.len().max(other.0.len());
        let counts = (0..n)
            .map(|i| self.0.get(i).unwrap_or(&0) + other.0.get(i).unwrap_or(&0))
            .collect();
        MultiDegree::new(counts)
    }

    /// `self - other`, or `None` if some count would go negative.
    pub fn checked_sub(&self, other: &MultiDegree) -> Option<MultiDegree> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut counts = self.0.clone();
        for (c, &o) in counts.iter_mut().zip(&other.0) {
            *c = c.checked_sub(o)?;
        }
        Some(MultiDegree::new(counts))
    }

    /// All `a` with `0 < a < self` componentwise (both `a` and `self - a`
    /// nonzero), in lexicographic order of counts.
    pub fn proper_parts(&self) -> Vec<MultiDegree> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.0.len()];
        fn rec(d: &[u32], i: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiDegree>) {
            if i == d.len() {
                let a = MultiDegree::new(cur.clone());
                let total: u32 = cur.iter().sum();
                if total > 0 && total < d.iter().sum::<u32>() {
                    out.push(a);
                }
                return;
            }
            for c in 0..=d[i] {
                cur[i] = c;
                rec(d, i + 1, cur, out);
            }
            cur[i] = 0;
        }
        rec(&self.0, 0, &mut cur, &mut out);
        out
    }

    /// Ordered `k`-tuples of nonzero multidegrees summing to `self`.
    pub fn compositions(&self, k: usize) -> Vec<Vec<MultiDegree>> {
        if k == 0 {
            return if self.is_zero() { vec![vec![]] } else { vec![] };
        }
        if k == 1 {
            return if self.is_zero() {
                vec![]
            } else {
                vec![vec![self.clone()]]
            };
        }
        let mut out = Vec::new();
        for first in self.proper_parts() {
            let rest = self.checked_sub(&first).expect("part fits");
            for mut tail in rest.compositions(k - 1) {
                tail.insert(0, first.clone());
                out.push(tail);
            }
        }
        out
    }

    /// `Catalan(n-1) * n! / prod(d_i!)`: the number of monomials with this
    /// leaf multiset.
    pub fn monomial_count(&self) -> u128 {
        let n = self.degree() as u128;
        if n == 0 {
            return 0;
        }
        let fact = |k: u128| (1..=k).product::<u128>();
        let catalan = fact(2 * (n - 1)) / (fact(n - 1) * fact(n));
        let mut multinomial = fact(n);
        for &c in &self.0 {
            multinomial /= fact(c as u128);
        }
        catalan * multinomial
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for MultiDegree {
    type Err = Error;

    /// Accepts `1,1,1` or `(1,1,1)`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let counts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Invalid(format!("bad multidegree `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let md = MultiDegree::new(counts);
        if md.degree() == 0 {
            return Err(Error::Invalid(format!("multidegree `{s}` has degree 0")));
        }
        Ok(md)
    }
}

/// Prefix code storage; degree <= 8 stays inline.
type Codes = SmallVec<[u16; 16]>;

/// A monomial of the free magma: a full binary tree with generator leaves.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    codes: Codes,
}

/// Length of the subtree starting at `start`.
fn subtree_len(codes: &[u16], start: usize) -> usize {
    let mut need = 1usize;
    let mut i = start;
    while need > 0 {
        if codes[i] == 0 {
            need += 1;
        } else {
            need -= 1;
        }
        i += 1;
    }
    i - start
}

fn split_codes(codes: &[u16]) -> Option<(&[u16], &[u16])> {
    if codes[0] != 0 {
        return None;
    }
    let l = subtree_len(codes, 1);
    Some((&codes[1..1 + l], &codes[1 + l..]))
}

fn cmp_deglex(a: &[u16], b: &[u16]) -> Ordering {
    // length = 2 * degree - 1
    match a.len().cmp(&b.len()) {
        Ordering::Equal => {}
        o => return o,
    }
    match (split_codes(a), split_codes(b)) {
        (None, None) => a[0].cmp(&b[0]),
        (Some((al, ar)), Some((bl, br))) => cmp_deglex(al, bl).then_with(|| cmp_deglex(ar, br)),
        // unreachable for equal degrees
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
    }
}

fn cmp_right_deglex(a: &[u16], b: &[u16]) -> Ordering {
    match a.len().cmp(&b.len()) {
        Ordering::Equal => {}
        o => return o,
    }
    match (split_codes(a), split_codes(b)) {
        (None, None) => a[0].cmp(&b[0]),
        (Some((al, ar)), Some((bl, br))) => {
            cmp_right_deglex(ar, br).then_with(|| cmp_right_deglex(al, bl))
        }
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
    }
}

impl Monomial {
    pub fn leaf(g: Generator) -> Self {
        let mut codes = Codes::new();
        codes.push(g.0);
        Monomial { codes }
    }

    /// Leaf `x_k`; panics on `k == 0`.
    pub fn x(k: u16) -> Self {
        Monomial::leaf(Generator::new(k).expect("generator index >= 1"))
    }

    pub fn product(left: &Monomial, right: &Monomial) -> Self {
        let mut codes = Codes::with_capacity(1 + left.codes.len() + right.codes.len());
        codes.push(0);
        codes.extend_from_slice(&left.codes);
        codes.extend_from_slice(&right.codes);
        Monomial { codes }
    }

    /// `(((g1 g2) g3) ... gn)`.
    pub fn left_normed(leaves: &[Generator]) -> Self {
        let mut it = leaves.iter();
        let mut acc = Monomial::leaf(*it.next().expect("at least one leaf"));
        for &g in it {
            acc = Monomial::product(&acc, &Monomial::leaf(g));
        }
        acc
    }

    fn from_codes(codes: &[u16]) -> Self {
        Monomial {
            codes: Codes::from_slice(codes),
        }
    }

    pub fn degree(&self) -> u32 {
        (self.codes.len() as u32).div_ceil(2)
    }

    pub fn is_leaf(&self) -> bool {
        self.codes[0] != 0
    }

    pub fn as_leaf(&self) -> Option<Generator> {
        self.is_leaf().then(|| Generator(self.codes[0]))
    }

    /// Left and right factors of a product; `None` for a leaf.
    pub fn factors(&self) -> Option<(Monomial, Monomial)> {
        split_codes(&self.codes).map(|(l, r)| (Monomial::from_codes(l), Monomial::from_codes(r)))
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> impl Iterator<Item = Generator> + '_ {
        self.codes
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| Generator(c))
    }

    pub fn first_leaf(&self) -> Generator {
        self.leaves().next().expect("nonempty")
    }

    pub fn multidegree(&self) -> MultiDegree {
        let mut counts = Vec::new();
        for g in self.leaves() {
            let i = g.0 as usize - 1;
            if counts.len() <= i {
                counts.resize(i + 1, 0);
            }
            counts[i] += 1;
        }
        MultiDegree::new(counts)
    }

    /// True if every internal node has a leaf as right child.
    pub fn is_left_normed(&self) -> bool {
        let mut cur = self.clone();
        while let Some((l, r)) = cur.factors() {
            if !r.is_leaf() {
                return false;
            }
            cur = l;
        }
        true
    }

    /// Decomposes `(((a T1) T2) ... Tk)` into its leftmost leaf `a` and the
    /// right arguments `T1..Tk` along the left spine.
    pub fn spine(&self) -> (Generator, Vec<Monomial>) {
        let mut args = Vec::new();
        let mut cur = self.clone();
        while let Some((l, r)) = cur.factors() {
            args.push(r);
            cur = l;
        }
        args.reverse();
        (cur.as_leaf().expect("spine ends in a leaf"), args)
    }

    /// Renames leaf `x_i` to `x_{map[i-1]}`.
    pub fn relabel(&self, map: &[u16]) -> Monomial {
        let codes = self
            .codes
            .iter()
            .map(|&c| if c == 0 { 0 } else { map[c as usize - 1] })
            .collect();
        Monomial { codes }
    }

    /// Replaces leaf `x_i` by `args[i-1]`.
    pub fn substitute(&self, args: &[Monomial]) -> Monomial {
        let mut codes = Codes::new();
        for &c in &self.codes {
            if c == 0 {
                codes.push(0);
            } else {
                codes.extend_from_slice(&args[c as usize - 1].codes);
            }
        }
        Monomial { codes }
    }

    /// Replaces the `pos`-th leaf (0-based, left to right) by `m`.
    pub fn replace_leaf(&self, pos: usize, m: &Monomial) -> Monomial {
        let mut codes = Codes::new();
        let mut seen = 0;
        for &c in &self.codes {
            if c != 0 {
                if seen == pos {
                    codes.extend_from_slice(&m.codes);
                } else {
                    codes.push(c);
                }
                seen += 1;
            } else {
                codes.push(0);
            }
        }
        Monomial { codes }
    }

    /// Same tree with leaves replaced, in order, by `labels`.
    pub fn with_leaves(&self, labels: &[Generator]) -> Monomial {
        let mut it = labels.iter();
        let codes = self
            .codes
            .iter()
            .map(|&c| {
                if c == 0 {
                    0
                } else {
                    it.next().expect("enough labels").0
                }
            })
            .collect();
        Monomial { codes }
    }

    /// Tree shape only (all leaves `x1`).
    pub fn shape(&self) -> Monomial {
        let codes = self
            .codes
            .iter()
            .map(|&c| if c == 0 { 0 } else { 1 })
            .collect();
        Monomial { codes }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_deglex(&self.codes, &other.codes)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.factors() {
            None => write!(f, "x{}", self.codes[0]),
            Some((l, r)) => write!(f, "({l}*{r})"),
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Parses the rendered form, e.g. `((x1*x2)*x3)`. Outer parentheses on
    /// the top product may be omitted.
    fn from_str(s: &str) -> Result<Self> {
        let bytes: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let m = parse_mono(&bytes, &mut pos)?;
        if pos < bytes.len() && bytes[pos] == '*' {
            pos += 1;
            let r = parse_mono(&bytes, &mut pos)?;
            if pos != bytes.len() {
                return Err(Error::Syntax {
                    pos,
                    msg: "trailing input after monomial".into(),
                });
            }
            return Ok(Monomial::product(&m, &r));
        }
        if pos != bytes.len() {
            return Err(Error::Syntax {
                pos,
                msg: "trailing input after monomial".into(),
            });
        }
        Ok(m)
    }
}

fn parse_mono(s: &[char], pos: &mut usize) -> Result<Monomial> {
    let err = |pos: usize, msg: &str| Error::Syntax {
        pos,
        msg: msg.to_string(),
    };
    match s.get(*pos) {
        Some('x') => {
            *pos += 1;
            let start = *pos;
            while *pos < s.len() && s[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let k: u16 = s[start..*pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| err(start, "expected generator index"))?;
            Ok(Monomial::leaf(Generator::new(k)?))
        }
        Some('(') => {
            *pos += 1;
            let l = parse_mono(s, pos)?;
            if s.get(*pos) != Some(&'*') {
                return Err(err(*pos, "expected `*`"));
            }
            *pos += 1;
            let r = parse_mono(s, pos)?;
            if s.get(*pos) != Some(&')') {
                return Err(err(*pos, "expected `)`"));
            }
            *pos += 1;
            Ok(Monomial::product(&l, &r))
        }
        _ => Err(err(*pos, "expected `x<k>` or `(`")),
    }
}

/// Total orders on monomials of a fixed alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum TermOrder {
    /// Degree, then left factor, then right factor.
    #[default]
    DegLex,
    /// Degree, then right factor, then left factor.
    RightDegLex,
}

impl TermOrder {
    pub fn compare(self, u: &Monomial, v: &Monomial) -> Ordering {
        match self {
            TermOrder::DegLex => cmp_deglex(&u.codes, &v.codes),
            TermOrder::RightDegLex => cmp_right_deglex(&u.codes, &v.codes),
        }
    }
}

/// All monomials with the given leaf multiset, each once, sorted deg-lex.
pub fn enumerate_monomials(d: &MultiDegree) -> Vec<Monomial> {
    let mut memo = HashMap::new();
    let mut out = enumerate_rec(d, &mut memo);
    out.sort();
    out
}

fn enumerate_rec(d: &MultiDegree, memo: &mut HashMap<MultiDegree, Vec<Monomial>>) -> Vec<Monomial> {
    if let Some(v) = memo.get(d) {
        return v.clone();
    }
    let out = if d.degree() == 1 {
        vec![Monomial::leaf(d.support()[0])]
    } else {
        let mut out = Vec::new();
        for a in d.proper_parts() {
            let b = d.checked_sub(&a).expect("part fits");
            let left = enumerate_rec(&a, memo);
            let right = enumerate_rec(&b, memo);
            for l in &left {
                for r in &right {
                    out.push(Monomial::product(l, r));
                }
            }
        }
        out
    };
    memo.insert(d.clone(), out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn render_and_parse() {
        let u = m("((x1*x2)*x3)");
        assert_eq!(u.to_string(), "((x1*x2)*x3)");
        assert_eq!(m("(x1*x2)*x3"), u);
        assert_eq!(u.degree(), 3);
        assert_eq!(u.multidegree(), MultiDegree::new(vec![1, 1, 1]));
        assert!("x1*x2*x3".parse::<Monomial>().is_err());
        assert!("x0".parse::<Monomial>().is_err());
    }

    #[test]
    fn multidegree_trims_trailing_zeros() {
        assert_eq!(
            MultiDegree::new(vec![1, 1, 0]),
            MultiDegree::new(vec![1, 1])
        );
        assert_eq!("(2,1)".parse::<MultiDegree>().unwrap().degree(), 3);
    }

    #[test]
    fn deglex_examples() {
        let o = TermOrder::DegLex;
        assert_eq!(o.compare(&m("x2"), &m("(x1*x1)")), Ordering::Less);
        assert_eq!(o.compare(&m("(x1*x2)"), &m("(x2*x1)")), Ordering::Less);
    }

    #[test]
    fn right_deglex_example() {
        let terms = [
            "(x1*(x2*x3))",
            "(x1*(x3*x2))",
            "((x2*x3)*x1)",
            "((x3*x2)*x1)",
        ];
        let max = terms
            .iter()
            .map(|s| m(s))
            .max_by(|a, b| TermOrder::RightDegLex.compare(a, b))
            .unwrap();
        assert_eq!(max, m("(x1*(x2*x3))"));
    }

    #[test]
    fn enumerate_small() {
        let two = enumerate_monomials(&MultiDegree::new(vec![1, 1]));
        assert_eq!(two, vec![m("(x1*x2)"), m("(x2*x1)")]);
        assert_eq!(enumerate_monomials(&MultiDegree::multilinear(3)).len(), 12);
        assert_eq!(
            enumerate_monomials(&MultiDegree::multilinear(5)).len(),
            1680
        );
    }

    #[test]
    fn enumerate_matches_formula_up_to_degree_six() {
        for a in 0..=6u32 {
            for b in 0..=6 - a {
                for c in 0..=6 - a - b {
                    let d = MultiDegree::new(vec![a, b, c]);
                    if d.degree() == 0 {
                        continue;
                    }
                    let all = enumerate_monomials(&d);
                    let set: HashSet<_> = all.iter().cloned().collect();
                    assert_eq!(set.len(), all.len());
                    assert_eq!(all.len() as u128, d.monomial_count(), "{d}");
                    assert!(all.iter().all(|u| u.multidegree() == d));
                    assert!(all.windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
    }

    fn all_upto(deg: u32, letters: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiDegree>) {
            if i == cur.len() {
                out.push(MultiDegree::new(cur.clone()));
                return;
            }
            for c in 0..=left {
                cur[i] = c;
                rec(i + 1, left - c, cur, out);
            }
        }
        let mut mds = Vec::new();
        rec(0, deg, &mut vec![0; letters], &mut mds);
        for d in mds.into_iter().filter(|d| d.degree() > 0) {
            out.extend(enumerate_monomials(&d));
        }
        out
    }

    #[test]
    fn orders_are_strict_total_orders() {
        // Sorting and then checking every pair i < j is exhaustive: it shows
        // the comparator coincides with the position order of the sorted list,
        // which gives trichotomy and transitivity without a triple loop.
        let all = all_upto(5, 3);
        for order in [TermOrder::DegLex, TermOrder::RightDegLex] {
            let mut sorted = all.clone();
            sorted.sort_by(|a, b| order.compare(a, b));
            for i in 0..sorted.len() {
                assert_eq!(order.compare(&sorted[i], &sorted[i]), Ordering::Equal);
                for j in i + 1..sorted.len() {
                    assert_eq!(order.compare(&sorted[i], &sorted[j]), Ordering::Less);
                    assert_eq!(order.compare(&sorted[j], &sorted[i]), Ordering::Greater);
                }
            }
        }
    }

    #[test]
    fn spine_and_substitution() {
        let u = m("((x1*(x2*x3))*x4)");
        let (a, args) = u.spine();
        assert_eq!(a, Generator(1));
        assert_eq!(args, vec![m("(x2*x3)"), m("x4")]);
        let f = m("((x1*x2)*x3)");
        assert_eq!(
            f.substitute(&[m("x3"), m("(x1*x2)"), m("x1")]),
            m("((x3*(x1*x2))*x1)")
        );
        assert_eq!(m("(x1*x2)").relabel(&[4, 7]), m("(x4*x7)"));
    }
}
