//! Explicit monomial sets proposed as bases of graded components.

use crate::derived::is_nap_basis;
use crate::monomial::{Generator, Monomial, MultiDegree};

fn x(i: u16) -> Monomial {
    Monomial::x(i)
}

fn p(a: &Monomial, b: &Monomial) -> Monomial {
    Monomial::product(a, b)
}

/// Letters of `d` grouped by multiplicity, highest multiplicity first and
/// increasing index within a group.
fn letters_by_count(d: &MultiDegree) -> Vec<(u16, u32)> {
    let mut v: Vec<(u16, u32)> = d
        .support()
        .into_iter()
        .map(|g| (g.index(), d.count(g)))
        .collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    v
}

/// The degree-3 set: five patterns on `i<j<k`, and for repeated letters
/// `(x_j x_i) x_i`, `(x_i x_i) x_j` and `(x_i x_i) x_i` with `i` the
/// repeated letter.
pub fn b3(d: &MultiDegree) -> Vec<Monomial> {
    let l = letters_by_count(d);
    match l.as_slice() {
        [(i, 1), (j, 1), (k, 1)] => {
            let (i, j, k) = (x(*i), x(*j), x(*k));
            vec![
                p(&p(&i, &j), &k),
                p(&p(&i, &k), &j),
                p(&p(&j, &i), &k),
                p(&p(&k, &i), &j),
                p(&k, &p(&i, &j)),
            ]
        }
        [(i, 2), (j, 1)] => {
            let (i, j) = (x(*i), x(*j));
            vec![p(&p(&j, &i), &i), p(&p(&i, &i), &j)]
        }
        [(i, 3)] => {
            let i = x(*i);
            vec![p(&p(&i, &i), &i)]
        }
        _ => Vec::new(),
    }
}

/// The degree-4 set. Multilinear patterns on `i<j<k<l`; with repeated
/// letters, `i` is the letter of highest multiplicity and the remaining
/// letters are taken in increasing order. The one-letter component uses
/// `((x_i x_i) x_i) x_i`.
pub fn b4(d: &MultiDegree) -> Vec<Monomial> {
    let l = letters_by_count(d);
    let ln = |a: &Monomial, b: &Monomial, c: &Monomial, e: &Monomial| p(&p(&p(a, b), c), e);
    match l.as_slice() {
        [(i, 1), (j, 1), (k, 1), (m, 1)] => {
            let (i, j, k, m) = (x(*i), x(*j), x(*k), x(*m));
            vec![
                ln(&i, &j, &k, &m),
                ln(&i, &j, &m, &k),
                ln(&j, &i, &k, &m),
                ln(&k, &i, &j, &m),
                ln(&m, &i, &j, &k),
                p(&p(&k, &p(&i, &j)), &m),
            ]
        }
        [(i, 3), (j, 1)] => {
            let (i, j) = (x(*i), x(*j));
            vec![ln(&j, &i, &i, &i), ln(&i, &i, &i, &j)]
        }
        [(i, 2), (j, 2)] => {
            let (i, j) = (x(*i), x(*j));
            vec![ln(&j, &i, &i, &j), ln(&i, &i, &j, &j)]
        }
        [(i, 2), (j, 1), (k, 1)] => {
            let (i, j, k) = (x(*i), x(*j), x(*k));
            vec![ln(&k, &i, &i, &j), ln(&j, &i, &i, &k), ln(&i, &i, &j, &k)]
        }
        [(i, 4)] => {
            let i = x(*i);
            vec![ln(&i, &i, &i, &i)]
        }
        _ => Vec::new(),
    }
}

/// Left-normed words `x_{i1} x_{i2} ... x_{in}` with `i2 <= ... <= in`: one
/// per choice of first letter.
pub fn sorted_tail_words(d: &MultiDegree) -> Vec<Monomial> {
    let mut out = Vec::new();
    for g in d.support() {
        let mut letters = vec![g];
        let rest = d
            .checked_sub(&MultiDegree::new({
                let mut c = vec![0; g.index() as usize];
                c[g.index() as usize - 1] = 1;
                c
            }))
            .expect("letter occurs");
        for h in rest.support() {
            for _ in 0..rest.count(h) {
                letters.push(h);
            }
        }
        out.push(Monomial::left_normed(&letters));
    }
    out.sort();
    out
}

/// The proposed basis of the binary-perm component at `d`.
pub fn binary_perm_basis(d: &MultiDegree) -> Vec<Monomial> {
    match d.degree() {
        0 => Vec::new(),
        1 => d.support().into_iter().map(Monomial::leaf).collect(),
        2 => {
            let s = d.support();
            let mut out = Vec::new();
            for a in &s {
                for b in &s {
                    let md = Monomial::product(&Monomial::leaf(*a), &Monomial::leaf(*b));
                    if &md.multidegree() == d {
                        out.push(md);
                    }
                }
            }
            out.sort();
            out.dedup();
            out
        }
        3 => b3(d),
        4 => b4(d),
        _ => sorted_tail_words(d),
    }
}

/// The perm basis: associative words with sorted tail, written left-normed.
pub fn perm_basis(d: &MultiDegree) -> Vec<Monomial> {
    sorted_tail_words(d)
}

/// Condition on the index sequence of a left-normed commutator word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailCondition {
    /// `i1 < i2 <= i3 <= ... <= in`
    FirstBelowSecond,
    /// `i1 > i2 <= i3 <= ... <= in`
    FirstAboveSecond,
}

impl TailCondition {
    pub fn holds(self, seq: &[u16]) -> bool {
        if seq.len() < 2 || !seq[1..].windows(2).all(|w| w[0] <= w[1]) {
            return false;
        }
        match self {
            TailCondition::FirstBelowSecond => seq[0] < seq[1],
            TailCondition::FirstAboveSecond => seq[0] > seq[1],
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            TailCondition::FirstBelowSecond => "i1 < i2 <= i3 <= ... <= in",
            TailCondition::FirstAboveSecond => "i1 > i2 <= i3 <= ... <= in",
        }
    }
}

/// Left-normed words of multidegree `d` whose index sequence satisfies
/// `cond`.
pub fn left_normed_with(d: &MultiDegree, cond: TailCondition) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut counts: Vec<u32> = d.counts().to_vec();
    let mut seq = Vec::new();
    fn rec(
        counts: &mut Vec<u32>,
        left: u32,
        seq: &mut Vec<u16>,
        cond: TailCondition,
        out: &mut Vec<Monomial>,
    ) {
        if left == 0 {
            if cond.holds(seq) {
                let g: Vec<Generator> = seq.iter().map(|&i| Generator::new(i).unwrap()).collect();
                out.push(Monomial::left_normed(&g));
            }
            return;
        }
        for i in 0..counts.len() {
            if counts[i] == 0 {
                continue;
            }
            counts[i] -= 1;
            seq.push(i as u16 + 1);
            rec(counts, left - 1, seq, cond, out);
            seq.pop();
            counts[i] += 1;
        }
    }
    rec(&mut counts, d.degree(), &mut seq, cond, &mut out);
    out.sort();
    out
}

/// Basis of the free right-commutative algebra at `d`, built directly:
/// a head letter followed by a non-decreasing sequence of basis words.
pub fn nap_basis(d: &MultiDegree) -> Vec<Monomial> {
    let mut memo = std::collections::HashMap::new();
    let mut out = nap_rec(d, &mut memo);
    out.sort();
    debug_assert!(out.iter().all(is_nap_basis));
    out
}

fn nap_rec(
    d: &MultiDegree,
    memo: &mut std::collections::HashMap<MultiDegree, Vec<Monomial>>,
) -> Vec<Monomial> {
    if let Some(v) = memo.get(d) {
        return v.clone();
    }
    let mut out = Vec::new();
    for g in d.support() {
        let mut unit = vec![0; g.index() as usize];
        unit[g.index() as usize - 1] = 1;
        let rest = d
            .checked_sub(&MultiDegree::new(unit))
            .expect("letter occurs");
        for args in arg_sequences(&rest, None, memo) {
            let mut m = Monomial::leaf(g);
            for a in &args {
                m = Monomial::product(&m, a);
            }
            out.push(m);
        }
    }
    out.sort();
    memo.insert(d.clone(), out.clone());
    out
}

/// Non-decreasing sequences of basis words, all at least `min`, with
/// multidegrees adding up to `rest`.
fn arg_sequences(
    rest: &MultiDegree,
    min: Option<&Monomial>,
    memo: &mut std::collections::HashMap<MultiDegree, Vec<Monomial>>,
) -> Vec<Vec<Monomial>> {
    if rest.is_zero() {
        return vec![Vec::new()];
    }
    let mut parts = rest.proper_parts();
    parts.push(rest.clone());
    let mut out = Vec::new();
    for a in parts {
        let remaining = rest.checked_sub(&a).expect("part fits");
        for w in nap_rec(&a, memo) {
            if min.is_some_and(|m| &w < m) {
                continue;
            }
            for mut tail in arg_sequences(&remaining, Some(&w), memo) {
                tail.insert(0, w.clone());
                out.push(tail);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(s: &str) -> MultiDegree {
        s.parse().unwrap()
    }

    #[test]
    fn pattern_counts() {
        assert_eq!(b3(&md("1,1,1")).len(), 5);
        assert_eq!(b3(&md("2,1")).len(), 2);
        assert_eq!(b3(&md("1,2")).len(), 2);
        assert_eq!(b3(&md("3")).len(), 1);
        assert_eq!(b4(&md("1,1,1,1")).len(), 6);
        assert_eq!(b4(&md("1,1,2")).len(), 3);
        assert_eq!(b4(&md("2,2")).len(), 2);
        assert_eq!(b4(&md("1,3")).len(), 2);
        assert_eq!(b4(&md("4")).len(), 1);
    }

    #[test]
    fn patterns_have_the_right_multidegree() {
        for d in ["1,1,1", "2,1", "1,2", "0,2,1", "3"] {
            assert!(b3(&md(d)).iter().all(|m| m.multidegree() == md(d)));
        }
        for d in [
            "1,1,1,1", "2,1,1", "1,2,1", "1,1,2", "2,2", "3,1", "1,3", "4",
        ] {
            assert!(b4(&md(d)).iter().all(|m| m.multidegree() == md(d)));
        }
    }

    #[test]
    fn sorted_tail_word_counts() {
        assert_eq!(sorted_tail_words(&md("1,1,1,1,1")).len(), 5);
        assert_eq!(sorted_tail_words(&md("2,3")).len(), 2);
        assert_eq!(
            sorted_tail_words(&md("1,1,1"))[0].to_string(),
            "((x1*x2)*x3)"
        );
    }

    #[test]
    fn tail_conditions_on_two_letters() {
        let total = |c| {
            (1..5)
                .map(|a| left_normed_with(&MultiDegree::new(vec![a, 5 - a]), c).len())
                .sum::<usize>()
        };
        assert_eq!(total(TailCondition::FirstBelowSecond), 1);
        assert_eq!(total(TailCondition::FirstAboveSecond), 4);
    }

    #[test]
    fn nap_counts_are_rooted_tree_counts() {
        for n in 1..=5usize {
            let want = n.pow(n as u32 - 1);
            assert_eq!(nap_basis(&MultiDegree::multilinear(n)).len(), want);
        }
    }
}
