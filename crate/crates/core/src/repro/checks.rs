//! The built-in check suites.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CheckKind, CheckSpec, Context, Outcome};
use crate::bases::{b3, b4, binary_perm_basis, left_normed_with, nap_basis, TailCondition};
use crate::derived::{
    generates_all, good_words, good_words_in, holds_in_derived, leading_word_check, Sign,
};
use crate::error::Result;
use crate::monomial::{enumerate_monomials, Generator, Monomial, MultiDegree};
use crate::parser::Identity;
use crate::registry::{derived_identities, derived_identity, host_identity};
use crate::rewrite::Rewriter;
use crate::variety::{Engine, Variety};
use crate::TermOrder;

const SAMPLE_SEED: u64 = 0x5eed_b1a7;

fn spec(
    name: &'static str,
    criterion: u32,
    kind: CheckKind,
    description: &'static str,
    run: fn(&Context) -> Result<Outcome>,
) -> CheckSpec {
    CheckSpec {
        name,
        criterion,
        kind,
        description,
        run,
    }
}

pub(super) fn binary_perm_suite() -> Vec<CheckSpec> {
    use CheckKind::*;
    vec![
        spec(
            "dimension-degree-3",
            1,
            Dimension,
            "degree-3 dimensions 5, 2, 2, 1",
            dim_degree_3,
        ),
        spec(
            "dimension-degree-4-multilinear",
            1,
            Dimension,
            "multilinear degree 4 has dimension 6",
            dim_degree_4,
        ),
        spec(
            "dimension-degree-4-sweep",
            1,
            Dimension,
            "degree-4 dimensions over 4 letters equal the pattern counts",
            dim_degree_4_sweep,
        ),
        spec(
            "dimension-degree-5-multilinear",
            1,
            Dimension,
            "multilinear degree 5 has dimension 5",
            dim_degree_5,
        ),
        spec(
            "dimension-degree-6-multilinear",
            1,
            Dimension,
            "multilinear degree 6 has dimension 6",
            dim_degree_6,
        ),
        spec(
            "sandwich-degree-5",
            2,
            Dimension,
            "perm and binary-perm agree at degree 5 over 3 letters",
            sandwich_5,
        ),
        spec(
            "sandwich-degree-6",
            2,
            Dimension,
            "perm and binary-perm agree at degree 6 over 3 letters",
            sandwich_6,
        ),
        spec(
            "host-identities",
            3,
            Consequence,
            "the named host identities are consequences",
            host_identities,
        ),
        spec(
            "basis-degree-3",
            4,
            Basis,
            "degree-3 pattern set is a basis over 4 letters",
            basis_3,
        ),
        spec(
            "basis-degree-4",
            4,
            Basis,
            "degree-4 pattern set is a basis over 4 letters",
            basis_4,
        ),
        spec(
            "basis-degree-5-multilinear",
            4,
            Basis,
            "sorted-tail words are a multilinear degree-5 basis",
            basis_5,
        ),
        spec(
            "basis-degree-6-multilinear",
            4,
            Basis,
            "sorted-tail words are a multilinear degree-6 basis",
            basis_6,
        ),
        spec(
            "two-letter-proxy",
            5,
            Dimension,
            "perm and binary-perm agree on two letters up to degree 6",
            two_letters,
        ),
        spec(
            "rewrite-degree-5",
            6,
            Rewrite,
            "rewriter agrees with linear algebra on all degree-5 monomials over 3 letters",
            rewrite_5,
        ),
        spec(
            "rewrite-degree-6-sample",
            6,
            Rewrite,
            "rewriter agrees with linear algebra on 500 sampled degree-6 monomials",
            rewrite_6,
        ),
    ]
}

pub(super) fn derived_suite() -> Vec<CheckSpec> {
    use CheckKind::*;
    vec![
        spec(
            "kernel-minus",
            7,
            Kernel,
            "commutator identities hold in the minus algebra",
            kernel_minus,
        ),
        spec(
            "kernel-plus",
            7,
            Kernel,
            "Jordan and square-symmetry hold in the plus algebra",
            kernel_plus,
        ),
        spec(
            "no-degree-3-identities",
            8,
            Generates,
            "anticommutativity generates degree 3",
            generates_3,
        ),
        spec(
            "generates-degree-4",
            8,
            Generates,
            "anticom, square-expansion, left-triple generate degree 4",
            generates_4,
        ),
        spec(
            "generates-degree-5",
            8,
            Generates,
            "anticom, square-expansion, left-triple generate degree 5",
            generates_5,
        ),
        spec(
            "independence",
            8,
            Consequence,
            "square-expansion and left-triple are independent at degree 4",
            independence,
        ),
        spec(
            "tail-condition",
            9,
            Basis,
            "exactly one tail condition gives a basis of the five-identity variety",
            tail_condition,
        ),
        spec(
            "metabelian-perm",
            11,
            Generates,
            "anticom and metabelian generate the perm minus identities",
            metabelian_perm,
        ),
    ]
}

pub(super) fn nap_suite() -> Vec<CheckSpec> {
    use CheckKind::*;
    vec![
        spec(
            "good-word-counts",
            10,
            LeadingWords,
            "good multilinear word counts 1, 3, 15, 105",
            good_counts,
        ),
        spec(
            "leading-words",
            10,
            LeadingWords,
            "every good word leads its own expansion",
            leading_words,
        ),
        spec(
            "leading-words-right-order",
            10,
            LeadingWords,
            "good words built with right deg-lex lead their own expansion",
            leading_words_right,
        ),
        spec(
            "leading-words-distinct",
            10,
            LeadingWords,
            "leading monomials of good words are distinct",
            leading_distinct,
        ),
        spec(
            "nap-dimensions",
            10,
            Dimension,
            "multilinear dimensions n^(n-1)",
            nap_dimensions,
        ),
        spec(
            "nap-minus-generation",
            10,
            Generates,
            "anticommutativity generates the nap minus identities",
            nap_minus,
        ),
        spec(
            "nap-plus-generation",
            10,
            Generates,
            "commutativity generates the nap plus identities",
            nap_plus,
        ),
    ]
}

/// Every multidegree of total degree `n` over `k` letters, each letter
/// possibly absent.
fn multidegrees(n: u32, k: usize) -> Vec<MultiDegree> {
    fn rec(n: u32, k: usize, cur: &mut Vec<u32>, out: &mut BTreeSet<MultiDegree>) {
        if cur.len() + 1 == k {
            cur.push(n);
            out.insert(MultiDegree::new(cur.clone()));
            cur.pop();
            return;
        }
        for c in 0..=n {
            cur.push(c);
            rec(n - c, k, cur, out);
            cur.pop();
        }
    }
    let mut out = BTreeSet::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out.into_iter().collect()
}

fn md(s: &str) -> MultiDegree {
    s.parse().expect("literal multidegree")
}

fn expect_dims(ctx: &Context, variety: &str, want: &[(MultiDegree, usize)]) -> Result<Outcome> {
    let e = ctx.engine(variety)?;
    Ok(Outcome::all(
        want.iter()
            .map(|(d, w)| {
                let got = e.consequences(d).dimension();
                Outcome::new(got == *w, format!("{d} {got}/{w}"))
            })
            .collect(),
    ))
}

fn dim_degree_3(ctx: &Context) -> Result<Outcome> {
    expect_dims(
        ctx,
        "binary-perm",
        &[
            (md("1,1,1"), 5),
            (md("2,1"), 2),
            (md("1,2"), 2),
            (md("3"), 1),
        ],
    )
}

fn dim_degree_4(ctx: &Context) -> Result<Outcome> {
    expect_dims(ctx, "binary-perm", &[(MultiDegree::multilinear(4), 6)])
}

fn dim_degree_4_sweep(ctx: &Context) -> Result<Outcome> {
    let e = ctx.engine("binary-perm")?;
    let ds = multidegrees(4, 4);
    let bad: Vec<String> = ds
        .iter()
        .filter_map(|d| {
            let (got, want) = (e.consequences(d).dimension(), b4(d).len());
            (got != want).then(|| format!("{d} {got}/{want}"))
        })
        .collect();
    Ok(Outcome::new(
        bad.is_empty(),
        format!(
            "{} multidegrees, mismatches: [{}]",
            ds.len(),
            bad.join(", ")
        ),
    ))
}

fn dim_degree_5(ctx: &Context) -> Result<Outcome> {
    expect_dims(ctx, "binary-perm", &[(MultiDegree::multilinear(5), 5)])
}

fn dim_degree_6(ctx: &Context) -> Result<Outcome> {
    expect_dims(ctx, "binary-perm", &[(MultiDegree::multilinear(6), 6)])
}

fn compare_varieties(ctx: &Context, a: &str, b: &str, ds: &[MultiDegree]) -> Result<Outcome> {
    let (ea, eb) = (ctx.engine(a)?, ctx.engine(b)?);
    let bad: Vec<String> = ds
        .iter()
        .filter_map(|d| {
            let (x, y) = (
                ea.consequences(d).dimension(),
                eb.consequences(d).dimension(),
            );
            (x != y).then(|| format!("{d} {a} {x}, {b} {y}"))
        })
        .collect();
    Ok(Outcome::new(
        bad.is_empty(),
        format!(
            "{} multidegrees, mismatches: [{}]",
            ds.len(),
            bad.join(", ")
        ),
    ))
}

fn sandwich_5(ctx: &Context) -> Result<Outcome> {
    compare_varieties(ctx, "perm", "binary-perm", &multidegrees(5, 3))
}

fn sandwich_6(ctx: &Context) -> Result<Outcome> {
    compare_varieties(ctx, "perm", "binary-perm", &multidegrees(6, 3))
}

fn host_identities(ctx: &Context) -> Result<Outcome> {
    let e = ctx.engine("binary-perm")?;
    let mut parts = Vec::new();
    for name in [
        "square-product",
        "tail-rotation",
        "right-nested",
        "tail-swap",
        "inner-flatten",
    ] {
        let holds = host_identity(name)?
            .iter()
            .all(|f| e.is_consequence(f).holds);
        parts.push(Outcome::new(holds, format!("{name} {}", verdict(holds))));
    }
    Ok(Outcome::all(parts))
}

fn verdict(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

fn verify_all(
    e: &Engine,
    ds: &[MultiDegree],
    basis: impl Fn(&MultiDegree) -> Vec<Monomial>,
) -> Result<Outcome> {
    let mut bad = Vec::new();
    for d in ds {
        let v = e.verify_basis(d, &basis(d))?;
        if !v.is_basis() {
            bad.push(format!("{d} {v:?}"));
        }
    }
    Ok(Outcome::new(
        bad.is_empty(),
        format!("{} multidegrees, rejected: [{}]", ds.len(), bad.join(", ")),
    ))
}

fn basis_3(ctx: &Context) -> Result<Outcome> {
    verify_all(&*ctx.engine("binary-perm")?, &multidegrees(3, 4), b3)
}

fn basis_4(ctx: &Context) -> Result<Outcome> {
    verify_all(&*ctx.engine("binary-perm")?, &multidegrees(4, 4), b4)
}

fn basis_5(ctx: &Context) -> Result<Outcome> {
    let ds = [MultiDegree::multilinear(5)];
    verify_all(&*ctx.engine("binary-perm")?, &ds, binary_perm_basis)
}

fn basis_6(ctx: &Context) -> Result<Outcome> {
    let ds = [MultiDegree::multilinear(6)];
    verify_all(&*ctx.engine("binary-perm")?, &ds, binary_perm_basis)
}

fn two_letters(ctx: &Context) -> Result<Outcome> {
    let ds: Vec<MultiDegree> = (1..=6).flat_map(|n| multidegrees(n, 2)).collect();
    compare_varieties(ctx, "perm", "binary-perm", &ds)
}

/// Compares the rewriter with coordinates in the sorted-tail basis.
fn rewrite_agrees(ctx: &Context, monomials: &[Monomial]) -> Result<Outcome> {
    let e = ctx.engine("binary-perm")?;
    let rw = Rewriter::new("binary-perm")?;
    let mut formers = std::collections::HashMap::new();
    let mut bad = Vec::new();
    for m in monomials {
        let d = m.multidegree();
        if !formers.contains_key(&d) {
            let nf = e.normal_former(&d, &binary_perm_basis(&d))?;
            formers.insert(d.clone(), nf);
        }
        let want = formers[&d].normal_polynomial(&m.clone().into())?;
        if rw.rewrite(m)? != want {
            bad.push(m.to_string());
        }
    }
    let shown: Vec<String> = bad.iter().take(5).cloned().collect();
    Ok(Outcome::new(
        bad.is_empty(),
        format!(
            "{} monomials, {} disagreements [{}]",
            monomials.len(),
            bad.len(),
            shown.join(", ")
        ),
    ))
}

fn rewrite_5(ctx: &Context) -> Result<Outcome> {
    let ms: Vec<Monomial> = multidegrees(5, 3)
        .iter()
        .flat_map(enumerate_monomials)
        .collect();
    rewrite_agrees(ctx, &ms)
}

/// Uniform sample of degree-6 monomials over 3 letters: a tree shape and a
/// letter per leaf.
fn sample_degree_6(count: usize) -> Vec<Monomial> {
    let shapes = enumerate_monomials(&md("6"));
    let letters: Vec<Generator> = (1..=3)
        .map(|i| Generator::new(i).expect("positive"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    (0..count)
        .map(|_| {
            let shape = &shapes[rng.gen_range(0..shapes.len())];
            let labels: Vec<Generator> = (0..6).map(|_| letters[rng.gen_range(0..3)]).collect();
            shape.with_leaves(&labels)
        })
        .collect()
}

fn rewrite_6(ctx: &Context) -> Result<Outcome> {
    rewrite_agrees(ctx, &sample_degree_6(500))
}

fn derived_holds(ctx: &Context, host: &str, sign: Sign, names: &[&str]) -> Result<Outcome> {
    let e = ctx.engine(host)?;
    let mut parts = Vec::new();
    for name in names {
        let holds = derived_identity(name)?
            .iter()
            .all(|f| holds_in_derived(&e, sign, f));
        parts.push(Outcome::new(holds, format!("{name} {}", verdict(holds))));
    }
    Ok(Outcome::all(parts))
}

fn kernel_minus(ctx: &Context) -> Result<Outcome> {
    derived_holds(
        ctx,
        "binary-perm",
        Sign::Minus,
        &[
            "square-expansion",
            "left-triple",
            "tail-symmetry",
            "jacobian-nil",
            "malcev",
        ],
    )
}

fn kernel_plus(ctx: &Context) -> Result<Outcome> {
    derived_holds(
        ctx,
        "binary-perm",
        Sign::Plus,
        &["jordan", "square-symmetry"],
    )
}

fn generation(
    ctx: &Context,
    host: &str,
    sign: Sign,
    candidates: &[&str],
    degrees: &[usize],
) -> Result<Outcome> {
    let e = ctx.engine(host)?;
    let ids = derived_identities(candidates)?;
    let parts = degrees
        .iter()
        .map(|&n| {
            let v = generates_all(&ids, &e, sign, &MultiDegree::multilinear(n));
            Outcome::new(
                v.generates,
                format!(
                    "degree {n}: kernel {}, closure {}, sound {}, gap {}",
                    v.kernel_dim,
                    v.closure_dim,
                    v.sound,
                    v.gap()
                ),
            )
        })
        .collect();
    Ok(Outcome::all(parts))
}

fn generates_3(ctx: &Context) -> Result<Outcome> {
    generation(ctx, "binary-perm", Sign::Minus, &["anticom"], &[3])
}

fn generates_4(ctx: &Context) -> Result<Outcome> {
    generation(
        ctx,
        "binary-perm",
        Sign::Minus,
        &["anticom", "square-expansion", "left-triple"],
        &[4],
    )
}

fn generates_5(ctx: &Context) -> Result<Outcome> {
    generation(
        ctx,
        "binary-perm",
        Sign::Minus,
        &["anticom", "square-expansion", "left-triple"],
        &[5],
    )
}

fn follows_from(target: &str, from: &[&str]) -> Result<bool> {
    let e = Engine::new(Variety::new("closure", derived_identities(from)?));
    Ok(derived_identity(target)?
        .iter()
        .all(|f| e.is_consequence(f).holds))
}

fn independence(_: &Context) -> Result<Outcome> {
    let a = follows_from("square-expansion", &["anticom", "left-triple"])?;
    let b = follows_from("left-triple", &["anticom", "square-expansion"])?;
    Ok(Outcome::all(vec![
        Outcome::new(
            !a,
            format!("square-expansion from anticom, left-triple: {}", verdict(a)),
        ),
        Outcome::new(
            !b,
            format!("left-triple from anticom, square-expansion: {}", verdict(b)),
        ),
    ]))
}

fn tail_condition(_: &Context) -> Result<Outcome> {
    let ids: Vec<Identity> = derived_identities(&[
        "anticom",
        "square-expansion",
        "left-triple",
        "tail-symmetry",
        "jacobian-nil",
    ])?;
    let e = Engine::new(Variety::new("commutator-five", ids));
    let mut ds: Vec<MultiDegree> = multidegrees(5, 2);
    ds.push(MultiDegree::multilinear(5));
    let mut matching = Vec::new();
    let mut detail = Vec::new();
    let dims: Vec<String> = ds
        .iter()
        .map(|d| format!("{d} {}", e.consequences(d).dimension()))
        .collect();
    detail.push(format!("dimensions {}", dims.join(", ")));
    for cond in [
        TailCondition::FirstBelowSecond,
        TailCondition::FirstAboveSecond,
    ] {
        let mut ok = true;
        for d in &ds {
            ok &= e.verify_basis(d, &left_normed_with(d, cond))?.is_basis();
        }
        detail.push(format!(
            "{}: {}",
            cond.describe(),
            if ok { "basis" } else { "not a basis" }
        ));
        if ok {
            matching.push(cond.describe());
        }
    }
    let pass = matching.len() == 1;
    if pass {
        detail.push(format!("matching condition {}", matching[0]));
    }
    Ok(Outcome::new(pass, detail.join("; ")))
}

fn metabelian_perm(ctx: &Context) -> Result<Outcome> {
    generation(
        ctx,
        "perm",
        Sign::Minus,
        &["anticom", "metabelian"],
        &[4, 5],
    )
}

/// Goodness read straight off the definition.
fn is_good(m: &Monomial) -> bool {
    match m.factors() {
        None => true,
        Some((v, w)) => v < w && is_good(&v) && is_good(&w),
    }
}

fn good_counts(_: &Context) -> Result<Outcome> {
    let want = [1usize, 3, 15, 105];
    let parts = (2..=5)
        .zip(want)
        .map(|(n, w)| {
            let d = MultiDegree::multilinear(n);
            let built = good_words(&d).len();
            let brute = enumerate_monomials(&d)
                .iter()
                .filter(|m| is_good(m))
                .count();
            Outcome::new(
                built == w && brute == w,
                format!("degree {n}: constructed {built}, filtered {brute}, expected {w}"),
            )
        })
        .collect();
    Ok(Outcome::all(parts))
}

fn all_good_words(order: TermOrder) -> Vec<Monomial> {
    (1..=5)
        .flat_map(|n| multidegrees(n, 5))
        .flat_map(|d| good_words_in(&d, order))
        .collect()
}

fn leading_words(_: &Context) -> Result<Outcome> {
    leading_words_in(TermOrder::DegLex)
}

fn leading_words_right(_: &Context) -> Result<Outcome> {
    leading_words_in(TermOrder::RightDegLex)
}

fn leading_words_in(order: TermOrder) -> Result<Outcome> {
    let words = all_good_words(order);
    let failing = words.iter().filter(|w| !leading_word_check(w)).count();
    let bad: Vec<String> = words
        .iter()
        .filter(|w| !leading_word_check(w))
        .take(5)
        .map(|w| w.to_string())
        .collect();
    Ok(Outcome::new(
        bad.is_empty(),
        format!(
            "{} good words, {failing} failures [{}]",
            words.len(),
            bad.join(", ")
        ),
    ))
}

fn leading_distinct(_: &Context) -> Result<Outcome> {
    let words = all_good_words(TermOrder::DegLex);
    let mut leads = BTreeSet::new();
    for w in &words {
        let e = crate::derived::expand_bracket(w, Sign::Minus);
        leads.insert(e.leading_monomial(TermOrder::RightDegLex)?.clone());
    }
    Ok(Outcome::new(
        leads.len() == words.len(),
        format!(
            "{} good words, {} distinct leading monomials",
            words.len(),
            leads.len()
        ),
    ))
}

fn nap_dimensions(ctx: &Context) -> Result<Outcome> {
    let e = ctx.engine("nap")?;
    let parts = (2..=5usize)
        .map(|n| {
            let d = MultiDegree::multilinear(n);
            let want = n.pow(n as u32 - 1);
            let got = e.consequences(&d).dimension();
            let trees = nap_basis(&d).len();
            let basis = e
                .verify_basis(&d, &nap_basis(&d))
                .map(|v| v.is_basis())
                .unwrap_or(false);
            Outcome::new(
                got == want && trees == want && basis,
                format!("n={n}: engine {got}, trees {trees}, expected {want}, basis {basis}"),
            )
        })
        .collect();
    Ok(Outcome::all(parts))
}

fn nap_minus(ctx: &Context) -> Result<Outcome> {
    generation(ctx, "nap", Sign::Minus, &["anticom"], &[3, 4, 5])
}

fn nap_plus(ctx: &Context) -> Result<Outcome> {
    generation(ctx, "nap", Sign::Plus, &["comm"], &[3, 4, 5])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multidegree_sweeps() {
        assert_eq!(multidegrees(4, 4).len(), 35);
        assert_eq!(multidegrees(5, 3).len(), 21);
        assert!(multidegrees(3, 2).iter().all(|d| d.degree() == 3));
    }

    #[test]
    fn sample_is_reproducible() {
        let a = sample_degree_6(20);
        assert_eq!(a, sample_degree_6(20));
        assert!(a.iter().all(|m| m.degree() == 6));
    }

    #[test]
    fn goodness_filter() {
        assert!(is_good(&"x1*x2".parse().unwrap()));
        assert!(!is_good(&"x2*x1".parse().unwrap()));
        assert!(!is_good(&"x1*x1".parse().unwrap()));
    }
}
