use std::cmp::Ordering;

use num_bigint::BigInt;
use proptest::prelude::*;

use nonassoc::derived::{expand_bracket, good_words, linearize, Sign};
use nonassoc::monomial::enumerate_monomials;
use nonassoc::parser::{parse_identity, BracketMode};
use nonassoc::polynomial::rat;
use nonassoc::registry::Registry;
use nonassoc::rewrite::Rewriter;
use nonassoc::variety::Engine;
use nonassoc::{Generator, Monomial, MultiDegree, Polynomial, Rational, TermOrder};

fn arb_monomial(letters: u16, depth: u32) -> impl Strategy<Value = Monomial> {
    let leaf = (1..=letters).prop_map(Monomial::x);
    leaf.prop_recursive(depth, 32, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Monomial::product(&a, &b))
    })
}

fn mirror(m: &Monomial) -> Monomial {
    match m.factors() {
        None => m.clone(),
        Some((l, r)) => Monomial::product(&mirror(&r), &mirror(&l)),
    }
}

fn arb_polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((arb_monomial(3, 3), -4i64..=4), 0..6).prop_map(|terms| {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, rat(c));
        }
        p
    })
}

/// Multilinear degree-4 polynomial with small coefficients.
fn arb_component_element() -> impl Strategy<Value = Polynomial> {
    let ms = enumerate_monomials(&MultiDegree::multilinear(4));
    prop::collection::vec((0..ms.len(), -3i64..=3), 1..8).prop_map(move |terms| {
        let mut p = Polynomial::zero();
        for (i, c) in terms {
            p.add_term(ms[i].clone(), rat(c));
        }
        p
    })
}

proptest! {
    #[test]
    fn display_parse_round_trip(m in arb_monomial(4, 5)) {
        let back: Monomial = m.to_string().parse().unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn deglex_is_the_derived_order(u in arb_monomial(3, 4), v in arb_monomial(3, 4)) {
        prop_assert_eq!(TermOrder::DegLex.compare(&u, &v), u.cmp(&v));
    }

    #[test]
    fn right_deglex_is_mirrored_deglex(u in arb_monomial(3, 4), v in arb_monomial(3, 4)) {
        prop_assert_eq!(
            TermOrder::RightDegLex.compare(&u, &v),
            TermOrder::DegLex.compare(&mirror(&u), &mirror(&v))
        );
        prop_assert_eq!(TermOrder::RightDegLex.compare(&u, &u), Ordering::Equal);
    }

    #[test]
    fn polynomial_ring_laws(p in arb_polynomial(), q in arb_polynomial(), r in arb_polynomial()) {
        prop_assert_eq!(&(&p + &q) - &q, p.clone());
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert_eq!(&r * &(&p + &q), &(&r * &p) + &(&r * &q));
    }

    #[test]
    fn bracket_expansion_symmetry(u in arb_monomial(3, 3), v in arb_monomial(3, 3)) {
        let uv = Monomial::product(&u, &v);
        let vu = Monomial::product(&v, &u);
        prop_assert_eq!(expand_bracket(&uv, Sign::Minus), expand_bracket(&vu, Sign::Minus).scale(&rat(-1)));
        prop_assert_eq!(expand_bracket(&uv, Sign::Plus), expand_bracket(&vu, Sign::Plus));
    }

    #[test]
    fn reduction_is_linear_and_idempotent(p in arb_component_element(), q in arb_component_element()) {
        let e = Engine::new(Registry::builtin().variety("binary-perm").unwrap());
        let s = e.consequences(&MultiDegree::multilinear(4));
        let (rp, rq) = (s.reduce(&p).unwrap(), s.reduce(&q).unwrap());
        prop_assert_eq!(s.reduce(&(&p + &q)).unwrap(), &rp + &rq);
        prop_assert_eq!(s.reduce(&rp).unwrap(), rp.clone());
        prop_assert!(s.reduce(&(&p - &rp)).unwrap().is_zero());
    }

    #[test]
    fn perm_rewriter_matches_engine(m in arb_monomial(3, 3)) {
        prop_assume!(m.degree() <= 5);
        let e = Engine::new(Registry::builtin().variety("perm").unwrap());
        let s = e.consequences(&m.multidegree());
        let rw = Rewriter::new("perm").unwrap();
        let p: Polynomial = m.clone().into();
        prop_assert!(s.reduce(&(&p - &rw.rewrite(&m).unwrap())).unwrap().is_zero());
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

#[test]
fn linearization_depolarizes() {
    for text in [
        "((a*a)*b)*a = (a*a)*(b*a)",
        "(a*a)*b = a*(a*b)",
        "((a*a)*a)*a = 0",
        "(a*b)*(a*b) + a*a = b*(a*a)",
    ] {
        let f = parse_identity(text, BracketMode::Expand).unwrap();
        for g in linearize(&f) {
            let d = g.poly.multidegree().unwrap().unwrap();
            // the test identities have one component per total degree
            let d_orig = f
                .poly
                .terms()
                .map(|(m, _)| m.multidegree())
                .find(|e| e.degree() == d.degree())
                .unwrap();
            let mut map = Vec::new();
            let mut scale = BigInt::from(1);
            for (i, &k) in d_orig.counts().iter().enumerate() {
                map.extend(std::iter::repeat_n(i as u16 + 1, k as usize));
                scale *= factorial(k);
            }
            let mut component = Polynomial::zero();
            for (m, c) in f.poly.terms() {
                if m.multidegree() == d_orig {
                    component.add_term(m.clone(), c.clone());
                }
            }
            let back = g.poly.relabel(&map);
            assert_eq!(
                back,
                component.scale(&Rational::from_integer(scale)),
                "{text}"
            );
        }
    }
}

#[test]
fn associator_alternates_in_alternative_varieties() {
    for v in ["alternative", "binary-perm"] {
        let e = Engine::new(Registry::builtin().variety(v).unwrap());
        for text in [
            "(a,b,c) = -(b,a,c)",
            "(a,b,c) = (b,c,a)",
            "(a,b,a) = 0",
            "(a,a,b) = 0",
        ] {
            let f = parse_identity(text, BracketMode::Expand).unwrap();
            assert!(e.is_consequence(&f).holds, "{v}: {text}");
        }
    }
}

fn good_by_filter(m: &Monomial) -> bool {
    match m.factors() {
        None => true,
        Some((v, w)) => v < w && good_by_filter(&v) && good_by_filter(&w),
    }
}

#[test]
fn good_words_are_double_factorials() {
    for n in 2..=6usize {
        let want: usize = (1..=(2 * n - 3)).step_by(2).product();
        let d = MultiDegree::multilinear(n);
        assert_eq!(good_words(&d).len(), want);
        let brute = enumerate_monomials(&d)
            .into_iter()
            .filter(good_by_filter)
            .count();
        assert_eq!(brute, want);
    }
    let repeated: MultiDegree = "2,1".parse().unwrap();
    let x1 = Generator::new(1).unwrap();
    assert!(good_words(&repeated)
        .iter()
        .all(|w| w.leaves().filter(|&g| g == x1).count() == 2));
}
