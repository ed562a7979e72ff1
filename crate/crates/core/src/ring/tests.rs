use std::sync::Arc;

use num_traits::{One, Zero};
use proptest::prelude::*;

use super::rational::{int, ratio};
use super::*;
use crate::error::RingError;

fn small_table() -> Arc<GeneratorTable> {
    GeneratorTable::builder()
        .odd("ψ̄")
        .odd("ψ")
        .odd("χ")
        .even("ξ", 3)
        .build()
        .unwrap()
}

fn gen(t: &Arc<GeneratorTable>, n: &str) -> RingElement {
    RingElement::generator(t, n).unwrap()
}

fn symplectic(g: usize) -> Arc<GeneratorTable> {
    let mut b = GeneratorTable::builder();
    for r in 1..=g {
        b = b.odd(format!("α^{r}")).odd(format!("β^{r}"));
    }
    b.build().unwrap()
}

fn theta(t: &Arc<GeneratorTable>, g: usize) -> RingElement {
    let mut acc = RingElement::zero(t);
    for r in 1..=g {
        let a = format!("α^{r}");
        let b = format!("β^{r}");
        acc = &acc + &RingElement::product(t, &[&a, &b], int(1)).unwrap();
    }
    acc
}

#[test]
fn make_canonicalizes() {
    let t = symplectic(1);
    assert!(RingElement::make(&t, vec![]).unwrap().is_zero());
    let one = Monomial::one(&t);
    let cancel = RingElement::make(&t, vec![(one.clone(), int(1)), (one, int(-1))]).unwrap();
    assert!(cancel.is_zero());
    let ab = Monomial::new(&t, &[0, 1], &[]).unwrap();
    let merged = RingElement::make(&t, vec![(ab.clone(), int(2)), (ab.clone(), int(3))]).unwrap();
    assert_eq!(merged.len(), 1);
    assert_eq!(merged.coefficient(&ab), int(5));
}

#[test]
fn make_rejects_invalid_monomials() {
    let t = small_table();
    assert!(matches!(
        Monomial::new(&t, &[1, 1], &[0]),
        Err(RingError::InvalidMonomial(_))
    ));
    assert!(matches!(
        Monomial::new(&t, &[], &[3]),
        Err(RingError::InvalidMonomial(_))
    ));
    assert!(matches!(
        Monomial::new(&t, &[2, 0], &[0]),
        Err(RingError::InvalidMonomial(_))
    ));
}

#[test]
fn odd_square_and_anticommutation() {
    let t = small_table();
    let psi = gen(&t, "ψ");
    let psibar = gen(&t, "ψ̄");
    assert!((&psi * &psi).is_zero());
    assert_eq!(&psibar * &psi, -&(&psi * &psibar));
}

#[test]
fn even_nilpotency_truncates() {
    let t = small_table();
    let xi = gen(&t, "ξ");
    let xi2 = &xi * &xi;
    assert!(!xi2.is_zero());
    assert!((&xi2 * &xi).is_zero());
    // even generators commute with odd ones
    let chi = gen(&t, "χ");
    assert_eq!(&xi * &chi, &chi * &xi);
}

#[test]
fn mismatched_tables_error() {
    let a = gen(&small_table(), "ψ");
    let b = gen(&symplectic(1), "α^1");
    assert_eq!(a.try_mul(&b).unwrap_err(), RingError::TableMismatch);
    assert_eq!(a.try_add(&b).unwrap_err(), RingError::TableMismatch);
}

#[test]
fn exp_examples() {
    let t = small_table();
    assert_eq!(RingElement::zero(&t).exp().unwrap(), RingElement::one(&t));
    let pair = RingElement::product(&t, &["ψ̄", "ψ"], int(7)).unwrap();
    assert_eq!(pair.exp().unwrap(), &RingElement::one(&t) + &pair);
    let err = RingElement::one(&t).exp().unwrap_err();
    assert!(matches!(err, RingError::NotNilpotent(_)));
}

#[test]
fn exp_theta_top_coefficient_is_one() {
    for g in 1..=4 {
        let t = symplectic(g);
        let e = theta(&t, g).exp().unwrap();
        let top = Monomial::new(&t, &(0..2 * g).collect::<Vec<_>>(), &[]).unwrap();
        assert_eq!(e.coefficient(&top), int(1), "g = {g}");
        assert_eq!(e, theta(&t, g).exp_series().unwrap());
    }
}

#[test]
fn coefficient_examples() {
    let t = GeneratorTable::builder().even("ξ", 4).build().unwrap();
    let xi = gen(&t, "ξ");
    let e = &RingElement::one(&t) + &xi.scale(&int(2));
    assert_eq!(e.coefficient(&Monomial::parse(&t, &["ξ"]).unwrap()), int(2));
    assert_eq!(
        RingElement::zero(&t).coefficient(&Monomial::parse(&t, &["ξ"]).unwrap()),
        int(0)
    );
    let (c, n) = (3i64, 5i64);
    let ex = xi.scale(&int(-c * n)).exp().unwrap();
    assert_eq!(
        ex.coefficient(&Monomial::parse(&t, &["ξ^2"]).unwrap()),
        ratio(c * c * n * n, 2)
    );
}

#[test]
fn berezin_basic() {
    let t = small_table();
    assert_eq!(gen(&t, "χ").berezin(&["χ"]).unwrap(), RingElement::one(&t));
    let b = int(5);
    let e = RingElement::product(&t, &["ψ̄", "ψ"], b.clone())
        .unwrap()
        .exp()
        .unwrap();
    // ψ̄ is integrated first
    assert_eq!(e.berezin(&["ψ̄", "ψ"]).unwrap(), RingElement::scalar(&t, b.clone()));
    assert_eq!(e.berezin(&["ψ", "ψ̄"]).unwrap(), RingElement::scalar(&t, -b));
    assert!(matches!(
        e.berezin(&["nope"]),
        Err(RingError::UnknownGenerator(_))
    ));
    // sign from the position of the integrated generator
    let psibar_chi = RingElement::product(&t, &["ψ̄", "χ"], int(1)).unwrap();
    assert_eq!(psibar_chi.berezin(&["χ"]).unwrap(), -&gen(&t, "ψ̄"));
}

fn wick_table(k: usize) -> Arc<GeneratorTable> {
    let mut b = GeneratorTable::builder();
    for i in 0..k {
        b = b.odd(format!("ψ̄{i}")).odd(format!("ψ{i}"));
    }
    b.build().unwrap()
}

fn det_brute(m: &[Vec<i64>]) -> i64 {
    let k = m.len();
    if k == 0 {
        return 1;
    }
    (0..k)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det_brute(&minor)
        })
        .sum()
}

#[test]
fn berezin_gaussian_gives_determinant() {
    let cases: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![3]],
        vec![vec![2, 1], vec![1, 2]],
        vec![vec![1, 2, 0], vec![2, -1, 3], vec![0, 3, 1]],
        vec![vec![0, 1], vec![1, 0]],
    ];
    for k_mat in cases {
        let k = k_mat.len();
        let t = wick_table(k);
        let mut quad = RingElement::zero(&t);
        for i in 0..k {
            for j in 0..k {
                let a = format!("ψ̄{i}");
                let b = format!("ψ{j}");
                quad = &quad + &RingElement::product(&t, &[&a, &b], int(k_mat[i][j])).unwrap();
            }
        }
        let names: Vec<String> = (0..k).flat_map(|i| [format!("ψ̄{i}"), format!("ψ{i}")]).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let val = quad.exp().unwrap().berezin(&refs).unwrap();
        assert_eq!(val, RingElement::scalar(&t, int(det_brute(&k_mat))), "K = {k_mat:?}");
    }
}

#[test]
fn relabel_examples() {
    let src = GeneratorTable::builder().odd("α").odd("β").even("ξ_n", 3).build().unwrap();
    let dst = GeneratorTable::builder().odd("α′").odd("β′").even("ξ_m", 3).build().unwrap();
    let ab = RingElement::product(&src, &["α", "β"], int(1)).unwrap();
    let moved = ab.relabel(&dst, &[("α", "α′"), ("β", "β′"), ("ξ_n", "ξ_m")]).unwrap();
    assert_eq!(moved, RingElement::product(&dst, &["α′", "β′"], int(1)).unwrap());

    let swapped = GeneratorTable::builder().odd("β′").odd("α′").even("ξ_m", 3).build().unwrap();
    let moved = ab.relabel(&swapped, &[("α", "α′"), ("β", "β′"), ("ξ_n", "ξ_m")]).unwrap();
    let expect = RingElement::product(&swapped, &["β′", "α′"], int(-1)).unwrap();
    assert_eq!(moved, expect);
    assert_eq!(moved, RingElement::product(&swapped, &["α′", "β′"], int(1)).unwrap());

    let xi = gen(&src, "ξ_n");
    assert_eq!(
        xi.relabel(&dst, &[("ξ_n", "ξ_m"), ("α", "α′"), ("β", "β′")]).unwrap(),
        gen(&dst, "ξ_m")
    );
}

#[test]
fn relabel_errors() {
    let src = GeneratorTable::builder().odd("α").even("ξ", 3).build().unwrap();
    let dst = GeneratorTable::builder().odd("a").even("x", 2).even("y", 3).build().unwrap();
    let e = gen(&src, "ξ");
    assert!(matches!(
        e.relabel(&dst, &[("α", "a"), ("ξ", "x")]),
        Err(RingError::BadRelabel { .. })
    ));
    assert!(matches!(
        e.relabel(&dst, &[("α", "y"), ("ξ", "y")]),
        Err(RingError::BadRelabel { .. })
    ));
}

#[test]
fn restrict_drops_missing_generators() {
    let src = GeneratorTable::builder().odd("α").odd("β").odd("γ").build().unwrap();
    let dst = GeneratorTable::builder().odd("α").odd("γ").build().unwrap();
    let e = &RingElement::product(&src, &["α", "γ"], int(2)).unwrap()
        + &RingElement::product(&src, &["β"], int(1)).unwrap();
    assert_eq!(e.restrict(&dst).unwrap(), RingElement::product(&dst, &["α", "γ"], int(2)).unwrap());
}

// ---- properties -------------------------------------------------------

fn prop_table() -> Arc<GeneratorTable> {
    GeneratorTable::builder()
        .odd("a")
        .odd("b")
        .odd("c")
        .odd("d")
        .odd("e")
        .even("x", 3)
        .even("y", 2)
        .build()
        .unwrap()
}

fn element(t: &Arc<GeneratorTable>, raw: &[(u8, u8, u8, i8)]) -> RingElement {
    let terms = raw.iter().map(|&(odd, ex, ey, c)| {
        let idx: Vec<usize> = (0..5).filter(|i| odd >> i & 1 == 1).collect();
        (
            Monomial::new(t, &idx, &[u32::from(ex % 3), u32::from(ey % 2)]).unwrap(),
            int(i64::from(c)),
        )
    });
    RingElement::make(t, terms).unwrap()
}

fn raw_terms() -> impl Strategy<Value = Vec<(u8, u8, u8, i8)>> {
    prop::collection::vec((0u8..32, 0u8..3, 0u8..2, -4i8..5), 0..6)
}

/// Random element homogeneous of the given degree.
fn homogeneous(t: &Arc<GeneratorTable>, raw: &[(u8, u8, u8, i8)], deg: u32) -> RingElement {
    element(t, raw).homogeneous(deg)
}

proptest! {
    #[test]
    fn mul_is_associative(a in raw_terms(), b in raw_terms(), c in raw_terms()) {
        let t = prop_table();
        let (a, b, c) = (element(&t, &a), element(&t, &b), element(&t, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn mul_is_graded_commutative(a in raw_terms(), b in raw_terms(), da in 0u32..5, db in 0u32..5) {
        let t = prop_table();
        let a = homogeneous(&t, &a, da);
        let b = homogeneous(&t, &b, db);
        let ab = &a * &b;
        let ba = &b * &a;
        if (da * db) % 2 == 1 {
            prop_assert_eq!(ab, -&ba);
        } else {
            prop_assert_eq!(ab, ba);
        }
    }

    #[test]
    fn exp_is_additive_on_even_elements(a in raw_terms(), b in raw_terms()) {
        let t = prop_table();
        let even = |raw: &[(u8, u8, u8, i8)]| {
            let e = element(&t, raw);
            &(&e.homogeneous(2) + &e.homogeneous(4)) + &e.homogeneous(6)
        };
        let (a, b) = (even(&a), even(&b));
        let lhs = &a.exp().unwrap() * &b.exp().unwrap();
        prop_assert_eq!(&lhs, &(&a + &b).exp().unwrap());
        prop_assert_eq!(a.exp().unwrap(), a.exp_series().unwrap());
    }

    #[test]
    fn exp_matches_series_with_odd_terms(a in raw_terms()) {
        let t = prop_table();
        let e = element(&t, &a);
        let e = &e - &RingElement::scalar(&t, e.constant_term());
        prop_assert_eq!(e.exp().unwrap(), e.exp_series().unwrap());
    }

    #[test]
    fn berezin_is_linear(a in raw_terms(), b in raw_terms(), s in -3i64..4) {
        let t = prop_table();
        let (a, b) = (element(&t, &a), element(&t, &b));
        let lhs = (&a + &b.scale(&int(s))).berezin(&["c", "a"]).unwrap();
        let rhs = &a.berezin(&["c", "a"]).unwrap() + &b.berezin(&["c", "a"]).unwrap().scale(&int(s));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn berezin_inverts_left_multiplication(x in raw_terms(), which in 0usize..5) {
        let t = prop_table();
        let name = ["a", "b", "c", "d", "e"][which];
        let x = element(&t, &x).berezin(&[name]).unwrap(); // now free of `name`
        let chi = RingElement::generator(&t, name).unwrap();
        prop_assert_eq!((&chi * &x).berezin(&[name]).unwrap(), x);
    }

    #[test]
    fn canonicalization_is_idempotent(x in raw_terms()) {
        let t = prop_table();
        let x = element(&t, &x);
        prop_assert_eq!(x.canonicalize(), x.clone());
        prop_assert!(x.terms().all(|(_, c)| !c.is_zero()));
    }
}

#[test]
fn scalar_one_is_unit() {
    let t = prop_table();
    let x = element(&t, &[(3, 1, 0, 2), (16, 0, 1, -1)]);
    assert_eq!(&RingElement::one(&t) * &x, x);
    assert!(RingElement::one(&t).constant_term().is_one());
}
