use mwl_algebra::{parse_rational_poly, FieldElem, FieldSpec, Rational, UniPoly, Var};
use proptest::prelude::*;

fn fields() -> Vec<FieldSpec> {
    vec![
        FieldSpec::rationals(),
        FieldSpec::new(parse_rational_poly("a^2 - 2", "a").unwrap(), "a").unwrap(),
        FieldSpec::new(parse_rational_poly("a^3 - a - 1", "a").unwrap(), "a").unwrap(),
        // Non-integral minimal polynomial, as produced for composita.
        FieldSpec::new(parse_rational_poly("a^4 - 151/32*a^2 + 286225/4096", "a").unwrap(), "a").unwrap(),
    ]
}

fn poly(k: &FieldSpec, c: &[Vec<(i64, i64)>]) -> UniPoly {
    let coeffs: Vec<FieldElem> = c
        .iter()
        .map(|e| k.from_coeffs(e.iter().take(k.degree()).map(|&(n, d)| Rational::new(n.into(), d.into())).collect()))
        .collect();
    UniPoly::from_coeffs_in(k, Var::T, coeffs)
}

/// Textbook Euclid, the reference for the multimodular gcd.
fn euclid(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    a.monic()
}

fn coeff_lists(max_len: usize) -> impl Strategy<Value = Vec<Vec<(i64, i64)>>> {
    prop::collection::vec(prop::collection::vec((-9i64..10, 1i64..5), 4), 1..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn agrees_with_euclid_on_planted_factors(
        field in 0usize..4,
        g in coeff_lists(5),
        u in coeff_lists(6),
        v in coeff_lists(6),
    ) {
        let k = &fields()[field];
        let (g, u, v) = (poly(k, &g), poly(k, &u), poly(k, &v));
        prop_assume!(!g.is_zero() && !u.is_zero() && !v.is_zero());
        let (a, b) = (&g * &u, &g * &v);
        let got = a.gcd(&b);
        prop_assert_eq!(&got, &euclid(&a, &b));
        prop_assert!(got.divides(&a) && got.divides(&b));
        prop_assert!(g.monic().divides(&got));
    }
}

#[test]
fn coprime_inputs_give_one() {
    let k = &fields()[1];
    let a = poly(k, &[vec![(1, 1), (1, 1)], vec![(0, 1)], vec![(0, 1)], vec![(1, 1)]]);
    let b = poly(k, &[vec![(2, 1)], vec![(0, 1), (3, 1)], vec![(1, 1)], vec![(0, 1)], vec![(1, 1)]]);
    assert!(a.gcd(&b).is_one());
}

#[test]
fn high_degree_common_factor_is_recovered() {
    let k = &fields()[1];
    let g = poly(k, &(0..20).map(|i| vec![(i % 7 - 3, 1 + i % 3), (i % 5 - 2, 1 + i % 4)]).collect::<Vec<_>>());
    let u = poly(k, &(0..12).map(|i| vec![(i % 3 + 1, 2), (1, 1 + i % 2)]).collect::<Vec<_>>());
    let v = poly(k, &(0..9).map(|i| vec![(2 - i % 4, 3), (i % 2, 1)]).collect::<Vec<_>>());
    let got = (&g * &u).gcd(&(&g * &v));
    assert!(g.monic().divides(&got));
    assert_eq!(got, euclid(&(&g * &u), &(&g * &v)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn exact_division_agrees_with_schoolbook(
        field in 0usize..4,
        u in coeff_lists(14),
        v in coeff_lists(12),
        bump in 0usize..2,
    ) {
        let k = &fields()[field];
        let (u, v) = (poly(k, &u), poly(k, &v));
        prop_assume!(!u.is_zero() && !v.is_zero());
        let mut a = &u * &v;
        if bump == 1 {
            a = &a + &UniPoly::one(k, Var::T);
        }
        let (q, r) = a.div_rem(&v).unwrap();
        let expect = r.is_zero().then_some(q);
        prop_assert_eq!(a.exact_div(&v), expect.clone());
        prop_assert_eq!(v.divides(&a), expect.is_some());
        if bump == 0 {
            prop_assert_eq!(expect, Some(u));
        }
    }
}
