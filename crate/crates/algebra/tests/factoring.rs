use std::collections::BTreeMap;

use mwl_algebra::{
    adjoin_sqrt, factor, parse_bipoly, parse_unipoly, roots, FieldSpec, Rational, UniPoly, Var,
};
use proptest::prelude::*;

fn q() -> FieldSpec {
    FieldSpec::rationals()
}

fn poly(src: &str, k: &FieldSpec) -> UniPoly {
    parse_unipoly(src, k, Var::X, &BTreeMap::new()).unwrap()
}

#[test]
fn factor_over_rationals_round_trips() {
    let k = q();
    let f = poly("3*(x^2 - 2)*(x - 1/3)^2*(x^4 + 1)*(x^3 - x - 1)", &k);
    let fac = factor(&f).unwrap();
    assert_eq!(fac.expand(), f);
    let degrees: Vec<_> = fac.factors.iter().map(|(p, m)| (p.degree().unwrap(), *m)).collect();
    assert_eq!(degrees, vec![(1, 2), (2, 1), (3, 1), (4, 1)]);
}

#[test]
fn x4_plus_1_splits_over_sqrt2_and_i() {
    let k = q();
    let s2 = adjoin_sqrt(&k.from_int(2), "r", 8).unwrap();
    let f = poly("x^4 + 1", &s2.field);
    let fac = factor(&f).unwrap();
    assert_eq!(fac.factors.len(), 2);
    assert_eq!(fac.expand(), f);

    let i = adjoin_sqrt(&k.from_int(-1), "i", 8).unwrap();
    let fac = factor(&poly("x^4 + 1", &i.field)).unwrap();
    assert_eq!(fac.factors.len(), 2);

    let both = adjoin_sqrt(&s2.field.from_int(-1), "b", 8).unwrap();
    let fac = factor(&poly("x^4 + 1", &both.field)).unwrap();
    assert_eq!(fac.factors.len(), 4);
    assert_eq!(roots(&poly("x^4 + 1", &both.field)).unwrap().len(), 4);
}

#[test]
fn non_rational_polynomial_over_extension() {
    // (x - a)(x^2 + a x + 1) over Q(a), a^2 = 3.
    let k = adjoin_sqrt(&q().from_int(3), "a", 8).unwrap().field;
    let f = poly("(x - a)*(x^2 + a*x + 1)", &k);
    let fac = factor(&f).unwrap();
    assert_eq!(fac.expand(), f);
    // x^2 + a x + 1 has discriminant -1, irreducible over Q(sqrt 3).
    assert_eq!(fac.factors.len(), 2);
}

#[test]
fn resultant_matches_product_of_values() {
    // Res_x(x - t, x^2 - 1) = t^2 - 1 up to sign.
    let k = q();
    let f = parse_bipoly("x - t", &k, &BTreeMap::new()).unwrap();
    let g = parse_bipoly("x^2 - 1", &k, &BTreeMap::new()).unwrap();
    let r = f.resultant_x(&g);
    let expect = parse_unipoly("t^2 - 1", &k, Var::T, &BTreeMap::new()).unwrap();
    assert!(r == expect || r == -expect);
}

#[test]
fn resultant_of_two_conics() {
    // Res_x of (x - t^2)(...) type curves: compare with the product of
    // f evaluated at the roots of g when g splits over Q.
    let k = q();
    let f = parse_bipoly("x^2 + t*x + t^2 - 4", &k, &BTreeMap::new()).unwrap();
    let g = parse_bipoly("(x - t)*(x + 2)", &k, &BTreeMap::new()).unwrap();
    let r = f.resultant_x(&g);
    let a = parse_unipoly("t", &k, Var::T, &BTreeMap::new()).unwrap();
    let b = parse_unipoly("-2", &k, Var::T, &BTreeMap::new()).unwrap();
    let prod = &f.eval_x(&a) * &f.eval_x(&b);
    assert_eq!(r, prod);
}

proptest! {
    #[test]
    fn random_products_factor_back(
        roots_in in prop::collection::vec(-6i64..6, 1..4),
        quad in prop::collection::vec((1i64..5, -5i64..5), 0..3),
    ) {
        let k = q();
        let mut f = UniPoly::one(&k, Var::X);
        for r in &roots_in {
            f = &f * &UniPoly::linear_root(&k.from_int(*r), Var::X);
        }
        for (a, b) in &quad {
            // x^2 + b x + (b^2 + a): negative discriminant, irreducible.
            let c = Rational::from_integer((b * b + a).into());
            f = &f * &UniPoly::from_rationals(&k, Var::X, &[c, Rational::from_integer((*b).into()), Rational::from_integer(1.into())]);
        }
        let fac = factor(&f).unwrap();
        prop_assert_eq!(fac.expand(), f.clone());
        for (p, _) in &fac.factors {
            prop_assert!(p.degree().unwrap() <= 2);
        }
        let found: usize = roots(&f).unwrap().iter().map(|(_, m)| *m).sum();
        prop_assert_eq!(found, roots_in.len());
    }

    #[test]
    fn squarefree_decomposition_recovers_multiplicities(e1 in 1usize..4, e2 in 1usize..4) {
        let k = q();
        let a = poly("x^2 + 1", &k).pow(e1 as u32);
        let b = poly("x - 2", &k).pow(e2 as u32);
        let f = &a * &b;
        let sqf = f.squarefree_decomposition().unwrap();
        let mut got: Vec<usize> = sqf.parts.iter().map(|(_, m)| *m).collect();
        got.sort();
        let mut want = vec![e1, e2];
        want.sort();
        want.dedup();
        if e1 == e2 {
            prop_assert_eq!(got, vec![e1]);
        } else {
            prop_assert_eq!(got, want);
        }
    }
}
