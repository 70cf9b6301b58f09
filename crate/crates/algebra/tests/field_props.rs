use mwl_algebra::{adjoin_sqrt, field_arith, parse_rational_poly, FieldElem, FieldOp, FieldSpec, Rational};
use proptest::prelude::*;

fn cubic_field() -> FieldSpec {
    FieldSpec::new(parse_rational_poly("a^3 - a - 1", "a").unwrap(), "a").unwrap()
}

fn elem(field: &FieldSpec, c: &[(i64, i64)]) -> FieldElem {
    field.from_coeffs(c.iter().map(|&(n, d)| Rational::new(n.into(), d.into())).collect())
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..20, 1i64..6), 3)
}

proptest! {
    #[test]
    fn ring_axioms_hold(a in coeffs(), b in coeffs(), c in coeffs()) {
        let k = cubic_field();
        let (a, b, c) = (elem(&k, &a), elem(&k, &b), elem(&k, &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn nonzero_elements_invert(a in coeffs()) {
        let k = cubic_field();
        let a = elem(&k, &a);
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.inverse().unwrap()).is_one());
        let q = field_arith(&k.one(), &a, FieldOp::Div).unwrap();
        prop_assert_eq!(&q * &a, k.one());
    }

    #[test]
    fn sqrt_of_a_square_squares_back(a in coeffs()) {
        let k = cubic_field();
        let a = elem(&k, &a);
        let sq = &a * &a;
        let r = sq.sqrt().unwrap().expect("a square has a root");
        prop_assert_eq!(&r * &r, sq);
        prop_assert!(r == a || r == -&a);
    }
}

#[test]
fn mixing_fields_is_an_error() {
    let q = FieldSpec::rationals();
    let k = cubic_field();
    assert!(field_arith(&q.one(), &k.one(), FieldOp::Add).is_err());
}

#[test]
fn division_by_zero_is_an_error() {
    let k = cubic_field();
    assert!(field_arith(&k.one(), &k.zero(), FieldOp::Div).is_err());
}

#[test]
fn reducible_modulus_is_rejected() {
    assert!(FieldSpec::new(parse_rational_poly("a^4 - 4", "a").unwrap(), "a").is_err());
    assert!(FieldSpec::new(parse_rational_poly("a^4 + 4", "a").unwrap(), "a").is_err());
}

#[test]
fn norms_multiply() {
    let k = cubic_field();
    let a = elem(&k, &[(1, 1), (2, 1), (0, 1)]);
    let b = elem(&k, &[(3, 2), (0, 1), (-1, 1)]);
    assert_eq!((&a * &b).norm(), a.norm() * b.norm());
}

#[test]
fn degree_eight_tower_supports_all_three_roots() {
    let q = FieldSpec::rationals();
    let e1 = adjoin_sqrt(&q.from_int(-1), "i", 8).unwrap();
    let e2 = adjoin_sqrt(&e1.field.from_int(-2), "b", 8).unwrap();
    let e3 = adjoin_sqrt(&e2.field.from_int(-10), "c", 8).unwrap();
    assert_eq!(e3.field.degree(), 8);
    let i = e2.embedding.then(&e3.embedding).apply(&e1.root);
    let s2 = e3.embedding.apply(&e2.root);
    assert_eq!(&i * &i, e3.field.from_int(-1));
    assert_eq!(&s2 * &s2, e3.field.from_int(-2));
    assert_eq!(&e3.root * &e3.root, e3.field.from_int(-10));
}
