use std::collections::BTreeMap;

use mwl_algebra::{parse_bipoly, parse_unipoly, FieldSpec, Var};
use mwl_core::{
    all_even_tangency, intersection_multiplicities, pencil_setup, same_combinatorics, summarize, tangent_conics_through,
    CoreError, PlaneCurve, PointClass, SectionBook,
};

fn curve(label: &str, eq: &str) -> PlaneCurve {
    let q = FieldSpec::rationals();
    PlaneCurve::new(label, parse_bipoly(eq, &q, &BTreeMap::new()).unwrap()).unwrap()
}

fn rational_point(p: &PointClass) -> (String, String) {
    let (t, x) = p.coordinates().expect("rational point");
    (t.to_string(), x.to_string())
}

#[test]
fn two_conics_tangent_at_origin_and_at_zo() {
    let c1 = curve("C1", "x - t^2");
    let c2 = curve("C2", "x - 9/8*t^2");
    let v = intersection_multiplicities(&c1, &c2).unwrap();
    assert_eq!(v.len(), 2);
    assert_eq!(rational_point(&v[0].point), ("0".into(), "0".into()));
    assert_eq!(v[0].multiplicity, 2);
    assert_eq!(v[1].point, PointClass::Zo);
    assert_eq!(v[1].multiplicity, 2);
}

#[test]
fn conic_and_secant_line() {
    let c1 = curve("C1", "x - t^2");
    let l1 = curve("L1", "x - 3t + 2");
    let v = intersection_multiplicities(&c1, &l1).unwrap();
    let mut ts: Vec<_> = v.iter().map(|i| (rational_point(&i.point).0, i.multiplicity)).collect();
    ts.sort();
    assert_eq!(ts, vec![("1".to_string(), 1), ("2".to_string(), 1)]);
}

#[test]
fn shared_component_is_rejected() {
    let c1 = curve("C1", "x - t^2");
    let err = intersection_multiplicities(&c1, &c1).unwrap_err();
    assert!(matches!(err, CoreError::CommonComponent(..)), "{err}");
}

#[test]
fn irrational_points_form_one_orbit() {
    let c = curve("C", "x^2 + t^2 - 2");
    let l = curve("L", "x - t");
    let v = intersection_multiplicities(&c, &l).unwrap();
    // x = t, 2 t^2 = 2: two rational points.
    assert_eq!(v.iter().map(|i| i.point.degree() * i.multiplicity).sum::<usize>(), 2);
    let l2 = curve("L2", "x - 2t");
    let v = intersection_multiplicities(&c, &l2).unwrap();
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].point.degree(), 2);
}

#[test]
fn even_tangency() {
    let branch = curve("Q", "(x - t^2 + 2)(x^2 - 2x + t^2 - 4)");
    assert!(all_even_tangency(&curve("C3", "x - 1/2*t^2 + 2"), &branch).unwrap());
    assert!(all_even_tangency(&curve("L1", "x - t"), &branch).unwrap());
    assert!(!all_even_tangency(&curve("L", "x - 5t + 1"), &branch).unwrap());
    // Not a graph: the same conic written with a factor of 2 in x^2 form.
    let circle = curve("D", "x^2 - 2x + t^2 - 4");
    assert!(all_even_tangency(&curve("C3", "x - 1/2*t^2 + 2"), &circle).unwrap());
}

#[test]
fn combinatorics_of_first_line_conic_pair() {
    let c1 = curve("C1", "x - t^2");
    let c2 = curve("C2", "x - 9/8*t^2");
    let l1 = curve("L1", "x - 3t + 2");
    let l2 = curve("L2", "x + 3t + 2");
    let b1 = summarize(&[c1.clone(), c2.clone(), l1.clone(), l2.clone(), curve("L3", "x - t - 2")]).unwrap();
    let b2 = summarize(&[c1.clone(), c2.clone(), l1.clone(), l2.clone(), curve("L4", "x - 1")]).unwrap();
    assert!(same_combinatorics(&b1, &b2));
    assert!(same_combinatorics(&b2, &b1));
    assert!(same_combinatorics(&b1, &b1));
    let quartic = summarize(&[c1, c2]).unwrap();
    assert!(!same_combinatorics(&b1, &quartic));
    for p in &b1.points {
        assert!(!p.incidences.is_empty());
    }
}

#[test]
fn pencil_shapes() {
    let q = curve("Q", "(x - t^2)(x - 3t + 2)(x + 3t + 2)");
    let s = pencil_setup(&q).unwrap();
    assert_eq!(s.model.a2().to_string(), "-t^2 + 4");
    let bad = curve("Q4", "x^4 - t");
    assert!(matches!(pencil_setup(&bad).unwrap_err(), CoreError::WrongPencilShape { found: 4 }));
}

#[test]
fn tangent_conics_of_second_arrangement() {
    let q = curve("Q", "(x - t^2 + 2)(x^2 - 2x + t^2 - 4)");
    let setup = pencil_setup(&q).unwrap();
    let mut book = SectionBook::new(setup.model.clone(), 8);
    let qf = FieldSpec::rationals();
    for (l, c) in [("L0", "2"), ("L1", "t"), ("L2", "3t - 4")] {
        assert!(book.lift(l, &parse_unipoly(c, &qf, Var::T, &BTreeMap::new()).unwrap()).unwrap());
    }
    let conics = tangent_conics_through(book.model(), book.entries()).unwrap();
    let base: Vec<String> = conics
        .iter()
        .map(|c| book.embedding().preimage_poly(&c.as_graph().unwrap()).unwrap().to_string())
        .collect();
    assert_eq!(base[1], "1/2*t^2 - 2");
    assert_eq!(base[2], "1/10*t^2 - 2");
    let qk = q.map_field(book.embedding());
    for c in &conics {
        assert!(all_even_tangency(c, &qk).unwrap());
    }
    assert_eq!(base.iter().collect::<std::collections::BTreeSet<_>>().len(), 3);
}
