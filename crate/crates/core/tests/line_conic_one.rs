use std::collections::BTreeMap;

use mwl_algebra::{parse_bipoly, parse_unipoly, FieldSpec, Rational, Var};
use mwl_core::{fiber_configuration, section_from_graph, EllipticSurface, KodairaType, Section, WeierstrassModel};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn model() -> WeierstrassModel {
    let q = FieldSpec::rationals();
    let f = parse_bipoly("(x - t^2)(x - 3t + 2)(x + 3t + 2)", &q, &BTreeMap::new()).unwrap();
    WeierstrassModel::from_cubic(&f, 1).unwrap()
}

fn lift(m: &WeierstrassModel, c: &str) -> (WeierstrassModel, Section) {
    let c = parse_unipoly(c, m.field(), Var::T, &BTreeMap::new()).unwrap();
    let g = section_from_graph(m, &c, "s", 8).unwrap().unwrap();
    (g.model, g.plus)
}

#[test]
fn six_two_component_fibers() {
    let cfg = fiber_configuration(&model()).unwrap();
    let red: Vec<_> = cfg.reducible().collect();
    assert_eq!(red.len(), 6);
    assert!(red.iter().all(|f| f.kind == KodairaType::I(2)));
    assert_eq!(cfg.euler_total, 12);
}

#[test]
fn heights_and_torsion() {
    let m = model();
    let (m2, s3) = lift(&m, "t + 2");
    let s4 = section_from_graph(&m2, &parse_unipoly("1", m2.field(), Var::T, &BTreeMap::new()).unwrap(), "s", 8)
        .unwrap()
        .unwrap()
        .plus;
    let surf = EllipticSurface::new(m2.clone()).unwrap();
    assert_eq!(surf.height(&s3).unwrap(), r(1, 2));
    assert_eq!(surf.height(&s4).unwrap(), r(1, 2));
    assert_eq!(surf.pairing(&s3, &s4).unwrap(), r(0, 1));
    let c2 = m2.smul(2, &s3).unwrap();
    assert_eq!(surf.height(&c2).unwrap(), r(2, 1));
    assert_eq!(c2.x().unwrap().to_string(), "9/8*t^2");
    for p in [&s3, &s4, &c2] {
        assert_eq!(-surf.phi_self_intersection(p).unwrap(), surf.height(p).unwrap());
    }
    let tors = surf.torsion().unwrap();
    assert_eq!(tors.structure(), "Z/2 x Z/2");
}

#[test]
fn divisibility_asymmetry() {
    use mwl_core::{all_odd_p_analysis, coordinates_of, exists_cover_multipliers, verify_presentation, MWPresentation, Verdict};
    let m = model();
    let (m2, s3) = lift(&m, "t + 2");
    let s4 = section_from_graph(&m2, &parse_unipoly("1", m2.field(), Var::T, &BTreeMap::new()).unwrap(), "s", 8)
        .unwrap()
        .unwrap()
        .plus;
    let surf = EllipticSurface::new(m2.clone()).unwrap();
    let tt = m2.two_torsion().unwrap();
    assert_eq!(tt.len(), 3);
    let pres = MWPresentation {
        basis: vec![("L3".into(), s3.clone()), ("L4".into(), s4.clone())],
        torsion: vec![("T1".into(), tt[0].clone(), 2), ("T2".into(), tt[1].clone(), 2)],
        claimed_lattice: None,
    };
    let rep = verify_presentation(&surf, &pres).unwrap();
    assert!(rep.passed(), "{:?}", rep.checks);
    let c2 = m2.smul(2, &s3).unwrap();
    let c = coordinates_of(&surf, &pres, &c2).unwrap();
    assert_eq!(c.free, vec![2.into(), 0.into()]);
    for p in [3, 5, 7] {
        let yes = exists_cover_multipliers(&surf, &pres, &[c2.clone(), s3.clone()], p).unwrap();
        let Verdict::Exists { multipliers, .. } = &yes.verdict else { panic!("expected a witness for p = {p}") };
        assert_eq!(multipliers, &vec![1, p - 2]);
        let no = exists_cover_multipliers(&surf, &pres, &[c2.clone(), s4.clone()], p).unwrap();
        assert_eq!(no.verdict, Verdict::NotExists);
    }
    assert_eq!(all_odd_p_analysis(&surf, &pres, &[c2.clone(), s3.clone()]).unwrap().summary(), "exists for all odd p");
    assert_eq!(all_odd_p_analysis(&surf, &pres, &[c2, s4.clone()]).unwrap().summary(), "exists for no odd p");
    let sub = MWPresentation { basis: vec![("2L3".into(), m2.smul(2, &s3).unwrap()), ("L4".into(), s4)], ..pres };
    let rep = verify_presentation(&surf, &sub).unwrap();
    assert_eq!(rep.ratio, Some(r(4, 1)));
    assert!(!rep.passed());
}
