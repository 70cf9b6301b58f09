use std::collections::BTreeMap;
use std::sync::LazyLock;

use mwl_algebra::{parse_bipoly, BigInt, FieldSpec, Rational, UniPoly, Var};
use mwl_core::{
    bundled, coordinates_of, intersection_multiplicities, p_divisible, CoreError, MWPresentation, PlaneCurve, Scenario,
    Section, WeierstrassModel,
};
use proptest::prelude::*;

struct Bundled {
    scn: Scenario,
    pres: MWPresentation,
}

static MODELS: LazyLock<Vec<Bundled>> = LazyLock::new(|| {
    ["line-conic-1", "line-conic-2a", "eg-3"]
        .iter()
        .map(|n| {
            let scn = bundled::load(n).unwrap();
            let pres = scn.presentation().unwrap();
            Bundled { scn, pres }
        })
        .collect()
});

/// Free and torsion coefficients of a random element.
#[derive(Clone, Debug)]
struct Combo {
    model: usize,
    free: Vec<i64>,
    torsion: Vec<u64>,
}

fn combo(model: usize, bound: i64) -> impl Strategy<Value = Combo> {
    let b = &MODELS[model];
    let free = prop::collection::vec(-bound..=bound, b.pres.rank());
    let torsion: Vec<_> = b.pres.torsion.iter().map(|t| 0..t.2).collect();
    (free, torsion).prop_map(move |(free, torsion)| Combo { model, free, torsion })
}

fn build(c: &Combo) -> Section {
    let b = &MODELS[c.model];
    let m = b.scn.book.model();
    let mut acc = b.pres.torsion_element(&b.scn.surface, &c.torsion).unwrap();
    for (k, (_, s)) in c.free.iter().zip(&b.pres.basis) {
        acc = m.add(&acc, &m.smul(*k, s).unwrap()).unwrap();
    }
    acc
}

fn triple() -> impl Strategy<Value = (Combo, Combo, Combo)> {
    (0usize..3).prop_flat_map(|i| (combo(i, 1), combo(i, 1), combo(i, 1)))
}

fn pair() -> impl Strategy<Value = (Combo, Combo)> {
    (0usize..3).prop_flat_map(|i| (combo(i, 1), combo(i, 1)))
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn group_law((a, b, c) in triple()) {
        let m = MODELS[a.model].scn.book.model();
        let (p, q, r) = (build(&a), build(&b), build(&c));
        prop_assert!(m.contains(&p));
        prop_assert_eq!(m.add(&m.add(&p, &q).unwrap(), &r).unwrap(), m.add(&p, &m.add(&q, &r).unwrap()).unwrap());
        prop_assert_eq!(m.add(&p, &q).unwrap(), m.add(&q, &p).unwrap());
        prop_assert_eq!(m.add(&p, &Section::Zero).unwrap(), p.clone());
        prop_assert_eq!(m.add(&p, &m.neg(&p)).unwrap(), Section::Zero);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn pairing_is_bilinear((a, b) in pair(), k in -3i64..=3) {
        let surf = &MODELS[a.model].scn.surface;
        let m = surf.model();
        let (s, t) = (build(&a), build(&b));
        let lhs = surf.pairing(&m.smul(k, &s).unwrap(), &t).unwrap();
        prop_assert_eq!(lhs, q(k) * surf.pairing(&s, &t).unwrap());
    }

    #[test]
    fn height_vanishes_exactly_on_torsion(a in (0usize..3).prop_flat_map(|i| combo(i, 1))) {
        let surf = &MODELS[a.model].scn.surface;
        let s = build(&a);
        let h = surf.height(&s).unwrap();
        prop_assert!(h >= q(0));
        let torsion = a.free.iter().all(|k| *k == 0);
        prop_assert_eq!(h == q(0), torsion);
        prop_assert_eq!(surf.torsion_order(&s).unwrap().is_some(), torsion);
    }

    #[test]
    fn coordinates_round_trip(a in (0usize..3).prop_flat_map(|i| combo(i, 2))) {
        let b = &MODELS[a.model];
        let c = coordinates_of(&b.scn.surface, &b.pres, &build(&a)).unwrap();
        prop_assert_eq!(c.free, a.free.iter().map(|k| BigInt::from(*k)).collect::<Vec<_>>());
        prop_assert_eq!(c.torsion, a.torsion);
    }

    #[test]
    fn p_multiples_are_p_divisible(a in combo(0, 1), b in combo(0, 3), p in prop::sample::select(vec![3u64, 5, 7])) {
        let m = MODELS[0].scn.book.model();
        let (surf, pres) = (&MODELS[0].scn.surface, &MODELS[0].pres);
        prop_assert!(p_divisible(surf, pres, &m.smul(p as i64, &build(&a)).unwrap(), p).unwrap());
        let expect = b.free.iter().all(|k| k.rem_euclid(p as i64) == 0);
        prop_assert_eq!(p_divisible(surf, pres, &build(&b), p).unwrap(), expect);
    }
}

fn poly(c: &[i64]) -> UniPoly {
    UniPoly::from_ints(&FieldSpec::rationals(), Var::T, c)
}

fn identity_holds(m: &WeierstrassModel) -> bool {
    let inv = m.invariants();
    let lhs = &inv.c4.pow(3) - &inv.c6.pow(2);
    lhs == inv.delta.scale_rational(&q(1728))
}

fn model_coeffs() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>)> {
    let c = |n| prop::collection::vec(-4i64..=4, n);
    (c(3), c(5), c(7))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn discriminant_identity_survives_transforms((a2, a4, a6) in model_coeffs(), r in prop::collection::vec(-3i64..=3, 3)) {
        let Ok(m) = WeierstrassModel::new(poly(&a2), poly(&a4), poly(&a6), 1) else {
            return Ok(());
        };
        prop_assert!(identity_holds(&m));
        let moved = m.translate(&poly(&r));
        prop_assert!(identity_holds(&moved));
        prop_assert_eq!(moved.discriminant(), m.discriminant());
        prop_assert!(identity_holds(&m.short_form().0));
        prop_assert!(identity_holds(&m.chart_at_infinity().unwrap()));
        // Scaling by t^(2i) makes the model non-minimal at t = 0.
        let t = poly(&[0, 1]);
        let scaled = WeierstrassModel::new(
            &m.a2().clone() * &t.pow(2),
            &m.a4().clone() * &t.pow(4),
            &m.a6().clone() * &t.pow(6),
            2,
        )
        .unwrap();
        prop_assert!(identity_holds(&scaled));
        let (min, steps) = scaled.minimalize_at(&t).unwrap();
        prop_assert!(steps >= 1);
        prop_assert!(identity_holds(&min));
    }

    #[test]
    fn bezout_totals(f in graph(), g in graph()) {
        let (cf, cg) = (curve("F", &f), curve("G", &g));
        match intersection_multiplicities(&cf, &cg) {
            Ok(v) => {
                let total: usize = v.iter().map(|i| i.point.degree() * i.multiplicity).sum();
                prop_assert_eq!(total, degree(&f) * degree(&g));
            }
            // Equal curves, or parallel lines meeting off the distinguished point.
            Err(CoreError::CommonComponent(..)) => prop_assert_eq!(&f, &g),
            Err(CoreError::Unsupported(_)) => prop_assert!(degree(&f) == 1 && f[1] == g[1]),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}

/// `x = c0 + c1 t + c2 t^2` with a nonconstant right side.
fn graph() -> impl Strategy<Value = Vec<i64>> {
    (1usize..=2)
        .prop_flat_map(|d| (prop::collection::vec(-3i64..=3, d), prop::sample::select(vec![-2i64, -1, 1, 2, 3])))
        .prop_map(|(mut c, lead)| {
            c.push(lead);
            c
        })
}

fn degree(c: &[i64]) -> usize {
    c.len() - 1
}

fn curve(label: &str, c: &[i64]) -> PlaneCurve {
    let rhs: Vec<String> = c.iter().enumerate().map(|(i, k)| format!("({k})*t^{i}")).collect();
    let eq = format!("x - ({})", rhs.join(" + "));
    PlaneCurve::new(label, parse_bipoly(&eq, &FieldSpec::rationals(), &BTreeMap::new()).unwrap()).unwrap()
}
