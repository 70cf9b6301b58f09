use mwl_core::certificate::{envelope, to_canonical_string};
use mwl_core::report::{certify_pair, PAIR_CERTIFIED, PAIR_INCONCLUSIVE};
use mwl_core::scenario::parse_combination;
use mwl_core::{bundled, golden, run_query, ErrorClass, Overrides, Scenario};
use serde_json::Value;

fn report(name: &str) -> Vec<golden::GoldenCheck> {
    golden::verify(&bundled::load(name).unwrap())
}

fn assert_all_pass(name: &str) {
    let checks = report(name);
    assert!(!checks.is_empty());
    for c in &checks {
        assert!(!c.fails_run(), "{name}: {} failed: {}", c.name, c.detail);
    }
}

#[test]
fn line_conic_one_goldens() {
    assert_all_pass("line-conic-1");
}

#[test]
fn line_conic_two_a_goldens() {
    assert_all_pass("line-conic-2a");
}

#[test]
fn line_conic_two_b_goldens() {
    assert_all_pass("line-conic-2b");
}

#[test]
fn line_conic_two_c_goldens() {
    assert_all_pass("line-conic-2c");
}

#[test]
fn smooth_goldens() {
    assert_all_pass("smooth");
}

#[test]
fn eg_three_goldens_and_double_shape() {
    assert_all_pass("eg-3");
    let scn = bundled::load("eg-3").unwrap();
    let m = scn.book.model();
    let d = m.smul(2, scn.section("sL1").unwrap()).unwrap();
    assert!(m.contains(&d));
    let x = d.x().unwrap().as_polynomial().expect("integral double");
    assert_eq!(x.degree(), Some(2));
    let info: Vec<_> = report("eg-3").into_iter().filter(|c| c.informational).collect();
    assert_eq!(info.len(), 1);
}

fn replace(text: &str, from: &str, to: &str) -> String {
    assert!(text.contains(from), "{from:?} not found");
    text.replacen(from, to, 1)
}

#[test]
fn corrupted_golden_is_named() {
    let text = replace(bundled::text("line-conic-1").unwrap(), "value = \"2\"", "value = \"3\"");
    let checks = golden::verify(&Scenario::parse(&text).unwrap());
    let failed: Vec<_> = checks.iter().filter(|c| c.fails_run()).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0].name, "height <sC2, sC2>");
    assert!(failed[0].detail.contains("expected 3, got 2"), "{}", failed[0].detail);
}

#[test]
fn swapped_pair_is_inconclusive() {
    // Swapping the legs asks for a cover over B2 and none over B1.
    let text = bundled::text("line-conic-1")
        .unwrap()
        .replace("[pair.first]", "[pair.tmp]")
        .replace("[pair.second]", "[pair.first]")
        .replace("[pair.tmp]", "[pair.second]");
    let scn = Scenario::parse(&text).unwrap();
    let out = certify_pair(&scn, Some(&[3])).unwrap();
    assert_eq!(out.json["certified"], Value::Bool(false));
    assert_eq!(out.json["verdict"], PAIR_INCONCLUSIVE);
    let reasons: Vec<&str> = out.json["reasons"].as_array().unwrap().iter().map(|r| r.as_str().unwrap()).collect();
    assert!(reasons.iter().any(|r| r.contains("B2: no cover exists where one was required at p = 3")), "{reasons:?}");
    assert!(reasons.iter().any(|r| r.contains("B1: a cover exists where non-existence was required at p = 3")), "{reasons:?}");
}

#[test]
fn certified_pair_wording() {
    let scn = bundled::load("line-conic-1").unwrap();
    let out = certify_pair(&scn, Some(&[3])).unwrap();
    assert_eq!(out.json["verdict"], PAIR_CERTIFIED);
    assert_eq!(
        PAIR_CERTIFIED,
        "Zariski pair certified (topological conclusion relies on the dihedral-cover criterion; not proven by this tool)"
    );
}

#[test]
fn certificates_are_byte_identical() {
    let run = || {
        let scn = bundled::load("line-conic-1").unwrap();
        let results: Vec<Value> = scn
            .file
            .queries
            .iter()
            .map(|q| run_query(&scn, q, &Overrides::default()).unwrap().json)
            .collect();
        to_canonical_string(&envelope(&scn, "all", Value::from(results)))
    };
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["scenario"]["sha256"].as_str().unwrap().len(), 64);
    assert!(a.contains("\"1/2\""));
    assert!(a.contains("\"2/1\""), "rationals carry a denominator");
}

#[test]
fn hash_tracks_the_text() {
    let text = bundled::text("smooth").unwrap();
    let a = Scenario::parse(text).unwrap();
    let b = Scenario::parse(&format!("{text}\n")).unwrap();
    assert_ne!(a.hash, b.hash);
    assert_eq!(a.hash, mwl_core::scenario::sha256_hex(text));
}

fn parse_error_class(text: &str) -> ErrorClass {
    Scenario::parse(text).map(|_| ()).unwrap_err().class()
}

#[test]
fn validation_errors() {
    let base = bundled::text("line-conic-1").unwrap();
    let cases = [
        replace(base, "name = \"line-conic-1\"", "nmae = \"x\""),
        replace(base, "lift = \"L4\"", "lift = \"L9\""),
        replace(base, "basis = [\"sL3\", \"sL4\"]", "basis = [\"sL3\", \"nope\"]"),
        replace(base, "equation = \"x - 1\"", "equation = \"x - 1 +\""),
        replace(base, "label = \"L4\"", "label = \"L3\""),
        replace(base, "kind = \"fibers\"", "kind = \"volume\""),
    ];
    for c in &cases {
        assert_eq!(parse_error_class(c), ErrorClass::Validation);
    }
    assert_eq!(ErrorClass::Validation.exit_code(), 2);
    assert_eq!(ErrorClass::Computation.exit_code(), 3);
    assert_eq!(ErrorClass::Unsupported.exit_code(), 4);
}

#[test]
fn degree_cap_is_unsupported() {
    let text = bundled::text("line-conic-2c").unwrap();
    let file: mwl_core::ScenarioFile = toml::from_str(text).unwrap();
    let err = Scenario::build(file, String::new(), 4).map(|_| ()).unwrap_err();
    assert_eq!(err.class(), ErrorClass::Unsupported, "{err}");
}

#[test]
fn combinations() {
    assert_eq!(parse_combination("2*a - b").unwrap(), vec![(2, "a".into()), (-1, "b".into())]);
    assert_eq!(parse_combination("-3s1 + s_2").unwrap(), vec![(-3, "s1".into()), (1, "s_2".into())]);
    assert_eq!(parse_combination(" sL3 ").unwrap(), vec![(1, "sL3".into())]);
    assert_eq!(parse_combination("3 c").unwrap(), vec![(3, "c".into())]);
    for bad in ["", "2*", "a + 2*", "a * b"] {
        assert!(parse_combination(bad).is_err(), "{bad:?}");
    }
}
