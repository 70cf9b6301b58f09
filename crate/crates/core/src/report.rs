//! Running scenario queries. Every query yields a JSON value with exact
//! data and a plain-text rendering of the same data.

use std::fmt::Write as _;

use mwl_algebra::{rational_to_string, BigInt, Rational};
use serde_json::{json, Value};

use crate::arrangements::{all_even_tangency, same_combinatorics, summarize, tangent_conics_through, ArrangementSummary};
use crate::divisibility::{
    all_odd_p_analysis, coordinates_of, exists_cover_multipliers, verify_presentation, Check, Coordinates,
    OddPrimeAnalysis, PresentationReport, PrimeResult, Verdict,
};
use crate::error::{CoreError, Result};
use crate::scenario::{ArrangementDecl, Query, Scenario};
use crate::sections::Section;

/// Wording of a positive pair verdict. The topological step is not
/// computed here.
pub const PAIR_CERTIFIED: &str =
    "Zariski pair certified (topological conclusion relies on the dihedral-cover criterion; not proven by this tool)";
pub const PAIR_INCONCLUSIVE: &str = "inconclusive";

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub json: Value,
    pub text: String,
}

/// Command-line overrides for `divide` and `certify-pair`.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub primes: Option<Vec<u64>>,
    pub all_primes: bool,
}

/// Exact rational as `num/den`, denominator always present.
pub fn q(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn qs(v: &[Rational]) -> Value {
    Value::from(v.iter().map(q).collect::<Vec<_>>())
}

fn ints(v: &[BigInt]) -> Value {
    Value::from(v.iter().map(|b| b.to_string()).collect::<Vec<_>>())
}

pub fn section_json(s: &Section) -> Value {
    match s {
        Section::Zero => json!("O"),
        Section::Affine { x, y } => json!({ "x": x.to_string(), "y": y.to_string() }),
    }
}

fn checks_json(c: &[Check]) -> Value {
    Value::from(c.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect::<Vec<_>>())
}

fn coordinates_json(c: &Coordinates) -> Value {
    json!({ "free": ints(&c.free), "torsion": c.torsion })
}

fn field_json(scn: &Scenario) -> Value {
    json!({
        "declared": scn.book.base_field().to_string(),
        "working": scn.book.model().field().to_string(),
        "extensions": scn.book.extensions(),
    })
}

pub fn run_query(scn: &Scenario, query: &Query, ov: &Overrides) -> Result<Outcome> {
    match query {
        Query::Fibers => fibers(scn),
        Query::Height { sections } => height(scn, sections),
        Query::Dup { section } => dup(scn, section),
        Query::Divide { sections, primes, all_primes } => {
            let primes = ov.primes.clone().unwrap_or_else(|| primes.clone());
            divide(scn, sections, &primes, *all_primes || ov.all_primes)
        }
        Query::CertifyPair => certify_pair(scn, ov.primes.as_deref()),
    }
}

pub fn fibers(scn: &Scenario) -> Result<Outcome> {
    let surf = &scn.surface;
    let cfg = surf.configuration();
    let tors = surf.torsion()?;
    let mut rows = Vec::new();
    let mut text = format!("model: {}\n", surf.model());
    let _ = writeln!(text, "{:<28} {:<6} {:>10} {:>6} {:>10}  group", "place", "type", "components", "euler", "ord(D)");
    for f in &cfg.fibers {
        rows.push(json!({
            "place": f.place.label(),
            "degree": f.place.degree(),
            "type": f.kind.to_string(),
            "components": f.components,
            "euler": f.euler,
            "ord_delta": f.ord_delta,
            "component_group": f.component_group,
            "chart": f.chart.steps.iter().map(|s| json!({ "action": s.action, "value": s.value })).collect::<Vec<_>>(),
        }));
        let _ = writeln!(
            text,
            "{:<28} {:<6} {:>10} {:>6} {:>10}  {}",
            f.place.label(),
            f.kind.to_string(),
            f.components,
            f.euler * f.place.degree() as u32,
            f.ord_delta,
            f.component_group
        );
    }
    let reducible: Vec<String> = cfg
        .reducible()
        .flat_map(|f| std::iter::repeat_n(f.kind.to_string(), f.place.degree()))
        .collect();
    if reducible.is_empty() {
        text.push_str("no reducible fibers\n");
    } else {
        let _ = writeln!(text, "reducible fibers: {} ({})", reducible.len(), reducible.join(", "));
    }
    let _ = writeln!(text, "Euler total: {} = 12 chi, chi = {}", cfg.euler_total, cfg.chi);
    let _ = writeln!(text, "torsion: {}", tors.structure());
    Ok(Outcome {
        json: json!({
            "model": surf.model().to_string(),
            "field": field_json(scn),
            "chi": cfg.chi,
            "euler_total": cfg.euler_total,
            "fibers": rows,
            "reducible": reducible,
            "torsion": {
                "structure": tors.structure(),
                "order": tors.order(),
                "elements": tors.elements.iter().map(section_json).collect::<Vec<_>>(),
            },
        }),
        text,
    })
}

pub fn height(scn: &Scenario, labels: &[String]) -> Result<Outcome> {
    let surf = &scn.surface;
    let secs = scn.sections(labels)?;
    let mut reports = Vec::new();
    let mut text = String::new();
    for (l, s) in labels.iter().zip(&secs) {
        let r = surf.height_report(s)?;
        let _ = writeln!(
            text,
            "<{l}, {l}> = 2 chi + 2 (P.O) - sum contr = {} (P.O = {})",
            rational_to_string(&r.height),
            r.intersection_with_zero
        );
        for c in &r.contributions {
            let _ = writeln!(
                text,
                "    {} {} x{}: component {}, contr {}",
                c.place,
                c.kind,
                c.multiplicity,
                c.local.component.map_or("?".into(), |i| i.to_string()),
                rational_to_string(&c.local.contribution)
            );
        }
        reports.push(json!({
            "section": l,
            "height": q(&r.height),
            "intersection_with_zero": r.intersection_with_zero,
            "contributions": r.contributions.iter().map(|c| json!({
                "place": c.place,
                "type": c.kind.to_string(),
                "multiplicity": c.multiplicity,
                "component": c.local.component,
                "contribution": q(&c.local.contribution),
            })).collect::<Vec<_>>(),
        }));
    }
    let gram = surf.gram(&secs)?;
    let det = mwl_algebra::linalg::det(&gram);
    let _ = writeln!(text, "Gram matrix ({}):", labels.join(", "));
    for row in &gram {
        let _ = writeln!(text, "    [{}]", row.iter().map(rational_to_string).collect::<Vec<_>>().join(", "));
    }
    let _ = writeln!(text, "det = {}", rational_to_string(&det));
    Ok(Outcome {
        json: json!({
            "sections": labels,
            "reports": reports,
            "gram": gram.iter().map(|r| qs(r)).collect::<Vec<_>>(),
            "det": q(&det),
        }),
        text,
    })
}

pub fn dup(scn: &Scenario, label: &str) -> Result<Outcome> {
    let m = scn.book.model();
    let s = scn.section(label)?;
    let d = m.smul(2, s)?;
    let on_curve = m.contains(&d);
    if !on_curve {
        return Err(CoreError::InternalInconsistency(format!("[2]{label} is not on the curve")));
    }
    let x_poly = d.x().and_then(|x| x.as_polynomial());
    let conic = match (&x_poly, x_poly.as_ref().and_then(|x| x.degree())) {
        (Some(_), Some(2)) => {
            let c = tangent_conics_through(m, &[(label.to_string(), s.clone())])?.remove(0);
            let even = all_even_tangency(&c, &scn.branch())?;
            Some((c, even))
        }
        _ => None,
    };
    let mut text = format!("{label} = {s}\n[2]{label} = {d}\non curve: {on_curve}\n");
    if let Some((c, even)) = &conic {
        let _ = writeln!(text, "tangent conic {c}; even contact with the branch curve: {even}");
    }
    Ok(Outcome {
        json: json!({
            "section": label,
            "field": field_json(scn),
            "point": section_json(s),
            "double": section_json(&d),
            "on_curve": on_curve,
            "x_degree": x_poly.as_ref().and_then(|x| x.degree()),
            "tangent_conic": conic.as_ref().map(|(c, even)| json!({
                "equation": c.poly.to_string(),
                "even_tangency": even,
            })),
        }),
        text,
    })
}

fn prime_json(r: &PrimeResult, coords: &[(String, Coordinates)]) -> Value {
    let verdict = match &r.verdict {
        Verdict::Exists { multipliers, divisor, divisor_coordinates } => json!({
            "exists": {
                "multipliers": multipliers,
                "divisor": section_json(divisor),
                "divisor_coordinates": coordinates_json(divisor_coordinates),
            }
        }),
        Verdict::NotExists => {
            let p = BigInt::from(r.p);
            let trace: Vec<Value> = coords
                .iter()
                .map(|(l, c)| {
                    let red: Vec<BigInt> = c.free.iter().map(|v| ((v % &p) + &p) % &p).collect();
                    json!({ "section": l, "coordinates": coordinates_json(c), "mod_p": ints(&red) })
                })
                .collect();
            json!({ "not_exists": { "trace": trace } })
        }
    };
    json!({ "p": r.p, "verdict": verdict, "checks": checks_json(&r.checks) })
}

fn prime_text(r: &PrimeResult) -> String {
    match &r.verdict {
        Verdict::Exists { multipliers, divisor, .. } => {
            format!("p = {}: exists, multipliers {multipliers:?}, divisor {divisor}", r.p)
        }
        Verdict::NotExists => format!("p = {}: no multipliers in [1, {}]", r.p, r.p - 1),
    }
}

fn odd_json(a: &OddPrimeAnalysis, coords: &[(String, Coordinates)]) -> Value {
    json!({
        "summary": a.summary(),
        "generic_exists": a.generic_exists,
        "kernel_basis": a.kernel_basis.iter().map(|k| ints(k)).collect::<Vec<_>>(),
        "invariant_factors": ints(&a.invariant_factors),
        "exceptional": a.exceptional.iter().map(|r| prime_json(r, coords)).collect::<Vec<_>>(),
    })
}

/// Results of the divisibility engine for one list of sections.
struct Division {
    coords: Vec<(String, Coordinates)>,
    per_prime: Vec<PrimeResult>,
    all_odd: Option<OddPrimeAnalysis>,
}

impl Division {
    fn run(scn: &Scenario, labels: &[String], primes: &[u64], all_odd: bool) -> Result<Self> {
        let pres = scn.presentation()?;
        let secs = scn.sections(labels)?;
        let coords = labels
            .iter()
            .zip(&secs)
            .map(|(l, s)| Ok((l.clone(), coordinates_of(&scn.surface, &pres, s)?)))
            .collect::<Result<Vec<_>>>()?;
        let per_prime =
            primes.iter().map(|&p| exists_cover_multipliers(&scn.surface, &pres, &secs, p)).collect::<Result<_>>()?;
        let all_odd = if all_odd { Some(all_odd_p_analysis(&scn.surface, &pres, &secs)?) } else { None };
        Ok(Division { coords, per_prime, all_odd })
    }

    fn json(&self, labels: &[String]) -> Value {
        json!({
            "sections": labels,
            "coordinates": self.coords.iter().map(|(l, c)| json!({ "section": l, "coordinates": coordinates_json(c) })).collect::<Vec<_>>(),
            "primes": self.per_prime.iter().map(|r| prime_json(r, &self.coords)).collect::<Vec<_>>(),
            "all_odd_primes": self.all_odd.as_ref().map(|a| odd_json(a, &self.coords)),
        })
    }

    fn text(&self, labels: &[String]) -> String {
        let mut t = format!("sections: {}\n", labels.join(", "));
        for (l, c) in &self.coords {
            let free: Vec<String> = c.free.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(t, "    {l}: free ({}), torsion {:?}", free.join(", "), c.torsion);
        }
        for r in &self.per_prime {
            let _ = writeln!(t, "    {}", prime_text(r));
        }
        if let Some(a) = &self.all_odd {
            let _ = writeln!(t, "    all odd p: {}", a.summary());
        }
        t
    }
}

pub fn divide(scn: &Scenario, labels: &[String], primes: &[u64], all_odd: bool) -> Result<Outcome> {
    if primes.is_empty() && !all_odd {
        return Err(CoreError::Scenario("divide needs a prime or all_primes".into()));
    }
    let d = Division::run(scn, labels, primes, all_odd)?;
    Ok(Outcome { json: d.json(labels), text: d.text(labels) })
}

pub fn presentation_json(r: &PresentationReport) -> Value {
    json!({
        "gram": r.gram.iter().map(|row| qs(row)).collect::<Vec<_>>(),
        "det": q(&r.gram_det),
        "predicted_det": q(&r.predicted_det),
        "ratio": r.ratio.as_ref().map(q),
        "expected_rank": r.expected_rank,
        "checks": checks_json(&r.checks),
        "passed": r.passed(),
    })
}

fn summary_json(s: &ArrangementSummary) -> Value {
    json!({
        "components": s.components.iter().map(|(l, d)| json!({ "label": l, "degree": d })).collect::<Vec<_>>(),
        "points": s.points.iter().map(|p| json!({
            "point": p.point.describe(),
            "orbit_size": p.point.degree(),
            "incidences": p.incidences.iter().map(|((i, j), m)| json!([s.components[*i].0, s.components[*j].0, m])).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

struct Leg {
    json: Value,
    reasons: Vec<String>,
    text: String,
}

fn leg(scn: &Scenario, decl: &ArrangementDecl, primes: &[u64], want_exists: bool) -> Result<Leg> {
    let mut reasons = Vec::new();
    let mut text = format!("{}: {}\n", decl.label, decl.curves.join(" + "));
    let branch = scn.branch();
    let e = scn.book.embedding();
    let mut marked = Vec::new();
    for (c, s) in decl.marked.iter().zip(&decl.sections) {
        let curve = scn.curve(c)?.map_field(e);
        let sec = scn.section(s)?;
        let on_curve = match (curve.as_graph(), sec.x().and_then(|x| x.as_polynomial())) {
            (Some(g), Some(x)) => g == x,
            _ => false,
        };
        let even = all_even_tangency(&curve, &branch)?;
        if !on_curve {
            reasons.push(format!("{}: section {s} does not lie over {c}", decl.label));
        }
        if !even {
            reasons.push(format!("{}: {c} does not meet the branch curve with even multiplicities", decl.label));
        }
        let _ = writeln!(text, "    {c} <- {s}: section over curve {on_curve}, even contact {even}");
        marked.push(json!({ "curve": c, "section": s, "section_over_curve": on_curve, "even_tangency": even }));
    }
    let d = Division::run(scn, &decl.sections, primes, true)?;
    for r in &d.per_prime {
        let exists = matches!(r.verdict, Verdict::Exists { .. });
        if exists != want_exists {
            reasons.push(format!(
                "{}: {} at p = {}",
                decl.label,
                if exists { "a cover exists where non-existence was required" } else { "no cover exists where one was required" },
                r.p
            ));
        }
        if !r.checks.iter().all(|c| c.passed) {
            reasons.push(format!("{}: re-verification failed at p = {}", decl.label, r.p));
        }
    }
    let odd = d.all_odd.as_ref().expect("requested");
    let want = if want_exists { "exists for all odd p" } else { "exists for no odd p" };
    if odd.summary() != want {
        reasons.push(format!("{}: all odd primes: {} (needed: {want})", decl.label, odd.summary()));
    }
    text.push_str(&d.text(&decl.sections));
    Ok(Leg {
        json: json!({
            "label": decl.label,
            "curves": decl.curves,
            "marked": marked,
            "required": if want_exists { "exists" } else { "not_exists" },
            "divisibility": d.json(&decl.sections),
        }),
        reasons,
        text,
    })
}

pub fn certify_pair(scn: &Scenario, primes_override: Option<&[u64]>) -> Result<Outcome> {
    let pair = scn.file.pair.as_ref().ok_or_else(|| CoreError::Scenario("no [pair] table".into()))?;
    let primes = primes_override.unwrap_or(&pair.primes).to_vec();
    if let Some(&p) = primes.iter().find(|&&p| p == 2) {
        return Err(CoreError::Scenario(format!("certify-pair needs odd primes, got {p}")));
    }
    let arrangement = |a: &ArrangementDecl| -> Result<ArrangementSummary> {
        let curves = a.curves.iter().map(|c| scn.curve(c).cloned()).collect::<Result<Vec<_>>>()?;
        summarize(&curves)
    };
    let (s1, s2) = (arrangement(&pair.first)?, arrangement(&pair.second)?);
    let same = same_combinatorics(&s1, &s2);
    let mut reasons = Vec::new();
    if !same {
        reasons.push("the two arrangements have different combinatorics".to_string());
    }
    let pres = verify_presentation(&scn.surface, &scn.presentation()?)?;
    if !pres.passed() {
        reasons.push("the Mordell-Weil presentation failed verification".to_string());
    }
    let first = leg(scn, &pair.first, &primes, true)?;
    let second = leg(scn, &pair.second, &primes, false)?;
    reasons.extend(first.reasons.iter().cloned());
    reasons.extend(second.reasons.iter().cloned());
    let verdict = if reasons.is_empty() { PAIR_CERTIFIED } else { PAIR_INCONCLUSIVE };
    let mut text = format!("same combinatorics: {same}\npresentation verified: {}\n", pres.passed());
    text.push_str(&first.text);
    text.push_str(&second.text);
    for r in &reasons {
        let _ = writeln!(text, "reason: {r}");
    }
    let _ = writeln!(text, "verdict: {verdict}");
    Ok(Outcome {
        json: json!({
            "field": field_json(scn),
            "combinatorics": { "same": same, "first": summary_json(&s1), "second": summary_json(&s2) },
            "presentation": presentation_json(&pres),
            "primes": primes,
            "first": first.json,
            "second": second.json,
            "certified": reasons.is_empty(),
            "reasons": reasons,
            "verdict": verdict,
        }),
        text,
    })
}
