//! Comparison of computed values with the `[golden]` table of a scenario.

use mwl_algebra::{rational_from_str, rational_to_string, Rational, RationalFunction, UniPoly};

use crate::arrangements::tangent_conics_through;
use crate::divisibility::{all_odd_p_analysis, verify_presentation};
use crate::error::{CoreError, Result};
use crate::report::certify_pair;
use crate::scenario::{GoldenDup, Scenario};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenCheck {
    /// `kind target`, e.g. `dup sL3`.
    pub name: String,
    pub passed: bool,
    /// Informational checks are reported but never fail a run.
    pub informational: bool,
    pub detail: String,
}

impl GoldenCheck {
    pub fn fails_run(&self) -> bool {
        !self.passed && !self.informational
    }
}

fn check(name: String, informational: bool, r: Result<(bool, String)>) -> GoldenCheck {
    match r {
        Ok((passed, detail)) => GoldenCheck { name, passed, informational, detail },
        Err(e) => GoldenCheck { name, passed: false, informational, detail: format!("error: {e}") },
    }
}

fn expect<T: PartialEq + std::fmt::Display>(got: T, want: T) -> (bool, String) {
    let ok = got == want;
    (ok, if ok { format!("{got}") } else { format!("expected {want}, got {got}") })
}

fn rational(src: &str) -> Result<Rational> {
    Ok(rational_from_str(src)?)
}

/// Polynomial in `t` from the golden table, moved into the working field.
fn working_poly(scn: &Scenario, src: &str) -> Result<UniPoly> {
    Ok(scn.book.embedding().apply_poly(&scn.parse_poly(src)?))
}

/// `[2]s = (x, c * y)` with `c^2 = radicand`, for either sign of `c`.
fn check_dup(scn: &Scenario, g: &GoldenDup) -> Result<(bool, String)> {
    let m = scn.book.model();
    let d = m.smul(2, scn.section(&g.section)?)?;
    if !m.contains(&d) {
        return Ok((false, "[2]s is not on the curve".into()));
    }
    let (Some(x), Some(y)) = (d.x(), d.y()) else {
        return Ok((false, "[2]s is the zero section".into()));
    };
    let want_x = RationalFunction::from_poly(working_poly(scn, &g.x)?);
    if x != &want_x {
        return Ok((false, format!("x: expected {want_x}, got {x}")));
    }
    let want_y = RationalFunction::from_poly(working_poly(scn, &g.y)?);
    let ratio = y.try_div(&want_y)?;
    let c = match ratio.as_polynomial().filter(|p| p.is_constant()) {
        Some(p) => p.constant_term(),
        None => return Ok((false, format!("y: {y} is not a constant multiple of {want_y}"))),
    };
    let radicand = scn.book.embedding().apply(&scn.parse_constant(&g.radicand)?);
    if &c * &c != radicand {
        return Ok((false, format!("y: got ({c}) * ({want_y}), and ({c})^2 is not {}", g.radicand)));
    }
    Ok((true, format!("[2]{} = ({x}, +-sqrt({}) * ({want_y}))", g.section, g.radicand)))
}

/// All comparisons for one scenario, in a fixed order.
pub fn verify(scn: &Scenario) -> Vec<GoldenCheck> {
    let g = &scn.file.golden;
    let mut out = Vec::new();
    if let Some(f) = &g.fibers {
        let cfg = scn.surface.configuration();
        let mut types: Vec<String> = cfg
            .reducible()
            .flat_map(|f| std::iter::repeat_n(f.kind.to_string(), f.place.degree()))
            .collect();
        types.sort();
        out.push(check("fibers reducible".into(), false, Ok(expect(types.len(), f.reducible))));
        out.push(check("fibers euler".into(), false, Ok(expect(cfg.euler_total, f.euler))));
        if !f.types.is_empty() {
            let mut want = f.types.clone();
            want.sort();
            out.push(check("fibers types".into(), false, Ok(expect(types.join(", "), want.join(", ")))));
        }
    }
    if let Some(t) = &g.torsion {
        out.push(check(
            "torsion".into(),
            false,
            scn.surface.torsion().map(|tors| expect(tors.structure(), t.clone())),
        ));
    }
    for d in &g.dup {
        out.push(check(format!("dup {}", d.section), d.informational, check_dup(scn, d)));
    }
    for h in &g.height {
        let r = (|| {
            let got = scn.surface.pairing(scn.section(&h.left)?, scn.section(&h.right)?)?;
            Ok(expect(rational_to_string(&got), rational_to_string(&rational(&h.value)?)))
        })();
        out.push(check(format!("height <{}, {}>", h.left, h.right), false, r));
    }
    for c in &g.conic {
        let r = (|| {
            let s = scn.section(&c.section)?.clone();
            let conic = tangent_conics_through(scn.book.model(), &[(c.section.clone(), s)])?.remove(0);
            let got = conic.as_graph().ok_or_else(|| CoreError::InternalInconsistency("conic is not a graph".into()))?;
            Ok(expect(got, working_poly(scn, &c.x)?))
        })();
        out.push(check(format!("conic {}", c.section), false, r));
    }
    for d in &g.divide {
        let r = (|| {
            let pres = scn.presentation()?;
            let a = all_odd_p_analysis(&scn.surface, &pres, &scn.sections(&d.sections)?)?;
            Ok(expect(a.summary(), d.summary.clone()))
        })();
        out.push(check(format!("divide {}", d.sections.join(" ")), false, r));
    }
    if let Some(p) = &g.presentation {
        let r = (|| {
            let rep = verify_presentation(&scn.surface, &scn.presentation()?)?;
            let got = format!("passed {}, det {}", rep.passed(), rational_to_string(&rep.gram_det));
            Ok(expect(got, format!("passed {}, det {}", p.passed, rational_to_string(&rational(&p.det)?))))
        })();
        out.push(check("presentation".into(), false, r));
    }
    if let Some(p) = &g.pair {
        let r = certify_pair(scn, None).map(|o| {
            let got = o.json["certified"].as_bool().unwrap_or(false);
            let (ok, detail) = expect(got, p.certified);
            (ok, format!("{detail}: {}", o.json["verdict"].as_str().unwrap_or("")))
        });
        out.push(check("pair".into(), false, r));
    }
    out
}
