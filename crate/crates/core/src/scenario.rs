//! Scenario files: a field, curves, the branch curve of the pencil, named
//! sections, a presentation of the Mordell-Weil group and the queries to
//! run. The on-disk format is TOML.

use std::collections::BTreeMap;

use mwl_algebra::{
    degree_cap_from_env, parse_bipoly, parse_field_elem, parse_rational_poly, parse_unipoly, FieldElem, FieldSpec,
    UniPoly, Var,
};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::arrangements::{pencil_setup, PencilSetup, PlaneCurve};
use crate::book::SectionBook;
use crate::divisibility::MWPresentation;
use crate::error::{CoreError, Result};
use crate::heights::EllipticSurface;
use crate::sections::Section;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub field: Option<FieldDecl>,
    /// Named constants, written in terms of the field generator.
    #[serde(default)]
    pub constants: BTreeMap<String, String>,
    #[serde(default, rename = "curve")]
    pub curves: Vec<CurveDecl>,
    pub pencil: PencilDecl,
    #[serde(default, rename = "section")]
    pub sections: Vec<SectionDecl>,
    pub presentation: Option<PresentationDecl>,
    pub pair: Option<PairDecl>,
    #[serde(default, rename = "query")]
    pub queries: Vec<Query>,
    #[serde(default)]
    pub golden: Golden,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDecl {
    pub generator: String,
    pub minimal_polynomial: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDecl {
    pub label: String,
    pub equation: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilDecl {
    /// Curve labels whose sum is the branch curve.
    pub branch: Vec<String>,
}

/// Exactly one of `lift`, `x` and `combination` is set.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionDecl {
    pub label: String,
    /// Label of a curve `x = c(t)` to lift.
    pub lift: Option<String>,
    /// A graph `x = c(t)` given directly.
    pub x: Option<String>,
    /// Integer combination of earlier sections, e.g. `2*sL3 - T1`.
    pub combination: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDecl {
    pub basis: Vec<String>,
    #[serde(default)]
    pub torsion: Vec<TorsionDecl>,
    pub lattice: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsionDecl {
    pub section: String,
    pub order: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDecl {
    pub first: ArrangementDecl,
    pub second: ArrangementDecl,
    #[serde(default = "default_primes")]
    pub primes: Vec<u64>,
}

fn default_primes() -> Vec<u64> {
    vec![3, 5, 7]
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementDecl {
    pub label: String,
    pub curves: Vec<String>,
    /// The horizontal curves whose sections enter the criterion.
    pub marked: Vec<String>,
    /// Sections lifting the marked curves, in the same order.
    pub sections: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Query {
    Fibers,
    Height {
        sections: Vec<String>,
    },
    Dup {
        section: String,
    },
    Divide {
        sections: Vec<String>,
        #[serde(default)]
        primes: Vec<u64>,
        #[serde(default)]
        all_primes: bool,
    },
    CertifyPair,
}

impl Query {
    pub fn kind(&self) -> &'static str {
        match self {
            Query::Fibers => "fibers",
            Query::Height { .. } => "height",
            Query::Dup { .. } => "dup",
            Query::Divide { .. } => "divide",
            Query::CertifyPair => "certify-pair",
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Golden {
    pub fibers: Option<GoldenFibers>,
    /// Torsion structure such as `Z/2 x Z/2`.
    pub torsion: Option<String>,
    #[serde(default)]
    pub dup: Vec<GoldenDup>,
    #[serde(default)]
    pub height: Vec<GoldenHeight>,
    #[serde(default)]
    pub conic: Vec<GoldenConic>,
    #[serde(default)]
    pub divide: Vec<GoldenDivide>,
    pub presentation: Option<GoldenPresentation>,
    pub pair: Option<GoldenPair>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenFibers {
    pub reducible: usize,
    pub euler: u32,
    /// Types of the reducible fibers, sorted, one entry per place.
    #[serde(default)]
    pub types: Vec<String>,
}

/// `[2]s = (x, +-sqrt(radicand) * y)`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenDup {
    pub section: String,
    pub x: String,
    pub y: String,
    pub radicand: String,
    /// Reported but never fails the run.
    #[serde(default)]
    pub informational: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenHeight {
    pub left: String,
    pub right: String,
    pub value: String,
}

/// The tangent conic `x = c(t)` obtained from `[2]section`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenConic {
    pub section: String,
    pub x: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenDivide {
    pub sections: Vec<String>,
    pub summary: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenPresentation {
    pub passed: bool,
    pub det: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenPair {
    pub certified: bool,
}

/// A loaded scenario: everything declared, computed over one field.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub file: ScenarioFile,
    /// sha256 of the scenario text, hex.
    pub hash: String,
    pub base: FieldSpec,
    pub constants: BTreeMap<String, FieldElem>,
    /// Declared curves over the declared field.
    pub curves: Vec<PlaneCurve>,
    pub setup: PencilSetup,
    pub book: SectionBook,
    pub surface: EllipticSurface,
}

fn scenario_err(msg: impl Into<String>) -> CoreError {
    CoreError::Scenario(msg.into())
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Parses `2*a - b + 3 c` into `(coefficient, label)` terms.
pub fn parse_combination(src: &str) -> Result<Vec<(i64, String)>> {
    let mut out = Vec::new();
    let s: String = src.split_whitespace().collect();
    if s.is_empty() {
        return Err(scenario_err("empty combination"));
    }
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ if out.is_empty() => (1, rest),
            _ => return Err(scenario_err(format!("expected + or - in {src:?}"))),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
        let (coef, label) = if digits == 0 {
            (1, term)
        } else {
            let c: i64 = term[..digits].parse().map_err(|_| scenario_err(format!("bad coefficient in {src:?}")))?;
            (c, term[digits..].strip_prefix('*').unwrap_or(&term[digits..]))
        };
        if label.is_empty() || !label.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
            return Err(scenario_err(format!("bad section name {label:?} in {src:?}")));
        }
        out.push((sign * coef, label.to_string()));
    }
    Ok(out)
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| scenario_err(e.to_string()))?;
        Self::build(file, sha256_hex(text), degree_cap_from_env())
    }

    pub fn build(file: ScenarioFile, hash: String, degree_cap: usize) -> Result<Self> {
        let base = match &file.field {
            None => FieldSpec::rationals(),
            Some(f) => FieldSpec::new(parse_rational_poly(&f.minimal_polynomial, &f.generator)?, &f.generator)?,
        };
        let mut constants = BTreeMap::new();
        for (name, src) in &file.constants {
            let v = parse_field_elem(src, &base, &constants)?;
            constants.insert(name.clone(), v);
        }
        let mut curves: Vec<PlaneCurve> = Vec::new();
        for c in &file.curves {
            if curves.iter().any(|d| d.label == c.label) {
                return Err(scenario_err(format!("curve {} declared twice", c.label)));
            }
            curves.push(PlaneCurve::new(&c.label, parse_bipoly(&c.equation, &base, &constants)?)?);
        }
        let find = |label: &str| {
            curves.iter().find(|c| c.label == label).ok_or_else(|| scenario_err(format!("unknown curve {label:?}")))
        };
        let branch_parts: Vec<&PlaneCurve> = file.pencil.branch.iter().map(|l| find(l)).collect::<Result<_>>()?;
        let branch = PlaneCurve::union("Q", &branch_parts)?;
        let setup = pencil_setup(&branch)?;
        let mut book = SectionBook::new(setup.model.clone(), degree_cap);
        for s in &file.sections {
            if book.get(&s.label).is_ok() {
                return Err(scenario_err(format!("section {} declared twice", s.label)));
            }
            match (&s.lift, &s.x, &s.combination) {
                (Some(curve), None, None) => {
                    let c = find(curve)?
                        .as_graph()
                        .ok_or_else(|| scenario_err(format!("curve {curve} is not a graph x = c(t)")))?;
                    if !book.lift(&s.label, &c)? {
                        return Err(scenario_err(format!("{curve} does not lift: f(t, c(t)) is not a constant times a square")));
                    }
                }
                (None, Some(x), None) => {
                    let c = parse_unipoly(x, &base, Var::T, &constants)?;
                    if !book.lift(&s.label, &c)? {
                        return Err(scenario_err(format!("x = {x} does not lift")));
                    }
                }
                (None, None, Some(expr)) => {
                    let m = book.model().clone();
                    let mut acc = Section::Zero;
                    for (k, l) in parse_combination(expr)? {
                        acc = m.add(&acc, &m.smul(k, book.get(&l)?)?)?;
                    }
                    book.insert(&s.label, acc)?;
                }
                _ => {
                    return Err(scenario_err(format!(
                        "section {} needs exactly one of lift, x, combination",
                        s.label
                    )))
                }
            }
        }
        let surface = EllipticSurface::new(book.model().clone())?;
        let scn = Scenario { file, hash, base, constants, curves, setup, book, surface };
        scn.validate_references()?;
        Ok(scn)
    }

    fn validate_references(&self) -> Result<()> {
        let sec = |l: &String| self.section(l).map(|_| ());
        if let Some(p) = &self.file.presentation {
            p.basis.iter().try_for_each(sec)?;
            p.torsion.iter().try_for_each(|t| sec(&t.section))?;
        }
        if let Some(pair) = &self.file.pair {
            for a in [&pair.first, &pair.second] {
                a.curves.iter().try_for_each(|c| self.curve(c).map(|_| ()))?;
                a.sections.iter().try_for_each(sec)?;
                if a.marked.len() != a.sections.len() {
                    return Err(scenario_err(format!("{}: marked curves and sections differ in number", a.label)));
                }
                for m in &a.marked {
                    if !a.curves.contains(m) {
                        return Err(scenario_err(format!("{}: marked curve {m} is not in the arrangement", a.label)));
                    }
                }
            }
        }
        for q in &self.file.queries {
            match q {
                Query::Height { sections } | Query::Divide { sections, .. } => sections.iter().try_for_each(sec)?,
                Query::Dup { section } => sec(section)?,
                Query::CertifyPair if self.file.pair.is_none() => {
                    return Err(scenario_err("certify-pair query without a [pair] table"))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn curve(&self, label: &str) -> Result<&PlaneCurve> {
        self.curves.iter().find(|c| c.label == label).ok_or_else(|| scenario_err(format!("unknown curve {label:?}")))
    }

    pub fn section(&self, label: &str) -> Result<&Section> {
        self.book.get(label)
    }

    pub fn sections(&self, labels: &[String]) -> Result<Vec<Section>> {
        labels.iter().map(|l| self.section(l).cloned()).collect()
    }

    /// A polynomial in `t` over the declared field.
    pub fn parse_poly(&self, src: &str) -> Result<UniPoly> {
        Ok(parse_unipoly(src, &self.base, Var::T, &self.constants)?)
    }

    /// A constant over the declared field.
    pub fn parse_constant(&self, src: &str) -> Result<FieldElem> {
        Ok(parse_field_elem(src, &self.base, &self.constants)?)
    }

    /// The presentation with sections over the working field.
    pub fn presentation(&self) -> Result<MWPresentation> {
        let p = self.file.presentation.as_ref().ok_or_else(|| scenario_err("no [presentation] table"))?;
        Ok(MWPresentation {
            basis: p.basis.iter().map(|l| Ok((l.clone(), self.section(l)?.clone()))).collect::<Result<_>>()?,
            torsion: p
                .torsion
                .iter()
                .map(|t| Ok((t.section.clone(), self.section(&t.section)?.clone(), t.order)))
                .collect::<Result<_>>()?,
            claimed_lattice: p.lattice.clone(),
        })
    }

    /// The branch curve over the working field.
    pub fn branch(&self) -> PlaneCurve {
        self.setup.quartic.map_field(self.book.embedding())
    }
}
