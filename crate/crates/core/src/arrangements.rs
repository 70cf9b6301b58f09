//! Plane-curve arrangements in the pencil chart.
//!
//! Curves are affine equations in `(t, x) = (T/Z, X/Z)`. The distinguished
//! point is `z_o = [0 : 1 : 0]` and the pencil lines through it are
//! `t = const`. Affine intersection points are found by projecting from
//! an auxiliary point `[-l : 1 : 0]` off every curve: after the shear
//! `t' = t + l x` each line `t' = c` holds at most one intersection point,
//! so the order of a factor of `Res_x` is the intersection multiplicity.

use std::collections::BTreeMap;

use mwl_algebra::{factor, BiPoly, FieldElem, FieldSpec, UniPoly, Var};

use crate::error::{CoreError, Result};
use crate::sections::Section;
use crate::weierstrass::WeierstrassModel;

/// Shears tried before giving up on separating intersection points.
const MAX_SHEARS: i64 = 60;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCurve {
    pub label: String,
    pub poly: BiPoly,
    /// Degree of the projective closure.
    pub degree: usize,
}

impl PlaneCurve {
    pub fn new(label: &str, poly: BiPoly) -> Result<Self> {
        let degree = poly.total_degree().unwrap_or(0);
        if degree == 0 {
            return Err(CoreError::Precondition(format!("curve {label} is constant")));
        }
        Ok(PlaneCurve { label: label.to_string(), poly, degree })
    }

    /// `x = c(t)` for a graph.
    pub fn graph(label: &str, c: &UniPoly) -> Result<Self> {
        let f = c.field();
        let p = &BiPoly::x(f) - &BiPoly::from_t_poly(c.clone().with_var(Var::T));
        Self::new(label, p)
    }

    pub fn field(&self) -> &FieldSpec {
        self.poly.field()
    }

    pub fn passes_through_zo(&self) -> bool {
        self.poly.passes_through_x_infinity()
    }

    pub fn as_graph(&self) -> Option<UniPoly> {
        self.poly.as_graph()
    }

    /// Sum of curves: the product of their equations.
    pub fn union(label: &str, parts: &[&PlaneCurve]) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(CoreError::Precondition("empty union".into()));
        };
        let mut p = BiPoly::one(first.field());
        for c in parts {
            if c.field() != first.field() {
                return Err(CoreError::ModelMismatch);
            }
            p = &p * &c.poly;
        }
        Self::new(label, p)
    }

    /// The curve over a larger field.
    pub fn map_field(&self, e: &mwl_algebra::Embedding) -> Self {
        PlaneCurve { label: self.label.clone(), poly: e.apply_bipoly(&self.poly), degree: self.degree }
    }
}

impl std::fmt::Display for PlaneCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} = 0", self.label, self.poly)
    }
}

/// A Galois orbit of intersection points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointClass {
    /// The points on the sheared lines `t' = root of line`, with
    /// `x = x_mod(t') mod line` and `t = t' - shear * x`.
    Affine { shear: i64, line: UniPoly, x_mod: UniPoly },
    /// The distinguished point `[0 : 1 : 0]`.
    Zo,
}

impl Ord for PointClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (PointClass::Zo, PointClass::Zo) => Ordering::Equal,
            (PointClass::Zo, _) => Ordering::Greater,
            (_, PointClass::Zo) => Ordering::Less,
            (
                PointClass::Affine { shear: s1, line: l1, x_mod: x1 },
                PointClass::Affine { shear: s2, line: l2, x_mod: x2 },
            ) => s1.cmp(s2).then_with(|| l1.canonical_cmp(l2)).then_with(|| x1.canonical_cmp(x2)),
        }
    }
}

impl PartialOrd for PointClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl PointClass {
    /// Number of geometric points in the orbit.
    pub fn degree(&self) -> usize {
        match self {
            PointClass::Affine { line, .. } => line.degree().unwrap_or(0),
            PointClass::Zo => 1,
        }
    }

    /// `(t, x)` of a rational point.
    pub fn coordinates(&self) -> Option<(FieldElem, FieldElem)> {
        match self {
            PointClass::Affine { shear, line, x_mod } if line.degree() == Some(1) => {
                let tp = -line.coeff(0);
                let x = x_mod.eval(&tp);
                let t = &tp - &x.scale(&mwl_algebra::Rational::from_integer((*shear).into()));
                Some((t, x))
            }
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match (self, self.coordinates()) {
            (PointClass::Zo, _) => "z_o = [0:1:0]".into(),
            (_, Some((t, x))) => format!("(t, x) = ({t}, {x})"),
            (PointClass::Affine { shear, line, x_mod }, None) => {
                format!("{} points: t + {shear} x = r, x = {x_mod} (r a root of {line})", line.degree().unwrap_or(0))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Intersection {
    pub point: PointClass,
    /// Multiplicity at each geometric point of the orbit.
    pub multiplicity: usize,
}

fn shear_poly(p: &BiPoly, l: i64) -> BiPoly {
    // t = t' - l x
    let f = p.field();
    let s = &BiPoly::t(f) - &BiPoly::x(f).scale(&f.from_int(l));
    p.substitute_t(&s)
}

/// Whether `[-l : 1 : 0]` lies off the curve.
fn center_off(p: &BiPoly, l: i64) -> bool {
    let d = p.total_degree().unwrap_or(0);
    let f = p.field();
    let lt = f.from_int(-l);
    let mut acc = f.zero();
    for j in 0..=d {
        acc = &acc + &(&p.coefficient(j, d - j) * &lt.pow((d - j) as u32));
    }
    !acc.is_zero()
}

/// Affine intersection orbits computed with the shear `l`, or `None` when
/// `l` does not separate the points.
fn affine_with_shear(c: &BiPoly, d: &BiPoly, l: i64) -> Result<Option<Vec<Intersection>>> {
    if !center_off(c, l) || !center_off(d, l) {
        return Ok(None);
    }
    let (cs, ds) = (shear_poly(c, l), shear_poly(d, l));
    let r = cs.resultant_x(&ds);
    if r.is_zero() {
        return Err(CoreError::CommonComponent(c.to_string(), d.to_string()));
    }
    if r.is_constant() {
        return Ok(Some(Vec::new()));
    }
    // x-coordinate on each line from a linear factor or the subresultant.
    let linear = |p: &BiPoly| (p.x_degree() == Some(1)).then(|| (p.x_coeff(1), -p.x_coeff(0)));
    let sub = match linear(&cs).or_else(|| linear(&ds)) {
        Some((a, b)) => (a, b),
        None => {
            let (s1, s0) = cs.first_subresultant_x(&ds).expect("both degrees are at least 2");
            (s1, -s0)
        }
    };
    let fac = factor(&r)?;
    let mut out = Vec::new();
    for (pi, e) in fac.factors {
        let a = sub.0.rem(&pi);
        if a.is_zero() {
            return Ok(None);
        }
        let Ok(inv) = a.inverse_mod(&pi) else {
            return Ok(None);
        };
        let x_mod = (&inv * &sub.1).rem(&pi);
        out.push(Intersection { point: PointClass::Affine { shear: l, line: pi, x_mod }, multiplicity: e });
    }
    Ok(Some(out))
}

fn shear_candidates() -> impl Iterator<Item = i64> {
    (1..=MAX_SHEARS).map(|k| if k % 2 == 1 { k / 2 + 1 } else { -(k / 2) })
}

fn affine_intersections(c: &BiPoly, d: &BiPoly) -> Result<Vec<Intersection>> {
    for l in shear_candidates() {
        if let Some(v) = affine_with_shear(c, d, l)? {
            return Ok(v);
        }
    }
    Err(CoreError::Unsupported("no shear separates the intersection points".into()))
}

/// Intersection multiplicity at `[0 : 1 : 0]`, computed in the chart
/// around that point.
fn multiplicity_at_zo(c: &BiPoly, d: &BiPoly) -> Result<usize> {
    if !c.passes_through_x_infinity() || !d.passes_through_x_infinity() {
        return Ok(0);
    }
    let (cc, dc) = (c.chart_at_x_infinity(), d.chart_at_x_infinity());
    for l in shear_candidates() {
        if let Some(v) = affine_with_shear(&cc, &dc, l)? {
            let origin = v.into_iter().find(|i| match &i.point {
                PointClass::Affine { line, x_mod, .. } => {
                    line.degree() == Some(1) && line.coeff(0).is_zero() && x_mod.eval(&line.field().zero()).is_zero()
                }
                PointClass::Zo => false,
            });
            return Ok(origin.map_or(0, |i| i.multiplicity));
        }
    }
    Err(CoreError::Unsupported("no shear separates the points near z_o".into()))
}

/// Common points at infinity other than `z_o`.
fn other_common_points_at_infinity(c: &BiPoly, d: &BiPoly) -> bool {
    let g = c.top_form().gcd(&d.top_form());
    !g.is_constant()
}

fn check_fields(c: &PlaneCurve, d: &PlaneCurve) -> Result<()> {
    if c.field() != d.field() {
        return Err(CoreError::ModelMismatch);
    }
    Ok(())
}

fn with_bezout(c: &PlaneCurve, d: &PlaneCurve, mut v: Vec<Intersection>) -> Result<Vec<Intersection>> {
    if other_common_points_at_infinity(&c.poly, &d.poly) {
        return Err(CoreError::Unsupported(format!(
            "{} and {} meet at a point at infinity other than z_o",
            c.label, d.label
        )));
    }
    let zo = multiplicity_at_zo(&c.poly, &d.poly)?;
    if zo > 0 {
        v.push(Intersection { point: PointClass::Zo, multiplicity: zo });
    }
    let total: usize = v.iter().map(|i| i.point.degree() * i.multiplicity).sum();
    if total != c.degree * d.degree {
        return Err(CoreError::InternalInconsistency(format!(
            "Bezout fails for {} and {}: {total} != {}",
            c.label,
            d.label,
            c.degree * d.degree
        )));
    }
    v.sort_by(|a, b| a.point.cmp(&b.point));
    Ok(v)
}

/// All intersection orbits of `c` and `d`, including `z_o`. The total
/// count with multiplicity is checked against Bezout.
pub fn intersection_multiplicities(c: &PlaneCurve, d: &PlaneCurve) -> Result<Vec<Intersection>> {
    check_fields(c, d)?;
    let v = affine_intersections(&c.poly, &d.poly).map_err(|e| match e {
        CoreError::CommonComponent(..) => CoreError::CommonComponent(c.label.clone(), d.label.clone()),
        e => e,
    })?;
    with_bezout(c, d, v)
}

/// Whether every intersection multiplicity of `c` with `branch` is even.
pub fn all_even_tangency(c: &PlaneCurve, branch: &PlaneCurve) -> Result<bool> {
    check_fields(c, branch)?;
    if let Some(g) = c.as_graph() {
        let r = branch.poly.eval_x(&g);
        if r.is_zero() {
            return Err(CoreError::CommonComponent(c.label.clone(), branch.label.clone()));
        }
        if r.square_root().is_none() {
            return Ok(false);
        }
        if other_common_points_at_infinity(&c.poly, &branch.poly) {
            return Err(CoreError::Unsupported(format!(
                "{} and {} meet at a point at infinity other than z_o",
                c.label, branch.label
            )));
        }
        return Ok(multiplicity_at_zo(&c.poly, &branch.poly)? % 2 == 0);
    }
    Ok(intersection_multiplicities(c, branch)?.iter().all(|i| i.multiplicity % 2 == 0))
}

/// One intersection orbit of an arrangement with the multiplicity of each
/// pair of components through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointRecord {
    pub point: PointClass,
    pub incidences: BTreeMap<(usize, usize), usize>,
}

/// Degrees of the components and the pairwise intersection data, merged
/// over common points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementSummary {
    pub components: Vec<(String, usize)>,
    pub points: Vec<PointRecord>,
}

impl ArrangementSummary {
    pub fn total_degree(&self) -> usize {
        self.components.iter().map(|c| c.1).sum()
    }

    /// `(component degrees through the point, multiplicities)` per
    /// geometric point, with components renamed by `perm`.
    fn profile(&self, perm: &[usize]) -> Vec<Vec<((usize, usize), usize)>> {
        let mut out = Vec::new();
        for p in &self.points {
            let mut sig: Vec<((usize, usize), usize)> = p
                .incidences
                .iter()
                .map(|(&(i, j), &m)| {
                    let (a, b) = (perm[i], perm[j]);
                    ((a.min(b), a.max(b)), m)
                })
                .collect();
            sig.sort();
            for _ in 0..p.point.degree() {
                out.push(sig.clone());
            }
        }
        out.sort();
        out
    }
}

/// Intersection data of every pair of components. One shear is used for
/// the whole arrangement so that points from different pairs can be
/// compared.
pub fn summarize(curves: &[PlaneCurve]) -> Result<ArrangementSummary> {
    for w in curves.windows(2) {
        check_fields(&w[0], &w[1])?;
    }
    let mut chosen = None;
    'shear: for l in shear_candidates() {
        let mut pairs = Vec::new();
        for i in 0..curves.len() {
            for j in i + 1..curves.len() {
                match affine_with_shear(&curves[i].poly, &curves[j].poly, l) {
                    Ok(Some(v)) => pairs.push(((i, j), v)),
                    Ok(None) => continue 'shear,
                    Err(CoreError::CommonComponent(..)) => {
                        return Err(CoreError::CommonComponent(curves[i].label.clone(), curves[j].label.clone()))
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        chosen = Some(pairs);
        break;
    }
    let pairs = chosen.ok_or_else(|| CoreError::Unsupported("no shear separates the arrangement".into()))?;
    let mut points: BTreeMap<PointClass, BTreeMap<(usize, usize), usize>> = BTreeMap::new();
    for ((i, j), v) in pairs {
        for int in with_bezout(&curves[i], &curves[j], v)? {
            points.entry(int.point).or_default().insert((i, j), int.multiplicity);
        }
    }
    Ok(ArrangementSummary {
        components: curves.iter().map(|c| (c.label.clone(), c.degree)).collect(),
        points: points.into_iter().map(|(point, incidences)| PointRecord { point, incidences }).collect(),
    })
}

/// Degree-preserving bijections `0..n -> 0..n`.
fn degree_preserving_perms(a: &[usize], b: &[usize]) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(a: &[usize], b: &[usize], cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let i = cur.len();
        if i == a.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..b.len() {
            if !used[j] && a[i] == b[j] {
                used[j] = true;
                cur.push(j);
                go(a, b, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    go(a, b, &mut cur, &mut used, &mut out);
    out
}

/// Same degrees and a relabeling of components under which the
/// per-point intersection profiles agree.
pub fn same_combinatorics(a: &ArrangementSummary, b: &ArrangementSummary) -> bool {
    let da: Vec<usize> = a.components.iter().map(|c| c.1).collect();
    let db: Vec<usize> = b.components.iter().map(|c| c.1).collect();
    let (mut sa, mut sb) = (da.clone(), db.clone());
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let ident: Vec<usize> = (0..db.len()).collect();
    let target = b.profile(&ident);
    degree_preserving_perms(&da, &db).iter().any(|perm| a.profile(perm) == target)
}

/// The branch quartic and the model of its pencil.
#[derive(Clone, Debug)]
pub struct PencilSetup {
    pub quartic: PlaneCurve,
    pub model: WeierstrassModel,
}

/// `y^2 = f_Q(t, x)` for a branch curve that is cubic and monic in `x`.
pub fn pencil_setup(quartic: &PlaneCurve) -> Result<PencilSetup> {
    let dx = quartic.poly.x_degree().unwrap_or(0);
    if dx != 3 {
        return Err(CoreError::WrongPencilShape { found: dx });
    }
    if !quartic.poly.x_leading().is_one() {
        return Err(CoreError::Precondition(format!(
            "{} must be monic in x, found leading coefficient {}",
            quartic.label,
            quartic.poly.x_leading()
        )));
    }
    let model = WeierstrassModel::from_cubic(&quartic.poly, 1)?;
    Ok(PencilSetup { quartic: quartic.clone(), model })
}

/// For each section `s`, the conic `x = x([2]s)`. Requires `[2]s` to be
/// integral of degree 2 in `t`.
pub fn tangent_conics_through(
    model: &WeierstrassModel,
    line_sections: &[(String, Section)],
) -> Result<Vec<PlaneCurve>> {
    let mut out = Vec::new();
    for (label, s) in line_sections {
        let d = model.smul(2, s)?;
        let x = d.x().and_then(|x| x.as_polynomial()).ok_or_else(|| {
            CoreError::Precondition(format!("[2]{label} meets the zero section, so it is not a conic graph"))
        })?;
        if x.degree().unwrap_or(0) != 2 {
            return Err(CoreError::Precondition(format!("[2]{label} has x of degree {:?}, not a conic", x.degree())));
        }
        out.push(PlaneCurve::graph(&format!("C({label})"), &x)?);
    }
    Ok(out)
}
