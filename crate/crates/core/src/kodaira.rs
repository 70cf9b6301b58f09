use std::fmt;

use mwl_algebra::{roots, FieldElem, Rational, RationalFunction, UniPoly, Var};

use crate::error::{CoreError, Result};
use crate::local::{ord, residue};
use crate::weierstrass::{Place, WeierstrassModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaType {
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Number of irreducible components `m_v`.
    pub fn components(self) -> usize {
        match self {
            KodairaType::I(0) => 1,
            KodairaType::I(n) => n as usize,
            KodairaType::IStar(n) => n as usize + 5,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }

    pub fn euler(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::IStar(n) => n + 6,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    pub fn is_reducible(self) -> bool {
        self.components() > 1
    }

    pub fn is_multiplicative(self) -> bool {
        matches!(self, KodairaType::I(n) if n > 0)
    }

    /// Order of the group of simple components, `det(-A_v)`.
    pub fn component_group_order(self) -> u32 {
        match self {
            KodairaType::I(0) => 1,
            KodairaType::I(n) => n,
            KodairaType::IStar(_) => 4,
            KodairaType::II | KodairaType::IIStar => 1,
            KodairaType::III | KodairaType::IIIStar => 2,
            KodairaType::IV | KodairaType::IVStar => 3,
        }
    }

    pub fn component_group(self) -> String {
        match self {
            KodairaType::IStar(n) if n % 2 == 0 => "(Z/2)^2".into(),
            KodairaType::IStar(_) => "Z/4".into(),
            t => match t.component_group_order() {
                1 => "0".into(),
                n => format!("Z/{n}"),
            },
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

fn from_edges(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = -2;
    }
    for &(i, j) in edges {
        a[i - 1][j - 1] = 1;
        a[j - 1][i - 1] = 1;
    }
    a
}

/// Intersection matrix of the non-identity components `Theta_1 ..`.
///
/// Labels: `I_n` is the chain `Theta_1 - ... - Theta_{n-1}`; for `I_n*`,
/// `Theta_1` is the other near leaf, `Theta_2, Theta_3` the far leaves and
/// `Theta_4 .. Theta_{n+4}` the chain from the near end; `E6`, `E7`, `E8`
/// use Bourbaki numbering.
pub fn intersection_matrix(kind: KodairaType) -> Result<Vec<Vec<i64>>> {
    if !kind.is_reducible() {
        return Err(CoreError::IrreducibleFiber { kind: kind.to_string() });
    }
    Ok(match kind {
        KodairaType::I(n) => {
            let m = n as usize - 1;
            let edges: Vec<_> = (1..m).map(|i| (i, i + 1)).collect();
            from_edges(m, &edges)
        }
        KodairaType::IStar(n) => {
            let n = n as usize;
            let mut edges = vec![(1, 4)];
            for c in 4..4 + n {
                edges.push((c, c + 1));
            }
            edges.push((2, 4 + n));
            edges.push((3, 4 + n));
            from_edges(n + 4, &edges)
        }
        KodairaType::III => from_edges(1, &[]),
        KodairaType::IV => from_edges(2, &[(1, 2)]),
        KodairaType::IVStar => from_edges(6, &[(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)]),
        KodairaType::IIIStar => from_edges(7, &[(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)]),
        KodairaType::IIStar => {
            from_edges(8, &[(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)])
        }
        _ => unreachable!("irreducible types handled above"),
    })
}

/// `(-A)^{-1}` as a rational matrix.
pub fn inverse_negative_matrix(a: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    let m: Vec<Vec<Rational>> = a
        .iter()
        .map(|row| row.iter().map(|&v| Rational::from_integer((-v).into())).collect())
        .collect();
    mwl_algebra::linalg::inverse(&m).expect("fiber matrices are negative definite")
}

/// One recorded step of the local analysis, kept for reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartStep {
    pub action: String,
    pub value: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChartData {
    pub steps: Vec<ChartStep>,
}

#[derive(Clone, Debug)]
pub struct FiberData {
    pub place: Place,
    pub kind: KodairaType,
    pub components: usize,
    /// Empty for irreducible fibers.
    pub matrix: Vec<Vec<i64>>,
    pub euler: u32,
    pub ord_c4: Option<u32>,
    pub ord_c6: Option<u32>,
    pub ord_delta: u32,
    pub component_group: String,
    pub chart: ChartData,
    /// Uniformizer of the local model (`u` at infinity).
    pub local_pi: UniPoly,
    /// Residue of the `x`-coordinate of the singular point of the fiber.
    pub singular_x: Option<UniPoly>,
    /// For `x -> x - shift` the model has `a2 = 0` (additive fibers).
    pub short_shift: Option<UniPoly>,
    /// Roots in the constant field of the residual cubic (`I0*`, degree-one
    /// places only), in canonical order.
    pub residual_roots: Option<Vec<FieldElem>>,
}

/// Model and uniformizer used for local computations at `place`.
pub fn local_model(model: &WeierstrassModel, place: &Place) -> Result<(WeierstrassModel, UniPoly)> {
    match place {
        Place::Finite(pi) => Ok((model.clone(), pi.clone())),
        Place::Infinity => {
            let chart = model.chart_at_infinity()?;
            let u = UniPoly::variable(model.field(), Var::U);
            Ok((chart, u))
        }
    }
}

fn type_from_orders(v4: u32, v6: u32, vd: u32, place: &Place) -> Result<KodairaType> {
    if vd == 0 {
        return Ok(KodairaType::I(0));
    }
    if v4 == 0 {
        return Ok(KodairaType::I(vd));
    }
    if vd > 6 && v4 == 2 && v6 == 3 {
        return Ok(KodairaType::IStar(vd - 6));
    }
    Ok(match vd {
        2 => KodairaType::II,
        3 => KodairaType::III,
        4 => KodairaType::IV,
        6 => KodairaType::IStar(0),
        8 => KodairaType::IVStar,
        9 => KodairaType::IIIStar,
        10 => KodairaType::IIStar,
        _ => {
            return Err(CoreError::InternalInconsistency(format!(
                "orders (c4, c6, delta) = ({v4}, {v6}, {vd}) at {place} fit no Kodaira type"
            )))
        }
    })
}

/// Classifies the fiber at `place` (the model must be minimal there).
pub fn classify_place(model: &WeierstrassModel, place: &Place) -> Result<FiberData> {
    let (local, pi) = local_model(model, place)?;
    if !local.is_minimal_at(&pi) {
        return Err(CoreError::NonMinimal { place: place.label() });
    }
    let inv = local.invariants();
    let ord_c4 = ord(&inv.c4, &pi);
    let ord_c6 = ord(&inv.c6, &pi);
    let ord_delta = ord(&inv.delta, &pi).expect("nonzero discriminant");
    let kind = type_from_orders(
        ord_c4.unwrap_or(u32::MAX),
        ord_c6.unwrap_or(u32::MAX),
        ord_delta,
        place,
    )?;
    let mut chart = ChartData::default();
    let fmt_ord = |o: Option<u32>| o.map_or("inf".to_string(), |v| v.to_string());
    chart.steps.push(ChartStep {
        action: "orders(c4,c6,delta)".into(),
        value: format!("({}, {}, {})", fmt_ord(ord_c4), fmt_ord(ord_c6), ord_delta),
    });
    let mut singular_x = None;
    let mut short_shift = None;
    let mut residual_roots = None;
    if kind.is_reducible() {
        if kind.is_multiplicative() {
            // Double root of the cubic mod pi: (9 a6 - a2 a4) / (2 (a2^2 - 3 a4)).
            let k = |n: i64| local.field().from_int(n);
            let num = &local.a6().scale(&k(9)) - &(local.a2() * local.a4());
            let den = (&(local.a2() * local.a2()) - &local.a4().scale(&k(3))).scale(&k(2));
            let x0 = residue(&RationalFunction::new(num, den)?, &pi)?;
            chart.steps.push(ChartStep { action: "node".into(), value: format!("x = {x0}") });
            singular_x = Some(x0);
        } else {
            let (short, r) = local.short_form();
            let x0 = r.rem(&pi);
            chart.steps.push(ChartStep { action: "cusp".into(), value: format!("x = {x0}") });
            chart.steps.push(ChartStep { action: "translate".into(), value: format!("x -> x + {r}") });
            singular_x = Some(x0);
            if kind == KodairaType::IStar(0) && pi.degree() == Some(1) {
                let t0 = -pi.coeff(0);
                let a = short.a4().exact_div(&pi.pow(2));
                let b = short.a6().exact_div(&pi.pow(3));
                if let (Some(a), Some(b)) = (a, b) {
                    let f = local.field();
                    let cubic = UniPoly::from_coeffs_in(
                        f,
                        Var::X,
                        vec![b.eval(&t0), a.eval(&t0), f.zero(), f.one()],
                    );
                    let rs: Vec<FieldElem> = roots(&cubic)?.into_iter().map(|(r, _)| r).collect();
                    chart.steps.push(ChartStep {
                        action: "residual cubic".into(),
                        value: format!("{cubic} with {} rational roots", rs.len()),
                    });
                    residual_roots = Some(rs);
                }
            }
            short_shift = Some(r);
        }
    }
    Ok(FiberData {
        place: place.clone(),
        kind,
        components: kind.components(),
        matrix: if kind.is_reducible() { intersection_matrix(kind)? } else { Vec::new() },
        euler: kind.euler(),
        ord_c4,
        ord_c6,
        ord_delta,
        component_group: kind.component_group(),
        chart,
        local_pi: pi,
        singular_x,
        short_shift,
        residual_roots,
    })
}

#[derive(Clone, Debug)]
pub struct FiberConfiguration {
    /// Singular fibers: finite places in canonical order, then infinity.
    pub fibers: Vec<FiberData>,
    pub euler_total: u32,
    pub chi: u32,
}

impl FiberConfiguration {
    /// The reducible fibers (`Red(phi)`).
    pub fn reducible(&self) -> impl Iterator<Item = &FiberData> {
        self.fibers.iter().filter(|f| f.kind.is_reducible())
    }
}

/// Classifies every singular fiber, including the one at infinity, and
/// checks that the Euler numbers add up to `12 chi`.
pub fn fiber_configuration(model: &WeierstrassModel) -> Result<FiberConfiguration> {
    let delta = model.discriminant();
    if delta.is_constant() {
        return Err(CoreError::NotEllipticSurface(
            "the discriminant is constant, so there are no singular fibers".into(),
        ));
    }
    let mut fibers = Vec::new();
    for pi in model.bad_places()? {
        fibers.push(classify_place(model, &Place::Finite(pi))?);
    }
    let inf = classify_place(model, &Place::Infinity).map_err(|e| match e {
        CoreError::NonMinimal { .. } => CoreError::NotEllipticSurface(format!(
            "the model is not minimal at infinity, so chi = {} is too large",
            model.chi()
        )),
        other => other,
    })?;
    if inf.ord_delta > 0 {
        fibers.push(inf);
    }
    let euler_total: u32 = fibers.iter().map(|f| f.euler * f.place.degree() as u32).sum();
    if euler_total != 12 * model.chi() {
        return Err(CoreError::InternalInconsistency(format!(
            "Euler numbers add up to {euler_total}, expected {}",
            12 * model.chi()
        )));
    }
    Ok(FiberConfiguration { fibers, euler_total, chi: model.chi() })
}
