use std::cmp::Ordering;
use std::fmt;

use mwl_algebra::{
    adjoin_sqrt, Embedding, FieldElem, RationalFunction, SqrtExtension, UniPoly, Var,
};

use crate::error::{CoreError, Result};
use crate::torsion::roots_in_kt;
use crate::weierstrass::WeierstrassModel;

/// A point of the generic fiber `E(k(t))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Section {
    Zero,
    Affine { x: RationalFunction, y: RationalFunction },
}

impl Section {
    pub fn affine(x: RationalFunction, y: RationalFunction) -> Self {
        Section::Affine { x, y }
    }

    pub fn from_polys(x: UniPoly, y: UniPoly) -> Self {
        Section::Affine { x: RationalFunction::from_poly(x), y: RationalFunction::from_poly(y) }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Section::Zero)
    }

    pub fn x(&self) -> Option<&RationalFunction> {
        match self {
            Section::Zero => None,
            Section::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&RationalFunction> {
        match self {
            Section::Zero => None,
            Section::Affine { y, .. } => Some(y),
        }
    }

    pub fn map_field(&self, e: &Embedding) -> Section {
        match self {
            Section::Zero => Section::Zero,
            Section::Affine { x, y } => Section::Affine { x: e.apply_ratfunc(x), y: e.apply_ratfunc(y) },
        }
    }

    /// Deterministic order: zero first, then by `x`, then by `y`.
    pub fn canonical_cmp(&self, other: &Section) -> Ordering {
        let key = |r: &RationalFunction| (r.numerator().clone(), r.denominator().clone());
        match (self, other) {
            (Section::Zero, Section::Zero) => Ordering::Equal,
            (Section::Zero, _) => Ordering::Less,
            (_, Section::Zero) => Ordering::Greater,
            (Section::Affine { x: x1, y: y1 }, Section::Affine { x: x2, y: y2 }) => {
                let cmp = |a: &RationalFunction, b: &RationalFunction| {
                    let ((an, ad), (bn, bd)) = (key(a), key(b));
                    an.canonical_cmp(&bn).then_with(|| ad.canonical_cmp(&bd))
                };
                cmp(x1, x2).then_with(|| cmp(y1, y2))
            }
        }
    }

    /// Flips the sign of `y` if needed so that the leading coefficient of
    /// the numerator of `y` is canonically positive.
    pub fn canonical_sign(&self) -> Section {
        match self {
            Section::Affine { x, y } if !y.is_zero() => {
                let lc = y.numerator().leading_coefficient().unwrap();
                if lc.is_canonically_positive() {
                    self.clone()
                } else {
                    Section::Affine { x: x.clone(), y: -y }
                }
            }
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Section::Zero => write!(f, "O"),
            Section::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl fmt::Debug for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl WeierstrassModel {
    fn check_field(&self, p: &Section) -> Result<()> {
        match p {
            Section::Affine { x, .. } if x.field() != self.field() => Err(CoreError::ModelMismatch),
            _ => Ok(()),
        }
    }

    /// Whether `y^2 = x^3 + a2 x^2 + a4 x + a6` holds identically.
    pub fn contains(&self, p: &Section) -> bool {
        match p {
            Section::Zero => true,
            Section::Affine { x, y } => {
                if x.field() != self.field() || y.field() != self.field() {
                    return false;
                }
                // Cleared denominators: yn^2 xd^3 = F(xn, xd) yd^2.
                let (xn, xd) = (x.numerator(), x.denominator());
                let (yn, yd) = (y.numerator(), y.denominator());
                let xn2 = xn * xn;
                let xd2 = xd * xd;
                let xd3 = &xd2 * xd;
                let f = &(&(&(&xn2 * xn) + &(&(self.a2() * &xn2) * xd)) + &(&(self.a4() * xn) * &xd2))
                    + &(self.a6() * &xd3);
                (&(yn * yn) * &xd3) == (&f * &(yd * yd))
            }
        }
    }

    pub fn neg(&self, p: &Section) -> Section {
        match p {
            Section::Zero => Section::Zero,
            Section::Affine { x, y } => Section::Affine { x: x.clone(), y: -y },
        }
    }

    /// Chord-tangent addition on the generic fiber.
    pub fn add(&self, p: &Section, q: &Section) -> Result<Section> {
        self.check_field(p)?;
        self.check_field(q)?;
        let (x1, y1, x2, y2) = match (p, q) {
            (Section::Zero, _) => return Ok(q.clone()),
            (_, Section::Zero) => return Ok(p.clone()),
            (Section::Affine { x: x1, y: y1 }, Section::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let rf = |p: &UniPoly| RationalFunction::from_poly(p.clone());
        let k = |n: i64| RationalFunction::constant(self.field().from_int(n), x1.var());
        let lambda = if x1 == x2 {
            if y1 == &-y2 {
                return Ok(Section::Zero);
            }
            let num = &(&(&k(3) * &(x1 * x1)) + &(&k(2) * &(&rf(self.a2()) * x1))) + &rf(self.a4());
            num.try_div(&(&k(2) * y1))?
        } else {
            (y2 - y1).try_div(&(x2 - x1))?
        };
        let x3 = &(&(&(&lambda * &lambda) - &rf(self.a2())) - x1) - x2;
        let y3 = -(&(&lambda * &(&x3 - x1)) + y1);
        Ok(Section::Affine { x: x3, y: y3 })
    }

    /// `[k] p` by double-and-add; negative `k` negates.
    pub fn smul(&self, k: i64, p: &Section) -> Result<Section> {
        self.check_field(p)?;
        let base = if k < 0 { self.neg(p) } else { p.clone() };
        let mut n = k.unsigned_abs();
        let mut acc = Section::Zero;
        let mut pow = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &pow)?;
            }
            n >>= 1;
            if n > 0 {
                pow = self.add(&pow, &pow)?;
            }
        }
        Ok(acc)
    }

    /// All sections `(r(t), 0)`: the roots of the cubic in `k[t]`.
    pub fn two_torsion(&self) -> Result<Vec<Section>> {
        let zero = UniPoly::zero(self.field(), Var::T);
        Ok(roots_in_kt(&self.cubic(), 2 * self.chi() as usize)?
            .into_iter()
            .map(|r| Section::from_polys(r, zero.clone()))
            .collect())
    }
}

/// Lagrange interpolation through `(t_i, v_i)`.
pub fn interpolate(points: &[(FieldElem, FieldElem)], var: Var) -> UniPoly {
    let f = points[0].0.field().clone();
    let mut acc = UniPoly::zero(&f, var);
    for (i, (ti, vi)) in points.iter().enumerate() {
        let mut basis = UniPoly::one(&f, var);
        let mut denom = f.one();
        for (j, (tj, _)) in points.iter().enumerate() {
            if i != j {
                basis = &basis * &UniPoly::linear_root(tj, var);
                denom = &denom * &(ti - tj);
            }
        }
        acc = &acc + &basis.scale(&(vi / &denom));
    }
    acc
}

/// The two lifts of a graph `x = c(t)` and the field they live over.
#[derive(Clone, Debug)]
pub struct GraphLift {
    /// The canonically positive lift.
    pub plus: Section,
    pub minus: Section,
    /// The model re-embedded in the (possibly larger) field.
    pub model: WeierstrassModel,
    /// Present when a square root had to be adjoined.
    pub extension: Option<SqrtExtension>,
    /// `f(t, c(t)) = unit * h^2`.
    pub unit: FieldElem,
    pub h: UniPoly,
}

/// Lifts `x = c(t)` to sections when `f(t, c(t))` is a constant times a
/// square, adjoining the square root of that constant when necessary.
/// Returns `None` when the restriction has a root of odd multiplicity.
pub fn section_from_graph(
    model: &WeierstrassModel,
    c: &UniPoly,
    root_name: &str,
    degree_cap: usize,
) -> Result<Option<GraphLift>> {
    if c.degree().unwrap_or(0) > 2 * model.chi() as usize {
        return Err(CoreError::Precondition(format!("graph x = {c} has degree above 2 chi")));
    }
    let c = c.clone().with_var(Var::T);
    let g = model.cubic().eval_x(&c);
    let f = model.field();
    if g.is_zero() {
        let s = Section::from_polys(c.clone(), UniPoly::zero(f, Var::T));
        return Ok(Some(GraphLift {
            plus: s.clone(),
            minus: s,
            model: model.clone(),
            extension: None,
            unit: f.zero(),
            h: UniPoly::zero(f, Var::T),
        }));
    }
    let Some((h, unit)) = g.square_root() else {
        return Ok(None);
    };
    let ext = adjoin_sqrt(&unit, root_name, degree_cap)?;
    let model2 = model.map_field(&ext.embedding);
    let x = ext.embedding.apply_poly(&c);
    let y = ext.embedding.apply_poly(&h).scale(&ext.root);
    let plus = Section::from_polys(x, y).canonical_sign();
    let minus = model2.neg(&plus);
    let extension = (ext.field != *f).then_some(ext);
    Ok(Some(GraphLift { plus, minus, model: model2, extension, unit, h }))
}
