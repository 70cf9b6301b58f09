use std::fmt;

use mwl_algebra::{factor, BiPoly, Embedding, FieldSpec, RationalFunction, UniPoly, Var};

use crate::error::{CoreError, Result};
use crate::local::ord_or_inf;

/// A place of `k(t)`: a monic irreducible `pi(t)` or the point at infinity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(UniPoly),
    Infinity,
}

impl Place {
    /// Residue degree over the constant field.
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(pi) => pi.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }

    /// `t=2`, `t^2 - 5=0`, or `t=inf`.
    pub fn label(&self) -> String {
        match self {
            Place::Infinity => "t=inf".into(),
            Place::Finite(pi) if pi.degree() == Some(1) => format!("t={}", -pi.coeff(0)),
            Place::Finite(pi) => format!("{pi}=0"),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// `y^2 = x^3 + a2 x^2 + a4 x + a6` with `a_i` in `k[t]`.
#[derive(Clone, PartialEq, Eq)]
pub struct WeierstrassModel {
    field: FieldSpec,
    a2: UniPoly,
    a4: UniPoly,
    a6: UniPoly,
    chi: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelInvariants {
    pub b2: UniPoly,
    pub b4: UniPoly,
    pub b6: UniPoly,
    pub b8: UniPoly,
    pub c4: UniPoly,
    pub c6: UniPoly,
    pub delta: UniPoly,
    pub j_num: UniPoly,
    pub j_den: UniPoly,
}

impl WeierstrassModel {
    /// Validates `Delta != 0` and `deg a_i <= 2 i chi`.
    pub fn new(a2: UniPoly, a4: UniPoly, a6: UniPoly, chi: u32) -> Result<Self> {
        let m = Self::new_unchecked(a2, a4, a6, chi)?;
        for (i, a) in [(1u32, &m.a2), (2, &m.a4), (3, &m.a6)] {
            if let Some(d) = a.degree() {
                if d as u32 > 2 * i * chi {
                    return Err(CoreError::InvalidModel(format!(
                        "deg a{} = {d} exceeds {} for chi = {chi}",
                        2 * i,
                        2 * i * chi
                    )));
                }
            }
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(a2: UniPoly, a4: UniPoly, a6: UniPoly, chi: u32) -> Result<Self> {
        let field = a2.field().clone();
        if a4.field() != &field || a6.field() != &field {
            return Err(CoreError::ModelMismatch);
        }
        if chi == 0 {
            return Err(CoreError::InvalidModel("chi must be positive".into()));
        }
        let m = WeierstrassModel { field, a2, a4, a6, chi };
        if m.invariants().delta.is_zero() {
            return Err(CoreError::SingularModel);
        }
        Ok(m)
    }

    /// Reads the monic cubic `x^3 + a2 x^2 + a4 x + a6` from a curve equation.
    pub fn from_cubic(f: &BiPoly, chi: u32) -> Result<Self> {
        if f.x_degree() != Some(3) {
            return Err(CoreError::WrongPencilShape { found: f.x_degree().unwrap_or(0) });
        }
        let lc = f.x_leading();
        if !lc.is_one() {
            return Err(CoreError::InvalidModel(format!("leading coefficient in x is {lc}, expected 1")));
        }
        Self::new(f.x_coeff(2), f.x_coeff(1), f.x_coeff(0), chi)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn a2(&self) -> &UniPoly {
        &self.a2
    }

    pub fn a4(&self) -> &UniPoly {
        &self.a4
    }

    pub fn a6(&self) -> &UniPoly {
        &self.a6
    }

    pub fn chi(&self) -> u32 {
        self.chi
    }

    /// The right-hand side as a polynomial in `t` and `x`.
    pub fn cubic(&self) -> BiPoly {
        BiPoly::from_x_coeffs(
            &self.field,
            vec![self.a6.clone(), self.a4.clone(), self.a2.clone(), UniPoly::one(&self.field, self.a2.var())],
        )
    }

    /// Evaluates the right-hand side at `x`.
    pub fn rhs(&self, x: &RationalFunction) -> RationalFunction {
        let c = |p: &UniPoly| RationalFunction::from_poly(p.clone());
        let x2 = x * x;
        &(&(&(&x2 * x) + &(&c(&self.a2) * &x2)) + &(&c(&self.a4) * x)) + &c(&self.a6)
    }

    pub fn invariants(&self) -> ModelInvariants {
        let k = |n: i64| self.field.from_int(n);
        let (a2, a4, a6) = (&self.a2, &self.a4, &self.a6);
        let b2 = a2.scale(&k(4));
        let b4 = a4.scale(&k(2));
        let b6 = a6.scale(&k(4));
        let b8 = &(a2 * a6).scale(&k(4)) - &(a4 * a4);
        let c4 = &(&b2 * &b2) - &b4.scale(&k(24));
        let c6 = &(&(-(&(&b2 * &b2) * &b2)) + &(&b2 * &b4).scale(&k(36))) - &b6.scale(&k(216));
        let delta = &(&(&(-(&(&b2 * &b2) * &b8)) - &(&(&b4 * &b4) * &b4).scale(&k(8)))
            - &(&b6 * &b6).scale(&k(27)))
            + &(&(&b2 * &b4) * &b6).scale(&k(9));
        let j_num_full = &(&c4 * &c4) * &c4;
        let (j_num, j_den) = if delta.is_zero() {
            (j_num_full, delta.clone())
        } else {
            let j = RationalFunction::new(j_num_full, delta.clone()).expect("nonzero");
            (j.numerator().clone(), j.denominator().clone())
        };
        ModelInvariants { b2, b4, b6, b8, c4, c6, delta, j_num, j_den }
    }

    pub fn discriminant(&self) -> UniPoly {
        self.invariants().delta
    }

    /// Substitutes `x = x' + r`.
    pub fn translate(&self, r: &UniPoly) -> Self {
        let k = |n: i64| self.field.from_int(n);
        let (a2, a4, a6) = (&self.a2, &self.a4, &self.a6);
        let r2 = r * r;
        let n2 = a2 + &r.scale(&k(3));
        let n4 = &(a4 + &(a2 * r).scale(&k(2))) + &r2.scale(&k(3));
        let n6 = &(&(a6 + &(a4 * r)) + &(a2 * &r2)) + &(&r2 * r);
        WeierstrassModel { field: self.field.clone(), a2: n2, a4: n4, a6: n6, chi: self.chi }
    }

    /// The translate with `a2 = 0`, `y^2 = x^3 + A x + B`.
    pub fn short_form(&self) -> (Self, UniPoly) {
        let r = self.a2.scale(&self.field.from_rational(mwl_algebra::Rational::new((-1).into(), 3.into())));
        (self.translate(&r), r)
    }

    /// Minimal at `pi` unless `ord c4 >= 4` and `ord c6 >= 6`.
    pub fn is_minimal_at(&self, pi: &UniPoly) -> bool {
        let inv = self.invariants();
        ord_or_inf(&inv.c4, pi) < 4 || ord_or_inf(&inv.c6, pi) < 6
    }

    /// Repeats `x -> pi^2 x, y -> pi^3 y` (after moving to short form) until
    /// the model is minimal at `pi`; returns the model and the number of
    /// reductions. A model that is already minimal is returned unchanged.
    pub fn minimalize_at(&self, pi: &UniPoly) -> Result<(Self, u32)> {
        let mut model = self.clone();
        let mut e = 0;
        while !model.is_minimal_at(pi) {
            let (short, _) = model.short_form();
            let p4 = pi.pow(4);
            let p6 = pi.pow(6);
            let a4 = short.a4.exact_div(&p4);
            let a6 = short.a6.exact_div(&p6);
            match (a4, a6) {
                (Some(a4), Some(a6)) => {
                    model = WeierstrassModel::new_unchecked(short.a2, a4, a6, self.chi)?;
                    e += 1;
                }
                _ => {
                    return Err(CoreError::InternalInconsistency(format!(
                        "short form at {pi} does not scale although c4, c6 do"
                    )))
                }
            }
        }
        Ok((model, e))
    }

    /// Finite places where the fiber is singular, in canonical order.
    pub fn bad_places(&self) -> Result<Vec<UniPoly>> {
        let delta = self.discriminant();
        if delta.is_constant() {
            return Ok(Vec::new());
        }
        Ok(factor(&delta)?.factors.into_iter().map(|(p, _)| p).collect())
    }

    /// The model in the chart `u = 1/t`: `a_i(t) -> u^(2 i chi) a_i(1/u)`.
    /// Its place `u = 0` is `t = infinity`; sections move by
    /// `x -> u^(2 chi) x(1/u)`, `y -> u^(3 chi) y(1/u)`.
    pub fn chart_at_infinity(&self) -> Result<Self> {
        let w = |p: &UniPoly, i: i64| {
            RationalFunction::from_poly(p.clone())
                .reciprocal_substitution(2 * i * self.chi as i64, Var::U)
                .as_polynomial()
        };
        match (w(&self.a2, 1), w(&self.a4, 2), w(&self.a6, 3)) {
            (Some(a2), Some(a4), Some(a6)) => WeierstrassModel::new_unchecked(a2, a4, a6, self.chi),
            _ => Err(CoreError::InvalidModel("coefficient degrees exceed the weight bound".into())),
        }
    }

    pub fn map_field(&self, e: &Embedding) -> Self {
        WeierstrassModel {
            field: e.target().clone(),
            a2: e.apply_poly(&self.a2),
            a4: e.apply_poly(&self.a4),
            a6: e.apply_poly(&self.a6),
            chi: self.chi,
        }
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |p: &UniPoly, mono: &str| -> Option<String> {
            if p.is_zero() {
                return None;
            }
            let s = p.to_string();
            let wrapped = if p.coefficients().iter().filter(|c| !c.is_zero()).count() > 1 || s.contains(' ') {
                format!("({s})")
            } else {
                s
            };
            Some(match (mono.is_empty(), p.is_one()) {
                (true, _) => wrapped,
                (false, true) => mono.to_string(),
                (false, false) => format!("{wrapped}*{mono}"),
            })
        };
        let mut parts = vec!["x^3".to_string()];
        parts.extend(term(&self.a2, "x^2"));
        parts.extend(term(&self.a4, "x"));
        parts.extend(term(&self.a6, ""));
        write!(f, "y^2 = {}", parts.join(" + "))
    }
}

impl fmt::Debug for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
