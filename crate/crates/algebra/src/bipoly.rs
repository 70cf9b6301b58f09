use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::forward_owned;
use crate::{det_poly, FieldElem, FieldSpec, UniPoly, Var};

/// A polynomial in `t` and `x`, stored as coefficients of powers of `x`,
/// each a polynomial in `t`. Affine equation of a plane curve.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiPoly {
    field: FieldSpec,
    coeffs: Vec<UniPoly>,
}

impl BiPoly {
    pub fn zero(field: &FieldSpec) -> Self {
        BiPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FieldSpec) -> Self {
        Self::from_t_poly(UniPoly::one(field, Var::T))
    }

    pub fn t(field: &FieldSpec) -> Self {
        Self::from_t_poly(UniPoly::variable(field, Var::T))
    }

    pub fn x(field: &FieldSpec) -> Self {
        Self::from_x_coeffs(field, vec![UniPoly::zero(field, Var::T), UniPoly::one(field, Var::T)])
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::from_t_poly(UniPoly::constant(c, Var::T))
    }

    pub fn from_t_poly(p: UniPoly) -> Self {
        let field = p.field().clone();
        Self::from_x_coeffs(&field, vec![p.with_var(Var::T)])
    }

    /// Coefficient `i` multiplies `x^i`.
    pub fn from_x_coeffs(field: &FieldSpec, coeffs: Vec<UniPoly>) -> Self {
        let mut p = BiPoly { field: field.clone(), coeffs };
        while p.coeffs.last().is_some_and(|c| c.is_zero()) {
            p.coeffs.pop();
        }
        p
    }

    /// A polynomial in `x` with constant coefficients.
    pub fn from_x_poly(p: &UniPoly) -> Self {
        Self::from_x_coeffs(
            p.field(),
            p.coefficients().iter().map(|c| UniPoly::constant(c.clone(), Var::T)).collect(),
        )
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn x_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn x_coeff(&self, i: usize) -> UniPoly {
        self.coeffs.get(i).cloned().unwrap_or_else(|| UniPoly::zero(&self.field, Var::T))
    }

    pub fn x_coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn t_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|c| c.degree()).max()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.coeffs.iter().enumerate().filter_map(|(i, c)| c.degree().map(|d| d + i)).max()
    }

    pub fn coefficient(&self, x_pow: usize, t_pow: usize) -> FieldElem {
        self.x_coeff(x_pow).coeff(t_pow)
    }

    /// Leading coefficient in `x`, a polynomial in `t`.
    pub fn x_leading(&self) -> UniPoly {
        self.coeffs.last().cloned().unwrap_or_else(|| UniPoly::zero(&self.field, Var::T))
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        Self::from_x_coeffs(&self.field, self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn scale_poly(&self, c: &UniPoly) -> Self {
        Self::from_x_coeffs(&self.field, self.coeffs.iter().map(|p| p * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = BiPoly::one(&self.field);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Substitutes `x = c(t)`.
    pub fn eval_x(&self, c: &UniPoly) -> UniPoly {
        let c = c.clone().with_var(Var::T);
        let mut acc = UniPoly::zero(&self.field, Var::T);
        for p in self.coeffs.iter().rev() {
            acc = &(&acc * &c) + p;
        }
        acc
    }

    /// Substitutes `t = t0`, giving a polynomial in `x`.
    pub fn eval_t(&self, t0: &FieldElem) -> UniPoly {
        UniPoly::from_coeffs_in(&self.field, Var::X, self.coeffs.iter().map(|p| p.eval(t0)).collect())
    }

    pub fn derivative_x(&self) -> Self {
        Self::from_x_coeffs(
            &self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale_rational(&crate::rat(i as i64)))
                .collect(),
        )
    }

    pub fn derivative_t(&self) -> Self {
        Self::from_x_coeffs(&self.field, self.coeffs.iter().map(|c| c.derivative()).collect())
    }

    /// Resultant with respect to `x`, a polynomial in `t`.
    pub fn resultant_x(&self, other: &BiPoly) -> UniPoly {
        let field = &self.field;
        let (Some(m), Some(n)) = (self.x_degree(), other.x_degree()) else {
            return UniPoly::zero(field, Var::T);
        };
        if m == 0 {
            return self.x_coeff(0).pow(n as u32);
        }
        if n == 0 {
            return other.x_coeff(0).pow(m as u32);
        }
        let size = m + n;
        let zero = UniPoly::zero(field, Var::T);
        let mut rows = Vec::with_capacity(size);
        for i in 0..n {
            let mut row = vec![zero.clone(); size];
            for j in 0..=m {
                row[i + j] = self.x_coeff(m - j);
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![zero.clone(); size];
            for j in 0..=n {
                row[i + j] = other.x_coeff(n - j);
            }
            rows.push(row);
        }
        det_poly(rows, field, Var::T)
    }

    /// Substitutes `t = s(t, x)`.
    pub fn substitute_t(&self, s: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero(&self.field);
        let mut xpow = BiPoly::one(&self.field);
        let x = BiPoly::x(&self.field);
        for c in &self.coeffs {
            let mut acc = BiPoly::zero(&self.field);
            for a in c.coefficients().iter().rev() {
                acc = &(&acc * s) + &BiPoly::constant(a.clone());
            }
            out = &out + &(&acc * &xpow);
            xpow = &xpow * &x;
        }
        out
    }

    /// Coefficients `(s_1, s_0)` of the first subresultant
    /// `S_1 = s_1 x + s_0` with respect to `x`. Both degrees must be at
    /// least 2.
    pub fn first_subresultant_x(&self, other: &BiPoly) -> Option<(UniPoly, UniPoly)> {
        let (m, n) = (self.x_degree()?, other.x_degree()?);
        if m < 2 || n < 2 {
            return None;
        }
        let size = m + n - 2;
        let field = &self.field;
        let zero = UniPoly::zero(field, Var::T);
        // Row entries indexed by the power of x, highest first.
        let mut rows: Vec<Vec<UniPoly>> = Vec::with_capacity(size);
        let mut push = |p: &BiPoly, deg: usize, shifts: usize| {
            for i in 0..shifts {
                let mut row = vec![zero.clone(); size + 1];
                for j in 0..=deg {
                    // x^i p has coefficient p_j at power i + j.
                    let pow = i + j;
                    row[size - pow] = p.x_coeff(j);
                }
                rows.push(row);
            }
        };
        push(self, m, n - 1);
        push(other, n, m - 1);
        // Columns for x^{size} .. x^2 are 0 .. size - 2; x^1 is size - 1; x^0 is size.
        let pick = |last: usize| -> UniPoly {
            let mat: Vec<Vec<UniPoly>> = rows
                .iter()
                .map(|r| r[..size - 1].iter().cloned().chain([r[last].clone()]).collect())
                .collect();
            det_poly(mat, field, Var::T)
        };
        Some((pick(size - 1), pick(size)))
    }

    /// The curve in the chart around `[0 : 1 : 0]`: with `u = T/X` and
    /// `v = Z/X`, returned with `u` in the role of `t` and `v` in the role
    /// of `x`, so the point becomes the origin.
    pub fn chart_at_x_infinity(&self) -> BiPoly {
        let Some(d) = self.total_degree() else {
            return self.clone();
        };
        let mut coeffs = vec![UniPoly::zero(&self.field, Var::T); d + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            for (i, a) in c.coefficients().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let v = d - i - j;
                coeffs[v] = &coeffs[v] + &UniPoly::monomial(a.clone(), i, Var::T);
            }
        }
        BiPoly::from_x_coeffs(&self.field, coeffs)
    }

    /// Highest-degree homogeneous part at `t = 1`, as a polynomial in `x`.
    /// Its roots are the points at infinity `[1 : x : 0]`; a vanishing top
    /// coefficient means the curve passes through `[0 : 1 : 0]`.
    pub fn top_form(&self) -> UniPoly {
        let Some(d) = self.total_degree() else {
            return UniPoly::zero(&self.field, Var::X);
        };
        let coeffs = (0..=d).map(|i| self.coefficient(i, d - i)).collect();
        UniPoly::from_coeffs_in(&self.field, Var::X, coeffs)
    }

    /// Whether the projective closure contains the point at infinity of
    /// the `x`-direction, `[t : x : z] = [0 : 1 : 0]`.
    pub fn passes_through_x_infinity(&self) -> bool {
        match self.total_degree() {
            None => true,
            Some(d) => self.coefficient(d, 0).is_zero(),
        }
    }

    /// For `x - c(t)` up to a constant, returns `c`.
    pub fn as_graph(&self) -> Option<UniPoly> {
        if self.x_degree() != Some(1) || !self.coeffs[1].is_constant() {
            return None;
        }
        let lc = self.coeffs[1].coeff(0);
        Some((-&self.coeffs[0]).scale(&lc.inverse().ok()?))
    }

    pub fn map_coeffs(&self, target: &FieldSpec, f: impl Fn(&FieldElem) -> FieldElem) -> Self {
        Self::from_x_coeffs(target, self.coeffs.iter().map(|p| p.map_coeffs(target, &f)).collect())
    }

    /// Rational coefficients, if every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|p| p.rational_coefficients().is_some())
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(usize, usize, FieldElem)> = Vec::new();
        for (i, p) in self.coeffs.iter().enumerate() {
            for (j, c) in p.coefficients().iter().enumerate() {
                if !c.is_zero() {
                    terms.push((i, j, c.clone()));
                }
            }
        }
        terms.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        let mut out = String::new();
        for (i, j, c) in terms {
            let mono = [(i, "x"), (j, "t")]
                .iter()
                .filter(|(e, _)| *e > 0)
                .map(|(e, v)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect::<Vec<_>>()
                .join("*");
            let (neg, body) = coefficient_text(&c);
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), body.as_str()) {
                (true, _) => out.push_str(&body),
                (false, "1") => out.push_str(&mono),
                (false, _) => {
                    out.push_str(&body);
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

fn coefficient_text(c: &FieldElem) -> (bool, String) {
    use num_traits::Signed;
    match c.as_rational() {
        Some(q) => (q.is_negative(), crate::rational_to_string(&q.abs())),
        None if c.is_compound() => (false, format!("({c})")),
        None => {
            let s = c.to_string();
            match s.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, s),
            }
        }
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::from_x_coeffs(&self.field, (0..n).map(|i| &self.x_coeff(i) + &rhs.x_coeff(i)).collect())
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::from_x_coeffs(&self.field, (0..n).map(|i| &self.x_coeff(i) - &rhs.x_coeff(i)).collect())
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero(&self.field);
        }
        let mut out = vec![UniPoly::zero(&self.field, Var::T); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BiPoly::from_x_coeffs(&self.field, out)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly::from_x_coeffs(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

forward_owned!(Add, add, BiPoly);
forward_owned!(Sub, sub, BiPoly);
forward_owned!(Mul, mul, BiPoly);
