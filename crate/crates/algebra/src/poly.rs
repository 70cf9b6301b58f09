use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{AlgebraError, Result};
use crate::field::forward_owned;
use crate::{FieldElem, FieldSpec, Rational};
use num_traits::Zero;

/// Variable names used for display. Arithmetic ignores the variable except
/// for a debug assertion that both operands agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T,
    U,
    X,
    Y,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::U => "u",
            Var::X => "x",
            Var::Y => "y",
        }
    }
}

/// Dense univariate polynomial over a number field, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: FieldSpec,
    var: Var,
    coeffs: Vec<FieldElem>,
}

#[derive(Clone, Debug)]
pub struct SquarefreeDecomposition {
    pub unit: FieldElem,
    /// Monic, pairwise coprime, squarefree parts with their multiplicities.
    pub parts: Vec<(UniPoly, usize)>,
}

impl UniPoly {
    /// Builds from coefficients; the field is taken from the first entry, so
    /// an empty vector is not accepted here (use [`UniPoly::zero`]).
    pub fn from_coeffs(var: Var, coeffs: Vec<FieldElem>) -> Self {
        let field = coeffs.first().expect("use UniPoly::zero for empty input").field().clone();
        Self::from_coeffs_in(&field, var, coeffs)
    }

    pub fn from_coeffs_in(field: &FieldSpec, var: Var, coeffs: Vec<FieldElem>) -> Self {
        let mut p = UniPoly { field: field.clone(), var, coeffs };
        p.trim();
        p
    }

    pub fn from_rationals(field: &FieldSpec, var: Var, coeffs: &[Rational]) -> Self {
        Self::from_coeffs_in(
            field,
            var,
            coeffs.iter().map(|c| field.from_rational(c.clone())).collect(),
        )
    }

    pub fn from_ints(field: &FieldSpec, var: Var, coeffs: &[i64]) -> Self {
        Self::from_coeffs_in(field, var, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &FieldSpec, var: Var) -> Self {
        UniPoly { field: field.clone(), var, coeffs: Vec::new() }
    }

    pub fn one(field: &FieldSpec, var: Var) -> Self {
        Self::constant(field.one(), var)
    }

    pub fn constant(c: FieldElem, var: Var) -> Self {
        let field = c.field().clone();
        Self::from_coeffs_in(&field, var, vec![c])
    }

    /// The polynomial `var` itself.
    pub fn variable(field: &FieldSpec, var: Var) -> Self {
        Self::monomial(field.one(), 1, var)
    }

    pub fn monomial(c: FieldElem, deg: usize, var: Var) -> Self {
        let field = c.field().clone();
        let mut coeffs = vec![field.zero(); deg];
        coeffs.push(c);
        Self::from_coeffs_in(&field, var, coeffs)
    }

    /// `var - c`.
    pub fn linear_root(c: &FieldElem, var: Var) -> Self {
        Self::from_coeffs(var, vec![-c, c.field().one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn coefficients(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn degree_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading_coefficient(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(0)
    }

    /// Order of vanishing at 0 (`None` for the zero polynomial).
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.inverse().expect("nonzero")),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        Self::from_coeffs_in(&self.field, self.var, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        Self::from_coeffs_in(&self.field, self.var, self.coeffs.iter().map(|x| x.scale(q)).collect())
    }

    /// Multiplies by `var^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_coeffs_in(&self.field, self.var, coeffs)
    }

    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = d.degree().ok_or(AlgebraError::DivisionByZero)?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((UniPoly::zero(&self.field, self.var), self.clone()));
        }
        let lc_inv = d.coeffs[dd].inverse()?;
        let mut q = vec![self.field.zero(); r.len() - dd];
        for top in (dd..r.len()).rev() {
            if r[top].is_zero() {
                continue;
            }
            let c = &r[top] * &lc_inv;
            let shift = top - dd;
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[shift + j] = &r[shift + j] - &(&c * dj);
            }
            q[shift] = c;
        }
        r.truncate(dd);
        Ok((
            Self::from_coeffs_in(&self.field, self.var, q),
            Self::from_coeffs_in(&self.field, self.var, r),
        ))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).expect("remainder by zero polynomial").1
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &UniPoly) -> Option<UniPoly> {
        // Schoolbook division pays for coefficient growth in every step;
        // for large operands a multimodular quotient is much cheaper.
        let (ds, dd) = (self.degree_i64(), d.degree_i64());
        if dd >= 8 && ds - dd >= 4 {
            if let Some(q) = crate::modgcd::modular_exact_div(self, d) {
                return q;
            }
        }
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        if self.is_zero() {
            return false;
        }
        if other.is_zero() {
            return true;
        }
        other.exact_div(self).is_some()
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        // Euclid over Q(a) blows up coefficients quickly; past tiny degrees
        // the multimodular route is far cheaper.
        if self.degree().unwrap_or(0) >= 3 && other.degree().unwrap_or(0) >= 3 {
            if let Some(g) = crate::modgcd::modular_gcd(self, other) {
                return g;
            }
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let zero = UniPoly::zero(&self.field, self.var);
        let one = UniPoly::one(&self.field, self.var);
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero");
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.leading_coefficient().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = lc.inverse().expect("nonzero");
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Inverse modulo `m`, or the nontrivial gcd that blocks it.
    pub fn inverse_mod(&self, m: &UniPoly) -> std::result::Result<UniPoly, UniPoly> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        if g.is_one() {
            Ok(s.rem(m))
        } else {
            Err(g)
        }
    }

    pub fn derivative(&self) -> UniPoly {
        Self::from_coeffs_in(
            &self.field,
            self.var,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&crate::rat(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `self(inner)`; the result uses `inner`'s variable.
    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero(&self.field, inner.var);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &UniPoly::constant(c.clone(), inner.var);
        }
        acc
    }

    /// `self(var + c)`.
    pub fn translate(&self, c: &FieldElem) -> UniPoly {
        let inner = UniPoly::from_coeffs(self.var, vec![c.clone(), self.field.one()]);
        self.compose(&inner)
    }

    /// `var^d * self(1/var)` for `d >= deg`.
    pub fn reverse(&self, d: usize) -> UniPoly {
        assert!(self.degree().is_none_or(|deg| deg <= d), "reverse below the degree");
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(d + 1, self.field.zero());
        coeffs.reverse();
        Self::from_coeffs_in(&self.field, self.var, coeffs)
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut result = UniPoly::one(&self.field, self.var);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Applies `f` to every coefficient, landing in `target`.
    pub fn map_coeffs(&self, target: &FieldSpec, f: impl Fn(&FieldElem) -> FieldElem) -> UniPoly {
        Self::from_coeffs_in(target, self.var, self.coeffs.iter().map(f).collect())
    }

    /// Coefficients as rationals, if they all are.
    pub fn rational_coefficients(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_rational()).collect()
    }

    /// Yun's algorithm (characteristic zero).
    pub fn squarefree_decomposition(&self) -> Result<SquarefreeDecomposition> {
        let lc = self.leading_coefficient().ok_or(AlgebraError::Unsupported(
            "squarefree decomposition of the zero polynomial".into(),
        ))?;
        let unit = lc.clone();
        let f = self.monic();
        let mut parts = Vec::new();
        if f.is_constant() {
            return Ok(SquarefreeDecomposition { unit, parts });
        }
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.exact_div(&a).expect("gcd divides");
        let mut c = df.exact_div(&a).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            a = b.gcd(&d);
            if !a.is_constant() {
                parts.push((a.clone(), i));
            }
            b = b.exact_div(&a).expect("gcd divides");
            c = d.exact_div(&a).expect("gcd divides");
            d = &c - &b.derivative();
            i += 1;
        }
        Ok(SquarefreeDecomposition { unit, parts })
    }

    /// Monic product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_constant() {
            return UniPoly::one(&self.field, self.var);
        }
        self.monic().exact_div(&self.gcd(&self.derivative())).expect("gcd divides")
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Writes `self = c * g^2` with `g` monic when every root has even
    /// multiplicity.
    pub fn square_root(&self) -> Option<(UniPoly, FieldElem)> {
        let sqf = self.squarefree_decomposition().ok()?;
        let mut g = UniPoly::one(&self.field, self.var);
        for (p, m) in &sqf.parts {
            if m % 2 != 0 {
                return None;
            }
            g = &g * &p.pow((*m / 2) as u32);
        }
        Some((g, sqf.unit))
    }

    /// Multiplicity of the irreducible `p` as a factor (`None` if self is 0).
    pub fn multiplicity_of(&self, p: &UniPoly) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.exact_div(p) {
            cur = q;
            k += 1;
        }
        Some(k)
    }

    /// Deterministic order: by degree, then coefficients from the top.
    pub fn canonical_cmp(&self, other: &UniPoly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
                match a.canonical_cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }

    fn assert_compatible(&self, other: &UniPoly) {
        if self.field != other.field {
            panic!("field mismatch: {} vs {}", self.field, other.field);
        }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(&self.coeffs, self.var.name()))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Shared printer for polynomials with number-field coefficients.
pub(crate) fn format_poly(coeffs: &[FieldElem], var: &str) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let (neg, body) = match c.as_rational() {
            Some(q) => {
                use num_traits::Signed;
                (q.is_negative(), crate::rational_to_string(&q.abs()))
            }
            None if c.is_compound() => (false, format!("({c})")),
            None => {
                let s = c.to_string();
                match s.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, s),
                }
            }
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if i == 0 {
            out.push_str(&body);
        } else {
            if body != "1" {
                out.push_str(&body);
                out.push('*');
            }
            out.push_str(var);
            if i >= 2 {
                out.push_str(&format!("^{i}"));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        self.assert_compatible(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect();
        UniPoly::from_coeffs_in(&self.field, self.var, coeffs)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self.assert_compatible(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect();
        UniPoly::from_coeffs_in(&self.field, self.var, coeffs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        self.assert_compatible(rhs);
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(&self.field, self.var);
        }
        if self.field.is_rationals() {
            let a: Vec<Rational> = self.coeffs.iter().map(|c| c.as_rational().unwrap()).collect();
            let b: Vec<Rational> = rhs.coeffs.iter().map(|c| c.as_rational().unwrap()).collect();
            return UniPoly::from_rationals(&self.field, self.var, &crate::qpoly::mul(&a, &b));
        }
        // Kronecker substitution: a^j t^i -> z^(i (2d - 1) + j), one integer
        // product, then one reduction per output coefficient.
        let d = self.field.degree();
        let w = 2 * d - 1;
        let pack = |p: &UniPoly| {
            let mut flat = vec![Rational::zero(); p.coeffs.len() * w];
            for (i, c) in p.coeffs.iter().enumerate() {
                for (j, v) in c.coefficients().iter().enumerate() {
                    flat[i * w + j] = v.clone();
                }
            }
            crate::qpoly::to_integer(&flat)
        };
        let (na, da) = pack(self);
        let (nb, db) = pack(rhs);
        let den = da * db;
        let prod = crate::qpoly::mul_integer(&na, &nb);
        let n_out = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut out = Vec::with_capacity(n_out);
        for k in 0..n_out {
            let raw: Vec<Rational> = (0..w)
                .map(|j| prod.get(k * w + j).map_or_else(Rational::zero, |v| Rational::new(v.clone(), den.clone())))
                .collect();
            let mut raw = raw;
            crate::qpoly::trim(&mut raw);
            out.push(self.field.from_coeffs(raw));
        }
        UniPoly::from_coeffs_in(&self.field, self.var, out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs_in(&self.field, self.var, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

forward_owned!(Add, add, UniPoly);
forward_owned!(Sub, sub, UniPoly);
forward_owned!(Mul, mul, UniPoly);
