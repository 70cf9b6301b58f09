use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, Result};
use crate::{qpoly, Rational};

/// A number field `Q[a]/(m(a))`. The rationals are the degree-one field
/// with `m(a) = a`, so their generator is 0.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldData>);

struct FieldData {
    modulus: Vec<Rational>,
    name: String,
}

impl FieldSpec {
    pub fn rationals() -> Self {
        Self::new_unchecked(vec![Rational::zero(), Rational::one()], "")
    }

    /// Builds `Q[name]/(m)`. `m` is normalized to be monic and checked for
    /// irreducibility over Q.
    pub fn new(minimal_polynomial: Vec<Rational>, name: &str) -> Result<Self> {
        let mut m = minimal_polynomial;
        qpoly::trim(&mut m);
        if m.len() < 2 {
            return Err(AlgebraError::InvalidMinimalPolynomial(
                "degree must be at least 1".into(),
            ));
        }
        let m = qpoly::monic(&m);
        if m.len() > 2 {
            let (_, factors) = crate::zfactor::factor_rational(&m)?;
            if factors.len() != 1 || factors[0].1 != 1 {
                return Err(AlgebraError::InvalidMinimalPolynomial(format!(
                    "{} is reducible over Q",
                    crate::qpoly_display(&m, name)
                )));
            }
        }
        if m.len() == 2 && !m[0].is_zero() {
            // A linear modulus other than `a` is a renamed copy of Q; keep
            // one representation so that equality is structural.
            return Ok(Self::rationals());
        }
        Ok(Self::new_unchecked(m, name))
    }

    /// Skips the irreducibility test; callers must know `m` is irreducible.
    pub(crate) fn new_unchecked(modulus: Vec<Rational>, name: &str) -> Self {
        FieldSpec(Arc::new(FieldData {
            modulus: qpoly::monic(&modulus),
            name: if modulus.len() == 2 { String::new() } else { name.to_string() },
        }))
    }

    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    /// Monic minimal polynomial of the generator, lowest degree first.
    pub fn minimal_polynomial(&self) -> &[Rational] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { field: self.clone(), coeffs: Vec::new() }
    }

    pub fn one(&self) -> FieldElem {
        self.from_rational(Rational::one())
    }

    pub fn generator(&self) -> FieldElem {
        self.from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_rational(&self, q: Rational) -> FieldElem {
        self.from_coeffs(vec![q])
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        self.from_rational(crate::rat(n))
    }

    /// Reduces `sum coeffs[i] * a^i` modulo the minimal polynomial.
    pub fn from_coeffs(&self, coeffs: Vec<Rational>) -> FieldElem {
        let mut c = coeffs;
        qpoly::trim(&mut c);
        if c.len() > self.degree() {
            c = qpoly::rem(&c, &self.0.modulus);
        }
        FieldElem { field: self.clone(), coeffs: c }
    }

    /// Matrix of multiplication by `e` on the power basis; column `j` holds
    /// the coordinates of `e * a^j`.
    pub fn multiplication_matrix(&self, e: &FieldElem) -> Vec<Vec<Rational>> {
        let n = self.degree();
        let mut cols = Vec::with_capacity(n);
        let mut cur = e.clone();
        let a = self.generator();
        for _ in 0..n {
            cols.push(cur.dense());
            cur = &cur * &a;
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.modulus == other.0.modulus && self.0.name == other.0.name)
    }
}

impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.modulus.hash(state);
        self.0.name.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rationals() {
            write!(f, "Q")
        } else {
            write!(
                f,
                "Q[{}]/({})",
                self.name(),
                crate::qpoly_display(self.minimal_polynomial(), self.name())
            )
        }
    }
}

/// An element of a number field, stored as coordinates in the power basis.
#[derive(Clone)]
pub struct FieldElem {
    field: FieldSpec,
    coeffs: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked arithmetic: fails on mismatched fields or division by zero.
pub fn field_arith(a: &FieldElem, b: &FieldElem, op: FieldOp) -> Result<FieldElem> {
    a.check_same(b)?;
    Ok(match op {
        FieldOp::Add => a + b,
        FieldOp::Sub => a - b,
        FieldOp::Mul => a * b,
        FieldOp::Div => a.try_div(b)?,
    })
}

impl FieldElem {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Power-basis coordinates, trimmed.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coordinates padded to the field degree.
    pub fn dense(&self) -> Vec<Rational> {
        let mut v = self.coeffs.clone();
        v.resize(self.field.degree(), Rational::zero());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub(crate) fn check_same(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            })
        }
    }

    pub fn inverse(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.coeffs.len() == 1 {
            return Ok(self.field.from_rational(self.coeffs[0].recip()));
        }
        let (g, s, _) = qpoly::ext_gcd(&self.coeffs, self.field.minimal_polynomial());
        if g.len() != 1 {
            return Err(AlgebraError::InvalidMinimalPolynomial(
                "modulus has a nontrivial factor".into(),
            ));
        }
        Ok(self.field.from_coeffs(s))
    }

    pub fn try_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> FieldElem {
        let mut result = self.field.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    pub fn scale(&self, q: &Rational) -> FieldElem {
        FieldElem { field: self.field.clone(), coeffs: qpoly::scale(&self.coeffs, q) }
    }

    /// A square root in the same field, if one exists. The returned root is
    /// canonically positive.
    pub fn sqrt(&self) -> Result<Option<FieldElem>> {
        if self.is_zero() {
            return Ok(Some(self.clone()));
        }
        if let Some(q) = self.as_rational() {
            if let Some(r) = rational_sqrt(&q) {
                return Ok(Some(self.field.from_rational(r)));
            }
            if self.field.is_rationals() {
                return Ok(None);
            }
        }
        let p = crate::UniPoly::from_coeffs(
            crate::Var::Y,
            vec![-self.clone(), self.field.zero(), self.field.one()],
        );
        let roots = crate::roots(&p)?;
        Ok(roots.into_iter().map(|(r, _)| r.canonical_sign()).next())
    }

    /// Positive when the lowest-index nonzero coordinate is positive. This
    /// is an arbitrary but deterministic choice of one of `{e, -e}`.
    pub fn is_canonically_positive(&self) -> bool {
        self.coeffs.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_positive())
    }

    /// `e` or `-e`, whichever is canonically positive (zero stays zero).
    pub fn canonical_sign(&self) -> FieldElem {
        if self.is_zero() || self.is_canonically_positive() {
            self.clone()
        } else {
            -self
        }
    }

    /// Deterministic total order on coordinates.
    pub fn canonical_cmp(&self, other: &FieldElem) -> Ordering {
        let (a, b) = (self.dense(), other.dense());
        for (x, y) in a.iter().zip(b.iter()) {
            match x.cmp(y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        a.len().cmp(&b.len())
    }

    /// Norm down to Q.
    pub fn norm(&self) -> Rational {
        crate::linalg::det(&self.field.multiplication_matrix(self))
    }

    /// True when the element needs parentheses inside a product.
    pub(crate) fn is_compound(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() > 1
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = num_integer::Roots::sqrt(q.numer());
    let d = num_integer::Roots::sqrt(q.denom());
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::qpoly_display(&self.coeffs, self.field.name()))
    }
}

fn assert_same(a: &FieldElem, b: &FieldElem) {
    if a.field != b.field {
        panic!("field mismatch: {} vs {}", a.field, b.field);
    }
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        assert_same(self, rhs);
        FieldElem { field: self.field.clone(), coeffs: qpoly::add(&self.coeffs, &rhs.coeffs) }
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        assert_same(self, rhs);
        FieldElem { field: self.field.clone(), coeffs: qpoly::sub(&self.coeffs, &rhs.coeffs) }
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        assert_same(self, rhs);
        self.field.from_coeffs(qpoly::mul(&self.coeffs, &rhs.coeffs))
    }
}

impl Div for &FieldElem {
    type Output = FieldElem;
    fn div(self, rhs: &FieldElem) -> FieldElem {
        self.try_div(rhs).expect("field division failed")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { field: self.field.clone(), coeffs: qpoly::neg(&self.coeffs) }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                (&self).$m(rhs)
            }
        }
        impl $tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                self.$m(&rhs)
            }
        }
    };
}
pub(crate) use forward_owned;

forward_owned!(Add, add, FieldElem);
forward_owned!(Sub, sub, FieldElem);
forward_owned!(Mul, mul, FieldElem);
forward_owned!(Div, div, FieldElem);

