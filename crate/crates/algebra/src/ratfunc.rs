use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{AlgebraError, Result};
use crate::field::forward_owned;
use crate::{FieldElem, FieldSpec, UniPoly, Var};

/// An element of `k(var)` kept in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: UniPoly,
    den: UniPoly,
}

impl RationalFunction {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.field(), num.var()));
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap());
        let lc = d.leading_coefficient().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.inverse()?;
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(RationalFunction { num: n, den: d })
    }

    /// For coprime `num` and `den`; only the leading coefficient of `den`
    /// is normalized.
    fn from_coprime(num: UniPoly, den: UniPoly) -> Self {
        if num.is_zero() {
            return Self::zero(num.field(), num.var());
        }
        let lc = den.leading_coefficient().expect("nonzero denominator").clone();
        if lc.is_one() {
            return RationalFunction { num, den };
        }
        let inv = lc.inverse().expect("nonzero leading coefficient");
        RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: UniPoly) -> Self {
        let den = UniPoly::one(p.field(), p.var());
        RationalFunction { num: p, den }
    }

    pub fn constant(c: FieldElem, var: Var) -> Self {
        Self::from_poly(UniPoly::constant(c, var))
    }

    pub fn zero(field: &FieldSpec, var: Var) -> Self {
        Self::from_poly(UniPoly::zero(field, var))
    }

    pub fn one(field: &FieldSpec, var: Var) -> Self {
        Self::from_poly(UniPoly::one(field, var))
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    pub fn field(&self) -> &FieldSpec {
        self.num.field()
    }

    pub fn var(&self) -> Var {
        self.num.var()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_polynomial(&self) -> Option<UniPoly> {
        self.is_polynomial().then(|| self.num.clone())
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.num.degree_i64() - self.den.degree_i64())
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("denominator is nonzero")
    }

    /// `u^weight * self(1/u)`, expressed in the variable `var`.
    pub fn reciprocal_substitution(&self, weight: i64, var: Var) -> Self {
        if self.is_zero() {
            return Self::zero(self.field(), var);
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let num = self.num.reverse(dn).with_var(var);
        let den = self.den.reverse(dd).with_var(var);
        let k = weight - dn as i64 + dd as i64;
        let u = UniPoly::variable(self.field(), var);
        let (num, den) = if k >= 0 {
            (&num * &u.pow(k as u32), den)
        } else {
            (num, &den * &u.pow((-k) as u32))
        };
        Self::new(num, den).expect("nonzero denominator")
    }

    /// Value at a point where the denominator does not vanish.
    pub fn eval(&self, x: &FieldElem) -> Result<FieldElem> {
        let d = self.den.eval(x);
        self.num.eval(x).try_div(&d)
    }

    pub fn map_coeffs(&self, target: &FieldSpec, f: impl Fn(&FieldElem) -> FieldElem) -> Self {
        Self::new(self.num.map_coeffs(target, &f), self.den.map_coeffs(target, &f))
            .expect("embedding keeps the denominator nonzero")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            let wrap = |p: &UniPoly| {
                let s = p.to_string();
                if p.coefficients().iter().filter(|c| !c.is_zero()).count() > 1 {
                    format!("({s})")
                } else {
                    s
                }
            };
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// Sums and products follow Henrici: gcds are taken only on factors that
// can actually cancel, which keeps them far smaller than the unreduced
// results.
impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        if rhs.is_polynomial() || self.is_polynomial() {
            let (p, f) = if rhs.is_polynomial() { (rhs, self) } else { (self, rhs) };
            // gcd(f.num + c p f.den, f.den) = gcd(f.num, f.den) = 1.
            let c = p.den.leading_coefficient().unwrap().inverse().unwrap();
            return RationalFunction::from_coprime(&f.num + &(&p.num.scale(&c) * &f.den), f.den.clone());
        }
        let d = self.den.gcd(&rhs.den);
        let (a, b) = (self.den.exact_div(&d).unwrap(), rhs.den.exact_div(&d).unwrap());
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        if d.is_one() {
            return RationalFunction::from_coprime(num, &self.den * &b);
        }
        let g = num.gcd(&d);
        RationalFunction::from_coprime(num.exact_div(&g).unwrap(), (&a * &rhs.den).exact_div(&g).unwrap())
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.field(), self.var());
        }
        let cancel = |n: &UniPoly, d: &UniPoly| {
            if d.is_constant() {
                (n.clone(), d.clone())
            } else {
                let g = n.gcd(d);
                (n.exact_div(&g).unwrap(), d.exact_div(&g).unwrap())
            }
        };
        let (n1, d2) = cancel(&self.num, &rhs.den);
        let (n2, d1) = cancel(&rhs.num, &self.den);
        RationalFunction::from_coprime(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

forward_owned!(Add, add, RationalFunction);
forward_owned!(Sub, sub, RationalFunction);
forward_owned!(Mul, mul, RationalFunction);
