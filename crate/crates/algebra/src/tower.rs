use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, Result};
use crate::{norm, BiPoly, FieldElem, FieldSpec, Rational, RationalFunction, UniPoly, Var};

pub const DEFAULT_DEGREE_CAP: usize = 8;

/// Reads `MWL_FIELD_DEGREE_CAP`, falling back to the default.
pub fn degree_cap_from_env() -> usize {
    std::env::var("MWL_FIELD_DEGREE_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n >= 1)
        .unwrap_or(DEFAULT_DEGREE_CAP)
}

/// A field homomorphism `source -> target`, fixed by the image of the
/// source generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FieldSpec,
    target: FieldSpec,
    powers: Vec<FieldElem>,
}

impl Embedding {
    pub fn new(source: &FieldSpec, target: &FieldSpec, generator_image: FieldElem) -> Result<Self> {
        if generator_image.field() != target {
            return Err(AlgebraError::FieldMismatch {
                left: generator_image.field().to_string(),
                right: target.to_string(),
            });
        }
        let mut powers = Vec::with_capacity(source.degree());
        let mut cur = target.one();
        for _ in 0..source.degree() {
            powers.push(cur.clone());
            cur = &cur * &generator_image;
        }
        let e = Embedding { source: source.clone(), target: target.clone(), powers };
        // The image must satisfy the source minimal polynomial.
        let m = source.minimal_polynomial();
        let mut acc = target.zero();
        for c in m.iter().rev() {
            acc = &(&acc * &generator_image) + &target.from_rational(c.clone());
        }
        if !acc.is_zero() && !source.is_rationals() {
            return Err(AlgebraError::InvalidMinimalPolynomial(
                "generator image is not a root of the source minimal polynomial".into(),
            ));
        }
        Ok(e)
    }

    pub fn identity(field: &FieldSpec) -> Self {
        Self::new(field, field, field.generator()).expect("identity embedding")
    }

    pub fn source(&self) -> &FieldSpec {
        &self.source
    }

    pub fn target(&self) -> &FieldSpec {
        &self.target
    }

    pub fn generator_image(&self) -> FieldElem {
        self.apply(&self.source.generator())
    }

    pub fn apply(&self, e: &FieldElem) -> FieldElem {
        assert!(e.field() == &self.source, "embedding applied to an element of {}", e.field());
        if let Some(q) = e.as_rational() {
            return self.target.from_rational(q);
        }
        let mut acc = self.target.zero();
        for (c, p) in e.coefficients().iter().zip(&self.powers) {
            if !c.is_zero() {
                acc = &acc + &p.scale(c);
            }
        }
        acc
    }

    pub fn apply_poly(&self, p: &UniPoly) -> UniPoly {
        p.map_coeffs(&self.target, |c| self.apply(c))
    }

    pub fn apply_ratfunc(&self, r: &RationalFunction) -> RationalFunction {
        r.map_coeffs(&self.target, |c| self.apply(c))
    }

    pub fn apply_bipoly(&self, p: &BiPoly) -> BiPoly {
        p.map_coeffs(&self.target, |c| self.apply(c))
    }

    /// The element of the source mapping to `e`, if any.
    pub fn preimage(&self, e: &FieldElem) -> Option<FieldElem> {
        if e.field() != &self.target {
            return None;
        }
        if let Some(q) = e.as_rational() {
            return Some(self.source.from_rational(q));
        }
        let n = self.target.degree();
        let k = self.powers.len();
        let cols: Vec<Vec<Rational>> = self.powers.iter().map(|p| p.dense()).collect();
        let target = e.dense();
        let mut m: Vec<Vec<Rational>> =
            (0..n).map(|r| cols.iter().map(|c| c[r].clone()).chain([target[r].clone()]).collect()).collect();
        let pivots = crate::linalg::rref(&mut m);
        if pivots.contains(&k) {
            return None;
        }
        let mut coeffs = vec![Rational::zero(); k];
        for (r, &c) in pivots.iter().enumerate() {
            coeffs[c] = m[r][k].clone();
        }
        Some(self.source.from_coeffs(coeffs))
    }

    /// Coefficient-wise preimage of a polynomial.
    pub fn preimage_poly(&self, p: &UniPoly) -> Option<UniPoly> {
        let coeffs = p.coefficients().iter().map(|c| self.preimage(c)).collect::<Option<Vec<_>>>()?;
        Some(UniPoly::from_coeffs_in(&self.source, p.var(), coeffs))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Embedding) -> Embedding {
        assert!(self.target == next.source, "embeddings do not compose");
        let image = next.apply(&self.generator_image());
        Embedding::new(&self.source, &next.target, image).expect("composition of embeddings")
    }
}

/// Result of adjoining a square root.
#[derive(Clone, Debug)]
pub struct SqrtExtension {
    pub field: FieldSpec,
    pub embedding: Embedding,
    /// A square root of the embedded radicand.
    pub root: FieldElem,
}

/// Adjoins `sqrt(u)` to the field of `u`. When `u` is already a square the
/// field is unchanged and the embedding is the identity.
pub fn adjoin_sqrt(u: &FieldElem, name: &str, cap: usize) -> Result<SqrtExtension> {
    let base = u.field().clone();
    if let Some(r) = u.sqrt()? {
        return Ok(SqrtExtension { field: base.clone(), embedding: Embedding::identity(&base), root: r });
    }
    let requested = 2 * base.degree();
    if requested > cap {
        return Err(AlgebraError::FieldDegreeCap { requested, cap });
    }
    if base.is_rationals() {
        let q = u.as_rational().unwrap();
        // sqrt(n/d) = sqrt(n d) / d, and sqrt(n d) = r sqrt(s) with s squarefree.
        let nd = q.numer() * q.denom();
        let (r, s) = split_square(&nd);
        let field = FieldSpec::new_unchecked(
            vec![Rational::from_integer(-s), Rational::zero(), Rational::one()],
            name,
        );
        let root = field.generator().scale(&Rational::new(r, q.denom().clone()));
        let embedding = Embedding::new(&base, &field, field.zero())?;
        return Ok(SqrtExtension { field, embedding, root });
    }
    let alpha = base.generator();
    for k in 1..40i64 {
        let c = if k % 2 == 1 { k / 2 + 1 } else { -(k / 2) };
        let ca = alpha.scale(&crate::rat(c));
        // gamma = sqrt(u) + c*alpha is a root of (X - c*alpha)^2 - u.
        let lin = UniPoly::from_coeffs(Var::Y, vec![-&ca, base.one()]);
        let g = &(&lin * &lin) - &UniPoly::constant(u.clone(), Var::Y);
        let m = norm(&g);
        if !m.is_squarefree() {
            continue;
        }
        let m: Vec<Rational> = m.rational_coefficients().unwrap();
        let field = FieldSpec::new_unchecked(m, name);
        let gamma = field.generator();
        // alpha is the common root of its minimal polynomial and
        // (gamma - c Y)^2 - u(Y) over the new field.
        let lift = |p: &[Rational]| {
            UniPoly::from_coeffs_in(&field, Var::Y, p.iter().map(|v| field.from_rational(v.clone())).collect())
        };
        let minpoly = lift(base.minimal_polynomial());
        let u_y = lift(&u.dense());
        let diff = UniPoly::from_coeffs(Var::Y, vec![gamma.clone(), field.from_rational(crate::rat(-c))]);
        let h = &(&diff * &diff) - &u_y;
        let gcd = minpoly.gcd(&h);
        if gcd.degree() != Some(1) {
            continue;
        }
        let alpha_img = -gcd.coeff(0);
        let embedding = Embedding::new(&base, &field, alpha_img.clone())?;
        let root = &gamma - &alpha_img.scale(&crate::rat(c));
        if &root * &root != embedding.apply(u) {
            return Err(AlgebraError::Unsupported("square root verification failed".into()));
        }
        return Ok(SqrtExtension { field, embedding, root });
    }
    Err(AlgebraError::Unsupported(format!("could not find a primitive element for sqrt({u})")))
}

/// Writes `n = r^2 s` with `s` squarefree (sign kept on `s`).
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = n.abs();
    let mut r = BigInt::one();
    let mut s = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            r *= &p;
        }
        if e % 2 == 1 {
            s *= &p;
        }
        p += 1;
    }
    s *= m;
    (r, sign * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_eight_is_two_sqrt_two() {
        let q = FieldSpec::rationals();
        let ext = adjoin_sqrt(&q.from_int(8), "s", 8).unwrap();
        assert_eq!(ext.field.minimal_polynomial(), &[crate::rat(-2), crate::rat(0), crate::rat(1)]);
        assert_eq!(&ext.root * &ext.root, ext.field.from_int(8));
    }

    #[test]
    fn tower_of_two_square_roots() {
        let q = FieldSpec::rationals();
        let e1 = adjoin_sqrt(&q.from_int(2), "a", 8).unwrap();
        let minus_one = e1.field.from_int(-1);
        let e2 = adjoin_sqrt(&minus_one, "b", 8).unwrap();
        assert_eq!(e2.field.degree(), 4);
        let s2 = e2.embedding.apply(&e1.root);
        assert_eq!(&s2 * &s2, e2.field.from_int(2));
        assert_eq!(&e2.root * &e2.root, e2.field.from_int(-1));
    }

    #[test]
    fn degree_cap_is_enforced() {
        let q = FieldSpec::rationals();
        let e1 = adjoin_sqrt(&q.from_int(2), "a", 2).unwrap();
        let err = adjoin_sqrt(&e1.field.from_int(3), "b", 2).unwrap_err();
        assert_eq!(err, AlgebraError::FieldDegreeCap { requested: 4, cap: 2 });
    }
}
