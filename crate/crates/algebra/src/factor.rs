//! Factorization over number fields by Trager's norm method, on top of the
//! rational factorizer.

use crate::error::{AlgebraError, Result};
use crate::{det_poly, zfactor, FieldElem, FieldSpec, UniPoly};

#[derive(Clone, Debug)]
pub struct Factorization {
    pub unit: FieldElem,
    /// Monic irreducible factors with multiplicities, deterministically ordered.
    pub factors: Vec<(UniPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> UniPoly {
        let var = self.factors.first().map_or(crate::Var::X, |(p, _)| p.var());
        let mut acc = UniPoly::constant(self.unit.clone(), var);
        for (p, m) in &self.factors {
            acc = &acc * &p.pow(*m as u32);
        }
        acc
    }
}

/// Complete factorization into monic irreducibles over the coefficient field.
pub fn factor(f: &UniPoly) -> Result<Factorization> {
    let unit = f
        .leading_coefficient()
        .cloned()
        .ok_or_else(|| AlgebraError::Unsupported("cannot factor the zero polynomial".into()))?;
    let field = f.field().clone();
    let var = f.var();
    let mut factors = Vec::new();
    if let Some(rc) = f.rational_coefficients() {
        let (_, qf) = zfactor::factor_rational(&rc)?;
        for (p, m) in qf {
            let p = UniPoly::from_rationals(&field, var, &p);
            for g in irreducible_factors(&p)? {
                factors.push((g, m));
            }
        }
    } else {
        let sqf = f.squarefree_decomposition()?;
        for (p, m) in sqf.parts {
            for g in irreducible_factors(&p)? {
                factors.push((g, m));
            }
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(Factorization { unit, factors })
}

/// Distinct roots in the coefficient field with their multiplicities.
pub fn roots(f: &UniPoly) -> Result<Vec<(FieldElem, usize)>> {
    if f.is_zero() {
        return Err(AlgebraError::Unsupported("roots of the zero polynomial".into()));
    }
    let fac = factor(f)?;
    let mut out: Vec<(FieldElem, usize)> = fac
        .factors
        .iter()
        .filter(|(p, _)| p.degree() == Some(1))
        .map(|(p, m)| (-p.coeff(0), *m))
        .collect();
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(out)
}

/// Norm from `K[x]` down to `Q[x]`: the determinant of multiplication by
/// `f` on `K[x]` viewed as a free `Q[x]`-module.
pub fn norm(f: &UniPoly) -> UniPoly {
    let field = f.field();
    let q = FieldSpec::rationals();
    let var = f.var();
    if field.is_rationals() {
        return f.map_coeffs(&q, |c| q.from_rational(c.as_rational().unwrap()));
    }
    let n = field.degree();
    let mats: Vec<_> = f.coefficients().iter().map(|c| field.multiplication_matrix(c)).collect();
    let m: Vec<Vec<UniPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let coeffs: Vec<_> = mats.iter().map(|mm| mm[i][j].clone()).collect();
                    UniPoly::from_rationals(&q, var, &coeffs)
                })
                .collect()
        })
        .collect();
    det_poly(m, &q, var)
}

fn to_field(p: &UniPoly, field: &FieldSpec) -> UniPoly {
    p.map_coeffs(field, |c| field.from_rational(c.as_rational().expect("rational")))
}

/// Irreducible factors of a monic squarefree polynomial.
fn irreducible_factors(g: &UniPoly) -> Result<Vec<UniPoly>> {
    let g = g.monic();
    if g.degree().unwrap_or(0) <= 1 {
        return Ok(vec![g]);
    }
    let field = g.field().clone();
    if field.is_rationals() {
        let (_, qf) = zfactor::factor_rational(&g.rational_coefficients().unwrap())?;
        return Ok(qf.into_iter().map(|(p, _)| UniPoly::from_rationals(&field, g.var(), &p)).collect());
    }
    let alpha = field.generator();
    for k in 0..40i64 {
        let s = if k % 2 == 0 { -(k / 2) } else { k / 2 + 1 };
        let shift = alpha.scale(&crate::rat(s));
        let gs = g.translate(&-&shift);
        let nrm = norm(&gs);
        if !nrm.is_squarefree() {
            continue;
        }
        let (_, qf) = zfactor::factor_rational(&nrm.rational_coefficients().unwrap())?;
        if qf.len() == 1 {
            return Ok(vec![g]);
        }
        let q = FieldSpec::rationals();
        let mut out = Vec::new();
        for (ni, _) in qf {
            let ni = to_field(&UniPoly::from_rationals(&q, g.var(), &ni), &field);
            let h = gs.gcd(&ni);
            if !h.is_constant() {
                out.push(h.translate(&shift).monic());
            }
        }
        let total: usize = out.iter().map(|h| h.degree().unwrap()).sum();
        if total != g.degree().unwrap() {
            return Err(AlgebraError::FactorizationFailure {
                reason: "norm factors do not account for the full degree".into(),
                partial: out.iter().map(|h| h.to_string()).collect(),
            });
        }
        return Ok(out);
    }
    Err(AlgebraError::FactorizationFailure {
        reason: "no shift made the norm squarefree".into(),
        partial: vec![g.to_string()],
    })
}
