//! Valuations and residues at a finite place `pi` (a monic irreducible
//! polynomial) of `k(t)`.

use mwl_algebra::{RationalFunction, UniPoly};

use crate::error::{CoreError, Result};

/// Order of vanishing of `p` along `pi`; `None` for the zero polynomial.
pub fn ord(p: &UniPoly, pi: &UniPoly) -> Option<u32> {
    if p.is_zero() {
        return None;
    }
    let mut k = 0;
    let mut cur = p.clone();
    while let Some(q) = cur.exact_div(pi) {
        cur = q;
        k += 1;
    }
    Some(k)
}

/// Valuation of a rational function; `None` for zero.
pub fn ord_rf(f: &RationalFunction, pi: &UniPoly) -> Option<i64> {
    let n = ord(f.numerator(), pi)? as i64;
    let d = ord(f.denominator(), pi).unwrap_or(0) as i64;
    Some(n - d)
}

/// Valuation with zero mapped to a large sentinel.
pub fn ord_or_inf(p: &UniPoly, pi: &UniPoly) -> u32 {
    ord(p, pi).unwrap_or(u32::MAX)
}

/// Residue of `f` in `k[t]/(pi)`, as the reduced representative.
pub fn residue(f: &RationalFunction, pi: &UniPoly) -> Result<UniPoly> {
    let den = f.denominator().rem(pi);
    let inv = den
        .inverse_mod(pi)
        .map_err(|_| CoreError::InternalInconsistency("residue of a function with a pole".into()))?;
    Ok((&f.numerator().rem(pi) * &inv).rem(pi))
}

/// `f / pi^k` (exact when the valuation allows it).
pub fn divide_by_power(f: &RationalFunction, pi: &UniPoly, k: u32) -> RationalFunction {
    let den = f.denominator() * &pi.pow(k);
    RationalFunction::new(f.numerator().clone(), den).expect("nonzero denominator")
}
