//! Exact arithmetic for elliptic-surface computations.
//!
//! Everything here is exact: rationals are `BigRational`, number fields are
//! `Q[a]/(m(a))` with `m` monic and irreducible, and polynomials carry the
//! field they live over. Mixing elements of different fields is an error;
//! move values across fields with an [`Embedding`].

mod bipoly;
mod error;
mod factor;
mod field;
pub mod linalg;
mod matrix;
mod modgcd;
mod parse;
mod poly;
pub mod qpoly;
mod ratfunc;
mod tower;
mod zfactor;

pub use bipoly::BiPoly;
pub use error::{AlgebraError, Result};
pub use factor::{factor, norm, roots, Factorization};
pub use field::{field_arith, FieldElem, FieldOp, FieldSpec};
pub use matrix::det_poly;
pub use parse::{parse_bipoly, parse_field_elem, parse_rational_poly, parse_unipoly};
pub use poly::{SquarefreeDecomposition, UniPoly, Var};
pub use ratfunc::RationalFunction;
pub use tower::{adjoin_sqrt, degree_cap_from_env, Embedding, SqrtExtension, DEFAULT_DEGREE_CAP};
pub use zfactor::factor_rational;

pub use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;

/// Formats a rational as `num/den`, or just `num` when the denominator is 1.
pub fn rational_to_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `num/den` or an integer.
pub fn rational_from_str(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || AlgebraError::Parse {
        pos: 0,
        msg: format!("not a rational number: {s:?}"),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(AlgebraError::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Writes `sum c_i var^i` from the highest degree down, e.g. `a^2 - 3/2*a + 1`.
pub(crate) fn qpoly_display(coeffs: &[Rational], var: &str) -> String {
    use num_traits::{Signed, Zero};
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let is_one = abs == Rational::from_integer(1.into());
        match (i, is_one) {
            (0, _) => out.push_str(&rational_to_string(&abs)),
            (_, true) => {}
            (_, false) => {
                out.push_str(&rational_to_string(&abs));
                out.push('*');
            }
        }
        if i >= 1 {
            out.push_str(var);
        }
        if i >= 2 {
            out.push_str(&format!("^{i}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
