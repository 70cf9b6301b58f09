use crate::{FieldSpec, UniPoly, Var};

/// Determinant over `k[var]` by fraction-free Bareiss elimination.
pub fn det_poly(mut m: Vec<Vec<UniPoly>>, field: &FieldSpec, var: Var) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::one(field, var);
    }
    let mut sign_negative = false;
    let mut prev = UniPoly::one(field, var);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_negative = !sign_negative;
                }
                None => return UniPoly::zero(field, var),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_negative {
        -d
    } else {
        d
    }
}
