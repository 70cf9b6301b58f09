//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `L * M * R = D` with `L`, `R` unimodular and `D` diagonal, each
/// diagonal entry dividing the next and all nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
    /// The nonzero diagonal entries.
    pub invariants: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).fold(BigInt::zero(), |s, v| s + v))
                .collect()
        })
        .collect()
}

fn swap_rows(m: &mut IntMatrix, i: usize, j: usize) {
    m.swap(i, j);
}

fn swap_cols(m: &mut IntMatrix, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// row_i += k * row_j
fn add_row(m: &mut IntMatrix, i: usize, j: usize, k: &BigInt) {
    let rj = m[j].clone();
    for (a, b) in m[i].iter_mut().zip(rj) {
        *a += k * b;
    }
}

/// col_i += k * col_j
fn add_col(m: &mut IntMatrix, i: usize, j: usize, k: &BigInt) {
    for row in m.iter_mut() {
        let v = k * &row[j];
        row[i] += v;
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for a in m[i].iter_mut() {
        *a = -a.clone();
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut d = m.clone();
    let mut l = identity(rows);
    let mut r = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        swap_rows(&mut d, t, bi);
        swap_rows(&mut l, t, bi);
        swap_cols(&mut d, t, bj);
        swap_cols(&mut r, t, bj);
        let mut clean = true;
        for i in t + 1..rows {
            if !d[i][t].is_zero() {
                let q = -d[i][t].div_floor(&d[t][t]);
                add_row(&mut d, i, t, &q);
                add_row(&mut l, i, t, &q);
                clean &= d[i][t].is_zero();
            }
        }
        for j in t + 1..cols {
            if !d[t][j].is_zero() {
                let q = -d[t][j].div_floor(&d[t][t]);
                add_col(&mut d, j, t, &q);
                add_col(&mut r, j, t, &q);
                clean &= d[t][j].is_zero();
            }
        }
        if !clean {
            continue;
        }
        // The pivot must divide the rest of the block.
        let mut fixed = true;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&d[i][j] % &d[t][t]).is_zero() {
                    let one = BigInt::one();
                    add_row(&mut d, t, i, &one);
                    add_row(&mut l, t, i, &one);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        if d[t][t].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut l, t);
        }
        t += 1;
    }
    let invariants = (0..rows.min(cols)).map(|i| d[i][i].clone()).filter(|v| !v.is_zero()).collect();
    SmithForm { left: l, diagonal: d, right: r, invariants }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[&[i64]]) -> IntMatrix {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn reconstructs_and_divides() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert_eq!(mat_mul(&mat_mul(&s.left, &a), &s.right), s.diagonal);
        let inv: Vec<i64> = s.invariants.iter().map(|v| i64::try_from(v).unwrap()).collect();
        assert_eq!(inv, vec![2, 6, 12]);
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let a = m(&[&[2, 0], &[1, 0], &[3, 0]]);
        let s = smith_normal_form(&a);
        assert_eq!(mat_mul(&mat_mul(&s.left, &a), &s.right), s.diagonal);
        assert_eq!(s.rank(), 1);
        assert_eq!(s.invariants[0], BigInt::from(1));
    }
}
