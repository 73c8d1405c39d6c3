use super::FullRankFactorization;
use crate::numfield::{Mat, Scalar};

/// Complete-pivoting elimination `P_r A P_c = L U`, returned as the full-rank
/// pair `E = P_r^T L`, `F = U P_c^T`. `None` for the zero matrix.
///
/// The pivot is the preferred entry of the active submatrix (largest modulus
/// for floats, shortest for rationals); ties go to the lowest column, then the
/// lowest row. A pivot counts as zero only when
/// it is exactly zero, so this is the exact backend's rank decision.
pub fn pivoted_full_rank<T: Scalar>(a: &Mat<T>) -> Option<FullRankFactorization<T>> {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut row_perm: Vec<usize> = (0..m).collect();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    for s in 0..m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for j in s..n {
            for i in s..m {
                let v = w.get(i, j);
                if v.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if !v.better_pivot(w.get(bi, bj)) => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(s, pi);
        row_perm.swap(s, pi);
        w.swap_cols(s, pj);
        col_perm.swap(s, pj);
        let pivot = w.get(s, s).clone();
        for i in s + 1..m {
            let factor = w.get(i, s).clone() / pivot.clone();
            if !factor.is_zero() {
                for j in s + 1..n {
                    let v = w.get(i, j).clone() - factor.clone() * w.get(s, j).clone();
                    w.set(i, j, v);
                }
            }
            w.set(i, s, factor);
        }
        rank += 1;
    }
    if rank == 0 {
        return None;
    }
    // E = P_r^T L: row row_perm[i] of E is row i of L
    let mut e = Mat::zeros(m, rank);
    for i in 0..m {
        for s in 0..rank.min(i + 1) {
            let v = if i == s { T::one() } else { w.get(i, s).clone() };
            e.set(row_perm[i], s, v);
        }
    }
    // F = U P_c^T: column col_perm[j] of F is column j of U
    let mut f = Mat::zeros(rank, n);
    for s in 0..rank {
        for j in s..n {
            f.set(s, col_perm[j], w.get(s, j).clone());
        }
    }
    Some(FullRankFactorization { e, f, rank })
}

/// Basis of the null space of `a` from its reduced row echelon form.
pub(crate) fn null_space<T: Scalar>(a: &Mat<T>) -> Mat<T> {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let mut piv = None;
        for r in row..m {
            if !w.get(r, col).is_zero() {
                match piv {
                    Some(p) if !w.get(r, col).better_pivot(w.get(p, col)) => {}
                    _ => piv = Some(r),
                }
            }
        }
        let Some(p) = piv else { continue };
        w.swap_rows(row, p);
        let pv = w.get(row, col).clone();
        for j in 0..n {
            let v = w.get(row, j).clone() / pv.clone();
            w.set(row, j, v);
        }
        for r in 0..m {
            if r == row || w.get(r, col).is_zero() {
                continue;
            }
            let f = w.get(r, col).clone();
            for j in 0..n {
                let v = w.get(r, j).clone() - f.clone() * w.get(row, j).clone();
                w.set(r, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Mat::zeros(n, free.len());
    for (b, &fc) in free.iter().enumerate() {
        basis.set(fc, b, T::one());
        for (r, &pc) in pivots.iter().enumerate() {
            basis.set(pc, b, -w.get(r, fc).clone());
        }
    }
    basis
}

/// Indices of a maximal set of linearly independent columns (leftmost first).
pub(crate) fn pivot_columns<T: Scalar>(a: &Mat<T>) -> Vec<usize> {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let Some(p) = (row..m).find(|&r| !w.get(r, col).is_zero()) else {
            continue;
        };
        w.swap_rows(row, p);
        let pv = w.get(row, col).clone();
        for r in row + 1..m {
            let f = w.get(r, col).clone() / pv.clone();
            if f.is_zero() {
                continue;
            }
            for j in col..n {
                let v = w.get(r, j).clone() - f.clone() * w.get(row, j).clone();
                w.set(r, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}
