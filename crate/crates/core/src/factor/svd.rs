//! Float SVD by one-sided Jacobi rotations.
//!
//! Jacobi orthogonalizes the columns of `A V` directly, so small singular
//! values come out with high relative accuracy, which the rank decisions
//! downstream rely on.

use super::{FullRankFactorization, RankInfo};
use crate::error::{Error, Result};
use crate::numfield::{ApproxC, Mat, Scalar, Tolerance};

/// Window factor for declaring a rank decision ambiguous.
const AMBIGUITY_WINDOW: f64 = 10.0;

const MAX_SWEEPS: usize = 80;

/// Thin SVD: `u` is `m x p`, `v` is `n x p` with `p = min(m, n)`; for square
/// input both factors are full unitary matrices.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Mat<ApproxC>,
    pub sigma: Vec<f64>,
    pub v: Mat<ApproxC>,
}

/// Column-major working copy.
struct Cols {
    rows: usize,
    cols: Vec<Vec<ApproxC>>,
}

impl Cols {
    fn of(a: &Mat<ApproxC>) -> Cols {
        Cols {
            rows: a.rows(),
            cols: (0..a.cols()).map(|j| (0..a.rows()).map(|i| *a.get(i, j)).collect()).collect(),
        }
    }

    fn to_mat(&self) -> Mat<ApproxC> {
        Mat::from_fn(self.rows, self.cols.len(), |i, j| self.cols[j][i])
    }
}

fn dot(x: &[ApproxC], y: &[ApproxC]) -> ApproxC {
    x.iter().zip(y).fold(ApproxC::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
}

fn norm_sqr(x: &[ApproxC]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Apply `[x y] <- [x y] [[c, s w], [-s conj(w), c]]`.
fn rotate(x: &mut [ApproxC], y: &mut [ApproxC], c: f64, s: f64, w: ApproxC) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (xa, yb) = (*a, *b);
        *a = xa * c - yb * (w.conj() * s);
        *b = xa * (w * s) + yb * c;
    }
}

/// Extend orthonormal columns (entries `None` are missing) to an orthonormal set.
fn complete(rows: usize, cols: &mut [Option<Vec<ApproxC>>]) {
    for j in 0..cols.len() {
        if cols[j].is_some() {
            continue;
        }
        for e in 0..rows {
            let mut v = vec![ApproxC::new(0.0, 0.0); rows];
            v[e] = ApproxC::new(1.0, 0.0);
            for _ in 0..2 {
                for q in cols.iter().flatten() {
                    let proj = dot(q, &v);
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= qi * proj;
                    }
                }
            }
            let nv = norm_sqr(&v).sqrt();
            if nv > 0.5 {
                cols[j] = Some(v.into_iter().map(|z| z / nv).collect());
                break;
            }
        }
    }
}

/// One-sided Jacobi on a matrix with `rows >= cols`.
fn jacobi_tall(a: &Mat<ApproxC>) -> Result<Svd> {
    let (m, n) = a.shape();
    let mut w = Cols::of(a);
    let mut v = Cols::of(&Mat::identity(n));
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sqr(&w.cols[p]);
                let beta = norm_sqr(&w.cols[q]);
                let gamma = dot(&w.cols[p], &w.cols[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = w.cols.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s, phase);
                let (lo, hi) = v.cols.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s, phase);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure("jacobi svd"));
    }
    let mut order: Vec<(f64, usize)> = w.cols.iter().enumerate().map(|(j, c)| (norm_sqr(c).sqrt(), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0));
    let sigma: Vec<f64> = order.iter().map(|&(s, _)| s).collect();
    let mut ucols: Vec<Option<Vec<ApproxC>>> = order
        .iter()
        .map(|&(s, j)| (s > 0.0).then(|| w.cols[j].iter().map(|z| z / s).collect()))
        .collect();
    complete(m, &mut ucols);
    let u = Cols {
        rows: m,
        cols: ucols.into_iter().map(|c| c.expect("completed")).collect(),
    };
    let v = Cols {
        rows: n,
        cols: order.iter().map(|&(_, j)| v.cols[j].clone()).collect(),
    };
    Ok(Svd {
        u: u.to_mat(),
        sigma,
        v: v.to_mat(),
    })
}

impl Svd {
    pub fn compute(a: &Mat<ApproxC>) -> Result<Svd> {
        let (m, n) = a.shape();
        let p = m.min(n);
        if p == 0 {
            return Ok(Svd {
                u: Mat::zeros(m, 0),
                sigma: Vec::new(),
                v: Mat::zeros(n, 0),
            });
        }
        if a.data().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::ConvergenceFailure("svd (non-finite input)"));
        }
        if m >= n {
            jacobi_tall(a)
        } else {
            let s = jacobi_tall(&a.adjoint())?;
            Ok(Svd {
                u: s.v,
                sigma: s.sigma,
                v: s.u,
            })
        }
    }

    pub fn reconstruct(&self) -> Mat<ApproxC> {
        let s = Mat::diag(&self.sigma.iter().map(|&x| ApproxC::new(x, 0.0)).collect::<Vec<_>>());
        &(&self.u * &s) * &self.v.adjoint()
    }
}

pub(crate) fn decide_rank(sigma: &[f64], rel: f64, reference: f64) -> RankInfo {
    let smax = sigma.first().copied().unwrap_or(0.0);
    let cutoff = rel * smax.max(reference);
    let rank = if smax == 0.0 {
        0
    } else {
        sigma.iter().filter(|&&s| s > cutoff).count()
    };
    let ambiguous = rank > 0
        && rank < sigma.len()
        && sigma[rank - 1] <= AMBIGUITY_WINDOW * cutoff
        && sigma[rank] >= cutoff / AMBIGUITY_WINDOW;
    RankInfo {
        rank,
        sigma: sigma.to_vec(),
        cutoff,
        ambiguous,
    }
}

pub(crate) fn rank_info(a: &Mat<ApproxC>, tol: &Tolerance, reference: f64) -> RankInfo {
    let rel = tol.rank_cutoff_rel(a.rows(), a.cols());
    match Svd::compute(a) {
        Ok(s) => decide_rank(&s.sigma, rel, reference),
        Err(_) => RankInfo {
            rank: a.rows().min(a.cols()),
            sigma: Vec::new(),
            cutoff: f64::NAN,
            ambiguous: true,
        },
    }
}

fn split(a: &Mat<ApproxC>, tol: &Tolerance) -> Result<(Svd, RankInfo)> {
    let s = Svd::compute(a)?;
    let info = decide_rank(&s.sigma, tol.rank_cutoff_rel(a.rows(), a.cols()), 0.0).require_clear("rank")?;
    Ok((s, info))
}

pub(crate) fn full_rank_factorize(a: &Mat<ApproxC>, tol: &Tolerance) -> Result<FullRankFactorization<ApproxC>> {
    let (s, info) = split(a, tol)?;
    let r = info.rank;
    if r == 0 {
        return Err(Error::ZeroMatrix);
    }
    let e = Mat::from_fn(a.rows(), r, |i, j| s.u.get(i, j) * s.sigma[j]);
    let f = Mat::from_fn(r, a.cols(), |i, j| s.v.get(j, i).conj());
    Ok(FullRankFactorization { e, f, rank: r })
}

pub(crate) fn pinv(a: &Mat<ApproxC>, tol: &Tolerance) -> Result<Mat<ApproxC>> {
    let (s, info) = split(a, tol)?;
    let r = info.rank;
    let (m, n) = a.shape();
    Ok(Mat::from_fn(n, m, |i, j| {
        (0..r).fold(<ApproxC as Scalar>::zero(), |acc, l| {
            acc + s.v.get(i, l) * (s.u.get(j, l).conj() / s.sigma[l])
        })
    }))
}

/// `V diag(1/sigma) U*` over all singular values; `SingularGram` if one is zero.
pub(crate) fn pinv_keep_all(a: &Mat<ApproxC>) -> Result<Mat<ApproxC>> {
    let s = Svd::compute(a)?;
    let (m, n) = a.shape();
    if s.sigma.len() < n || s.sigma.iter().any(|&x| x == 0.0 || !x.is_finite()) {
        return Err(Error::SingularGram);
    }
    Ok(Mat::from_fn(n, m, |i, j| {
        (0..n).fold(<ApproxC as Scalar>::zero(), |acc, l| {
            acc + s.v.get(i, l) * (s.u.get(j, l).conj() / s.sigma[l])
        })
    }))
}
