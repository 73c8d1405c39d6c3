//! Rank-revealing machinery: rank decisions, SVD, full-rank factorizations,
//! the iterated full-rank chain used to certify the Drazin index, and the
//! Moore-Penrose inverse by two independent routes.

pub(crate) mod elim;
mod svd;

pub use elim::pivoted_full_rank;
pub use svd::Svd;

use crate::error::{Error, Result};
use crate::numfield::{ApproxC, ExactC, Mat, Scalar, Tolerance};

/// Outcome of a rank decision.
#[derive(Debug, Clone, PartialEq)]
pub struct RankInfo {
    pub rank: usize,
    /// Singular values, nonincreasing (empty on the exact backend).
    pub sigma: Vec<f64>,
    /// Absolute cutoff applied to `sigma` (0 on the exact backend).
    pub cutoff: f64,
    /// Singular values sit on both sides of the cutoff without a clear gap.
    pub ambiguous: bool,
}

impl RankInfo {
    pub fn require_clear(self, what: &str) -> Result<Self> {
        if self.ambiguous {
            Err(Error::RankDecisionAmbiguous(format!(
                "{what}: singular values straddle cutoff {:.3e} ({:?})",
                self.cutoff, self.sigma
            )))
        } else {
            Ok(self)
        }
    }
}

/// `A = E F` with `E` of full column rank and `F` of full row rank.
#[derive(Debug, Clone, PartialEq)]
pub struct FullRankFactorization<T> {
    pub e: Mat<T>,
    pub f: Mat<T>,
    pub rank: usize,
}

impl<T: Scalar> FullRankFactorization<T> {
    pub fn product(&self) -> Mat<T> {
        &self.e * &self.f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainTerminal {
    /// `L = G_k B_k` is square nonsingular.
    Nonsingular,
    /// `L = G_k B_k` vanishes.
    Zero,
}

/// Iterated full-rank factorizations `A = B_1 G_1`, `G_l B_l = B_{l+1} G_{l+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullRankChain<T> {
    /// `(B_l, G_l)` for `l = 1..=k`.
    pub factors: Vec<(Mat<T>, Mat<T>)>,
    /// `B_1 B_2 ... B_k`
    pub m: Mat<T>,
    /// `G_k ... G_2 G_1`
    pub n: Mat<T>,
    /// `G_k B_k`
    pub l: Mat<T>,
    pub terminal: ChainTerminal,
}

impl<T: Scalar> FullRankChain<T> {
    /// Chain length `k`.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Drazin index certified by the terminal: `k` when `L` is nonsingular
    /// (0 if `A` itself is), `k + 1` when `L = 0`.
    pub fn index(&self) -> usize {
        let k = self.len();
        match self.terminal {
            ChainTerminal::Zero => k + 1,
            ChainTerminal::Nonsingular => {
                let (b1, _) = &self.factors[0];
                if b1.is_square() {
                    0
                } else {
                    k
                }
            }
        }
    }
}

/// Backend-specific rank-revealing primitives.
pub trait Factorize: Scalar {
    fn rank_info(a: &Mat<Self>, tol: &Tolerance) -> RankInfo;
    /// Rank with the cutoff taken relative to `max(sigma_max, reference)`,
    /// for matrices whose rounding error scales with `reference`.
    fn rank_info_ref(a: &Mat<Self>, tol: &Tolerance, reference: f64) -> RankInfo;
    fn full_rank_factorize(a: &Mat<Self>, tol: &Tolerance) -> Result<FullRankFactorization<Self>>;
    fn moore_penrose(a: &Mat<Self>, tol: &Tolerance) -> Result<Mat<Self>>;
    fn svd(a: &Mat<Self>) -> Result<Svd>;
    /// Pseudoinverse of a matrix known to have full column rank.
    fn pinv_full_column(m: &Mat<Self>) -> Result<Mat<Self>>;
    /// Whether `l` counts as the zero matrix relative to `reference`.
    fn negligible(l: &Mat<Self>, reference: &Mat<Self>, tol: &Tolerance) -> bool;
}

impl Factorize for ApproxC {
    fn rank_info(a: &Mat<ApproxC>, tol: &Tolerance) -> RankInfo {
        svd::rank_info(a, tol, 0.0)
    }

    fn rank_info_ref(a: &Mat<ApproxC>, tol: &Tolerance, reference: f64) -> RankInfo {
        svd::rank_info(a, tol, reference)
    }

    fn full_rank_factorize(a: &Mat<ApproxC>, tol: &Tolerance) -> Result<FullRankFactorization<ApproxC>> {
        svd::full_rank_factorize(a, tol)
    }

    fn moore_penrose(a: &Mat<ApproxC>, tol: &Tolerance) -> Result<Mat<ApproxC>> {
        svd::pinv(a, tol)
    }

    fn svd(a: &Mat<ApproxC>) -> Result<Svd> {
        Svd::compute(a)
    }

    fn pinv_full_column(m: &Mat<ApproxC>) -> Result<Mat<ApproxC>> {
        svd::pinv_keep_all(m)
    }

    fn negligible(l: &Mat<ApproxC>, reference: &Mat<ApproxC>, tol: &Tolerance) -> bool {
        let rel = tol.rank_cutoff_rel(reference.rows(), reference.cols());
        l.frobenius_norm() <= rel * reference.frobenius_norm()
    }
}

impl Factorize for ExactC {
    fn rank_info_ref(a: &Mat<ExactC>, tol: &Tolerance, _reference: f64) -> RankInfo {
        Self::rank_info(a, tol)
    }

    fn rank_info(a: &Mat<ExactC>, _tol: &Tolerance) -> RankInfo {
        let rank = pivoted_full_rank(a).map_or(0, |f| f.rank);
        RankInfo {
            rank,
            sigma: Vec::new(),
            cutoff: 0.0,
            ambiguous: false,
        }
    }

    fn full_rank_factorize(a: &Mat<ExactC>, _tol: &Tolerance) -> Result<FullRankFactorization<ExactC>> {
        pivoted_full_rank(a).ok_or(Error::ZeroMatrix)
    }

    fn moore_penrose(a: &Mat<ExactC>, _tol: &Tolerance) -> Result<Mat<ExactC>> {
        match pivoted_full_rank(a) {
            None => Ok(Mat::zeros(a.cols(), a.rows())),
            Some(frf) => pinv_product_formula(&frf),
        }
    }

    fn svd(_a: &Mat<ExactC>) -> Result<Svd> {
        Err(Error::BackendUnsupported {
            op: "svd",
            backend: ExactC::BACKEND,
        })
    }

    fn pinv_full_column(m: &Mat<ExactC>) -> Result<Mat<ExactC>> {
        pinv_normal_equations(m)
    }

    fn negligible(l: &Mat<ExactC>, _reference: &Mat<ExactC>, _tol: &Tolerance) -> bool {
        l.is_zero()
    }
}

/// Singular value decomposition `A = U diag(sigma) V*` (float backend only).
pub fn svd<T: Factorize>(a: &Mat<T>) -> Result<Svd> {
    T::svd(a)
}

/// Numerical rank: singular values above `rank_rel * sigma_max` (float), or
/// the pivot count of exact elimination.
pub fn rank<T: Factorize>(a: &Mat<T>, tol: &Tolerance) -> usize {
    T::rank_info(a, tol).rank
}

pub fn rank_info<T: Factorize>(a: &Mat<T>, tol: &Tolerance) -> RankInfo {
    T::rank_info(a, tol)
}

/// Full-rank factorization. Exact: complete-pivoting elimination.
/// Float: `E = U_r diag(sigma_r)`, `F = V_r*`.
pub fn full_rank_factorize<T: Factorize>(a: &Mat<T>, tol: &Tolerance) -> Result<FullRankFactorization<T>> {
    T::full_rank_factorize(a, tol)
}

/// Moore-Penrose inverse: SVD route on floats, product formula on rationals.
pub fn moore_penrose<T: Factorize>(a: &Mat<T>, tol: &Tolerance) -> Result<Mat<T>> {
    T::moore_penrose(a, tol)
}

/// `A^+ = F*(F F*)^{-1} (E* E)^{-1} E*` for `A = E F`.
pub fn pinv_product_formula<T: Scalar>(frf: &FullRankFactorization<T>) -> Result<Mat<T>> {
    let (e, f) = (&frf.e, &frf.f);
    let fh = f.adjoint();
    let eh = e.adjoint();
    let ff = (f * &fh).inverse().map_err(|_| Error::SingularGram)?;
    let ee = (&eh * e).inverse().map_err(|_| Error::SingularGram)?;
    Ok(&(&(&fh * &ff) * &ee) * &eh)
}

/// Pseudoinverse of a full-column-rank matrix. The float backend inverts every
/// singular value instead of forming `M* M`.
pub fn pinv_full_column<T: Factorize>(m: &Mat<T>) -> Result<Mat<T>> {
    T::pinv_full_column(m)
}

/// `(M* M)^{-1} M*`.
fn pinv_normal_equations<T: Scalar>(m: &Mat<T>) -> Result<Mat<T>> {
    let mh = m.adjoint();
    let g = (&mh * m).inverse().map_err(|_| Error::SingularGram)?;
    Ok(&g * &mh)
}

/// Iterate full-rank factorizations of `G_l B_l` until it is nonsingular or zero.
pub fn full_rank_chain<T: Factorize>(a: &Mat<T>, tol: &Tolerance) -> Result<FullRankChain<T>> {
    let n = a.require_square()?;
    let mut factors: Vec<(Mat<T>, Mat<T>)> = Vec::new();
    let mut current = a.clone();
    for depth in 1..=n.max(1) {
        let info = T::rank_info(&current, tol).require_clear("full-rank chain")?;
        if info.rank == 0 {
            if depth == 1 {
                return Err(Error::ZeroMatrix);
            }
            // G_{l-1} B_{l-1} decided zero by rank: previous step is terminal
            return finish_chain(factors, ChainTerminal::Zero);
        }
        let frf = T::full_rank_factorize(&current, tol)?;
        let l = &frf.f * &frf.e;
        factors.push((frf.e, frf.f));
        if T::negligible(&l, a, tol) {
            return finish_chain(factors, ChainTerminal::Zero);
        }
        let linfo = T::rank_info(&l, tol).require_clear("full-rank chain")?;
        if linfo.rank == 0 {
            return finish_chain(factors, ChainTerminal::Zero);
        }
        if linfo.rank == l.rows() {
            return finish_chain(factors, ChainTerminal::Nonsingular);
        }
        current = l;
    }
    Err(Error::ChainDepthExceeded(n))
}

fn finish_chain<T: Scalar>(factors: Vec<(Mat<T>, Mat<T>)>, terminal: ChainTerminal) -> Result<FullRankChain<T>> {
    let mut m = factors[0].0.clone();
    let mut n = factors[0].1.clone();
    for (b, g) in &factors[1..] {
        m = &m * b;
        n = g * &n;
    }
    let (bk, gk) = factors.last().expect("nonempty chain");
    let l = gk * bk;
    Ok(FullRankChain {
        factors,
        m,
        n,
        l,
        terminal,
    })
}
