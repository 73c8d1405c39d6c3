//! Drazin index, the core-nilpotent split `A = P diag(D, N) P^{-1}`, and the
//! Hartwig–Spindelböck form `A = U [[B, T], [0, 0]] U*`.
//!
//! The float core-nilpotent split is built from a reordered complex Schur form
//! followed by a Sylvester decoupling; the exact one from bases of `R(A^k)` and
//! `N(A^k)`. The HS form needs unitary bases and is float-only.

pub mod schur;

pub use schur::{triangular_sylvester, Schur};

use crate::error::{Error, Result};
use crate::factor::{self, elim, Factorize};
use crate::numfield::{ApproxC, ExactC, Mat, Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexInfo {
    /// Smallest `t` with `rk(A^t) = rk(A^{t+1})`; 0 for nonsingular `A`.
    pub k: usize,
    /// `rk(A^0), rk(A^1), ...`, ending with the first repeated value.
    pub rank_chain: Vec<usize>,
}

impl IndexInfo {
    /// `rk(A^k)`, the size of the core block.
    pub fn core_rank(&self) -> usize {
        self.rank_chain[self.k]
    }
}

#[derive(Debug, Clone)]
pub struct CoreNilpotent<T> {
    pub p: Mat<T>,
    pub p_inv: Mat<T>,
    pub d: Mat<T>,
    pub nnil: Mat<T>,
    /// First `r` columns of `P`.
    pub p1: Mat<T>,
    /// First `r` rows of `P^{-1}`.
    pub q1: Mat<T>,
}

impl<T: Scalar> CoreNilpotent<T> {
    pub fn rank(&self) -> usize {
        self.d.rows()
    }

    pub fn reconstruct(&self) -> Mat<T> {
        &(&self.p * &Mat::block_diag(&self.d, &self.nnil)) * &self.p_inv
    }
}

#[derive(Debug, Clone)]
pub struct HsForm<T> {
    pub u: Mat<T>,
    /// Leading `r x r` block.
    pub b: Mat<T>,
    /// Trailing `r x (n - r)` block.
    pub t: Mat<T>,
}

impl<T: Scalar> HsForm<T> {
    pub fn rank(&self) -> usize {
        self.b.rows()
    }

    pub fn reconstruct(&self) -> Mat<T> {
        let n = self.u.rows();
        let r = self.rank();
        let top = self.b.hstack(&self.t).expect("HS blocks share row count");
        let mid = top.vstack(&Mat::zeros(n - r, n)).expect("HS blocks share column count");
        &(&self.u * &mid) * &self.u.adjoint()
    }
}

/// Backend-specific decompositions.
pub trait Spectral: Factorize {
    /// Core-nilpotent split of `a`, given `k = ind(a)` and `r = rk(a^k) >= 1`.
    fn core_nilpotent_split(a: &Mat<Self>, tol: &Tolerance, k: usize, r: usize) -> Result<CoreNilpotent<Self>>;
    fn hs_form(a: &Mat<Self>, tol: &Tolerance) -> Result<HsForm<Self>>;
}

/// Scalars supporting every algorithm in the crate.
pub trait Field: Factorize + Spectral {}
impl<T: Factorize + Spectral> Field for T {}

/// Drazin index by the rank chain of powers, cross-checked against the
/// terminal of the full-rank chain.
pub fn index<T: Factorize>(a: &Mat<T>, tol: &Tolerance) -> Result<IndexInfo> {
    let info = index_by_powers(a, tol)?;
    if info.rank_chain.get(1) == Some(&0) {
        // zero matrix: no full-rank chain exists
        return Ok(info);
    }
    let chain = factor::full_rank_chain(a, tol)?;
    let k2 = chain.index();
    if k2 != info.k {
        return Err(Error::RankDecisionAmbiguous(format!(
            "index from rank chain of powers ({}) disagrees with full-rank chain ({k2})",
            info.k
        )));
    }
    Ok(info)
}

/// Drazin index from the rank chain of powers alone.
pub fn index_by_powers<T: Factorize>(a: &Mat<T>, tol: &Tolerance) -> Result<IndexInfo> {
    let n = a.require_square()?;
    let mut chain = vec![n];
    let mut p = Mat::identity(n);
    let mut norm_a = 0.0_f64;
    for t in 0..=n {
        if chain[t] == 0 {
            chain.push(0);
            return Ok(IndexInfo { k: t, rank_chain: chain });
        }
        p = &p * a;
        // rounding error in A^(t+1) scales with (t+1) ||A||^(t+1), not with ||A^(t+1)||
        let reference = (t + 1) as f64 * norm_a.powi(t as i32 + 1);
        let info = T::rank_info_ref(&p, tol, reference).require_clear("rank of a matrix power")?;
        if t == 0 {
            norm_a = info.sigma.first().copied().unwrap_or(0.0);
        }
        let r = info.rank;
        chain.push(r);
        if r == chain[t] {
            return Ok(IndexInfo { k: t, rank_chain: chain });
        }
    }
    Err(Error::ChainDepthExceeded(n + 1))
}

/// Core-nilpotent decomposition. Nilpotent input yields
/// [`Error::NilpotentInput`].
pub fn core_nilpotent<T: Field>(a: &Mat<T>, tol: &Tolerance) -> Result<CoreNilpotent<T>> {
    let info = index(a, tol)?;
    core_nilpotent_with(a, tol, &info)
}

/// Same as [`core_nilpotent`] with a precomputed index.
pub fn core_nilpotent_with<T: Field>(a: &Mat<T>, tol: &Tolerance, info: &IndexInfo) -> Result<CoreNilpotent<T>> {
    let r = info.core_rank();
    if r == 0 {
        return Err(Error::NilpotentInput);
    }
    T::core_nilpotent_split(a, tol, info.k, r)
}

pub fn hs_form<T: Field>(a: &Mat<T>, tol: &Tolerance) -> Result<HsForm<T>> {
    a.require_square()?;
    T::hs_form(a, tol)
}

impl Spectral for ExactC {
    fn core_nilpotent_split(a: &Mat<ExactC>, _tol: &Tolerance, k: usize, r: usize) -> Result<CoreNilpotent<ExactC>> {
        let n = a.rows();
        let ak = a.pow(k);
        let cols = elim::pivot_columns(&ak);
        let p1 = ak.select_columns(&cols);
        let p2 = elim::null_space(&ak);
        if p1.cols() != r || p1.cols() + p2.cols() != n {
            return Err(Error::RankDecisionAmbiguous(format!(
                "range and kernel of A^{k} have dimensions {} + {}, expected {r} + {}",
                p1.cols(),
                p2.cols(),
                n - r
            )));
        }
        let p = p1.hstack(&p2)?;
        let p_inv = p.inverse()?;
        let blk = &(&p_inv * a) * &p;
        let d = blk.submatrix(0..r, 0..r);
        let nnil = blk.submatrix(r..n, r..n);
        debug_assert!(blk.submatrix(0..r, r..n).is_zero() && blk.submatrix(r..n, 0..r).is_zero());
        let q1 = p_inv.submatrix(0..r, 0..n);
        Ok(CoreNilpotent { p, p_inv, d, nnil, p1, q1 })
    }

    fn hs_form(_a: &Mat<ExactC>, _tol: &Tolerance) -> Result<HsForm<ExactC>> {
        Err(Error::BackendUnsupported {
            op: "hs_form",
            backend: ExactC::BACKEND,
        })
    }
}

/// Selection flags for the `r` eigenvalues forming the core block.
fn select_core(eigs: &[ApproxC], r: usize, a_norm: f64, tol: &Tolerance) -> Result<Vec<bool>> {
    let n = eigs.len();
    if let Some(t) = tol.eig_zero_rel {
        let flags: Vec<bool> = eigs.iter().map(|z| z.norm() > t * a_norm).collect();
        let count = flags.iter().filter(|&&f| f).count();
        if count != r {
            return Err(Error::RankDecisionAmbiguous(format!(
                "{count} eigenvalues above the zero cluster threshold, but rk(A^k) = {r}"
            )));
        }
        return Ok(flags);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigs[j].norm().total_cmp(&eigs[i].norm()));
    let smallest_core = eigs[order[r - 1]].norm();
    let largest_nil = if r < n { eigs[order[r]].norm() } else { 0.0 };
    if smallest_core <= n as f64 * f64::EPSILON * a_norm || smallest_core <= largest_nil {
        return Err(Error::RankDecisionAmbiguous(format!(
            "core eigenvalue {smallest_core:e} is not separated from the nilpotent cluster ({largest_nil:e})"
        )));
    }
    let mut flags = vec![false; n];
    for &i in &order[..r] {
        flags[i] = true;
    }
    Ok(flags)
}

impl Spectral for ApproxC {
    fn core_nilpotent_split(a: &Mat<ApproxC>, tol: &Tolerance, _k: usize, r: usize) -> Result<CoreNilpotent<ApproxC>> {
        let n = a.rows();
        let mut schur = Schur::compute(a)?;
        let a_norm = a.frobenius_norm();
        let flags = select_core(&schur.eigenvalues(), r, a_norm, tol)?;
        schur.reorder(&flags);
        let t = &schur.t;
        let t11 = t.submatrix(0..r, 0..r);
        let t12 = t.submatrix(0..r, r..n);
        let t22 = t.submatrix(r..n, r..n);
        let x = triangular_sylvester(&t11, &t22, &-&t12)?;
        // S = [[I, X], [0, I]], P = Q S, P^{-1} = S^{-1} Q*
        let mut s: Mat<ApproxC> = Mat::identity(n);
        let mut s_inv: Mat<ApproxC> = Mat::identity(n);
        for i in 0..r {
            for j in 0..n - r {
                s.set(i, r + j, *x.get(i, j));
                s_inv.set(i, r + j, -*x.get(i, j));
            }
        }
        let p = &schur.q * &s;
        let p_inv = &s_inv * &schur.q.adjoint();
        let p1 = schur.q.submatrix(0..n, 0..r);
        let q1 = p_inv.submatrix(0..r, 0..n);
        Ok(CoreNilpotent { p, p_inv, d: t11, nnil: t22, p1, q1 })
    }

    fn hs_form(a: &Mat<ApproxC>, tol: &Tolerance) -> Result<HsForm<ApproxC>> {
        let n = a.rows();
        let info = factor::rank_info(a, tol).require_clear("rank of A")?;
        let r = info.rank;
        if r == 0 {
            return Err(Error::ZeroMatrix);
        }
        let svd = factor::svd(a)?;
        let u = svd.u;
        let u1 = u.submatrix(0..n, 0..r);
        let u2 = u.submatrix(0..n, r..n);
        let u1a = &u1.adjoint() * a;
        Ok(HsForm { b: &u1a * &u1, t: &u1a * &u2, u })
    }
}
