//! The ⟨i,m⟩-core inverse `A^⊕_{i,m}`, the unique `X` with
//! `X = A^D A X` and `A^m X = A^i (A^i)^†`, and the (j,m)-core inverse
//! `A^⊖_{j,m}`, the unique `X` with `X = A^D A X` and `A^m X = A^m (A^j)^†`.
//!
//! `A^⊕_{i,m}` exists iff `i >= ind(A)` and has four routes:
//! `(A^D)^m A^i (A^i)^†`, `M L^{-m} M^†` from the full-rank chain,
//! `P1 D^{-m} P1^†` from the core-nilpotent split, and the HS recursion
//! `U diag(B^⊕_{k-1,m}, 0) U*`. `A^⊖_{j,m}` has no closed existence criterion,
//! so the candidate `A^D A (A^j)^†` is substituted into both equations.

use crate::batch;
use crate::classical::{self, AlgorithmChoice};
use crate::error::{Error, Result};
use crate::factor::{self, pinv_full_column, ChainTerminal};
use crate::numfield::{approx_eq, residual, Mat, Tolerance};
use crate::spectral::{self, Field, IndexInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImCoreParams {
    pub i: usize,
    pub m: usize,
}

impl ImCoreParams {
    pub fn new(i: usize, m: usize) -> Result<Self> {
        if i == 0 || m == 0 {
            return Err(Error::InvalidParameter(format!("<i,m> = <{i},{m}>: both must be at least 1")));
        }
        Ok(ImCoreParams { i, m })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JmCoreParams {
    pub j: usize,
    pub m: usize,
}

impl JmCoreParams {
    pub fn new(j: usize, m: usize) -> Result<Self> {
        if j == 0 || m == 0 {
            return Err(Error::InvalidParameter(format!("(j,m) = ({j},{m}): both must be at least 1")));
        }
        Ok(JmCoreParams { j, m })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenCoreResult<T> {
    /// Present iff `consistent`.
    pub inverse: Option<Mat<T>>,
    pub consistent: bool,
    /// Why the system is inconsistent, with the substituted residuals.
    pub witness: Option<String>,
}

impl<T> GenCoreResult<T> {
    fn solved(x: Mat<T>) -> Self {
        GenCoreResult {
            inverse: Some(x),
            consistent: true,
            witness: None,
        }
    }

    fn inconsistent(witness: String) -> Self {
        GenCoreResult {
            inverse: None,
            consistent: false,
            witness: Some(witness),
        }
    }

    /// The inverse, or [`Error::Inconsistent`].
    pub fn into_inverse(self) -> Result<Mat<T>> {
        match self.inverse {
            Some(x) => Ok(x),
            None => Err(Error::Inconsistent(self.witness.unwrap_or_default())),
        }
    }
}

fn neg_power<T: Field>(a: &Mat<T>, p: usize) -> Result<Mat<T>> {
    Ok(a.inverse()?.pow(p))
}

/// `A^⊕_{i,m}` by the chosen route.
pub fn im_core<T: Field>(
    a: &Mat<T>,
    p: ImCoreParams,
    tol: &Tolerance,
    alg: AlgorithmChoice,
) -> Result<GenCoreResult<T>> {
    let info = spectral::index(a, tol)?;
    im_core_with(a, p, tol, alg, &info)
}

/// [`im_core`] with a precomputed index.
pub fn im_core_with<T: Field>(
    a: &Mat<T>,
    p: ImCoreParams,
    tol: &Tolerance,
    alg: AlgorithmChoice,
    info: &IndexInfo,
) -> Result<GenCoreResult<T>> {
    let n = a.require_square()?;
    let k = info.k;
    if p.i < k {
        let ad = classical::drazin_with(a, tol, AlgorithmChoice::RankChain, info)?;
        let ai = a.pow(p.i);
        let proj = &ai * &factor::moore_penrose(&ai, tol)?;
        let x = &ad.pow(p.m) * &proj;
        let r1 = residual(&x, &(&(&ad * a) * &x));
        let r2 = residual(&(&a.pow(p.m) * &x), &proj);
        return Ok(GenCoreResult::inconsistent(format!(
            "i = {} < ind(A) = {k}; candidate residuals: X - A^D A X = {r1:e}, A^m X - A^i (A^i)^+ = {r2:e}",
            p.i
        )));
    }
    if k == 0 {
        return Ok(GenCoreResult::solved(neg_power(a, p.m)?));
    }
    if info.core_rank() == 0 {
        return Ok(GenCoreResult::solved(Mat::zeros(n, n)));
    }
    let x = match alg {
        AlgorithmChoice::DefinitionFormula => {
            let ad = classical::drazin_with(a, tol, AlgorithmChoice::RankChain, info)?;
            let ai = a.pow(p.i);
            &(&ad.pow(p.m) * &ai) * &factor::moore_penrose(&ai, tol)?
        }
        AlgorithmChoice::RankChain => {
            let chain = factor::full_rank_chain(a, tol)?;
            if chain.terminal != ChainTerminal::Nonsingular {
                return Err(Error::RankDecisionAmbiguous(
                    "full-rank chain terminated at zero for a non-nilpotent matrix".into(),
                ));
            }
            &(&chain.m * &neg_power(&chain.l, p.m)?) * &pinv_full_column(&chain.m)?
        }
        AlgorithmChoice::CoreNilpotentRoute => {
            let cn = spectral::core_nilpotent_with(a, tol, info)?;
            &(&cn.p1 * &neg_power(&cn.d, p.m)?) * &pinv_full_column(&cn.p1)?
        }
        AlgorithmChoice::HSRecursive => im_core_hs(a, p.m, tol, k)?,
    };
    Ok(GenCoreResult::solved(x))
}

/// `A^⊕_{k,m}` through the HS recursion; `budget` bounds the index at each level.
fn im_core_hs<T: Field>(a: &Mat<T>, m: usize, tol: &Tolerance, budget: usize) -> Result<Mat<T>> {
    let info = spectral::index(a, tol)?;
    let n = a.rows();
    if info.k > budget {
        return Err(Error::RankDecisionAmbiguous(format!(
            "leading block has index {} above the bound {budget}",
            info.k
        )));
    }
    if info.k == 0 {
        return neg_power(a, m);
    }
    if info.core_rank() == 0 {
        return Ok(Mat::zeros(n, n));
    }
    let hs = spectral::hs_form(a, tol)?;
    let inner = im_core_hs(&hs.b, m, tol, info.k - 1)?;
    let r = hs.rank();
    let blk = Mat::block_diag(&inner, &Mat::zeros(n - r, n - r));
    Ok(&(&hs.u * &blk) * &hs.u.adjoint())
}

/// Evaluate several routes of [`im_core`], concurrently under the `parallel`
/// feature. Output order matches `algs`.
pub fn im_core_routes<T: Field>(
    a: &Mat<T>,
    p: ImCoreParams,
    tol: &Tolerance,
    algs: &[AlgorithmChoice],
) -> Result<Vec<(AlgorithmChoice, Result<GenCoreResult<T>>)>> {
    let info = spectral::index(a, tol)?;
    let results = batch::map(algs, |&alg| (alg, im_core_with(a, p, tol, alg, &info)));
    Ok(results)
}

/// `A^⊖_{j,m}`, with consistency decided by substituting `A^D A (A^j)^†`.
pub fn jm_core<T: Field>(a: &Mat<T>, p: JmCoreParams, tol: &Tolerance) -> Result<GenCoreResult<T>> {
    let info = spectral::index(a, tol)?;
    jm_core_with(a, p, tol, &info)
}

pub fn jm_core_with<T: Field>(a: &Mat<T>, p: JmCoreParams, tol: &Tolerance, info: &IndexInfo) -> Result<GenCoreResult<T>> {
    a.require_square()?;
    let k = info.k;
    if k == 0 {
        return Ok(GenCoreResult::solved(neg_power(a, p.j)?));
    }
    let ad = classical::drazin_with(a, tol, AlgorithmChoice::RankChain, info)?;
    let aj = a.pow(p.j);
    let aj_pinv = factor::moore_penrose(&aj, tol)?;
    let x = &(&ad * a) * &aj_pinv;
    let am = a.pow(p.m);
    let lhs1 = &(&ad * a) * &x;
    let lhs2 = &am * &x;
    let rhs2 = &am * &aj_pinv;
    let ok1 = approx_eq(&x, &lhs1, tol)?;
    let ok2 = approx_eq(&lhs2, &rhs2, tol)?;
    if ok1 && ok2 {
        if k > p.j.max(p.m) {
            return Err(Error::RankDecisionAmbiguous(format!(
                "(j,m) = ({},{}) accepted although ind(A) = {k} exceeds max(j,m)",
                p.j, p.m
            )));
        }
        return Ok(GenCoreResult::solved(x));
    }
    Ok(GenCoreResult::inconsistent(format!(
        "candidate A^D A (A^j)^+ fails substitution: X - A^D A X = {:e}, A^m X - A^m (A^j)^+ = {:e}",
        residual(&x, &lhs1),
        residual(&lhs2, &rhs2)
    )))
}

fn same<T: Field>(x: &Mat<T>, y: &Mat<T>, tol: &Tolerance) -> Result<bool> {
    approx_eq(x, y, tol)
}

/// `A^⊕_{i,m} = A^⊕_{k,m}` for `i >= k = ind(A)`.
pub fn im_core_index_invariance_check<T: Field>(a: &Mat<T>, i: usize, m: usize, tol: &Tolerance) -> Result<bool> {
    let info = spectral::index(a, tol)?;
    let k = info.k.max(1);
    let alg = AlgorithmChoice::DefinitionFormula;
    let xi = im_core_with(a, ImCoreParams::new(i, m)?, tol, alg, &info)?.into_inverse()?;
    let xk = im_core_with(a, ImCoreParams::new(k, m)?, tol, alg, &info)?.into_inverse()?;
    same(&xi, &xk, tol)
}

/// `A^⊕_{k,m} = A^⊖_{m,k}` for `m >= k`. A nonsingular `A` is treated with `k = 1`.
pub fn duality_check<T: Field>(a: &Mat<T>, m: usize, tol: &Tolerance) -> Result<bool> {
    let info = spectral::index(a, tol)?;
    let k = info.k.max(1);
    if m < k {
        return Err(Error::InvalidParameter(format!("duality needs m >= ind(A); got m = {m}, ind(A) = {}", info.k)));
    }
    let x = im_core_with(a, ImCoreParams::new(k, m)?, tol, AlgorithmChoice::DefinitionFormula, &info)?.into_inverse()?;
    let y = jm_core_with(a, JmCoreParams::new(m, k)?, tol, &info)?.into_inverse()?;
    same(&x, &y, tol)
}

/// `A^⊖_{1,k}` equals the DMP inverse; for nonsingular `A` both equal `A^{-1}`.
pub fn dmp_coincidence<T: Field>(a: &Mat<T>, tol: &Tolerance) -> Result<bool> {
    let info = spectral::index(a, tol)?;
    let d = classical::dmp_with(a, tol, &info)?;
    let y = jm_core_with(a, JmCoreParams::new(1, info.k.max(1))?, tol, &info)?.into_inverse()?;
    if info.k == 0 {
        let inv = a.inverse()?;
        return Ok(same(&d, &inv, tol)? && same(&y, &inv, tol)?);
    }
    same(&y, &d, tol)
}

/// `A^⊕_{k,1}` equals the core-EP inverse.
pub fn coreep_coincidence<T: Field>(a: &Mat<T>, tol: &Tolerance) -> Result<bool> {
    let info = spectral::index(a, tol)?;
    let c = classical::core_ep_with(a, tol, &info)?;
    let x = im_core_with(a, ImCoreParams::new(info.k.max(1), 1)?, tol, AlgorithmChoice::DefinitionFormula, &info)?
        .into_inverse()?;
    same(&x, &c, tol)
}

/// `A^{D,†} (A^D)^{k-1} A A^{coEP}`, which equals `A^⊖_{k,k}`. Requires `ind(A) >= 1`.
pub fn jk_from_dmp_coreep<T: Field>(a: &Mat<T>, tol: &Tolerance) -> Result<Mat<T>> {
    let info = spectral::index(a, tol)?;
    let k = info.k;
    if k == 0 {
        return Err(Error::InvalidParameter("A is nonsingular: ind(A) = 0".into()));
    }
    let d = classical::dmp_with(a, tol, &info)?;
    let ad = classical::drazin_with(a, tol, AlgorithmChoice::RankChain, &info)?;
    let c = classical::core_ep_with(a, tol, &info)?;
    Ok(&(&(&d * &ad.pow(k - 1)) * a) * &c)
}
