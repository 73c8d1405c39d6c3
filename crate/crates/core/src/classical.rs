//! Drazin, group, core, core-EP and DMP inverses.
//!
//! The Drazin inverse has three independent routes: the full-rank chain
//! `M L^{-k-1} N`, the core-nilpotent split `P1 D^{-1} Q1`, and the
//! Hartwig–Spindelböck recursion `U [[B^D, (B^D)^2 T], [0, 0]] U*`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::factor::{self, ChainTerminal};
use crate::numfield::{Mat, Tolerance};
use crate::spectral::{self, Field, IndexInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmChoice {
    RankChain,
    CoreNilpotentRoute,
    HSRecursive,
    DefinitionFormula,
}

impl AlgorithmChoice {
    pub const ALL: [AlgorithmChoice; 4] = [
        AlgorithmChoice::DefinitionFormula,
        AlgorithmChoice::RankChain,
        AlgorithmChoice::CoreNilpotentRoute,
        AlgorithmChoice::HSRecursive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmChoice::RankChain => "rank-chain",
            AlgorithmChoice::CoreNilpotentRoute => "core-nilpotent",
            AlgorithmChoice::HSRecursive => "hs-recursive",
            AlgorithmChoice::DefinitionFormula => "definition",
        }
    }
}

impl fmt::Display for AlgorithmChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmChoice::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown algorithm '{s}'")))
    }
}

/// `A^D` by the chosen route. Supported: `RankChain`, `CoreNilpotentRoute`,
/// `HSRecursive` (float only).
pub fn drazin<T: Field>(a: &Mat<T>, tol: &Tolerance, alg: AlgorithmChoice) -> Result<Mat<T>> {
    let info = spectral::index(a, tol)?;
    drazin_with(a, tol, alg, &info)
}

/// [`drazin`] with a precomputed index.
pub fn drazin_with<T: Field>(a: &Mat<T>, tol: &Tolerance, alg: AlgorithmChoice, info: &IndexInfo) -> Result<Mat<T>> {
    let n = a.rows();
    if info.k == 0 {
        return a.inverse();
    }
    if info.core_rank() == 0 {
        return Ok(Mat::zeros(n, n));
    }
    match alg {
        AlgorithmChoice::RankChain => drazin_rank_chain(a, tol),
        AlgorithmChoice::CoreNilpotentRoute => {
            let cn = spectral::core_nilpotent_with(a, tol, info)?;
            Ok(&(&cn.p1 * &cn.d.inverse()?) * &cn.q1)
        }
        AlgorithmChoice::HSRecursive => drazin_hs(a, tol, info.k),
        AlgorithmChoice::DefinitionFormula => Err(Error::UnsupportedAlgorithm {
            op: "drazin",
            alg: alg.name(),
        }),
    }
}

fn drazin_rank_chain<T: Field>(a: &Mat<T>, tol: &Tolerance) -> Result<Mat<T>> {
    let chain = factor::full_rank_chain(a, tol)?;
    match chain.terminal {
        ChainTerminal::Zero => Ok(Mat::zeros(a.rows(), a.rows())),
        ChainTerminal::Nonsingular => {
            let k = chain.len();
            let l_inv = chain.l.inverse()?;
            Ok(&(&chain.m * &l_inv.pow(k + 1)) * &chain.n)
        }
    }
}

/// HS recursion; `budget` bounds the index of every leading block.
fn drazin_hs<T: Field>(a: &Mat<T>, tol: &Tolerance, budget: usize) -> Result<Mat<T>> {
    let info = spectral::index(a, tol)?;
    let n = a.rows();
    if info.k > budget {
        return Err(Error::RankDecisionAmbiguous(format!(
            "leading block has index {} above the bound {budget}",
            info.k
        )));
    }
    if info.k == 0 {
        return a.inverse();
    }
    if info.core_rank() == 0 {
        return Ok(Mat::zeros(n, n));
    }
    let hs = spectral::hs_form(a, tol)?;
    let r = hs.rank();
    let bd = drazin_hs(&hs.b, tol, info.k - 1)?;
    let top_right = &(&bd * &bd) * &hs.t;
    let top = bd.hstack(&top_right)?;
    let mid = top.vstack(&Mat::zeros(n - r, n))?;
    Ok(&(&hs.u * &mid) * &hs.u.adjoint())
}

fn require_index_at_most_one(info: &IndexInfo) -> Result<()> {
    if info.k > 1 {
        return Err(Error::IndexTooLarge { index: info.k });
    }
    Ok(())
}

/// `A^#`, defined when `ind(A) <= 1`.
pub fn group_inverse<T: Field>(a: &Mat<T>, tol: &Tolerance) -> Result<Mat<T>> {
    let info = spectral::index(a, tol)?;
    require_index_at_most_one(&info)?;
    drazin_with(a, tol, AlgorithmChoice::RankChain, &info)
}

/// Core inverse `A^# A A^†`, defined when `ind(A) <= 1`.
pub fn core_inverse<T: Field>(a: &Mat<T>, tol: &Tolerance) -> Result<Mat<T>> {
    let info = spectral::index(a, tol)?;
    require_index_at_most_one(&info)?;
    let g = drazin_with(a, tol, AlgorithmChoice::RankChain, &info)?;
    Ok(&(&g * a) * &factor::moore_penrose(a, tol)?)
}

/// Core-EP inverse `A^D A^k (A^k)^†`.
pub fn core_ep<T: Field>(a: &Mat<T>, tol: &Tolerance) -> Result<Mat<T>> {
    let info = spectral::index(a, tol)?;
    core_ep_with(a, tol, &info)
}

pub fn core_ep_with<T: Field>(a: &Mat<T>, tol: &Tolerance, info: &IndexInfo) -> Result<Mat<T>> {
    let ad = drazin_with(a, tol, AlgorithmChoice::RankChain, info)?;
    if info.k == 0 || info.core_rank() == 0 {
        return Ok(ad);
    }
    let ak = a.pow(info.k);
    Ok(&(&ad * &ak) * &factor::moore_penrose(&ak, tol)?)
}

/// DMP inverse `A^D A A^†`.
pub fn dmp<T: Field>(a: &Mat<T>, tol: &Tolerance) -> Result<Mat<T>> {
    let info = spectral::index(a, tol)?;
    dmp_with(a, tol, &info)
}

pub fn dmp_with<T: Field>(a: &Mat<T>, tol: &Tolerance, info: &IndexInfo) -> Result<Mat<T>> {
    let ad = drazin_with(a, tol, AlgorithmChoice::RankChain, info)?;
    if info.k == 0 || info.core_rank() == 0 {
        return Ok(ad);
    }
    Ok(&(&ad * a) * &factor::moore_penrose(a, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{approx_eq, ApproxC, ExactC, Scalar};

    fn ex46() -> Mat<ExactC> {
        Mat::from_i64(&[&[2, 2, 1], &[-1, -1, 0], &[0, 0, 0]])
    }

    fn shift(n: usize) -> Mat<ExactC> {
        Mat::from_fn(n, n, |i, j| if j == i + 1 { ExactC::from_i64(1) } else { <ExactC as Scalar>::zero() })
    }

    #[test]
    fn drazin_of_examples_exact() {
        let tol = Tolerance::default();
        for alg in [AlgorithmChoice::RankChain, AlgorithmChoice::CoreNilpotentRoute] {
            assert_eq!(drazin(&ex46(), &tol, alg).unwrap(), ex46().pow(2));
            assert!(drazin(&shift(2), &tol, alg).unwrap().is_zero());
            let d: Mat<ExactC> = Mat::from_i64(&[&[2, 0], &[0, 3]]);
            let want = Mat::from_ratios(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 3)]]);
            assert_eq!(drazin(&d, &tol, alg).unwrap(), want);
        }
        assert!(matches!(
            drazin(&ex46(), &tol, AlgorithmChoice::HSRecursive),
            Err(Error::BackendUnsupported { .. })
        ));
        assert!(matches!(
            drazin(&ex46(), &tol, AlgorithmChoice::DefinitionFormula),
            Err(Error::UnsupportedAlgorithm { .. })
        ));
    }

    #[test]
    fn drazin_routes_agree_in_float() {
        let tol = Tolerance::default();
        let a = ex46().to_approx();
        let want = ex46().pow(2).to_approx();
        for alg in [
            AlgorithmChoice::RankChain,
            AlgorithmChoice::CoreNilpotentRoute,
            AlgorithmChoice::HSRecursive,
        ] {
            let got = drazin(&a, &tol, alg).unwrap();
            assert!(approx_eq(&got, &want, &tol).unwrap(), "{alg}");
        }
    }

    #[test]
    fn group_and_core_of_idempotent() {
        let tol = Tolerance::default();
        let a: Mat<ExactC> = Mat::from_i64(&[&[1, 1], &[0, 0]]);
        assert_eq!(group_inverse(&a, &tol).unwrap(), a);
        let c = core_inverse(&a, &tol).unwrap();
        assert_eq!(c, Mat::from_i64(&[&[1, 0], &[0, 0]]));
        assert_eq!(group_inverse(&shift(2), &tol).unwrap_err(), Error::IndexTooLarge { index: 2 });
        assert_eq!(core_inverse(&shift(2), &tol).unwrap_err(), Error::IndexTooLarge { index: 2 });
        let i3: Mat<ExactC> = Mat::identity(3);
        assert_eq!(core_inverse(&i3, &tol).unwrap(), i3);
    }

    #[test]
    fn core_ep_and_dmp_of_example() {
        let tol = Tolerance::default();
        let want = Mat::from_ratios(&[
            &[(12, 15), (-6, 15), (0, 1)],
            &[(-6, 15), (3, 15), (0, 1)],
            &[(0, 1), (0, 1), (0, 1)],
        ]);
        assert_eq!(core_ep(&ex46(), &tol).unwrap(), want);
        assert!(core_ep(&shift(3), &tol).unwrap().is_zero());
        assert!(dmp(&shift(3), &tol).unwrap().is_zero());
        let a = ex46();
        let pinv = factor::moore_penrose(&a, &tol).unwrap();
        assert_eq!(dmp(&a, &tol).unwrap(), &a.pow(2) * &pinv);
        let f = core_ep(&a.to_approx(), &tol).unwrap();
        assert!(approx_eq(&f, &want.to_approx(), &tol).unwrap());
    }

    #[test]
    fn nonsingular_reduces_to_inverse() {
        let tol = Tolerance::default();
        let a: Mat<ApproxC> = Mat::from_i64(&[&[1, 2], &[3, 4]]);
        let inv = a.inverse().unwrap();
        for x in [
            core_ep(&a, &tol).unwrap(),
            dmp(&a, &tol).unwrap(),
            group_inverse(&a, &tol).unwrap(),
            core_inverse(&a, &tol).unwrap(),
        ] {
            assert!(approx_eq(&x, &inv, &tol).unwrap());
        }
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in AlgorithmChoice::ALL {
            assert_eq!(a.name().parse::<AlgorithmChoice>().unwrap(), a);
        }
        assert!("bogus".parse::<AlgorithmChoice>().is_err());
    }
}
