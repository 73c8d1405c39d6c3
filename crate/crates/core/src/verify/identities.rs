//! Every algebraic identity linking the ⟨i,m⟩-core and (j,m)-core inverses to
//! each other and to the classical inverses, evaluated on one matrix.
//!
//! Identity residuals are relative to the larger side:
//! `||L - R||_F / max(1, ||L||_F, ||R||_F)`.

use super::{compare, condition, powers, verify, DefinitionTag, ReportEntry, VerifyReport};
use crate::classical::{self, AlgorithmChoice};
use crate::error::Result;
use crate::factor;
use crate::gencore::{self, ImCoreParams, JmCoreParams};
use crate::numfield::{Mat, Tolerance};
use crate::spectral::{self, Field};

struct Suite<'a> {
    tol: &'a Tolerance,
    report: VerifyReport,
}

impl Suite<'_> {
    fn same<T: Field>(&mut self, label: String, l: &Mat<T>, r: &Mat<T>) {
        let scale = l.frobenius_norm().max(r.frobenius_norm());
        self.report.push(compare(label, l, r, scale, self.tol));
    }

    fn holds(&mut self, label: String, ok: bool) {
        self.report.push(condition(label, ok));
    }

    fn absorb(&mut self, prefix: &str, sub: VerifyReport) {
        for e in sub.entries {
            self.report.push(ReportEntry {
                label: format!("{prefix}: {}", e.label),
                ..e
            });
        }
    }

    /// `l = r`, decided with the same relative rule used for entries.
    fn decide_equal<T: Field>(&self, l: &Mat<T>, r: &Mat<T>) -> bool {
        let scale = l.frobenius_norm().max(r.frobenius_norm());
        compare("", l, r, scale, self.tol).pass
    }

    /// `f1 f2 = 0`, relative to `||f1|| ||f2||`.
    fn decide_zero_product<T: Field>(&self, f1: &Mat<T>, f2: &Mat<T>) -> bool {
        let p = f1 * f2;
        let scale = f1.frobenius_norm() * f2.frobenius_norm();
        compare("", &p, &Mat::zeros(p.rows(), p.cols()), scale, self.tol).pass
    }
}

/// Evaluate the identity suite on a square matrix. Parameters range over
/// `i, j in {k', k'+1}` and `m in {1, 2, 3}` with `k' = max(ind(A), 1)`.
pub fn identity_report<T: Field>(a: &Mat<T>, tol: &Tolerance) -> Result<VerifyReport> {
    let n = a.require_square()?;
    let info = spectral::index(a, tol)?;
    let k = info.k;
    let kk = k.max(1);
    let ad = classical::drazin_with(a, tol, AlgorithmChoice::RankChain, &info)?;
    let top = 2 * (kk + 1) + 4;
    let ap = powers(a, top);
    let adp = powers(&ad, (kk + 1) * kk + 3 * 3 + 2);
    let eye: Mat<T> = Mat::identity(n);
    let a_pinv = factor::moore_penrose(a, tol)?;
    let mut s = Suite {
        tol,
        report: VerifyReport::new(format!("identity suite (ind = {k})")),
    };

    let im = |i: usize, m: usize| -> Result<Mat<T>> {
        gencore::im_core_with(a, ImCoreParams::new(i, m)?, tol, AlgorithmChoice::DefinitionFormula, &info)?
            .into_inverse()
    };
    let jm = |j: usize, m: usize| -> Result<GenOut<T>> {
        let r = gencore::jm_core_with(a, JmCoreParams::new(j, m)?, tol, &info)?;
        Ok(r.inverse)
    };

    // <i,m>-core
    for i in [kk, kk + 1] {
        let pinv_ai = factor::moore_penrose(&ap[i], tol)?;
        let proj = &ap[i] * &pinv_ai;
        for m in 1..=3 {
            let x = im(i, m)?;
            let tag = format!("<{i},{m}>");
            s.absorb(&format!("{tag} definition"), verify(a, &x, DefinitionTag::ImCore { i, m }, tol)?);
            s.same(format!("{tag} = (A^D)^m A^i (A^i)+"), &x, &(&adp[m] * &proj));
            if i > kk {
                s.same(format!("{tag} = <{kk},{m}>"), &x, &im(kk, m)?);
            }
            if m < 3 {
                s.same(format!("<{i},{}> = A^D {tag}", m + 1), &im(i, m + 1)?, &(&ad * &x));
            }
            let q = &ap[m] * &x;
            s.holds(
                format!("A^m {tag} is the orthogonal projector onto R(A^{i})"),
                super::is_projector_onto_power_range(&q, a, i, tol),
            );
            s.same(format!("{tag} A^m {tag} = {tag}"), &(&(&x * &ap[m]) * &x), &x);
            s.same(format!("(A^m {tag})* = A^m {tag}"), &q.adjoint(), &q);
            let mut xn = x.clone();
            for pw in 2..=3 {
                xn = &xn * &x;
                s.same(format!("{tag}^{pw} = (A^D)^(m({pw}-1)) {tag}"), &xn, &(&adp[m * (pw - 1)] * &x));
            }
            let commutes = s.decide_equal(&(&ap[i] * &x), &(&x * &ap[i]));
            let kernel = s.decide_zero_product(&adp[m], &(&eye - &proj));
            s.holds(
                format!("A^i {tag} = {tag} A^i iff (A^D)^m (I - A^i (A^i)+) = 0"),
                commutes == kernel,
            );
            if s.decide_equal(&x, a) {
                s.holds(format!("{tag} = A implies A is EP"), super::is_ep(a, tol));
            }
        }
    }

    // core inverse as <1,1>
    if k <= 1 {
        let c = classical::core_inverse(a, tol)?;
        s.same("<1,1> = core inverse".into(), &im(1, 1)?, &c);
        let g = classical::group_inverse(a, tol)?;
        s.same("core: X = A^# A X".into(), &c, &(&(&g * a) * &c));
        s.same("core: AX = AA+".into(), &(a * &c), &(a * &a_pinv));
    }

    // core-EP and DMP
    let coep = classical::core_ep_with(a, tol, &info)?;
    s.same(format!("<{kk},1> = core-EP"), &im(kk, 1)?, &coep);
    s.holds("<k,1> coincides with core-EP".into(), gencore::coreep_coincidence(a, tol)?);
    s.holds("(1,k) coincides with DMP".into(), gencore::dmp_coincidence(a, tol)?);
    let ak = &ap[k];
    let ak_proj = ak * &factor::moore_penrose(ak, tol)?;
    s.same("A core-EP = A^k (A^k)+".into(), &(a * &coep), &ak_proj);

    // (j,k)-core
    for j in [kk, kk + 1] {
        let tag = format!("({j},{kk})");
        let y = match jm(j, kk)? {
            Some(y) => y,
            None => {
                s.holds(format!("{tag} consistent"), false);
                continue;
            }
        };
        let aj = &ap[j];
        let aj_pinv = factor::moore_penrose(aj, tol)?;
        let proj = aj * &aj_pinv;
        s.absorb(&format!("{tag} definition"), verify(a, &y, DefinitionTag::JmCore { j, m: kk }, tol)?);
        s.holds(
            format!("A^j {tag} is the orthogonal projector onto R(A^{j})"),
            super::is_projector_onto_power_range(&(aj * &y), a, j, tol),
        );
        s.absorb(&format!("{tag} as {{1,2,3}}-inverse of A^j"), verify(aj, &y, DefinitionTag::OneTwoThree, tol)?);
        let w = &adp[j] * &aj_pinv;
        let mut yn = y.clone();
        for pw in 2..=4 {
            yn = &yn * &y;
            let rhs = if pw % 2 == 0 { w.pow(pw / 2) } else { aj * &w.pow(pw.div_ceil(2)) };
            s.same(format!("{tag}^{pw} by the even/odd power formula"), &yn, &rhs);
        }
        s.same(format!("{tag} A^D = (A^D)^(j+1)"), &(&y * &ad), &adp[j + 1]);
        let commutes = s.decide_equal(&(aj * &y), &(&y * aj));
        let kernel = s.decide_zero_product(&(aj * &adp[j]), &(&eye - &proj));
        s.holds(
            format!("A^j {tag} = {tag} A^j iff A^j (A^D)^j (I - A^j (A^j)+) = 0"),
            commutes == kernel,
        );
        s.same(format!("{tag} A^j = A^D A"), &(&y * aj), &(&ad * a));
        let yj = y.pow(j);
        s.same(
            format!("{tag}^j A^j {tag}^j = (A^D)^(j(j-1)) {tag}^j"),
            &(&(&yj * aj) * &yj),
            &(&adp[j * (j - 1)] * &yj),
        );
        if info.core_rank() > 0 {
            let cn = spectral::core_nilpotent_with(a, tol, &info)?;
            let via = &(&cn.p1 * &cn.d.inverse()?.pow(j)) * &factor::pinv_full_column(&cn.p1)?;
            s.same(format!("{tag} = P1 D^-j P1+"), &y, &via);
        }
        if s.decide_equal(&y, a) {
            s.holds(format!("{tag} = A implies A is EP"), super::is_ep(a, tol));
        }
    }

    // (1,k)-core
    if let Some(z) = jm(1, kk)? {
        s.same(format!("(1,{kk}): XAX = X"), &(&(&z * a) * &z), &z);
        s.same(format!("(1,{kk}): XA = A^D A"), &(&z * a), &(&ad * a));
    } else {
        s.holds(format!("(1,{kk}) consistent"), false);
    }

    if k >= 1 {
        // (k,k)-core from DMP and core-EP
        let jk = gencore::jk_from_dmp_coreep(a, tol)?;
        let ykk = jm(k, k)?;
        match &ykk {
            Some(ykk) => s.same(format!("({k},{k}) = DMP (A^D)^(k-1) A core-EP"), &jk, ykk),
            None => s.holds(format!("({k},{k}) consistent"), false),
        }
        // powers of the core-EP inverse
        let xp = powers(&coep, k + 1);
        let akxk = ak * &xp[k];
        let hyp = s.decide_equal(&akxk.adjoint(), &akxk)
            && s.decide_equal(&(a * &xp[k + 1]), &xp[k])
            && s.decide_equal(&(&coep * &ap[k + 1]), ak);
        if hyp {
            if let Some(ykk) = &ykk {
                s.same(format!("({k},{k}) = (core-EP)^k"), ykk, &xp[k]);
            }
        }
    }

    // duality
    for m in [kk, kk + 1] {
        let x = im(kk, m)?;
        match jm(m, kk)? {
            Some(y) => s.same(format!("<{kk},{m}> = ({m},{kk})"), &x, &y),
            None => s.holds(format!("({m},{kk}) consistent"), false),
        }
    }
    Ok(s.report)
}

type GenOut<T> = Option<Mat<T>>;
