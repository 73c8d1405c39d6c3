//! Residual checks of the defining equations of each inverse.
//!
//! A residual is `||LHS - RHS||_F / max(1, ||A||_F^d)` where `d` is the number
//! of factors of `A` in the equation. Float entries pass when the residual is
//! at most `eq_rel`; exact entries pass only on exact equality.

mod identities;

pub use identities::identity_report;

use std::fmt;

use serde::Serialize;

use crate::classical::{self, AlgorithmChoice};
use crate::error::{Error, Result};
use crate::factor::{self, Factorize};
use crate::numfield::{Mat, Scalar, Tolerance};
use crate::spectral::{self, Field};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DefinitionTag {
    MoorePenrose,
    Group,
    Drazin,
    Core,
    CoreEP,
    DMP,
    ImCore { i: usize, m: usize },
    JmCore { j: usize, m: usize },
    Outer,
    OneThree,
    TwoThree,
    OneTwoThree,
}

impl DefinitionTag {
    pub fn name(&self) -> &'static str {
        match self {
            DefinitionTag::MoorePenrose => "mp",
            DefinitionTag::Group => "group",
            DefinitionTag::Drazin => "drazin",
            DefinitionTag::Core => "core",
            DefinitionTag::CoreEP => "core-ep",
            DefinitionTag::DMP => "dmp",
            DefinitionTag::ImCore { .. } => "im-core",
            DefinitionTag::JmCore { .. } => "jm-core",
            DefinitionTag::Outer => "outer",
            DefinitionTag::OneThree => "13",
            DefinitionTag::TwoThree => "23",
            DefinitionTag::OneTwoThree => "123",
        }
    }

    /// Parse a tag name; `im-core` needs `i` and `m`, `jm-core` needs `j` and `m`.
    pub fn parse(name: &str, i: Option<usize>, m: Option<usize>, j: Option<usize>) -> Result<Self> {
        let need = |v: Option<usize>, what: &str| {
            v.filter(|&x| x >= 1)
                .ok_or_else(|| Error::InvalidParameter(format!("{name} needs --{what} >= 1")))
        };
        Ok(match name {
            "mp" => DefinitionTag::MoorePenrose,
            "group" => DefinitionTag::Group,
            "drazin" => DefinitionTag::Drazin,
            "core" => DefinitionTag::Core,
            "core-ep" => DefinitionTag::CoreEP,
            "dmp" => DefinitionTag::DMP,
            "im-core" => DefinitionTag::ImCore {
                i: need(i, "i")?,
                m: need(m, "m")?,
            },
            "jm-core" => DefinitionTag::JmCore {
                j: need(j, "j")?,
                m: need(m, "m")?,
            },
            "outer" => DefinitionTag::Outer,
            "13" => DefinitionTag::OneThree,
            "23" => DefinitionTag::TwoThree,
            "123" => DefinitionTag::OneTwoThree,
            other => return Err(Error::Parse(format!("unknown definition tag '{other}'"))),
        })
    }
}

impl fmt::Display for DefinitionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefinitionTag::ImCore { i, m } => write!(f, "im-core(i={i}, m={m})"),
            DefinitionTag::JmCore { j, m } => write!(f, "jm-core(j={j}, m={m})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub label: String,
    /// Normalized residual.
    pub residual: f64,
    /// `||LHS - RHS||_F` before normalization.
    pub abs_residual: f64,
    pub pass: bool,
    /// Number of factors of `A` in a defining equation, when the residual
    /// was normalized by `||A||_F^degree`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub tag: String,
    pub entries: Vec<ReportEntry>,
    pub overall: bool,
    /// Set when the report's preconditions failed; the entries then list them.
    pub hypotheses_failed: bool,
}

impl VerifyReport {
    pub fn new(tag: impl Into<String>) -> Self {
        VerifyReport {
            tag: tag.into(),
            entries: Vec::new(),
            overall: true,
            hypotheses_failed: false,
        }
    }

    pub fn push(&mut self, e: ReportEntry) {
        self.overall &= e.pass;
        self.entries.push(e);
    }

    pub fn extend(&mut self, other: VerifyReport) {
        for e in other.entries {
            self.push(e);
        }
        self.hypotheses_failed |= other.hypotheses_failed;
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    /// Largest normalized residual.
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    /// One line per entry followed by the overall verdict.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self.entries.iter().map(|e| e.label.len()).max().unwrap_or(0);
        for e in &self.entries {
            let verdict = if e.pass { "pass" } else { "FAIL" };
            out.push_str(&format!("{verdict}  {:<width$}  {:.3e}\n", e.label, e.residual));
        }
        if self.hypotheses_failed {
            out.push_str("hypotheses failed\n");
        }
        out.push_str(&format!(
            "{}: {}\n",
            self.tag,
            if self.overall { "PASS" } else { "FAIL" }
        ));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Compare two matrices under a scale. Exact backends require equality.
pub(crate) fn compare<T: Scalar>(label: impl Into<String>, lhs: &Mat<T>, rhs: &Mat<T>, scale: f64, tol: &Tolerance) -> ReportEntry {
    let label = label.into();
    if lhs.shape() != rhs.shape() {
        return ReportEntry {
            label,
            residual: f64::INFINITY,
            abs_residual: f64::INFINITY,
            pass: false,
            degree: None,
        };
    }
    let abs = (lhs - rhs).frobenius_norm();
    let residual = abs / scale.max(1.0);
    let pass = if T::EXACT { lhs == rhs } else { residual <= tol.eq_rel };
    ReportEntry {
        label,
        residual,
        abs_residual: abs,
        pass,
        degree: None,
    }
}

/// A boolean condition as a report entry (residual 0 or 1).
pub(crate) fn condition(label: impl Into<String>, holds: bool) -> ReportEntry {
    let r = if holds { 0.0 } else { 1.0 };
    ReportEntry {
        label: label.into(),
        residual: r,
        abs_residual: r,
        pass: holds,
        degree: None,
    }
}

struct Checker<'a, T> {
    a: &'a Mat<T>,
    a_norm: f64,
    tol: &'a Tolerance,
    report: VerifyReport,
}

impl<'a, T: Scalar> Checker<'a, T> {
    fn new(a: &'a Mat<T>, tag: &DefinitionTag, tol: &'a Tolerance) -> Self {
        Checker {
            a,
            a_norm: a.frobenius_norm(),
            tol,
            report: VerifyReport::new(tag.to_string()),
        }
    }

    /// `degree` counts the factors of `A` in the equation.
    fn eq(&mut self, label: &str, lhs: &Mat<T>, rhs: &Mat<T>, degree: usize) {
        let scale = self.a_norm.powi(degree as i32);
        let mut e = compare(label, lhs, rhs, scale, self.tol);
        e.degree = Some(degree);
        self.report.push(e);
    }

    fn penrose(&mut self, x: &Mat<T>, which: &[u8]) {
        let a = self.a;
        let ax = a * x;
        let xa = x * a;
        for w in which {
            match w {
                1 => self.eq("(1) AXA = A", &(&ax * a), a, 2),
                2 => self.eq("(2) XAX = X", &(&xa * x), x, 1),
                3 => self.eq("(3) (AX)* = AX", &ax.adjoint(), &ax, 1),
                4 => self.eq("(4) (XA)* = XA", &xa.adjoint(), &xa, 1),
                _ => unreachable!("Penrose equations are numbered 1 to 4"),
            }
        }
    }
}

/// Check `x` against the defining equations of `tag` for the matrix `a`.
pub fn verify<T: Field>(a: &Mat<T>, x: &Mat<T>, tag: DefinitionTag, tol: &Tolerance) -> Result<VerifyReport> {
    let (rows, cols) = a.shape();
    if x.shape() != (cols, rows) {
        return Err(Error::DimensionMismatch {
            op: "verify",
            left: a.shape(),
            right: x.shape(),
        });
    }
    let needs_square = !matches!(
        tag,
        DefinitionTag::MoorePenrose
            | DefinitionTag::Outer
            | DefinitionTag::OneThree
            | DefinitionTag::TwoThree
            | DefinitionTag::OneTwoThree
    );
    if needs_square {
        a.require_square()?;
    }
    let mut c = Checker::new(a, &tag, tol);
    match tag {
        DefinitionTag::MoorePenrose => c.penrose(x, &[1, 2, 3, 4]),
        DefinitionTag::Outer => c.penrose(x, &[2]),
        DefinitionTag::OneThree => c.penrose(x, &[1, 3]),
        DefinitionTag::TwoThree => c.penrose(x, &[2, 3]),
        DefinitionTag::OneTwoThree => c.penrose(x, &[1, 2, 3]),
        DefinitionTag::Group => {
            c.penrose(x, &[1, 2]);
            c.eq("AX = XA", &(a * x), &(x * a), 1);
        }
        DefinitionTag::Drazin => {
            let k = spectral::index(a, tol)?.k;
            c.eq("XA^(k+1) = A^k", &(x * &a.pow(k + 1)), &a.pow(k), k + 1);
            c.penrose(x, &[2]);
            c.eq("AX = XA", &(a * x), &(x * a), 1);
        }
        DefinitionTag::Core => {
            let ax = a * x;
            c.eq("(AX)* = AX", &ax.adjoint(), &ax, 1);
            c.eq("XA^2 = A", &(x * &a.pow(2)), a, 2);
            c.eq("AX^2 = X", &(&ax * x), x, 1);
        }
        DefinitionTag::CoreEP => {
            let k = spectral::index(a, tol)?.k;
            let ak = a.pow(k);
            let proj = &ak * &factor::moore_penrose(&ak, tol)?;
            let x_pinv = factor::moore_penrose(x, tol)?;
            c.penrose(x, &[2]);
            c.eq("XX+ = A^k(A^k)+", &(x * &x_pinv), &proj, 0);
            c.eq("X+X = A^k(A^k)+", &(&x_pinv * x), &proj, 0);
        }
        DefinitionTag::DMP => {
            let info = spectral::index(a, tol)?;
            let ad = classical::drazin_with(a, tol, AlgorithmChoice::RankChain, &info)?;
            let ak = a.pow(info.k);
            c.penrose(x, &[2]);
            c.eq("XA = A^D A", &(x * a), &(&ad * a), 1);
            c.eq("A^k X = A^k A+", &(&ak * x), &(&ak * &factor::moore_penrose(a, tol)?), info.k);
        }
        DefinitionTag::ImCore { i, m } => {
            let info = spectral::index(a, tol)?;
            let ad = classical::drazin_with(a, tol, AlgorithmChoice::RankChain, &info)?;
            let ai = a.pow(i);
            c.eq("X = A^D A X", x, &(&(&ad * a) * x), 1);
            c.eq(
                "A^m X = A^i (A^i)+",
                &(&a.pow(m) * x),
                &(&ai * &factor::moore_penrose(&ai, tol)?),
                m,
            );
        }
        DefinitionTag::JmCore { j, m } => {
            let info = spectral::index(a, tol)?;
            let ad = classical::drazin_with(a, tol, AlgorithmChoice::RankChain, &info)?;
            let am = a.pow(m);
            c.eq("X = A^D A X", x, &(&(&ad * a) * x), 1);
            c.eq(
                "A^m X = A^m (A^j)+",
                &(&am * x),
                &(&am * &factor::moore_penrose(&a.pow(j), tol)?),
                m,
            );
        }
    }
    Ok(c.report)
}

/// Powers `A^k X^m ...` identities implied by `A X^{k+1} = X^k` and
/// `X A^{k+1} = A^k`, for `m = 1..=m_max`, plus `X^{k+1} A^k = A^D`.
/// If either hypothesis fails, the report lists the hypotheses only and sets
/// `hypotheses_failed`.
pub fn check_drazin_power_identities<T: Field>(a: &Mat<T>, x: &Mat<T>, k: usize, m_max: usize, tol: &Tolerance) -> Result<VerifyReport> {
    a.require_square()?;
    if x.shape() != a.shape() {
        return Err(Error::DimensionMismatch {
            op: "check_drazin_power_identities",
            left: a.shape(),
            right: x.shape(),
        });
    }
    let tag = DefinitionTag::Drazin;
    let mut c = Checker::new(a, &tag, tol);
    c.report.tag = format!("power identities (k={k}, m<={m_max})");
    let ap: Vec<Mat<T>> = powers(a, 2 * k + m_max + 1);
    let xp: Vec<Mat<T>> = powers(x, 2 * k + m_max + 1);
    c.eq("hyp: A X^(k+1) = X^k", &(a * &xp[k + 1]), &xp[k], 1);
    c.eq("hyp: X A^(k+1) = A^k", &(x * &ap[k + 1]), &ap[k], k + 1);
    if !c.report.overall {
        c.report.hypotheses_failed = true;
        return Ok(c.report);
    }
    for m in 1..=m_max {
        c.eq(&format!("(1) A^k = X^m A^(k+m), m={m}"), &ap[k], &(&xp[m] * &ap[k + m]), k + m);
        c.eq(&format!("(2) X^k = A^m X^(k+m), m={m}"), &xp[k], &(&ap[m] * &xp[k + m]), m);
        c.eq(
            &format!("(3) A^k X^k = A^(k+m) X^(k+m), m={m}"),
            &(&ap[k] * &xp[k]),
            &(&ap[k + m] * &xp[k + m]),
            k + m,
        );
        c.eq(
            &format!("(4) X^k A^k = X^(k+m) A^(k+m), m={m}"),
            &(&xp[k] * &ap[k]),
            &(&xp[k + m] * &ap[k + m]),
            k + m,
        );
        c.eq(
            &format!("(5) A^k = A^m X^m A^k, m={m}"),
            &ap[k],
            &(&(&ap[m] * &xp[m]) * &ap[k]),
            k + m,
        );
        c.eq(
            &format!("(6) X^k = X^m A^m X^k, m={m}"),
            &xp[k],
            &(&(&xp[m] * &ap[m]) * &xp[k]),
            m,
        );
    }
    let ad = classical::drazin(a, tol, AlgorithmChoice::RankChain)?;
    c.eq("A^D = X^(k+1) A^k", &ad, &(&xp[k + 1] * &ap[k]), k);
    Ok(c.report)
}

/// `A^0, A^1, ..., A^top`.
pub(crate) fn powers<T: Scalar>(a: &Mat<T>, top: usize) -> Vec<Mat<T>> {
    let mut out = Vec::with_capacity(top + 1);
    out.push(Mat::identity(a.rows()));
    for p in 1..=top {
        let next = &out[p - 1] * a;
        out.push(next);
    }
    out
}

/// `R(A) = R(A*)`, tested as `A A^† = A^† A`.
pub fn is_ep<T: Factorize>(a: &Mat<T>, tol: &Tolerance) -> bool {
    let Ok(p) = factor::moore_penrose(a, tol) else {
        return false;
    };
    compare("AA+ = A+A", &(a * &p), &(&p * a), 1.0, tol).pass
}

/// `Q` is the orthogonal projector onto `R(A^p)`: `Q^2 = Q`, `Q* = Q`,
/// `Q A^p = A^p` and `rk(Q) = rk(A^p)`.
pub fn is_projector_onto_power_range<T: Factorize>(q: &Mat<T>, a: &Mat<T>, p: usize, tol: &Tolerance) -> bool {
    if !q.is_square() || q.shape() != a.shape() {
        return false;
    }
    let ap = a.pow(p);
    let scale = ap.frobenius_norm();
    let ok = compare("Q^2 = Q", &(q * q), q, 1.0, tol).pass
        && compare("Q* = Q", &q.adjoint(), q, 1.0, tol).pass
        && compare("Q A^p = A^p", &(q * &ap), &ap, scale, tol).pass;
    ok && factor::rank(q, tol) == factor::rank(&ap, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{ApproxC, ExactC};
    use num_complex::Complex;

    fn ex46_sq() -> Mat<ExactC> {
        Mat::from_i64(&[&[2, 2, 2], &[-1, -1, -1], &[0, 0, 0]])
    }

    fn ex46() -> Mat<ExactC> {
        Mat::from_i64(&[&[2, 2, 1], &[-1, -1, 0], &[0, 0, 0]])
    }

    #[test]
    fn printed_pseudoinverse_verifies() {
        let row: &[(i64, i64)] = &[(2, 15), (-1, 15), (0, 1)];
        let x = Mat::from_ratios(&[row, row, row]);
        let tol = Tolerance::default();
        let r = verify(&ex46_sq(), &x, DefinitionTag::MoorePenrose, &tol).unwrap();
        assert!(r.overall, "{}", r.to_text());
        assert_eq!(r.entries.len(), 4);
        assert!(r.entries.iter().all(|e| e.residual == 0.0));
        let rf = verify(&ex46_sq().to_approx(), &x.to_approx(), DefinitionTag::MoorePenrose, &tol).unwrap();
        assert!(rf.overall);
    }

    #[test]
    fn zero_is_drazin_of_nilpotent() {
        let a: Mat<ExactC> = Mat::from_i64(&[&[0, 1], &[0, 0]]);
        let r = verify(&a, &Mat::zeros(2, 2), DefinitionTag::Drazin, &Tolerance::default()).unwrap();
        assert!(r.overall);
    }

    #[test]
    fn perturbed_pseudoinverse_fails() {
        let a = ex46().to_approx();
        let tol = Tolerance::default();
        let p = factor::moore_penrose(&a, &tol).unwrap();
        let e = Mat::from_fn(3, 3, |i, j| Complex::new((i + j) as f64, 0.5));
        let r = verify(&a, &(&p + &e), DefinitionTag::MoorePenrose, &tol).unwrap();
        assert!(!r.overall);
        assert!(!r.entries[0].pass);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a: Mat<ApproxC> = Mat::zeros(2, 3);
        let x: Mat<ApproxC> = Mat::zeros(2, 3);
        assert!(matches!(
            verify(&a, &x, DefinitionTag::MoorePenrose, &Tolerance::default()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn wrong_jm_candidate_fails() {
        let a = ex46();
        let tol = Tolerance::default();
        let x = &a * &factor::moore_penrose(&a.pow(2), &tol).unwrap();
        let r = verify(&a, &x, DefinitionTag::JmCore { j: 2, m: 1 }, &tol).unwrap();
        assert!(!r.overall);
    }

    #[test]
    fn lemma_suite_on_examples() {
        let tol = Tolerance::default();
        let a = ex46();
        let r = check_drazin_power_identities(&a, &a.pow(2), 2, 3, &tol).unwrap();
        assert!(r.overall && !r.hypotheses_failed, "{}", r.to_text());
        assert_eq!(r.entries.len(), 2 + 6 * 3 + 1);
        let ns: Mat<ExactC> = Mat::from_i64(&[&[2, 1], &[1, 1]]);
        let r = check_drazin_power_identities(&ns, &ns.inverse().unwrap(), 1, 2, &tol).unwrap();
        assert!(r.overall);
        let r = check_drazin_power_identities(&a, &Mat::zeros(3, 3), 2, 3, &tol).unwrap();
        assert!(r.hypotheses_failed && !r.overall);
    }

    #[test]
    fn ep_examples() {
        let tol = Tolerance::default();
        let h: Mat<ApproxC> = Mat::from_i64(&[&[2, 1], &[1, 0]]);
        assert!(is_ep(&h, &tol));
        let s: Mat<ExactC> = Mat::from_i64(&[&[0, 1], &[0, 0]]);
        assert!(!is_ep(&s, &tol));
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let u = Mat::from_rows(vec![
            vec![Complex::new(c, 0.0), Complex::new(0.0, c)],
            vec![Complex::new(0.0, c), Complex::new(c, 0.0)],
        ])
        .unwrap();
        assert!(is_ep(&u, &tol));
    }

    #[test]
    fn projector_examples() {
        let tol = Tolerance::default();
        let a = ex46();
        let a2 = a.pow(2);
        let q = &a2 * &factor::moore_penrose(&a2, &tol).unwrap();
        assert!(is_projector_onto_power_range(&q, &a, 2, &tol));
        let ns: Mat<ExactC> = Mat::from_i64(&[&[2, 1], &[1, 1]]);
        assert!(is_projector_onto_power_range(&Mat::identity(2), &ns, 3, &tol));
        assert!(!is_projector_onto_power_range(&Mat::zeros(3, 3), &a, 2, &tol));
    }

    #[test]
    fn report_serializes() {
        let a = ex46();
        let r = verify(&a, &a.pow(2), DefinitionTag::Drazin, &Tolerance::default()).unwrap();
        let j = r.to_json();
        assert_eq!(j["overall"], serde_json::Value::Bool(true));
        assert_eq!(j["entries"].as_array().unwrap().len(), 3);
        assert!(r.to_text().ends_with("drazin: PASS\n"));
    }

    #[test]
    fn tag_parsing() {
        assert_eq!(DefinitionTag::parse("mp", None, None, None).unwrap(), DefinitionTag::MoorePenrose);
        assert_eq!(
            DefinitionTag::parse("im-core", Some(2), Some(1), None).unwrap(),
            DefinitionTag::ImCore { i: 2, m: 1 }
        );
        assert!(DefinitionTag::parse("im-core", None, Some(1), None).is_err());
        assert!(DefinitionTag::parse("nope", None, None, None).is_err());
    }
}
