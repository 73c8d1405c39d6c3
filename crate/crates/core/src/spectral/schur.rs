//! Complex Schur form `A = Q T Q*` with adjacent-swap reordering and the
//! triangular Sylvester solve that block-diagonalizes a reordered `T`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numfield::{ApproxC, Mat, Scalar};

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone)]
pub struct Schur {
    /// Unitary.
    pub q: Mat<ApproxC>,
    /// Upper triangular.
    pub t: Mat<ApproxC>,
}

impl Schur {
    pub fn compute(a: &Mat<ApproxC>) -> Result<Schur> {
        let n = a.require_square()?;
        let mut h = a.clone();
        let mut q = Mat::identity(n);
        hessenberg(&mut h, &mut q);
        qr_iterate(&mut h, &mut q)?;
        for i in 0..n {
            for j in 0..i {
                h.set(i, j, zero());
            }
        }
        Ok(Schur { q, t: h })
    }

    pub fn eigenvalues(&self) -> Vec<ApproxC> {
        (0..self.t.rows()).map(|i| *self.t.get(i, i)).collect()
    }

    /// Move the diagonal entries flagged in `select` to the leading positions,
    /// preserving relative order within each group.
    pub fn reorder(&mut self, select: &[bool]) {
        let n = self.t.rows();
        assert_eq!(select.len(), n);
        let mut flags = select.to_vec();
        let mut next = 0;
        for p in 0..n {
            if !flags[p] {
                continue;
            }
            for pos in (next..p).rev() {
                swap_adjacent(&mut self.t, &mut self.q, pos);
                flags.swap(pos, pos + 1);
            }
            next += 1;
        }
    }
}

#[inline]
fn zero() -> ApproxC {
    Complex::new(0.0, 0.0)
}

/// Householder reduction to upper Hessenberg form, accumulating into `q`.
fn hessenberg(h: &mut Mat<ApproxC>, q: &mut Mat<ApproxC>) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<ApproxC> = (k + 1..n).map(|i| *h.get(i, k)).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * norm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm2 = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if vnorm2 == 0.0 {
            continue;
        }
        // H <- (I - 2 v v*/|v|^2) H
        for j in 0..n {
            let s: ApproxC = (0..v.len()).map(|i| v[i].conj() * h.get(k + 1 + i, j)).sum();
            let s = s * (2.0 / vnorm2);
            for i in 0..v.len() {
                let val = h.get(k + 1 + i, j) - v[i] * s;
                h.set(k + 1 + i, j, val);
            }
        }
        // H <- H (I - 2 v v*/|v|^2), Q likewise
        for m in [&mut *h, &mut *q] {
            for i in 0..n {
                let s: ApproxC = (0..v.len()).map(|l| m.get(i, k + 1 + l) * v[l]).sum();
                let s = s * (2.0 / vnorm2);
                for l in 0..v.len() {
                    let val = m.get(i, k + 1 + l) - s * v[l].conj();
                    m.set(i, k + 1 + l, val);
                }
            }
        }
        for i in k + 2..n {
            h.set(i, k, zero());
        }
    }
}

/// Unitary `G = [[c, s], [-conj(s), c]]` with real `c` such that `G [x; y] = [r; 0]`.
fn givens(x: ApproxC, y: ApproxC) -> (f64, ApproxC) {
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, zero());
    }
    let ax = x.norm();
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

/// Rows `k, k+1` of `m` from column `from` onward: `m <- G m`.
fn rotate_rows(m: &mut Mat<ApproxC>, k: usize, c: f64, s: ApproxC, from: usize) {
    for j in from..m.cols() {
        let a = *m.get(k, j);
        let b = *m.get(k + 1, j);
        m.set(k, j, a * c + s * b);
        m.set(k + 1, j, -s.conj() * a + b * c);
    }
}

/// Columns `k, k+1` of `m` for rows `0..upto`: `m <- m G*`.
fn rotate_cols(m: &mut Mat<ApproxC>, k: usize, c: f64, s: ApproxC, upto: usize) {
    for i in 0..upto {
        let a = *m.get(i, k);
        let b = *m.get(i, k + 1);
        m.set(i, k, a * c + b * s.conj());
        m.set(i, k + 1, -a * s + b * c);
    }
}

/// Single-shift complex QR on an upper Hessenberg matrix (full Schur form).
fn qr_iterate(h: &mut Mat<ApproxC>, q: &mut Mat<ApproxC>) -> Result<()> {
    let n = h.rows();
    if n < 2 {
        return Ok(());
    }
    let hnorm = h.frobenius_norm();
    if hnorm == 0.0 {
        return Ok(());
    }
    let small = EPS * hnorm;
    let max_iter = 60 * n;
    let mut hi = n - 1;
    let mut iter_since_deflation = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        // locate the active block [lo, hi]
        let mut lo = hi;
        while lo > 0 {
            let sub = h.get(lo, lo - 1).norm();
            let tst = h.get(lo - 1, lo - 1).norm() + h.get(lo, lo).norm();
            if sub <= EPS * tst || sub <= small {
                h.set(lo, lo - 1, zero());
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter_since_deflation = 0;
            continue;
        }
        iter_since_deflation += 1;
        total += 1;
        if total > max_iter * n.max(1) {
            return Err(Error::ConvergenceFailure("complex Schur QR"));
        }
        let shift = if iter_since_deflation.is_multiple_of(11) {
            // exceptional shift
            *h.get(hi, hi) + Complex::new(0.75 * h.get(hi, hi - 1).norm(), 0.0)
        } else {
            wilkinson(*h.get(hi - 1, hi - 1), *h.get(hi - 1, hi), *h.get(hi, hi - 1), *h.get(hi, hi))
        };
        let mut x = *h.get(lo, lo) - shift;
        let mut y = *h.get(lo + 1, lo);
        for k in lo..hi {
            if k > lo {
                x = *h.get(k, k - 1);
                y = *h.get(k + 1, k - 1);
            }
            let (c, s) = givens(x, y);
            let from = if k > lo { k - 1 } else { k };
            rotate_rows(h, k, c, s, from);
            let upto = (k + 3).min(hi + 1).max(k + 2);
            rotate_cols(h, k, c, s, upto.min(n));
            rotate_cols(q, k, c, s, n);
            if k > lo {
                h.set(k + 1, k - 1, zero());
            }
        }
    }
    Ok(())
}

/// Eigenvalue of `[[a, b], [c, d]]` closer to `d`.
fn wilkinson(a: ApproxC, b: ApproxC, c: ApproxC, d: ApproxC) -> ApproxC {
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Swap diagonal entries `pos` and `pos + 1` of the triangular `t`.
fn swap_adjacent(t: &mut Mat<ApproxC>, q: &mut Mat<ApproxC>, pos: usize) {
    let n = t.rows();
    let a = *t.get(pos, pos);
    let b = *t.get(pos + 1, pos + 1);
    let c = *t.get(pos, pos + 1);
    // eigenvector of the 2x2 block for eigenvalue b is [c, b - a]
    let (x, y) = (c, b - a);
    let norm = x.norm().hypot(y.norm());
    if norm == 0.0 {
        // equal eigenvalues with zero coupling: already interchangeable
        return;
    }
    // Z = [[v1, -conj(v2)], [v2, conj(v1)]] has first column v
    let (v1, v2) = (x / norm, y / norm);
    // T <- Z* T Z, Q <- Q Z
    for j in pos..n {
        let r0 = *t.get(pos, j);
        let r1 = *t.get(pos + 1, j);
        t.set(pos, j, v1.conj() * r0 + v2.conj() * r1);
        t.set(pos + 1, j, -v2 * r0 + v1 * r1);
    }
    for m in [&mut *t, &mut *q] {
        let rows = if m.rows() == n { n } else { m.rows() };
        for i in 0..rows {
            let c0 = *m.get(i, pos);
            let c1 = *m.get(i, pos + 1);
            m.set(i, pos, c0 * v1 + c1 * v2);
            m.set(i, pos + 1, -c0 * v2.conj() + c1 * v1.conj());
        }
    }
    t.set(pos + 1, pos, zero());
    t.set(pos, pos, b);
    t.set(pos + 1, pos + 1, a);
}

/// Solve `T11 X - X T22 = C` for upper triangular `T11`, `T22` with
/// disjoint spectra.
pub fn triangular_sylvester(t11: &Mat<ApproxC>, t22: &Mat<ApproxC>, c: &Mat<ApproxC>) -> Result<Mat<ApproxC>> {
    let r = t11.rows();
    let p = t22.rows();
    let mut x: Mat<ApproxC> = Mat::zeros(r, p);
    let scale = t11.max_abs().max(t22.max_abs()).max(f64::MIN_POSITIVE);
    for j in 0..p {
        let mut rhs: Vec<ApproxC> = (0..r).map(|i| *c.get(i, j)).collect();
        for l in 0..j {
            let tl = *t22.get(l, j);
            if tl.is_zero() {
                continue;
            }
            for (i, v) in rhs.iter_mut().enumerate() {
                *v += x.get(i, l) * tl;
            }
        }
        let mu = *t22.get(j, j);
        for i in (0..r).rev() {
            let mut s = rhs[i];
            for l in i + 1..r {
                s -= t11.get(i, l) * x.get(l, j);
            }
            let d = t11.get(i, i) - mu;
            if d.norm() <= EPS * scale {
                return Err(Error::RankDecisionAmbiguous(
                    "Sylvester solve: leading and trailing spectra overlap".into(),
                ));
            }
            x.set(i, j, s / d);
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{approx_eq, Tolerance};
    use rand::{Rng, SeedableRng};

    fn random(n: usize, seed: u64) -> Mat<ApproxC> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Mat::from_fn(n, n, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    fn check(a: &Mat<ApproxC>, s: &Schur) {
        let tol = Tolerance::default().with_eq_rel(1e-12);
        let n = a.rows();
        assert!(approx_eq(&(&s.q.adjoint() * &s.q), &Mat::identity(n), &tol).unwrap());
        let back = &(&s.q * &s.t) * &s.q.adjoint();
        assert!(approx_eq(&back, a, &tol).unwrap(), "reconstruction failed");
        for i in 0..n {
            for j in 0..i {
                assert!(s.t.get(i, j).is_zero());
            }
        }
    }

    #[test]
    fn schur_of_random_matrices() {
        for (n, seed) in [(1, 1), (2, 2), (3, 3), (7, 4), (12, 5)] {
            let a = random(n, seed);
            let s = Schur::compute(&a).unwrap();
            check(&a, &s);
        }
    }

    #[test]
    fn schur_of_nilpotent_converges() {
        let mut a: Mat<ApproxC> = Mat::zeros(5, 5);
        for i in 0..4 {
            a.set(i, i + 1, Complex::new(1.0, 0.0));
        }
        let s = Schur::compute(&a).unwrap();
        check(&a, &s);
        let z: Mat<ApproxC> = Mat::zeros(4, 4);
        check(&z, &Schur::compute(&z).unwrap());
    }

    #[test]
    fn reorder_moves_selected_first() {
        let a = random(8, 9);
        let mut s = Schur::compute(&a).unwrap();
        let ev = s.eigenvalues();
        let select: Vec<bool> = ev.iter().map(|z| z.norm() > 1.0).collect();
        let count = select.iter().filter(|&&b| b).count();
        s.reorder(&select);
        check(&a, &s);
        let after = s.eigenvalues();
        assert!(after[..count].iter().all(|z| z.norm() > 1.0));
        assert!(after[count..].iter().all(|z| z.norm() <= 1.0));
    }

    #[test]
    fn sylvester_residual() {
        let mut t11 = random(3, 11);
        let mut t22 = random(2, 12);
        for (t, shift) in [(&mut t11, 3.0), (&mut t22, 0.0)] {
            let n = t.rows();
            for i in 0..n {
                for j in 0..i {
                    t.set(i, j, zero());
                }
                let d = *t.get(i, i) + Complex::new(shift, 0.0);
                t.set(i, i, d);
            }
        }
        let c = Mat::from_fn(3, 2, |i, j| Complex::new(i as f64 - j as f64, 1.0));
        let x = triangular_sylvester(&t11, &t22, &c).unwrap();
        let lhs = &(&t11 * &x) - &(&x * &t22);
        assert!(approx_eq(&lhs, &c, &Tolerance::default().with_eq_rel(1e-12)).unwrap());
    }
}
