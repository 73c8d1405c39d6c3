//! Seeded random test matrices with a known Drazin index.
//!
//! Square cases are built as `A = P blockdiag(D, N) P^{-1}` with `D`
//! nonsingular and `N` nilpotent made of Jordan blocks whose largest block has
//! size `k`, so `ind(A) = k` and `rk(A^k) = size(D)` hold by construction.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::factor::Svd;
use crate::numfield::{ApproxC, ExactC, Mat, Scalar};

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A matrix with its index and core rank known by construction.
#[derive(Debug, Clone)]
pub struct Case<T> {
    pub a: Mat<T>,
    pub k: usize,
    pub r: usize,
}

/// Upper bound on `cond(D)` for float cases.
pub const MAX_CORE_COND: f64 = 1e3;

fn gaussian(rng: &mut CorpusRng) -> ApproxC {
    ApproxC::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

pub fn gaussian_matrix(rng: &mut CorpusRng, rows: usize, cols: usize) -> Mat<ApproxC> {
    Mat::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-like unitary: left singular vectors of a Gaussian matrix.
pub fn random_unitary(rng: &mut CorpusRng, n: usize) -> Mat<ApproxC> {
    let g = gaussian_matrix(rng, n, n);
    Svd::compute(&g).expect("svd of a finite matrix").u
}

fn real_diag(v: &[f64]) -> Mat<ApproxC> {
    Mat::diag(&v.iter().map(|&x| ApproxC::new(x, 0.0)).collect::<Vec<_>>())
}

/// `P = U diag(s) V*` with `s` in `[1, 10]`, returned with its inverse.
pub fn random_similarity(rng: &mut CorpusRng, n: usize) -> (Mat<ApproxC>, Mat<ApproxC>) {
    let u = random_unitary(rng, n);
    let v = random_unitary(rng, n);
    let s: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..=10.0)).collect();
    let inv_s: Vec<f64> = s.iter().map(|x| 1.0 / x).collect();
    let p = &(&u * &real_diag(&s)) * &v.adjoint();
    let p_inv = &(&v * &real_diag(&inv_s)) * &u.adjoint();
    (p, p_inv)
}

/// Jordan block sizes: one block of size `k`, the rest in `1..=k`, summing to `s`.
fn jordan_sizes(rng: &mut CorpusRng, s: usize, k: usize) -> Vec<usize> {
    if s == 0 {
        return Vec::new();
    }
    let mut sizes = vec![k];
    let mut left = s - k;
    while left > 0 {
        let b = rng.gen_range(1..=k.min(left));
        sizes.push(b);
        left -= b;
    }
    sizes
}

fn nilpotent<T: Scalar>(sizes: &[usize]) -> Mat<T> {
    let s: usize = sizes.iter().sum();
    let mut n = Mat::zeros(s, s);
    let mut start = 0;
    for &b in sizes {
        for i in start..start + b - 1 {
            n.set(i, i + 1, T::one());
        }
        start += b;
    }
    n
}

/// Pick `(n, k, s)` with `1 <= n <= max_n`, `k <= max_k`, nilpotent size
/// `s >= k` and core size `n - s >= 1`.
fn shape(rng: &mut CorpusRng, max_n: usize, max_k: usize) -> (usize, usize, usize) {
    let k = rng.gen_range(0..=max_k.min(max_n - 1));
    let n = rng.gen_range(k + 1..=max_n);
    let s = if k == 0 { 0 } else { rng.gen_range(k..=n - 1) };
    (n, k, s)
}

fn float_core_block(rng: &mut CorpusRng, r: usize) -> Mat<ApproxC> {
    loop {
        let mut t = Mat::zeros(r, r);
        for i in 0..r {
            let modulus = rng.gen_range(0.5..=2.0);
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            t.set(i, i, ApproxC::from_polar(modulus, phase));
            for j in i + 1..r {
                t.set(i, j, gaussian(rng) * 0.3);
            }
        }
        let q = random_unitary(rng, r);
        let d = &(&q * &t) * &q.adjoint();
        let sv = Svd::compute(&d).expect("svd of a finite matrix").sigma;
        if sv[0] / sv[r - 1] <= MAX_CORE_COND {
            return d;
        }
    }
}

/// Float case with `n <= max_n`, `ind(A) <= max_k`, `cond(P) <= 10` and
/// `cond(D) <= 1e3`, eigenvalue moduli of `D` in `[0.5, 2]`.
pub fn float_case(rng: &mut CorpusRng, max_n: usize, max_k: usize) -> Case<ApproxC> {
    let (n, k, s) = shape(rng, max_n, max_k);
    let r = n - s;
    let d = float_core_block(rng, r);
    let nil = nilpotent::<ApproxC>(&jordan_sizes(rng, s, k));
    let (p, p_inv) = random_similarity(rng, n);
    let a = &(&p * &Mat::block_diag(&d, &nil)) * &p_inv;
    Case { a, k, r }
}

fn small_gaussian_int(rng: &mut CorpusRng, bound: i64) -> ExactC {
    Complex::new(
        BigRational::from_integer(rng.gen_range(-bound..=bound).into()),
        BigRational::from_integer(rng.gen_range(-bound..=bound).into()),
    )
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// Unit lower times unit upper triangular with Gaussian-integer entries:
/// determinant one, so the inverse is integral too.
fn unimodular(rng: &mut CorpusRng, n: usize) -> Mat<ExactC> {
    let mut l = Mat::<ExactC>::identity(n);
    let mut u = Mat::<ExactC>::identity(n);
    for i in 0..n {
        for j in 0..i {
            l.set(i, j, small_gaussian_int(rng, 1));
            u.set(j, i, small_gaussian_int(rng, 1));
        }
    }
    &l * &u
}

/// Exact case with `n <= max_n`, `ind(A) <= max_k`: upper triangular `D` with
/// small rational or Gaussian-integer diagonal, unimodular `P`.
pub fn exact_case(rng: &mut CorpusRng, max_n: usize, max_k: usize) -> Case<ExactC> {
    let (n, k, s) = shape(rng, max_n, max_k);
    let r = n - s;
    let diag_choices: [ExactC; 8] = [
        Complex::new(BigRational::one(), BigRational::zero()),
        Complex::new(-BigRational::one(), BigRational::zero()),
        Complex::new(ratio(2, 1), BigRational::zero()),
        Complex::new(ratio(1, 2), BigRational::zero()),
        Complex::new(ratio(-3, 2), BigRational::zero()),
        Complex::new(BigRational::zero(), BigRational::one()),
        Complex::new(BigRational::one(), BigRational::one()),
        Complex::new(ratio(2, 3), ratio(-1, 3)),
    ];
    let mut d = Mat::<ExactC>::zeros(r, r);
    for i in 0..r {
        d.set(i, i, diag_choices.choose(rng).expect("non-empty").clone());
        for j in i + 1..r {
            d.set(i, j, small_gaussian_int(rng, 2));
        }
    }
    let nil = nilpotent::<ExactC>(&jordan_sizes(rng, s, k));
    let p = unimodular(rng, n);
    let p_inv = p.inverse().expect("unimodular matrix is invertible");
    let a = &(&p * &Mat::block_diag(&d, &nil)) * &p_inv;
    Case { a, k, r }
}

/// Rectangular float matrix of random rank, `rows, cols <= max_dim`.
pub fn low_rank(rng: &mut CorpusRng, max_dim: usize) -> Mat<ApproxC> {
    let m = rng.gen_range(1..=max_dim);
    let n = rng.gen_range(1..=max_dim);
    let r = rng.gen_range(0..=m.min(n));
    let scale = 10f64.powf(rng.gen_range(-1.0..=1.0));
    let e = gaussian_matrix(rng, m, r);
    let f = gaussian_matrix(rng, r, n);
    (&e * &f).scale(&ApproxC::new(scale, 0.0))
}

/// `P diag(l) P^{-1}` with `l` drawn from `{0, 1, -1, i, -i}` and `P`
/// unitary when `unitary` is set, a general similarity otherwise.
pub fn diagonalizable_candidate(rng: &mut CorpusRng, max_n: usize, unitary: bool) -> Mat<ApproxC> {
    let n = rng.gen_range(2..=max_n);
    let choices = [
        ApproxC::new(0.0, 0.0),
        ApproxC::new(1.0, 0.0),
        ApproxC::new(-1.0, 0.0),
        ApproxC::new(0.0, 1.0),
        ApproxC::new(0.0, -1.0),
    ];
    let l: Vec<ApproxC> = (0..n).map(|_| *choices.choose(rng).expect("non-empty")).collect();
    let (p, p_inv) = if unitary {
        let u = random_unitary(rng, n);
        let ua = u.adjoint();
        (u, ua)
    } else {
        random_similarity(rng, n)
    };
    &(&p * &Mat::diag(&l)) * &p_inv
}
