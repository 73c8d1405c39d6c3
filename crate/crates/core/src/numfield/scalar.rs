use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Complex numbers with `f64` parts.
pub type ApproxC = Complex<f64>;

/// Complex numbers with arbitrary-precision rational parts.
pub type ExactC = Complex<BigRational>;

/// The base field of every matrix in this crate.
///
/// Two realizations exist: [`ApproxC`] (binary floating point, carries a
/// machine epsilon) and [`ExactC`] (rationals, all field axioms hold exactly).
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Real type used for moduli.
    type Real: Clone + PartialOrd + Debug + Display;

    /// `true` for the rational backend: comparisons are exact, tolerances ignored.
    const EXACT: bool;
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// `|z|^2`, exact for the rational backend.
    fn norm_sqr(&self) -> Self::Real;
    fn real_to_f64(r: &Self::Real) -> f64;
    fn to_approx(&self) -> ApproxC;
    /// Canonical text of the real and imaginary parts: shortest round-trip
    /// decimal for floats, reduced `p/q` (or `p`) for rationals.
    fn part_strings(&self) -> [String; 2];

    fn modulus(&self) -> f64 {
        Self::real_to_f64(&self.norm_sqr()).sqrt()
    }

    /// Row-major product of an `rows x inner` and an `inner x cols` block.
    fn matmul_kernel(a: &[Self], b: &[Self], rows: usize, inner: usize, cols: usize) -> Vec<Self> {
        let mut out = vec![Self::zero(); rows * cols];
        for i in 0..rows {
            for l in 0..inner {
                let x = &a[i * inner + l];
                if x.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let y = &b[l * cols + j];
                    if y.is_zero() {
                        continue;
                    }
                    let idx = i * cols + j;
                    out[idx] = out[idx].clone() + x.clone() * y.clone();
                }
            }
        }
        out
    }

    /// Pivot preference in elimination: larger modulus by default.
    fn better_pivot(&self, other: &Self) -> bool {
        self.cmp_modulus(other).is_gt()
    }

    fn cmp_modulus(&self, other: &Self) -> Ordering {
        self.norm_sqr()
            .partial_cmp(&other.norm_sqr())
            .unwrap_or(Ordering::Equal)
    }
}

/// Backend tag, mostly for reporting and CLI selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Float,
    Exact,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Float => "float",
            Backend::Exact => "exact",
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "float" | "approx" => Ok(Backend::Float),
            "exact" | "rational" => Ok(Backend::Exact),
            other => Err(format!("unknown backend `{other}` (expected float|exact)")),
        }
    }
}

impl Scalar for ApproxC {
    type Real = f64;
    const EXACT: bool = false;
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(num as f64 / den as f64, 0.0)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn norm_sqr(&self) -> f64 {
        Complex::norm_sqr(self)
    }
    fn real_to_f64(r: &f64) -> f64 {
        *r
    }
    fn to_approx(&self) -> ApproxC {
        *self
    }
    fn part_strings(&self) -> [String; 2] {
        [self.re.to_string(), self.im.to_string()]
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
}

impl Scalar for ExactC {
    type Real = BigRational;
    const EXACT: bool = true;
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
    fn real_to_f64(r: &BigRational) -> f64 {
        rational_to_f64(r)
    }
    fn to_approx(&self) -> ApproxC {
        Complex::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
    fn part_strings(&self) -> [String; 2] {
        [self.re.to_string(), self.im.to_string()]
    }

    /// Any nonzero pivot is exact, so prefer the one with the fewest bits to
    /// limit coefficient growth.
    fn better_pivot(&self, other: &Self) -> bool {
        let bits = |z: &ExactC| z.re.numer().bits() + z.re.denom().bits() + z.im.numer().bits() + z.im.denom().bits();
        bits(self) < bits(other)
    }

    /// Clears denominators per row of `a` and per column of `b`, so each
    /// entry costs integer products and a single reduction.
    fn matmul_kernel(a: &[Self], b: &[Self], rows: usize, inner: usize, cols: usize) -> Vec<Self> {
        let lcm_of = |it: &mut dyn Iterator<Item = &ExactC>| {
            it.fold(BigInt::one(), |d, z| d.lcm(z.re.denom()).lcm(z.im.denom()))
        };
        let scaled = |z: &ExactC, d: &BigInt| {
            (
                z.re.numer() * (d / z.re.denom()),
                z.im.numer() * (d / z.im.denom()),
            )
        };
        let row_den: Vec<BigInt> = (0..rows).map(|i| lcm_of(&mut a[i * inner..(i + 1) * inner].iter())).collect();
        let col_den: Vec<BigInt> = (0..cols).map(|j| lcm_of(&mut (0..inner).map(|l| &b[l * cols + j]))).collect();
        let an: Vec<(BigInt, BigInt)> = (0..rows * inner).map(|t| scaled(&a[t], &row_den[t / inner])).collect();
        let bn: Vec<(BigInt, BigInt)> = (0..inner * cols).map(|t| scaled(&b[t], &col_den[t % cols])).collect();
        let mut out = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let mut re = BigInt::zero();
                let mut im = BigInt::zero();
                for l in 0..inner {
                    let (xr, xi) = &an[i * inner + l];
                    let (yr, yi) = &bn[l * cols + j];
                    if !xr.is_zero() {
                        re += xr * yr;
                        im += xr * yi;
                    }
                    if !xi.is_zero() {
                        re -= xi * yi;
                        im += xi * yr;
                    }
                }
                let den = &row_den[i] * &col_den[j];
                out.push(Complex::new(BigRational::new(re, den.clone()), BigRational::new(im, den)));
            }
        }
        out
    }
}

/// Nearest-ish `f64` for a rational whose parts may exceed the `f64` range.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // scale both parts down to avoid inf/inf
    let num_bits = r.numer().bits() as i64;
    let den_bits = r.denom().bits() as i64;
    let shift_n = (num_bits - 900).max(0) as usize;
    let shift_d = (den_bits - 900).max(0) as usize;
    let n = (r.numer().abs() >> shift_n).to_f64().unwrap_or(f64::MAX);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(f64::MAX);
    let mag = n / d * 2f64.powi(shift_n as i32 - shift_d as i32);
    if r.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Exact rational from the binary value of an `f64`.
pub fn f64_to_rational(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}
