use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{ApproxC, ExactC, Scalar};
use super::tolerance::Tolerance;
use crate::error::{Error, Result};

/// Dense row-major complex matrix over the scalar field `T`.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "Mat::new",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("ragged rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer entries; panics on ragged input (test and fixture helper).
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| T::from_i64(v)).collect())
                .collect(),
        )
        .expect("rectangular integer matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diag(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { T::zero() })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_approx(&self) -> Mat<ApproxC> {
        self.map(Scalar::to_approx)
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Checked product.
    pub fn matmul(&self, rhs: &Mat<T>) -> Result<Mat<T>> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Mat {
            rows: self.rows,
            cols: rhs.cols,
            data: T::matmul_kernel(&self.data, &rhs.data, self.rows, self.cols, rhs.cols),
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, s: &T) -> Mat<T> {
        self.map(|v| v.clone() * s.clone())
    }

    /// `A^p` for square `A`, with `A^0 = I`.
    pub fn pow(&self, p: usize) -> Mat<T> {
        assert!(self.is_square(), "pow of non-square matrix");
        let mut result = Mat::identity(self.rows);
        let mut base = self.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn frobenius_norm(&self) -> f64 {
        if T::EXACT {
            // sum exactly, convert once
            let total = self
                .data
                .iter()
                .fold(T::zero(), |acc, v| acc + v.clone() * v.conj());
            total.modulus().sqrt()
        } else {
            self.data
                .iter()
                .map(|v| {
                    let m = v.modulus();
                    m * m
                })
                .sum::<f64>()
                .sqrt()
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat<T> {
        let (r0, c0) = (rows.start, cols.start);
        Mat::from_fn(rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Mat<T> {
        Mat::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat<T> {
        Mat::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn hstack(&self, rhs: &Mat<T>) -> Result<Mat<T>> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Mat::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn vstack(&self, rhs: &Mat<T>) -> Result<Mat<T>> {
        if self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                op: "vstack",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Ok(Mat {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn block_diag(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
        let (ra, ca) = a.shape();
        Mat::from_fn(ra + b.rows, ca + b.cols, |i, j| {
            if i < ra && j < ca {
                a.get(i, j).clone()
            } else if i >= ra && j >= ca {
                b.get(i - ra, j - ca).clone()
            } else {
                T::zero()
            }
        })
    }

    /// Inverse by Gauss-Jordan elimination with largest-modulus row pivoting.
    ///
    /// Floating pivots below `n * eps * max|a_ij|` count as zero.
    pub fn inverse(&self) -> Result<Mat<T>> {
        let n = self.require_square()?;
        let mut a = self.clone();
        let mut inv: Mat<T> = Mat::identity(n);
        let floor = if T::EXACT {
            0.0
        } else {
            n.max(1) as f64 * f64::EPSILON * self.max_abs()
        };
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if a.get(r, col).cmp_modulus(a.get(piv, col)).is_gt() {
                    piv = r;
                }
            }
            let p = a.get(piv, col).clone();
            if p.is_zero() || (!T::EXACT && p.modulus() <= floor) {
                return Err(Error::Singular);
            }
            if piv != col {
                a.swap_rows(piv, col);
                inv.swap_rows(piv, col);
            }
            for j in 0..n {
                let v = a.get(col, j).clone() / p.clone();
                a.set(col, j, v);
                let w = inv.get(col, j).clone() / p.clone();
                inv.set(col, j, w);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j).clone() - f.clone() * a.get(col, j).clone();
                    a.set(r, j, v);
                    let w = inv.get(r, j).clone() - f.clone() * inv.get(col, j).clone();
                    inv.set(r, j, w);
                }
            }
        }
        Ok(inv)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl Mat<ExactC> {
    /// Exact matrix from `(numerator, denominator)` real entries.
    pub fn from_ratios(rows: &[&[(i64, i64)]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(p, q)| ExactC::from_ratio(p, q)).collect())
                .collect(),
        )
        .expect("rectangular rational matrix")
    }
}

/// `||A - B||_F <= eq_rel * max(1, ||A||_F, ||B||_F)` for floats; entrywise
/// equality for the exact backend.
pub fn approx_eq<T: Scalar>(a: &Mat<T>, b: &Mat<T>, tol: &Tolerance) -> Result<bool> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            op: "approx_eq",
            left: a.shape(),
            right: b.shape(),
        });
    }
    if T::EXACT {
        return Ok(a == b);
    }
    let diff = (a - b).frobenius_norm();
    let scale = 1f64.max(a.frobenius_norm()).max(b.frobenius_norm());
    Ok(diff <= tol.eq_rel * scale)
}

/// Residual `||A - B||_F` (0 exactly when the exact backend agrees).
pub fn residual<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> f64 {
    (a - b).frobenius_norm()
}

impl<'a, T: Scalar> Mul<&'a Mat<T>> for &'a Mat<T> {
    type Output = Mat<T>;

    /// Panics on a shape mismatch; use [`Mat::matmul`] for the checked form.
    fn mul(self, rhs: &'a Mat<T>) -> Mat<T> {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl<'a, T: Scalar> Add<&'a Mat<T>> for &'a Mat<T> {
    type Output = Mat<T>;

    fn add(self, rhs: &'a Mat<T>) -> Mat<T> {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<'a, T: Scalar> Sub<&'a Mat<T>> for &'a Mat<T> {
    type Output = Mat<T>;

    fn sub(self, rhs: &'a Mat<T>) -> Mat<T> {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Scalar> Neg for &Mat<T> {
    type Output = Mat<T>;

    fn neg(self) -> Mat<T> {
        self.map(|v| -v.clone())
    }
}

impl<T: fmt::Display> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|v| format!("{v}"))
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Mat")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &self.data)
            .finish()
    }
}
