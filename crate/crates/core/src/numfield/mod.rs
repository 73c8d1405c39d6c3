//! Scalar fields and the dense matrix type.
//!
//! Every algorithm in the crate is generic over [`Scalar`], so the rational
//! backend [`ExactC`] runs the same code paths as [`ApproxC`] and serves as an
//! exact oracle for it.

mod mat;
mod scalar;
mod tolerance;

pub use mat::{approx_eq, residual, Mat};
pub use scalar::{f64_to_rational, rational_to_f64, ApproxC, Backend, ExactC, Scalar};
pub use tolerance::{Tolerance, DEFAULT_EQ_REL};
