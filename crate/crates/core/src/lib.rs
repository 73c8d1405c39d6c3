//! Generalized inverses of square complex matrices: Moore–Penrose, Drazin,
//! group, core, core-EP, DMP, and the ⟨i,m⟩-core and (j,m)-core inverses.
//!
//! Every algorithm is generic over the scalar field, with a floating backend
//! ([`ApproxC`]) and an exact rational backend ([`ExactC`]).

pub mod batch;
pub mod cli;
pub mod classical;
pub mod corpus;
pub mod error;
pub mod factor;
pub mod fixtures;
pub mod gencore;
pub mod io;
pub mod numfield;
pub mod spectral;
pub mod verify;

pub use classical::AlgorithmChoice;
pub use error::{Error, Result};
pub use gencore::{GenCoreResult, ImCoreParams, JmCoreParams};
pub use numfield::{approx_eq, ApproxC, Backend, ExactC, Mat, Scalar, Tolerance};
pub use spectral::{Field, IndexInfo};
