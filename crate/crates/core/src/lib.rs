//! Piecewise affine policies (PAP) for multistage adjustable robust linear
//! programs with covering constraints, plus the baselines (constant and
//! affine policies) and the oracles used to check them.

pub mod domsets;
pub mod error;
pub mod instances;
pub mod lp;
pub mod model;
pub mod policies;
pub mod solve;
pub mod usets;
pub mod verify;

pub use error::{Error, Result};
pub use model::{AroInstance, Matrix, StagePartition};
pub use usets::{SetKind, UncertaintySet};
