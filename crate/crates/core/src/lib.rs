pub mod basis;
pub mod cli;
pub mod error;
pub mod error_bounds;
pub mod gallery;
pub mod moments;
pub mod operator;
pub mod polynomial;
pub mod scalar;
pub mod target;
pub mod voronovskaja;

pub use basis::ScaledBernsteinPoly;
pub use error::{Error, Result};
pub use operator::{NodeSequence, RationalBernsteinOperator, WViolation};
pub use scalar::Scalar;
pub use target::TargetFunction;
