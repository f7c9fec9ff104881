//! Metric adjusted skew information, smoothed skew information, and the
//! spectral sequences that govern asymptotic conversion rates between pure
//! states under covariant operations.

pub mod asymptotics;
pub mod channels;
pub mod cli;
pub mod error;
pub mod monotone;
pub mod operator;
pub mod random;
pub mod sequences;
pub mod reference;
pub mod skew;
pub mod smoothing;
pub mod variance_bound;

pub use error::{Error, Result};
pub use monotone::{MonotoneFunction, MonotoneTag};
pub use operator::{CMatrix, DensityMatrix, HermitianOperator};
pub use skew::{qfi, skew_info, SkewInfoResult};
