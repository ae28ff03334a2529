//! Numerical spectral theory of `Delta + M_V` on the round 2-sphere.

pub mod error;
pub mod format;
pub mod linalg;
pub mod numrange;
pub mod operator;
pub mod plot;
pub mod polysphere;
pub mod pseudospec;
pub mod radon;
pub mod sphharm;

pub use error::{Error, Result};
pub use num_complex::Complex64;
