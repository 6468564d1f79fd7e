//! Certified evaluation, verification and discovery of Euler-type sums.

pub mod combin;
pub mod constants;
pub mod error;
pub mod numeric;
pub mod quad;
pub mod relations;
pub mod series;
pub mod symbolic;

pub use error::{Error, Result};
pub use numeric::{Ball, Precision};
