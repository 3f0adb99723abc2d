//! Self-orthogonal algebraic-geometry codes from maximal curves, and the
//! stabilizer quantum code parameters they yield.

pub mod code;
pub mod curve;
pub mod error;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod quantum;
pub mod rr;
pub mod swiss;

pub use error::{Error, Result};
