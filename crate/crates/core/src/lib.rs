//! Sato–Tate convergence-rate statistics for elliptic curves and abelian surfaces.

pub mod arith;
pub mod chars;
pub mod error;
pub mod expr;
pub mod predict;
pub mod stats;
pub mod stgroup;

pub use error::{Error, Result};
pub use stgroup::{ClassPoint, Component, StGroup};
