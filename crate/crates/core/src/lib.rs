//! Finite-horizon laboratory for weighted backward shifts.

pub mod counterexamples;
pub mod density;
pub mod dsl;
pub mod error;
pub mod family;
pub mod io;
pub mod numeric;
pub mod recurrence;
pub mod report;
pub mod shift;
pub mod weights;

pub use error::{Error, Result};
