//! Differentially private linear feasibility and halfspace learning over
//! exact rationals.

pub mod arith;
pub mod deep_point;
pub mod dp;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod learner;
pub mod optimizer;
pub mod qfun;

pub use error::{Error, Result};
