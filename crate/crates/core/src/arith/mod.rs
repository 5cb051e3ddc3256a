//! Exact rational scalars, vectors and matrices.

mod linalg;
mod rational;

pub use linalg::{determinant, solve_linear_system, RatMatrix, RatVector, RowEchelon};
pub(crate) use linalg::{check_dim, determinant_raw, dot, dot_int};
pub use rational::Rational;
