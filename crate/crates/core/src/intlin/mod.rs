//! Exact integer linear algebra.

pub mod diophantine;
pub mod matrix;
pub mod oracle;
pub mod snf;

pub use diophantine::{hilbert_basis, nonneg_feasible, HilbertBasis, ModularSlack};
pub use matrix::{ivec, IntMatrix};
pub use snf::{determinant, smith_normal_form, solve_z, SnfResult, ZSolution};
