//! Exact rational arithmetic and linear algebra.
//!
//! Elimination is fraction-free: every row is scaled to a primitive integer
//! vector, rows are combined with integer multipliers and divided by their
//! content after each step. Rational reduced echelon form is only produced
//! when a basis or a solution is extracted.

mod elimination;
mod matrix;
mod rational;

pub use elimination::{kernel_basis, left_kernel_basis, rank, solve_or_witness, Echelon, Solution};
pub use matrix::QMatrix;
pub use rational::{format_rational, parse_rational, rational_serde, rational_vec_serde, Rational};
