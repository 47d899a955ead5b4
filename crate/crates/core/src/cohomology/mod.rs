//! Classification of `(n, λ, μ)`, the `Λ` constraint matrix, exact dimensions
//! of `H¹(sl(2), D_{λ,μ})` and of its `aff(1)`-relative version, explicit
//! cocycle bases, normalization and triviality certificates.
//!
//! Every 1-cocycle is cohomologous to one with constant coefficients of the form
//! `X_h ↦ Σ B_α h′ F^(α) + Σ C_β h″ F^(β)`. When `δ = k ∈ ℕ` only `|α| = k`
//! and `|β| = k−1` survive, subject to `Λ·B = 0`, while coboundaries of
//! level-`k` operators move `C` inside the image of `Λ`. Hence
//! `dim H¹ = (N_k − rank Λ) + (N_{k−1} − rank Λ)`, and the relative space is
//! the `C` part alone.

mod classify;
mod cocycle;
mod lambda;
mod report;

pub use crate::params::ParamSpace;
pub use classify::{classify, integer_shift, CaseTag};
pub use cocycle::{
    basis, coboundary_coefficients, is_trivial, normalize_cocycle, realize, Coefficients,
    CocycleSymbolic, Triviality,
};
pub use lambda::{build_lambda_matrix, lambda_entry, LambdaMatrix};
pub use report::{compute, CohomologyReport};
