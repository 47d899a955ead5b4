//! Symbolic calculus for the `sl(2)` action on polynomial-coefficient
//! multilinear differential operators, and the Chevalley–Eilenberg
//! differential in degrees 0 and 1.

mod cochain;
mod operator;
mod poly;
mod sl2;

pub use cochain::{
    closed_form_coboundary, closed_form_coboundary_of, differential0, differential1, Cochain1,
    Cochain2, BASIS_PAIRS,
};
pub use operator::{act_on_operator, act_with_field, lie_derivative, PolyOperator};
pub use poly::Poly;
pub use sl2::{commutator, structure_constants, Sl2Element};
