//! Concrete brackets and checks: the Euler vorticity bracket, the
//! Lie–Poisson bracket of vector fields (EPDiff), and the reduction to
//! divergence-free fields through stream functions.
//!
//! Orientation: `ε^{12} = +1` unless a check is asked to flip it. Stream
//! functions give fields `X = (∂_y φ, −∂_x φ)`.

mod brackets;
mod stream;

pub use brackets::{epdiff_bracket, epdiff_evolution, epdiff_expected, euler_bracket, BracketMetadata, NamedBracket};
pub use stream::{
    divfree_commutator, field, lie_poisson_from_structure, reduction_consistency_check, vector_field_jacobi,
    CommutatorResult, PolyStreamFunction, ReductionReport, VectorField,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("bracket {name} fails validation: {reason}")]
    Invalid { name: String, reason: String },
    #[error("unsupported dimension {0}")]
    Dimension(usize),
}
