//! λ-polynomials, bracket tables, the master formula and the PVA axiom checks.

mod axioms;
mod bracket;
mod poly;

pub use axioms::{
    check_all, check_jacobi, check_leibniz, check_sesquilinearity, check_skewsymmetry, jacobi_linearized,
    jacobi_report, jacobi_term, Axiom, AxiomReport, JacobiDefect,
};
pub use bracket::{skew_adjoint, BracketTable, BracketTableDisplay};
pub use poly::{apply_shifted, lambda_shift_apply, Alphabet, LambdaMono, LambdaPoly, Shift};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LambdaError {
    #[error("bracket table needs {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("bracket entry lives in a different space than the table")]
    SpaceMismatch,
    #[error("bracket entries must be written in the λ alphabet only")]
    SecondAlphabet,
    #[error("expected a scalar bracket, found {0} generators")]
    NotScalar(usize),
}
