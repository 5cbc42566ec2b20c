//! Differential polynomials in jet variables.
//!
//! The scalar ring is [`Coefficient`]: rational polynomials in unknown
//! functions of the generators ([`FuncSymbol`]). A [`DiffPoly`] stores each
//! term flat, as a product of jets and function symbols, which keeps
//! multiplication and differentiation simple; [`DiffPoly::coefficients`]
//! gives the grouped view.

mod coeff;
mod multi_index;
mod poly;
mod symbol;

pub use coeff::{int, rat, Coefficient, FuncMonomial, LinearForm, Rational};
pub use multi_index::{MultiIndex, MAX_DIM};
pub(crate) use poly::monomial_factors;
pub use poly::{default_generator_names, Degree, DiffPoly, JetMonomial, JetVar, Monomial, Space};
pub use symbol::{Dependency, FuncSymbol, SymbolId};

pub(crate) use coeff::write_signed_term;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiffAlgError {
    #[error("dimension mismatch: {0:?} vs {1:?}")]
    SpaceMismatch(Space, Space),
    #[error("unsupported number of independent variables: {0} (1..={MAX_DIM})")]
    UnsupportedDimension(usize),
    #[error("unsupported number of generators: {0}")]
    UnsupportedGeneratorCount(usize),
}
