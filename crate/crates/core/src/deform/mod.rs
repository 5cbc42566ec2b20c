//! Dispersive deformations of scalar λ-brackets.
//!
//! The pipeline generates a homogeneous ansatz, imposes skewsymmetry, turns
//! the order-ε Jacobi condition into a linear system over the unknown
//! coefficient functions, solves it exactly and compares the survivors with
//! the image of Miura transformations.

mod ansatz;
mod coboundary;
mod matching;
mod pipeline;
mod system;

pub use ansatz::{generate_ansatz, impose_skewsymmetry, unknown_label, Ansatz, MiuraTransform, Shape, Unknown};
pub use coboundary::{coboundary_direct, coboundary_formula, trivial_coboundary};
pub use matching::{match_trivial, MatchOutcome, Verdict};
pub use pipeline::{run, validate_base, PipelineOptions, PipelineReport, StageTiming};
pub use system::{CoefficientKey, ConstraintSystem, Equation, Ranking, Solution};

use crate::lambda::{jacobi_linearized, BracketTable, LambdaMono, LambdaPoly};
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeformError {
    #[error("ansatz generation needs a scalar bracket, found {0} generators")]
    NotScalar(usize),
    #[error("deformation degree must be at least 3, got {0}")]
    InvalidDegree(u32),
    #[error("inconsistent skewsymmetry relations: {0}")]
    InconsistentSkew(String),
    #[error("coefficient is not linear in the unknowns: {0}")]
    NotLinear(String),
    #[error("base bracket is degenerate: {0}")]
    DegenerateBase(String),
    #[error("Miura transform of order {0} is not of the second kind")]
    NotSecondKind(u32),
    #[error("coboundary routes disagree")]
    CoboundaryMismatch,
    #[error("prolongation did not stabilise up to derivative order {bound}")]
    ProlongationBound { bound: u16 },
}

/// Coefficients of `p` keyed by `(λ/μ monomial, jet monomial)`, each a linear
/// form in the unknowns. A nonzero constant part is an error.
pub(crate) fn extract_equations(
    p: &LambdaPoly,
    exec: Execution,
) -> Result<Vec<(CoefficientKey, crate::diffalg::LinearForm)>, DeformError> {
    let terms: Vec<(&LambdaMono, &crate::diffalg::DiffPoly)> = p.terms().collect();
    let chunks = par::map(exec, &terms, |(k, c)| {
        let mut out = Vec::new();
        for (jets, coeff) in c.coefficients() {
            match coeff.as_linear() {
                Some((c0, lf)) if num_traits::Zero::is_zero(&c0) => {
                    if !lf.is_zero() {
                        out.push(((**k, jets), lf));
                    }
                }
                _ => return Err(DeformError::NotLinear(format!("{coeff}"))),
            }
        }
        Ok(out)
    });
    let mut all = Vec::new();
    for c in chunks {
        all.extend(c?);
    }
    Ok(all)
}

/// The linear compatibility system of `base + ε·defo`: one equation per
/// coefficient of the order-ε Jacobi defect.
pub fn jacobi_defect_linear(
    base: &BracketTable,
    defo: &Ansatz,
    exec: Execution,
) -> Result<ConstraintSystem, DeformError> {
    let mut sys = ConstraintSystem::new(defo.ranking());
    if defo.entry.is_zero() {
        return Ok(sys);
    }
    let defect = jacobi_linearized(base, &defo.bracket(), exec);
    for (_, d) in defect {
        for (key, form) in extract_equations(&d, exec)? {
            sys.push(Some(key), form);
        }
    }
    Ok(sys)
}
