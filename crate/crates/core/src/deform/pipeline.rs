//! The end-to-end deformation analysis of a scalar degree-2 bracket.

use std::time::Instant;

use super::ansatz::{generate_ansatz, impose_skewsymmetry};
use super::matching::{match_trivial, Verdict};
use super::{jacobi_defect_linear, DeformError};
use crate::diffalg::Degree;
use crate::lambda::{check_jacobi, check_skewsymmetry, BracketTable};
use crate::par::Execution;

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    pub exec: Execution,
    /// Unknown names to keep free during elimination when possible.
    pub prefer_free: Vec<String>,
    /// Trust the base instead of checking it with [`validate_base`].
    pub skip_validation: bool,
}

#[derive(Clone, Debug)]
pub struct StageTiming {
    pub stage: &'static str,
    pub millis: f64,
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub order: u32,
    pub raw_param_count: usize,
    pub skew_param_count: usize,
    pub equation_count: usize,
    pub solution_dim: usize,
    pub free_symbols: Vec<String>,
    /// Unknowns fixed only up to a polynomial in `ω` of the given degree.
    pub partially_determined: Vec<(String, u16)>,
    pub verdict: Verdict,
    pub miura_witness: Vec<String>,
    pub obstruction: Option<String>,
    pub timings: Vec<StageTiming>,
}

/// Rejects bases the analysis does not apply to.
pub fn validate_base(base: &BracketTable) -> Result<(), DeformError> {
    if base.gens() != 1 {
        return Err(DeformError::NotScalar(base.gens()));
    }
    match base.degree() {
        Degree::Homogeneous(2) => {}
        Degree::Zero => return Err(DeformError::DegenerateBase("the bracket is zero".into())),
        d => return Err(DeformError::DegenerateBase(format!("expected degree 2, found {d:?}"))),
    }
    if !check_skewsymmetry(base).passed() {
        return Err(DeformError::DegenerateBase("the bracket is not skewsymmetric".into()));
    }
    if !check_jacobi(base, Execution::Sequential).is_empty() {
        return Err(DeformError::DegenerateBase(
            "the bracket fails the Jacobi identity".into(),
        ));
    }
    Ok(())
}

/// Deformations at order `order` in ε, i.e. of degree `order + 2`.
pub fn run(base: &BracketTable, order: u32, opts: &PipelineOptions) -> Result<PipelineReport, DeformError> {
    if !opts.skip_validation {
        validate_base(base)?;
    } else if base.gens() != 1 {
        return Err(DeformError::NotScalar(base.gens()));
    }
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |stage: &'static str, timings: &mut Vec<StageTiming>| {
        timings.push(StageTiming {
            stage,
            millis: clock.elapsed().as_secs_f64() * 1e3,
        });
        clock = Instant::now();
    };

    let raw = generate_ansatz(order + 2, base.space())?;
    lap("ansatz", &mut timings);
    let (skew, _) = impose_skewsymmetry(&raw)?;
    lap("skewsymmetry", &mut timings);
    let mut system = jacobi_defect_linear(base, &skew, opts.exec)?;
    let keep: Vec<_> = opts
        .prefer_free
        .iter()
        .filter_map(|n| skew.find(n).map(|u| u.symbol))
        .collect();
    system.ranking.prefer_free(&keep);
    lap("jacobi", &mut timings);
    let solution = match system.solve_with(&skew.symbols(), 0) {
        Ok(s) => s,
        Err(DeformError::ProlongationBound { .. }) => {
            lap("solve", &mut timings);
            return Ok(PipelineReport {
                order,
                raw_param_count: raw.raw_count,
                skew_param_count: skew.unknowns.len(),
                equation_count: system.len(),
                solution_dim: 0,
                free_symbols: Vec::new(),
                partially_determined: Vec::new(),
                verdict: Verdict::Undetermined,
                miura_witness: Vec::new(),
                obstruction: None,
                timings,
            });
        }
        Err(e) => return Err(e),
    };
    lap("solve", &mut timings);
    let outcome = match_trivial(&solution, &skew, base, opts.exec)?;
    lap("match", &mut timings);
    Ok(PipelineReport {
        order,
        raw_param_count: raw.raw_count,
        skew_param_count: skew.unknowns.len(),
        equation_count: system.len(),
        solution_dim: solution.dimension(),
        free_symbols: solution.free.iter().map(|b| b.display_name()).collect(),
        partially_determined: solution
            .partially_determined()
            .into_iter()
            .map(|(b, o)| (b.display_name(), o))
            .collect(),
        verdict: outcome.verdict,
        miura_witness: outcome.witness,
        obstruction: outcome.obstruction,
        timings,
    })
}
