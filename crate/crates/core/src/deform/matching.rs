//! Deciding whether every compatible deformation is a Miura coboundary.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::ansatz::{Ansatz, MiuraTransform};
use super::coboundary::trivial_coboundary;
use super::system::{ConstraintSystem, Solution};
use super::{extract_equations, DeformError};
use crate::diffalg::{Coefficient, DiffPoly, LinearForm, SymbolId};
use crate::lambda::BracketTable;
use crate::par::Execution;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Trivial,
    Nontrivial,
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Trivial => "trivial",
            Verdict::Nontrivial => "nontrivial",
            Verdict::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct MatchOutcome {
    pub verdict: Verdict,
    /// Miura unknowns in terms of the free deformation parameters, one line
    /// per unknown.
    pub witness: Vec<String>,
    /// A relation among free parameters that no coboundary satisfies.
    pub obstruction: Option<String>,
    pub miura: Option<MiuraTransform>,
    pub combined: Option<Solution>,
}

impl MatchOutcome {
    /// The Miura correction with every unknown replaced by its witness value,
    /// free ones set to zero. `None` unless each unknown is determined
    /// algebraically.
    pub fn witness_correction(&self) -> Option<DiffPoly> {
        let (miura, joint) = (self.miura.as_ref()?, self.combined.as_ref()?);
        let mut subst = BTreeMap::new();
        for u in &miura.unknowns {
            let value = match joint.lowest_pivot.get(&u.symbol) {
                None => Coefficient::zero(),
                Some(0) => {
                    let mut c = Coefficient::zero();
                    for (s, v) in joint.pivots[&u.symbol.at(0)].terms() {
                        c.add_term(std::iter::once(*s).collect(), v.clone());
                    }
                    c
                }
                Some(_) => return None,
            };
            subst.insert(u.symbol.at(0), value);
        }
        Some(miura.f.substitute_symbols(|s| subst.get(&s).cloned()))
    }

    /// Checks the witness independently: its coboundary must equal the
    /// general compatible deformation.
    pub fn verify_witness(&self, base: &BracketTable, ansatz: &Ansatz) -> Result<bool, DeformError> {
        let (Some(f), Some(joint)) = (self.witness_correction(), self.combined.as_ref()) else {
            return Ok(false);
        };
        let general = ansatz.entry.substitute_symbols(joint.substitution());
        let m = MiuraTransform::new(ansatz.degree - 2, f)?;
        Ok(trivial_coboundary(base, &m)?.entry == general)
    }

    fn undetermined() -> Self {
        MatchOutcome {
            verdict: Verdict::Undetermined,
            witness: Vec::new(),
            obstruction: None,
            miura: None,
            combined: None,
        }
    }
}

/// Matches the general solution `solution` of the compatibility system for
/// the skew-reduced ansatz `ansatz` against the coboundaries of `base` by
/// generic Miura corrections of degree `ansatz.degree - 2`.
pub fn match_trivial(
    solution: &Solution,
    ansatz: &Ansatz,
    base: &BracketTable,
    exec: Execution,
) -> Result<MatchOutcome, DeformError> {
    let miura = MiuraTransform::generic(base.space(), ansatz.degree - 2)?;
    let cob = trivial_coboundary(base, &miura)?;

    let mut ranking = solution.system.ranking.shifted(1);
    for (i, u) in ansatz.unknowns.iter().enumerate() {
        if !ranking.contains(u.symbol) {
            ranking.set(u.symbol, 1, i as u32);
        }
    }
    for (i, u) in miura.unknowns.iter().enumerate() {
        ranking.set(u.symbol, 0, i as u32);
    }
    let mut combined = ConstraintSystem::new(ranking.clone());
    for e in &solution.system.equations {
        combined.push(e.key.clone(), e.form.clone());
    }
    for (key, form) in extract_equations(&(&cob.entry - &ansatz.entry), exec)? {
        combined.push(Some(key), form);
    }
    let mut unknowns: BTreeSet<SymbolId> = ansatz.symbols();
    unknowns.extend(miura.unknowns.iter().map(|u| u.symbol));
    let joint = match combined.solve_with(&unknowns, solution.bound) {
        Ok(s) => s,
        Err(DeformError::ProlongationBound { .. }) => return Ok(MatchOutcome::undetermined()),
        Err(e) => return Err(e),
    };

    // Rows led by a deformation symbol carry no Miura unknowns: they are the
    // conditions for being a coboundary and must follow from compatibility.
    let reference = solution.system.solve_at(&ansatz.symbols(), joint.bound + 2);
    let mut obstruction = None;
    for (s, expr) in &joint.pivots {
        if ranking.group(s.base) == 0 {
            continue;
        }
        let mut row = LinearForm::symbol(*s);
        row.add_scaled(expr, &crate::diffalg::int(-1));
        let rest = match reference.reduce(&row) {
            Ok(r) => r,
            Err(DeformError::ProlongationBound { .. }) => return Ok(MatchOutcome::undetermined()),
            Err(e) => return Err(e),
        };
        if !rest.is_zero() {
            obstruction = Some(format!("{rest} = 0"));
            break;
        }
    }

    let mut witness = Vec::new();
    for u in &miura.unknowns {
        match joint.lowest_pivot.get(&u.symbol) {
            Some(&o) => {
                let s = u.symbol.at(o);
                witness.push(format!("{s} = {}", joint.pivots[&s]));
            }
            None => witness.push(format!("{} arbitrary", u.name())),
        }
    }
    let verdict = if obstruction.is_some() {
        Verdict::Nontrivial
    } else {
        Verdict::Trivial
    };
    Ok(MatchOutcome {
        verdict,
        witness,
        obstruction,
        miura: Some(miura),
        combined: Some(joint),
    })
}
