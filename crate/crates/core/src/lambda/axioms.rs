//! Executable checks of the six PVA axioms.
//!
//! Properties (1)–(4) hold for any table once composite brackets go through
//! the master formula; they are checked on sample polynomials to catch
//! implementation errors. Skewsymmetry and Jacobi are genuine conditions on
//! the table.

use std::collections::BTreeMap;
use std::fmt;

use super::bracket::{in_mu, skew_adjoint, BracketTable};
use super::poly::{lambda_shift_apply, LambdaPoly, Shift};
use crate::diffalg::DiffPoly;
use crate::par::{self, Execution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    LeftSesquilinearity,
    RightSesquilinearity,
    RightLeibniz,
    LeftLeibniz,
    Skewsymmetry,
    Jacobi,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::LeftSesquilinearity,
        Axiom::RightSesquilinearity,
        Axiom::RightLeibniz,
        Axiom::LeftLeibniz,
        Axiom::Skewsymmetry,
        Axiom::Jacobi,
    ];

    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Axiom::LeftSesquilinearity => "left sesquilinearity",
            Axiom::RightSesquilinearity => "right sesquilinearity",
            Axiom::RightLeibniz => "right Leibniz rule",
            Axiom::LeftLeibniz => "left Leibniz rule",
            Axiom::Skewsymmetry => "skewsymmetry",
            Axiom::Jacobi => "Jacobi identity",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.number(), self.name())
    }
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn collect(axiom: Axiom, results: Vec<Option<String>>) -> AxiomReport {
    AxiomReport {
        axiom,
        checked: results.len(),
        failures: results.into_iter().flatten().collect(),
    }
}

/// Samples plus every generator of the table.
fn with_generators(table: &BracketTable, samples: &[DiffPoly]) -> Vec<DiffPoly> {
    let mut out: Vec<DiffPoly> = (0..table.gens()).map(|i| table.generator(i)).collect();
    out.extend(samples.iter().cloned());
    out
}

/// Properties (1) `{∂_i f_λ g} = −λ_i {f_λ g}` and
/// (2) `{f_λ ∂_i g} = (∂_i + λ_i){f_λ g}`.
pub fn check_sesquilinearity(table: &BracketTable, samples: &[DiffPoly], exec: Execution) -> [AxiomReport; 2] {
    let elems = with_generators(table, samples);
    let dim = table.space().dim();
    let mut cases = Vec::new();
    for (a, f) in elems.iter().enumerate() {
        for (b, g) in elems.iter().enumerate() {
            for i in 0..dim {
                cases.push((a, b, i, f, g));
            }
        }
    }
    let results = par::map(exec, &cases, |&(a, b, i, f, g)| {
        let base = table.master_formula(f, g);
        let lhs1 = table.master_formula(&f.total_derivative(i), g);
        let rhs1 = -&base.mul_shift_var(Shift::LAMBDA, i);
        let lhs2 = table.master_formula(f, &g.total_derivative(i));
        let rhs2 = &base.total_derivative(i) + &base.mul_shift_var(Shift::LAMBDA, i);
        (
            (lhs1 != rhs1).then(|| format!("samples ({a},{b}), direction {}", i + 1)),
            (lhs2 != rhs2).then(|| format!("samples ({a},{b}), direction {}", i + 1)),
        )
    });
    let (r1, r2): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    [
        collect(Axiom::LeftSesquilinearity, r1),
        collect(Axiom::RightSesquilinearity, r2),
    ]
}

/// Properties (3) `{f_λ gh} = {f_λ g}h + {f_λ h}g` and
/// (4) `{fg_λ h} = {f_{λ+∂} h}_→ g + {g_{λ+∂} h}_→ f`.
pub fn check_leibniz(table: &BracketTable, samples: &[DiffPoly], exec: Execution) -> [AxiomReport; 2] {
    let elems = with_generators(table, samples);
    let n = elems.len();
    let mut cases = Vec::new();
    for a in 0..n {
        for b in 0..n {
            // Third slot cycles so the work stays quadratic in the sample count.
            cases.push((a, b, (a + b + 1) % n));
        }
    }
    let results = par::map(exec, &cases, |&(a, b, c)| {
        let (f, g, h) = (&elems[a], &elems[b], &elems[c]);
        let lhs3 = table.master_formula(f, &(g * h));
        let rhs3 = &table.master_formula(f, g).mul_diffpoly(h) + &table.master_formula(f, h).mul_diffpoly(g);
        let lhs4 = table.master_formula(&(f * g), h);
        let rhs4 = &lambda_shift_apply(&table.master_formula(f, h), g, false)
            + &lambda_shift_apply(&table.master_formula(g, h), f, false);
        (
            (lhs3 != rhs3).then(|| format!("samples ({a},{b},{c})")),
            (lhs4 != rhs4).then(|| format!("samples ({a},{b},{c})")),
        )
    });
    let (r3, r4): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    [collect(Axiom::RightLeibniz, r3), collect(Axiom::LeftLeibniz, r4)]
}

/// Property (5) on generators: `{u^j_λ u^i} = skew_adjoint({u^i_λ u^j})`.
pub fn check_skewsymmetry(table: &BracketTable) -> AxiomReport {
    let n = table.gens();
    let mut results = Vec::new();
    for i in 0..n {
        for j in i..n {
            let ok = skew_adjoint(table.entry(i, j)) == *table.entry(j, i);
            results.push((!ok).then(|| format!("generators ({},{})", i + 1, j + 1)));
        }
    }
    collect(Axiom::Skewsymmetry, results)
}

/// Nonzero Jacobi defects keyed by generator triple, each a polynomial in
/// `λ`, `μ` and jets.
pub type JacobiDefect = BTreeMap<(usize, usize, usize), LambdaPoly>;

/// `{u^i_λ{u^j_μ u^k}_in}_out − {u^j_μ{u^i_λ u^k}_in}_out − {{u^i_λ u^j}_in _{λ+μ} u^k}_out`.
pub fn jacobi_term(outer: &BracketTable, inner: &BracketTable, i: usize, j: usize, k: usize) -> LambdaPoly {
    let ui = LambdaPoly::from_diffpoly(outer.generator(i));
    let uj = LambdaPoly::from_diffpoly(outer.generator(j));
    let uk = LambdaPoly::from_diffpoly(outer.generator(k));
    let t1 = outer.bracket(&ui, &in_mu(inner.entry(j, k)), Shift::LAMBDA);
    let t2 = outer.bracket(&uj, inner.entry(i, k), Shift::MU);
    let t3 = outer.bracket(inner.entry(i, j), &uk, Shift::LAMBDA_PLUS_MU);
    &(&t1 - &t2) - &t3
}

fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// Property (6) for every generator triple. The map is empty iff the Jacobi
/// identity holds.
pub fn check_jacobi(table: &BracketTable, exec: Execution) -> JacobiDefect {
    let ts = triples(table.gens());
    let defects = par::map(exec, &ts, |&(i, j, k)| jacobi_term(table, table, i, j, k));
    ts.into_iter().zip(defects).filter(|(_, d)| !d.is_zero()).collect()
}

/// The part of the Jacobi defect of `base + ε·defo` linear in `ε`.
pub fn jacobi_linearized(base: &BracketTable, defo: &BracketTable, exec: Execution) -> JacobiDefect {
    let ts = triples(base.gens());
    let defects = par::map(exec, &ts, |&(i, j, k)| {
        &jacobi_term(base, defo, i, j, k) + &jacobi_term(defo, base, i, j, k)
    });
    ts.into_iter().zip(defects).filter(|(_, d)| !d.is_zero()).collect()
}

pub fn jacobi_report(defect: &JacobiDefect) -> AxiomReport {
    AxiomReport {
        axiom: Axiom::Jacobi,
        checked: 1,
        failures: defect
            .iter()
            .map(|((i, j, k), d)| {
                format!(
                    "generators ({},{},{}): {} nonzero terms",
                    i + 1,
                    j + 1,
                    k + 1,
                    d.term_count()
                )
            })
            .collect(),
    }
}

/// Runs all six checks.
pub fn check_all(table: &BracketTable, samples: &[DiffPoly], exec: Execution) -> Vec<AxiomReport> {
    let mut out = Vec::with_capacity(6);
    out.extend(check_sesquilinearity(table, samples, exec));
    out.extend(check_leibniz(table, samples, exec));
    out.push(check_skewsymmetry(table));
    out.push(jacobi_report(&check_jacobi(table, exec)));
    out
}
