use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::poly::{apply_shifted, Alphabet, LambdaPoly, Shift, ShiftedTarget};
use super::LambdaError;
use crate::diffalg::{Degree, DiffPoly, MultiIndex, Rational, Space};

/// λ-brackets between generators: entry `(i, j)` is `{u^i_λ u^j}`.
#[derive(Clone, PartialEq, Eq)]
pub struct BracketTable {
    space: Space,
    entries: Vec<LambdaPoly>,
}

impl BracketTable {
    pub fn zero(space: Space) -> Self {
        let n = space.gens();
        BracketTable {
            space,
            entries: vec![LambdaPoly::zero(space); n * n],
        }
    }

    /// Builds a table from an `N×N` row-major list of entries.
    pub fn from_entries(space: Space, entries: Vec<LambdaPoly>) -> Result<Self, LambdaError> {
        let n = space.gens();
        if entries.len() != n * n {
            return Err(LambdaError::EntryCount {
                expected: n * n,
                found: entries.len(),
            });
        }
        let mut table = BracketTable::zero(space);
        for (idx, e) in entries.into_iter().enumerate() {
            table.set(idx / n, idx % n, e)?;
        }
        Ok(table)
    }

    /// A scalar (single generator) table.
    pub fn scalar(entry: LambdaPoly) -> Result<Self, LambdaError> {
        let space = entry.space();
        if space.gens() != 1 {
            return Err(LambdaError::NotScalar(space.gens()));
        }
        BracketTable::from_entries(space, vec![entry])
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn gens(&self) -> usize {
        self.space.gens()
    }

    pub fn entry(&self, i: usize, j: usize) -> &LambdaPoly {
        &self.entries[i * self.gens() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: LambdaPoly) -> Result<(), LambdaError> {
        if e.space() != self.space {
            return Err(LambdaError::SpaceMismatch);
        }
        if e.terms().any(|(k, _)| !k.mu.is_zero()) {
            return Err(LambdaError::SecondAlphabet);
        }
        let n = self.gens();
        self.entries[i * n + j] = e;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Common degree of all nonzero entries.
    pub fn degree(&self) -> Degree {
        let mut found: Option<u32> = None;
        for e in &self.entries {
            match e.degree() {
                Degree::Zero => {}
                Degree::Inhomogeneous => return Degree::Inhomogeneous,
                Degree::Homogeneous(d) => match found {
                    None => found = Some(d),
                    Some(f) if f != d => return Degree::Inhomogeneous,
                    _ => {}
                },
            }
        }
        found.map_or(Degree::Zero, Degree::Homogeneous)
    }

    pub fn add(&self, other: &BracketTable) -> BracketTable {
        assert_eq!(self.space, other.space, "dimension mismatch");
        BracketTable {
            space: self.space,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn map_entries<F>(&self, f: F) -> BracketTable
    where
        F: Fn(&LambdaPoly) -> LambdaPoly,
    {
        BracketTable {
            space: self.space,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Generator `u^i` as a polynomial.
    pub fn generator(&self, i: usize) -> DiffPoly {
        DiffPoly::generator(self.space, i)
    }

    /// The λ-bracket `{f_x g}` of arbitrary elements at shift variable `x`.
    ///
    /// `f` and `g` may carry λ/μ factors of their own; these behave as
    /// scalars. Evaluates
    /// `Σ ∂g/∂u^j_M (x+∂)^M {u^i_{x+∂} u^j}_→ (−x−∂)^L ∂f/∂u^i_L`
    /// right to left.
    pub fn bracket(&self, f: &LambdaPoly, g: &LambdaPoly, shift: Shift) -> LambdaPoly {
        let space = self.space;
        let n = self.gens();
        let mut h: Vec<LambdaPoly> = vec![LambdaPoly::zero(space); n];
        for v in f.variables() {
            let df = f.partial_jet(&v);
            if df.is_zero() {
                continue;
            }
            let mut st = ShiftedTarget::new(&df, shift);
            let mut term = st.power(&v.index);
            if v.index.order() % 2 == 1 {
                term = term.scaled(&-Rational::one());
            }
            h[v.generator as usize].add_assign(&term);
        }

        let symbols: Vec<BTreeMap<MultiIndex, LambdaPoly>> = self.entries.iter().map(|e| e.split_lambda()).collect();

        let gvars = g.variables();
        let mut needed = vec![false; n];
        for v in &gvars {
            needed[v.generator as usize] = true;
        }
        let mut k: Vec<LambdaPoly> = vec![LambdaPoly::zero(space); n];
        for (j, kj) in k.iter_mut().enumerate() {
            if !needed[j] {
                continue;
            }
            for (i, hi) in h.iter().enumerate() {
                if hi.is_zero() {
                    continue;
                }
                kj.add_assign(&apply_shifted(&symbols[i * n + j], shift, false, hi));
            }
        }

        let mut shifted: Vec<ShiftedTarget<'_>> = k.iter().map(|kj| ShiftedTarget::new(kj, shift)).collect();
        let mut out = LambdaPoly::zero(space);
        for v in &gvars {
            let j = v.generator as usize;
            if k[j].is_zero() {
                continue;
            }
            let dg = g.partial_jet(v);
            if dg.is_zero() {
                continue;
            }
            let p = shifted[j].power(&v.index);
            out.add_assign(&(&dg * &p));
        }
        out
    }

    /// `{f_λ g}` for differential polynomials.
    pub fn master_formula(&self, f: &DiffPoly, g: &DiffPoly) -> LambdaPoly {
        self.bracket(
            &LambdaPoly::from_diffpoly(f.clone()),
            &LambdaPoly::from_diffpoly(g.clone()),
            Shift::LAMBDA,
        )
    }

    /// Evolution right-hand sides `{h_λ u^k}|_{λ=0}`, one per generator.
    /// `h` is used as given; no integration by parts is applied.
    pub fn hamiltonian_flow(&self, h: &DiffPoly) -> Vec<DiffPoly> {
        (0..self.gens())
            .map(|k| self.master_formula(h, &self.generator(k)).eval_zero())
            .collect()
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> BracketTableDisplay<'a> {
        BracketTableDisplay { table: self, names }
    }
}

impl fmt::Debug for BracketTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::diffalg::default_generator_names(self.gens());
        write!(f, "{}", self.display_with(&names))
    }
}

pub struct BracketTableDisplay<'a> {
    table: &'a BracketTable,
    names: &'a [String],
}

impl fmt::Display for BracketTableDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.table.gens();
        for i in 0..n {
            for j in 0..n {
                writeln!(
                    f,
                    "{{{}_l {}}} = {}",
                    self.names[i],
                    self.names[j],
                    self.table.entry(i, j).display_with(self.names)
                )?;
            }
        }
        Ok(())
    }
}

/// The formal adjoint `Σ_I B_I λ^I ↦ −Σ_I (−λ−∂)^I B_I`, with `∂` acting on
/// the coefficients `B_I`. Any `μ` factors ride along as scalars.
pub fn skew_adjoint(p: &LambdaPoly) -> LambdaPoly {
    let mut out = LambdaPoly::zero(p.space());
    for (s, b) in p.split_lambda() {
        let mut st = ShiftedTarget::new(&b, Shift::LAMBDA);
        let mut term = st.power(&s);
        if s.order() % 2 == 0 {
            term = term.scaled(&-Rational::one());
        }
        out.add_assign(&term);
    }
    out
}

/// Moves an entry written in `λ` to the `μ` alphabet.
pub(crate) fn in_mu(p: &LambdaPoly) -> LambdaPoly {
    p.rename(Alphabet::Lambda, Alphabet::Mu)
}
