use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::diffalg::{int, monomial_factors, write_signed_term, Degree, DiffPoly, JetVar, MultiIndex, Rational, Space};

/// The two formal alphabets: `λ` and `μ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    Lambda,
    Mu,
}

/// A monomial `λ^I μ^J`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LambdaMono {
    pub lambda: MultiIndex,
    pub mu: MultiIndex,
}

impl LambdaMono {
    pub fn one(dim: usize) -> Self {
        LambdaMono {
            lambda: MultiIndex::zero(dim),
            mu: MultiIndex::zero(dim),
        }
    }

    pub fn lambda(index: MultiIndex) -> Self {
        LambdaMono {
            lambda: index,
            mu: MultiIndex::zero(index.dim()),
        }
    }

    pub fn degree(&self) -> u32 {
        self.lambda.order() + self.mu.order()
    }

    fn raised(&self, a: Alphabet, k: usize) -> Self {
        let mut out = *self;
        match a {
            Alphabet::Lambda => out.lambda = out.lambda.raised(k),
            Alphabet::Mu => out.mu = out.mu.raised(k),
        }
        out
    }

    fn times(&self, other: &LambdaMono) -> Self {
        LambdaMono {
            lambda: self.lambda + other.lambda,
            mu: self.mu + other.mu,
        }
    }
}

impl fmt::Debug for LambdaMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}m{}", self.lambda, self.mu)
    }
}

/// The formal variable a bracket is taken at: `λ`, `μ` or `λ+μ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Shift {
    lambda: bool,
    mu: bool,
}

impl Shift {
    pub const LAMBDA: Shift = Shift {
        lambda: true,
        mu: false,
    };
    pub const MU: Shift = Shift {
        lambda: false,
        mu: true,
    };
    pub const LAMBDA_PLUS_MU: Shift = Shift { lambda: true, mu: true };

    fn alphabets(self) -> impl Iterator<Item = Alphabet> {
        [self.lambda.then_some(Alphabet::Lambda), self.mu.then_some(Alphabet::Mu)]
            .into_iter()
            .flatten()
    }
}

/// An element of `Q[λ, μ] ⊗ A`: a map from λ/μ monomials to differential
/// polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LambdaPoly {
    space: Space,
    terms: BTreeMap<LambdaMono, DiffPoly>,
}

impl LambdaPoly {
    pub fn zero(space: Space) -> Self {
        LambdaPoly {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_diffpoly(p: DiffPoly) -> Self {
        let space = p.space();
        LambdaPoly::monomial(LambdaMono::one(space.dim()), p)
    }

    pub fn monomial(key: LambdaMono, p: DiffPoly) -> Self {
        let mut out = LambdaPoly::zero(p.space());
        out.add_term(key, p);
        out
    }

    /// The single variable `λ_k` (or `μ_k`), 0-based.
    pub fn var(space: Space, a: Alphabet, k: usize) -> Self {
        let key = LambdaMono::one(space.dim()).raised(a, k);
        LambdaPoly::monomial(key, DiffPoly::one(space))
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LambdaMono, &DiffPoly)> {
        self.terms.iter()
    }

    pub fn get(&self, key: &LambdaMono) -> Option<&DiffPoly> {
        self.terms.get(key)
    }

    /// Total number of scalar terms over all λ-monomials.
    pub fn term_count(&self) -> usize {
        self.terms.values().map(|p| p.len()).sum()
    }

    pub fn add_term(&mut self, key: LambdaMono, p: DiffPoly) {
        assert_eq!(self.space, p.space(), "dimension mismatch");
        if p.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(p);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &p;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &LambdaPoly) {
        for (k, p) in &other.terms {
            self.add_term(*k, p.clone());
        }
    }

    pub fn scaled(&self, c: &Rational) -> LambdaPoly {
        let mut out = LambdaPoly::zero(self.space);
        if c.is_zero() {
            return out;
        }
        for (k, p) in &self.terms {
            out.terms.insert(*k, p.scaled(c));
        }
        out
    }

    pub fn mul_diffpoly(&self, p: &DiffPoly) -> LambdaPoly {
        let mut out = LambdaPoly::zero(self.space);
        for (k, q) in &self.terms {
            out.add_term(*k, q * p);
        }
        out
    }

    pub fn map_coefficients<F>(&self, f: F) -> LambdaPoly
    where
        F: Fn(&DiffPoly) -> DiffPoly,
    {
        let mut out = LambdaPoly::zero(self.space);
        for (k, q) in &self.terms {
            out.add_term(*k, f(q));
        }
        out
    }

    pub fn total_derivative(&self, k: usize) -> LambdaPoly {
        self.map_coefficients(|p| p.total_derivative(k))
    }

    pub fn derivative_by(&self, index: &MultiIndex) -> LambdaPoly {
        self.map_coefficients(|p| p.derivative_by(index))
    }

    pub fn partial_jet(&self, v: &JetVar) -> LambdaPoly {
        self.map_coefficients(|p| p.partial_jet(v))
    }

    pub fn variables(&self) -> BTreeSet<JetVar> {
        let mut out = BTreeSet::new();
        for p in self.terms.values() {
            out.extend(p.variables());
        }
        out
    }

    /// Multiplies by the `k`-th component of the shift variable.
    pub fn mul_shift_var(&self, shift: Shift, k: usize) -> LambdaPoly {
        let mut out = LambdaPoly::zero(self.space);
        for a in shift.alphabets() {
            for (key, p) in &self.terms {
                out.add_term(key.raised(a, k), p.clone());
            }
        }
        out
    }

    /// Multiplies by `x^I` where `x` is the shift variable.
    pub fn mul_shift_pow(&self, shift: Shift, index: &MultiIndex) -> LambdaPoly {
        let mut out = self.clone();
        for k in 0..index.dim() {
            for _ in 0..index.get(k) {
                out = out.mul_shift_var(shift, k);
            }
        }
        out
    }

    /// Substitutes `λ = μ = 0`.
    pub fn eval_zero(&self) -> DiffPoly {
        let one = LambdaMono::one(self.space.dim());
        self.terms
            .get(&one)
            .cloned()
            .unwrap_or_else(|| DiffPoly::zero(self.space))
    }

    /// Renames alphabet `from` to `to`. The target alphabet must be absent.
    pub fn rename(&self, from: Alphabet, to: Alphabet) -> LambdaPoly {
        if from == to {
            return self.clone();
        }
        let zero = MultiIndex::zero(self.space.dim());
        let mut out = LambdaPoly::zero(self.space);
        for (k, p) in &self.terms {
            let key = match (from, to) {
                (Alphabet::Lambda, Alphabet::Mu) => {
                    assert!(k.mu.is_zero(), "rename target alphabet is in use");
                    LambdaMono {
                        lambda: zero,
                        mu: k.lambda,
                    }
                }
                _ => {
                    assert!(k.lambda.is_zero(), "rename target alphabet is in use");
                    LambdaMono { lambda: k.mu, mu: zero }
                }
            };
            out.add_term(key, p.clone());
        }
        out
    }

    /// Splits off the `λ` alphabet: `self = Σ_S λ^S · c_S`, with each `c_S`
    /// free of `λ`.
    pub fn split_lambda(&self) -> BTreeMap<MultiIndex, LambdaPoly> {
        let zero = MultiIndex::zero(self.space.dim());
        let mut out: BTreeMap<MultiIndex, LambdaPoly> = BTreeMap::new();
        for (k, p) in &self.terms {
            out.entry(k.lambda)
                .or_insert_with(|| LambdaPoly::zero(self.space))
                .add_term(LambdaMono { lambda: zero, mu: k.mu }, p.clone());
        }
        out
    }

    /// Degree counting `|I| + |J|` for `λ^I μ^J` plus the jet degree.
    pub fn degree(&self) -> Degree {
        let mut found: Option<u32> = None;
        for (k, p) in &self.terms {
            let d = match p.degree() {
                Degree::Homogeneous(d) => d + k.degree(),
                Degree::Inhomogeneous => return Degree::Inhomogeneous,
                Degree::Zero => continue,
            };
            match found {
                None => found = Some(d),
                Some(e) if e != d => return Degree::Inhomogeneous,
                _ => {}
            }
        }
        found.map_or(Degree::Zero, Degree::Homogeneous)
    }

    pub fn substitute_symbols<F>(&self, subst: F) -> LambdaPoly
    where
        F: Fn(crate::diffalg::FuncSymbol) -> Option<crate::diffalg::Coefficient>,
    {
        self.map_coefficients(|p| p.substitute_symbols(&subst))
    }

    pub fn max_symbol_order(&self) -> u16 {
        self.terms.values().map(|p| p.max_symbol_order()).max().unwrap_or(0)
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> LambdaPolyDisplay<'a> {
        LambdaPolyDisplay { poly: self, names }
    }
}

/// `(x+∂)^S` applied to a fixed target, with cached derivatives of the target.
pub(crate) struct ShiftedTarget<'a> {
    target: &'a LambdaPoly,
    shift: Shift,
    derivs: HashMap<MultiIndex, LambdaPoly>,
}

impl<'a> ShiftedTarget<'a> {
    pub(crate) fn new(target: &'a LambdaPoly, shift: Shift) -> Self {
        ShiftedTarget {
            target,
            shift,
            derivs: HashMap::new(),
        }
    }

    fn derivative(&mut self, j: MultiIndex) -> LambdaPoly {
        if let Some(d) = self.derivs.get(&j) {
            return d.clone();
        }
        let d = match (0..j.dim()).find(|&k| j.get(k) > 0) {
            None => self.target.clone(),
            Some(k) => {
                let prev = self.derivative(j.lowered(k).unwrap());
                prev.total_derivative(k)
            }
        };
        self.derivs.insert(j, d.clone());
        d
    }

    /// `(x+∂)^S target = Σ_{J<=S} C(S,J) x^{S-J} ∂^J target`.
    pub(crate) fn power(&mut self, s: &MultiIndex) -> LambdaPoly {
        let mut out = LambdaPoly::zero(self.target.space);
        for j in s.sub_indices() {
            let d = self.derivative(j);
            if d.is_zero() {
                continue;
            }
            let rest = s.checked_sub(&j).unwrap();
            let c = int(s.binomial(&j) as i64);
            out.add_assign(&d.mul_shift_pow(self.shift, &rest).scaled(&c));
        }
        out
    }
}

/// `Σ_S b_S · (sign·(x+∂))^S target`, with `∂` acting on `target` only.
pub fn apply_shifted(
    symbol: &BTreeMap<MultiIndex, LambdaPoly>,
    shift: Shift,
    negate: bool,
    target: &LambdaPoly,
) -> LambdaPoly {
    let mut out = LambdaPoly::zero(target.space);
    if target.is_zero() {
        return out;
    }
    let mut shifted = ShiftedTarget::new(target, shift);
    for (s, b) in symbol {
        if b.is_zero() {
            continue;
        }
        let mut term = &shifted.power(s) * b;
        if negate && s.order() % 2 == 1 {
            term = term.scaled(&-Rational::one());
        }
        out.add_assign(&term);
    }
    out
}

/// For a bracket-like `p = Σ_I λ^I B_I`, computes `Σ_I B_I (±λ±∂)^I target`
/// with `∂` acting on `target` only (the reading rule of the left Leibniz
/// property).
pub fn lambda_shift_apply(p: &LambdaPoly, target: &DiffPoly, negate: bool) -> LambdaPoly {
    apply_shifted(
        &p.split_lambda(),
        Shift::LAMBDA,
        negate,
        &LambdaPoly::from_diffpoly(target.clone()),
    )
}

impl Add for &LambdaPoly {
    type Output = LambdaPoly;

    fn add(self, rhs: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &LambdaPoly {
    type Output = LambdaPoly;

    fn sub(self, rhs: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        out.add_assign(&rhs.scaled(&-Rational::one()));
        out
    }
}

impl Neg for &LambdaPoly {
    type Output = LambdaPoly;

    fn neg(self) -> LambdaPoly {
        self.scaled(&-Rational::one())
    }
}

impl Mul for &LambdaPoly {
    type Output = LambdaPoly;

    fn mul(self, rhs: &LambdaPoly) -> LambdaPoly {
        let mut out = LambdaPoly::zero(self.space);
        for (ka, pa) in &self.terms {
            for (kb, pb) in &rhs.terms {
                out.add_term(ka.times(kb), pa * pb);
            }
        }
        out
    }
}

fn lambda_factors(key: &LambdaMono) -> Vec<String> {
    let mut out = Vec::new();
    for (name, idx) in [("l", key.lambda), ("m", key.mu)] {
        for k in 0..idx.dim() {
            match idx.get(k) {
                0 => {}
                1 => out.push(format!("{name}{}", k + 1)),
                e => out.push(format!("{name}{}^{e}", k + 1)),
            }
        }
    }
    out
}

pub struct LambdaPolyDisplay<'a> {
    poly: &'a LambdaPoly,
    names: &'a [String],
}

impl fmt::Display for LambdaPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (key, p) in &self.poly.terms {
            let lf = lambda_factors(key);
            for (m, c) in p.terms() {
                let mut factors = monomial_factors(m, self.names);
                factors.extend(lf.iter().cloned());
                write_signed_term(f, first, c, &factors)?;
                first = false;
            }
        }
        Ok(())
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::diffalg::default_generator_names(self.space.gens());
        write!(f, "{}", self.display_with(&names))
    }
}

impl fmt::Debug for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
