use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::coeff::{int, write_signed_term, Coefficient, FuncMonomial, Rational};
use super::multi_index::{MultiIndex, MAX_DIM};
use super::symbol::FuncSymbol;
use super::DiffAlgError;

/// Number of independent variables and number of generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    dim: u8,
    gens: u8,
}

impl Space {
    pub fn new(dim: usize, gens: usize) -> Result<Space, DiffAlgError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(DiffAlgError::UnsupportedDimension(dim));
        }
        if gens == 0 || gens > u8::MAX as usize {
            return Err(DiffAlgError::UnsupportedGeneratorCount(gens));
        }
        Ok(Space {
            dim: dim as u8,
            gens: gens as u8,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn gens(&self) -> usize {
        self.gens as usize
    }

    pub fn zero_index(&self) -> MultiIndex {
        MultiIndex::zero(self.dim())
    }

    pub fn index(&self, entries: &[u32]) -> MultiIndex {
        assert_eq!(entries.len(), self.dim(), "index arity does not match dimension");
        MultiIndex::new(entries)
    }

    pub fn jet_var(&self, generator: usize, entries: &[u32]) -> JetVar {
        assert!(generator < self.gens());
        JetVar {
            generator: generator as u8,
            index: self.index(entries),
        }
    }
}

/// A jet variable `u^generator_index`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVar {
    pub generator: u8,
    pub index: MultiIndex,
}

impl JetVar {
    pub fn degree(&self) -> u32 {
        self.index.order()
    }

    pub fn raised(&self, k: usize) -> JetVar {
        JetVar {
            generator: self.generator,
            index: self.index.raised(k),
        }
    }

    pub fn shifted(&self, by: &MultiIndex) -> JetVar {
        JetVar {
            generator: self.generator,
            index: self.index + *by,
        }
    }
}

impl fmt::Debug for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}_{}", self.generator, self.index)
    }
}

pub type JetMonomial = SmallVec<[JetVar; 4]>;

/// A product of jet variables and function symbols, both kept as sorted
/// multisets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub jets: JetMonomial,
    pub funcs: FuncMonomial,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn degree(&self) -> u32 {
        self.jets.iter().map(|v| v.degree()).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            jets: merge_sorted(&self.jets, &other.jets),
            funcs: merge_sorted(&self.funcs, &other.funcs),
        }
    }

    fn with_jet(&self, v: JetVar) -> Monomial {
        let mut out = self.clone();
        let pos = out.jets.partition_point(|x| *x <= v);
        out.jets.insert(pos, v);
        out
    }
}

fn merge_sorted<A>(a: &SmallVec<A>, b: &SmallVec<A>) -> SmallVec<A>
where
    A: smallvec::Array,
    A::Item: Ord + Copy,
{
    let mut out = SmallVec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Removes one occurrence at `pos` and inserts `v` keeping the order.
fn replace_sorted<A>(xs: &SmallVec<A>, pos: usize, v: Option<A::Item>) -> SmallVec<A>
where
    A: smallvec::Array,
    A::Item: Ord + Copy,
{
    let mut out = xs.clone();
    out.remove(pos);
    if let Some(v) = v {
        let at = out.partition_point(|x| *x <= v);
        out.insert(at, v);
    }
    out
}

/// Homogeneity of a differential polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Homogeneous(u32),
    Inhomogeneous,
}

/// A differential polynomial: a finite sum of `coefficient * monomial`
/// terms in canonical (sorted, zero-free) form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffPoly {
    space: Space,
    terms: BTreeMap<Monomial, Rational>,
}

impl DiffPoly {
    pub fn zero(space: Space) -> Self {
        DiffPoly {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: Space, c: Rational) -> Self {
        let mut out = DiffPoly::zero(space);
        out.add_term(Monomial::one(), c);
        out
    }

    pub fn one(space: Space) -> Self {
        DiffPoly::constant(space, Rational::one())
    }

    pub fn from_int(space: Space, n: i64) -> Self {
        DiffPoly::constant(space, int(n))
    }

    pub fn jet(space: Space, v: JetVar) -> Self {
        assert!((v.generator as usize) < space.gens() && v.index.dim() == space.dim());
        let mut m = Monomial::one();
        m.jets.push(v);
        let mut out = DiffPoly::zero(space);
        out.add_term(m, Rational::one());
        out
    }

    /// The undifferentiated generator `u^g`.
    pub fn generator(space: Space, g: usize) -> Self {
        DiffPoly::jet(space, space.jet_var(g, &vec![0; space.dim()]))
    }

    /// Shorthand for the jet `u^g_I`.
    pub fn jet_of(space: Space, g: usize, index: &[u32]) -> Self {
        DiffPoly::jet(space, space.jet_var(g, index))
    }

    pub fn func(space: Space, s: FuncSymbol) -> Self {
        let mut m = Monomial::one();
        m.funcs.push(s);
        let mut out = DiffPoly::zero(space);
        out.add_term(m, Rational::one());
        out
    }

    pub fn from_coefficient(space: Space, c: &Coefficient) -> Self {
        let mut out = DiffPoly::zero(space);
        for (fm, r) in c.terms() {
            out.add_term(
                Monomial {
                    jets: JetMonomial::new(),
                    funcs: fm.clone(),
                },
                r.clone(),
            );
        }
        out
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &DiffPoly, c: &Rational) {
        assert_eq!(self.space, other.space, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> DiffPoly {
        let mut out = DiffPoly::zero(self.space);
        out.add_assign_scaled(self, c);
        out
    }

    pub fn checked_add(&self, other: &DiffPoly) -> Result<DiffPoly, DiffAlgError> {
        if self.space != other.space {
            return Err(DiffAlgError::SpaceMismatch(self.space, other.space));
        }
        let mut out = self.clone();
        out.add_assign_scaled(other, &Rational::one());
        Ok(out)
    }

    pub fn checked_mul(&self, other: &DiffPoly) -> Result<DiffPoly, DiffAlgError> {
        if self.space != other.space {
            return Err(DiffAlgError::SpaceMismatch(self.space, other.space));
        }
        let mut out = DiffPoly::zero(self.space);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> DiffPoly {
        let mut acc = DiffPoly::one(self.space);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Total derivative `∂_k` (0-based direction). Jets are raised by `e_k`;
    /// a function symbol `F^{(d)}` of generator `g` produces `F^{(d+1)} u^g_{e_k}`.
    pub fn total_derivative(&self, k: usize) -> DiffPoly {
        assert!(k < self.space.dim(), "direction out of range");
        let mut out = DiffPoly::zero(self.space);
        for (m, c) in &self.terms {
            let mut i = 0;
            while i < m.jets.len() {
                let v = m.jets[i];
                let mult = m.jets[i..].iter().take_while(|x| **x == v).count();
                let jets = replace_sorted(&m.jets, i, Some(v.raised(k)));
                out.add_term(
                    Monomial {
                        jets,
                        funcs: m.funcs.clone(),
                    },
                    c * int(mult as i64),
                );
                i += mult;
            }
            let mut i = 0;
            while i < m.funcs.len() {
                let s = m.funcs[i];
                let mult = m.funcs[i..].iter().take_while(|x| **x == s).count();
                if let (Some(ds), Some(g)) = (s.derivative(), s.generator()) {
                    let funcs = replace_sorted(&m.funcs, i, Some(ds));
                    let base = Monomial {
                        jets: m.jets.clone(),
                        funcs,
                    };
                    let v = JetVar {
                        generator: g,
                        index: MultiIndex::unit(self.space.dim(), k),
                    };
                    out.add_term(base.with_jet(v), c * int(mult as i64));
                }
                i += mult;
            }
        }
        out
    }

    /// `∂^I` applied to `self`.
    pub fn derivative_by(&self, index: &MultiIndex) -> DiffPoly {
        let mut out = self.clone();
        for k in 0..self.space.dim() {
            for _ in 0..index.get(k) {
                out = out.total_derivative(k);
            }
        }
        out
    }

    /// Formal partial derivative with respect to one jet variable. For the
    /// order-0 variable of a generator, function symbols of that generator
    /// are differentiated too.
    pub fn partial_jet(&self, v: &JetVar) -> DiffPoly {
        let mut out = DiffPoly::zero(self.space);
        for (m, c) in &self.terms {
            if let Some(pos) = m.jets.iter().position(|x| x == v) {
                let mult = m.jets[pos..].iter().take_while(|x| *x == v).count();
                out.add_term(
                    Monomial {
                        jets: replace_sorted(&m.jets, pos, None),
                        funcs: m.funcs.clone(),
                    },
                    c * int(mult as i64),
                );
            }
            if v.index.is_zero() {
                let mut i = 0;
                while i < m.funcs.len() {
                    let s = m.funcs[i];
                    let mult = m.funcs[i..].iter().take_while(|x| **x == s).count();
                    if s.generator() == Some(v.generator) {
                        let ds = s.derivative().expect("generator-dependent symbol");
                        out.add_term(
                            Monomial {
                                jets: m.jets.clone(),
                                funcs: replace_sorted(&m.funcs, i, Some(ds)),
                            },
                            c * int(mult as i64),
                        );
                    }
                    i += mult;
                }
            }
        }
        out
    }

    /// Every jet variable the polynomial depends on, including the order-0
    /// variable of any generator whose function symbols appear.
    pub fn variables(&self) -> BTreeSet<JetVar> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            out.extend(m.jets.iter().copied());
            for s in &m.funcs {
                if let Some(g) = s.generator() {
                    out.insert(JetVar {
                        generator: g,
                        index: self.space.zero_index(),
                    });
                }
            }
        }
        out
    }

    pub fn degree(&self) -> Degree {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => Degree::Zero,
            Some(d) => {
                if degs.all(|e| e == d) {
                    Degree::Homogeneous(d)
                } else {
                    Degree::Inhomogeneous
                }
            }
        }
    }

    /// Groups terms by jet monomial; each group's scalar is a [`Coefficient`].
    pub fn coefficients(&self) -> BTreeMap<JetMonomial, Coefficient> {
        let mut out: BTreeMap<JetMonomial, Coefficient> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.jets.clone())
                .or_default()
                .add_term(m.funcs.clone(), c.clone());
        }
        out
    }

    /// Replaces function symbols according to `subst`; symbols mapped to
    /// `None` are kept.
    pub fn substitute_symbols<F>(&self, subst: F) -> DiffPoly
    where
        F: Fn(FuncSymbol) -> Option<Coefficient>,
    {
        let mut out = DiffPoly::zero(self.space);
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::constant(self.space, c.clone());
            let mut kept = FuncMonomial::new();
            for s in &m.funcs {
                match subst(*s) {
                    Some(repl) => acc = &acc * &DiffPoly::from_coefficient(self.space, &repl),
                    None => kept.push(*s),
                }
            }
            let rest = Monomial {
                jets: m.jets.clone(),
                funcs: kept,
            };
            for (am, ac) in acc.terms {
                out.add_term(am.mul(&rest), ac);
            }
        }
        out
    }

    /// Keeps only terms whose function-symbol part satisfies `keep`.
    pub fn filter_terms<F>(&self, keep: F) -> DiffPoly
    where
        F: Fn(&Monomial) -> bool,
    {
        DiffPoly {
            space: self.space,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_symbol_order(&self) -> u16 {
        self.terms
            .keys()
            .flat_map(|m| m.funcs.iter().map(|s| s.order))
            .max()
            .unwrap_or(0)
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> DiffPolyDisplay<'a> {
        DiffPolyDisplay { poly: self, names }
    }
}

/// Default generator names: `w` for a single generator, `u1..uN` otherwise.
pub fn default_generator_names(gens: usize) -> Vec<String> {
    if gens == 1 {
        vec!["w".to_string()]
    } else {
        (1..=gens).map(|g| format!("u{g}")).collect()
    }
}

pub(crate) fn jet_to_string(v: &JetVar, names: &[String]) -> String {
    let name = &names[v.generator as usize];
    if v.index.is_zero() {
        name.clone()
    } else {
        format!("{name}_{}", v.index)
    }
}

pub(crate) fn monomial_factors(m: &Monomial, names: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < m.jets.len() {
        let v = m.jets[i];
        let mult = m.jets[i..].iter().take_while(|x| **x == v).count();
        let s = jet_to_string(&v, names);
        if mult == 1 {
            out.push(s);
        } else {
            out.push(format!("{s}^{mult}"));
        }
        i += mult;
    }
    out.extend(m.funcs.iter().map(|s| s.to_string()));
    out
}

pub struct DiffPolyDisplay<'a> {
    poly: &'a DiffPoly,
    names: &'a [String],
}

impl fmt::Display for DiffPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms.iter().enumerate() {
            write_signed_term(f, i == 0, c, &monomial_factors(m, self.names))?;
        }
        Ok(())
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_generator_names(self.space.gens());
        write!(f, "{}", self.display_with(&names))
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;

    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        self.checked_add(rhs).expect("dimension mismatch")
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;

    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        assert_eq!(self.space, rhs.space, "dimension mismatch");
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &-Rational::one());
        out
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;

    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        self.checked_mul(rhs).expect("dimension mismatch")
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;

    fn neg(self) -> DiffPoly {
        self.scaled(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, rhs: DiffPoly) -> DiffPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for DiffPoly {
    type Output = DiffPoly;

    fn neg(self) -> DiffPoly {
        -&self
    }
}
