use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::brackets::euler_bracket;
use crate::diffalg::{int, DiffPoly, MultiIndex, Rational, Space};
use crate::lambda::{BracketTable, LambdaMono, LambdaPoly};

/// A polynomial in the plane coordinates `x, y` with rational coefficients.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct PolyStreamFunction {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl PolyStreamFunction {
    pub fn zero() -> Self {
        PolyStreamFunction::default()
    }

    /// `c · x^i y^j`.
    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut p = PolyStreamFunction::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        let e = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = PolyStreamFunction::zero();
        for ((i, j), v) in &self.terms {
            out.add_term(*i, *j, v * c);
        }
        out
    }

    pub fn dx(&self) -> Self {
        let mut out = PolyStreamFunction::zero();
        for ((i, j), v) in &self.terms {
            if *i > 0 {
                out.add_term(i - 1, *j, v * int(*i as i64));
            }
        }
        out
    }

    pub fn dy(&self) -> Self {
        let mut out = PolyStreamFunction::zero();
        for ((i, j), v) in &self.terms {
            if *j > 0 {
                out.add_term(*i, j - 1, v * int(*j as i64));
            }
        }
        out
    }

    /// Partial derivative along coordinate `k` (0 = x, 1 = y).
    pub fn d(&self, k: usize) -> Self {
        if k == 0 {
            self.dx()
        } else {
            self.dy()
        }
    }

    /// Antiderivative in `x` with no `x`-free part added.
    pub fn integrate_x(&self) -> Self {
        let mut out = PolyStreamFunction::zero();
        for ((i, j), v) in &self.terms {
            out.add_term(i + 1, *j, v / int(*i as i64 + 1));
        }
        out
    }

    pub fn integrate_y(&self) -> Self {
        let mut out = PolyStreamFunction::zero();
        for ((i, j), v) in &self.terms {
            out.add_term(*i, j + 1, v / int(*j as i64 + 1));
        }
        out
    }

    /// The same polynomial with its constant term removed.
    pub fn without_constant(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&(0, 0));
        out
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    /// A random polynomial of total degree at most `max_degree` with small
    /// integer coefficients.
    pub fn random<R: Rng>(rng: &mut R, max_degree: u32) -> Self {
        let mut out = PolyStreamFunction::zero();
        for _ in 0..rng.gen_range(1..=4) {
            let d = rng.gen_range(0..=max_degree);
            let i = rng.gen_range(0..=d);
            out.add_term(i, d - i, int(rng.gen_range(-4..=4)));
        }
        out
    }
}

impl Add for &PolyStreamFunction {
    type Output = PolyStreamFunction;
    fn add(self, o: &PolyStreamFunction) -> PolyStreamFunction {
        let mut out = self.clone();
        for ((i, j), v) in &o.terms {
            out.add_term(*i, *j, v.clone());
        }
        out
    }
}

impl Sub for &PolyStreamFunction {
    type Output = PolyStreamFunction;
    fn sub(self, o: &PolyStreamFunction) -> PolyStreamFunction {
        self + &(-o)
    }
}

impl Neg for &PolyStreamFunction {
    type Output = PolyStreamFunction;
    fn neg(self) -> PolyStreamFunction {
        self.scaled(&int(-1))
    }
}

impl Mul for &PolyStreamFunction {
    type Output = PolyStreamFunction;
    fn mul(self, o: &PolyStreamFunction) -> PolyStreamFunction {
        let mut out = PolyStreamFunction::zero();
        for ((i, j), v) in &self.terms {
            for ((k, l), w) in &o.terms {
                out.add_term(i + k, j + l, v * w);
            }
        }
        out
    }
}

impl fmt::Display for PolyStreamFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, ((i, j), v)) in self.terms.iter().enumerate() {
            let sign = if v.is_negative() {
                "-"
            } else if n > 0 {
                "+"
            } else {
                ""
            };
            if n > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let a = v.abs();
            let mut factors = Vec::new();
            if !a.is_one() || (*i == 0 && *j == 0) {
                factors.push(a.to_string());
            }
            for (var, e) in [("x", *i), ("y", *j)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    e => factors.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyStreamFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Planar vector field with polynomial components.
pub type VectorField = [PolyStreamFunction; 2];

fn eps(orientation: i8, i: usize, j: usize) -> Rational {
    match (i, j) {
        (0, 1) => int(orientation as i64),
        (1, 0) => int(-(orientation as i64)),
        _ => Rational::zero(),
    }
}

/// `X^i = ε^{ij} ∂_j φ`.
pub fn field(phi: &PolyStreamFunction, orientation: i8) -> VectorField {
    let comp = |i| {
        let mut acc = PolyStreamFunction::zero();
        for j in 0..2 {
            acc = &acc + &phi.d(j).scaled(&eps(orientation, i, j));
        }
        acc
    };
    [comp(0), comp(1)]
}

/// `[X, Y]^i = X^j ∂_j Y^i − Y^j ∂_j X^i`.
pub fn commutator(x: &VectorField, y: &VectorField) -> VectorField {
    let comp = |i: usize| {
        let mut acc = PolyStreamFunction::zero();
        for j in 0..2 {
            acc = &acc + &(&x[j] * &y[i].d(j));
            acc = &acc - &(&y[j] * &x[i].d(j));
        }
        acc
    };
    [comp(0), comp(1)]
}

fn divergence(z: &VectorField) -> PolyStreamFunction {
    &z[0].dx() + &z[1].dy()
}

/// Solves `Z^k = ε^{kn} ∂_n χ` for `χ` with zero constant term, or `None` if
/// `Z` has no stream function.
fn stream_of(z: &VectorField, orientation: i8) -> Option<PolyStreamFunction> {
    let s = int(orientation as i64);
    // Z^1 = s χ_y and Z^2 = −s χ_x.
    let chi_x = &z[1].scaled(&-&s);
    let partial = chi_x.integrate_x();
    let rest = &z[0].scaled(&s) - &partial.dy();
    if rest.terms().any(|((i, _), _)| *i > 0) {
        return None;
    }
    let chi = (&partial + &rest.integrate_y()).without_constant();
    (field(&chi, orientation) == *z).then_some(chi)
}

#[derive(Clone, Debug)]
pub struct CommutatorResult {
    pub x: VectorField,
    pub y: VectorField,
    pub commutator: VectorField,
    pub divergence: PolyStreamFunction,
    /// Stream function recovered from the commutator by integration.
    pub chi: Option<PolyStreamFunction>,
    /// `ε^{lm} ∂_m φ ∂_l ψ`, constant term removed.
    pub chi_formula: PolyStreamFunction,
}

impl CommutatorResult {
    pub fn divergence_free(&self) -> bool {
        self.divergence.is_zero()
    }

    pub fn chi_matches(&self) -> bool {
        self.chi.as_ref() == Some(&self.chi_formula)
    }
}

/// The commutator of the divergence-free fields with stream functions `phi`
/// and `psi`, and its own stream function.
pub fn divfree_commutator(phi: &PolyStreamFunction, psi: &PolyStreamFunction, orientation: i8) -> CommutatorResult {
    let x = field(phi, orientation);
    let y = field(psi, orientation);
    let z = commutator(&x, &y);
    let mut formula = PolyStreamFunction::zero();
    for l in 0..2 {
        for m in 0..2 {
            formula = &formula + &(&phi.d(m) * &psi.d(l)).scaled(&eps(orientation, l, m));
        }
    }
    CommutatorResult {
        divergence: divergence(&z),
        chi: stream_of(&z, orientation),
        chi_formula: formula.without_constant(),
        commutator: z,
        x,
        y,
    }
}

/// `[X,[Y,W]] + [Y,[W,X]] + [W,[X,Y]]`.
pub fn vector_field_jacobi(x: &VectorField, y: &VectorField, w: &VectorField) -> VectorField {
    let a = commutator(x, &commutator(y, w));
    let b = commutator(y, &commutator(w, x));
    let c = commutator(w, &commutator(x, y));
    [&(&a[0] + &b[0]) + &c[0], &(&a[1] + &b[1]) + &c[1]]
}

/// The scalar λ-bracket of the Lie–Poisson bracket
/// `{ω(x), ω(y)} = ∫ s·ω(z) C(x, y, z) dz` with structure function
/// `C = ε^{lm} ∂_m δ(z−x) ∂_l δ(z−y)`.
///
/// Each term is integrated with
/// `∫ (∂^A δ(z−x)) (∂^B δ(z−y)) ω(z) dz = (−1)^{|A|} ∂_x^A [ω ∂_x^B δ(x−y)]`
/// and `B(x) ∂^K δ(x−y)` is sent to `B λ^K`.
pub fn lie_poisson_from_structure(orientation: i8, density_scale: &Rational) -> LambdaPoly {
    let s = Space::new(2, 1).unwrap();
    let mut out = LambdaPoly::zero(s);
    for l in 0..2 {
        for m in 0..2 {
            let c = eps(orientation, l, m) * density_scale;
            if c.is_zero() {
                continue;
            }
            let a = MultiIndex::unit(2, m);
            let b = MultiIndex::unit(2, l);
            let sign = if a.order() % 2 == 1 { -c } else { c };
            // Leibniz: ∂^A [ω ∂^B δ] = Σ_J C(A,J) ∂^J ω ∂^{A−J+B} δ.
            for j in a.sub_indices() {
                let k = a.checked_sub(&j).unwrap() + b;
                let coeff = &sign * int(a.binomial(&j) as i64);
                let wj = DiffPoly::jet(s, s.jet_var(0, &j.entries().collect::<Vec<_>>()));
                out.add_assign(&LambdaPoly::monomial(LambdaMono::lambda(k), wj.scaled(&coeff)));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub orientation: i8,
    pub derived: LambdaPoly,
    pub reference: BracketTable,
    pub equal: bool,
    /// `derived = sign · reference` when the two differ by a sign.
    pub opposite_sign: bool,
}

/// Compares the bracket obtained from the structure function with the Euler
/// bracket.
pub fn reduction_consistency_check(orientation: i8) -> ReductionReport {
    let derived = lie_poisson_from_structure(orientation, &Rational::one());
    let reference = euler_bracket().table;
    let r = reference.entry(0, 0);
    ReductionReport {
        orientation,
        equal: derived == *r,
        opposite_sign: derived == -r,
        derived,
        reference,
    }
}
