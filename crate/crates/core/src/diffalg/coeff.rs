use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::symbol::FuncSymbol;

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Sorted multiset of function symbols; the empty product is `1`.
pub type FuncMonomial = SmallVec<[FuncSymbol; 2]>;

/// Polynomial with rational coefficients in [`FuncSymbol`]s: the scalar ring
/// of differential polynomials with unknown coefficient functions.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Coefficient {
    terms: BTreeMap<FuncMonomial, Rational>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut out = Coefficient::zero();
        out.add_term(FuncMonomial::new(), c);
        out
    }

    pub fn symbol(s: FuncSymbol) -> Self {
        let mut out = Coefficient::zero();
        let mut m = FuncMonomial::new();
        m.push(s);
        out.add_term(m, Rational::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FuncMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: FuncMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
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

    /// The coefficient as a linear form, if every monomial has degree <= 1.
    /// Returns `(constant part, linear part)`.
    pub fn as_linear(&self) -> Option<(Rational, LinearForm)> {
        let mut constant = Rational::zero();
        let mut lin = LinearForm::zero();
        for (m, c) in &self.terms {
            match m.len() {
                0 => constant = c.clone(),
                1 => lin.add_term(m[0], c.clone()),
                _ => return None,
            }
        }
        Some((constant, lin))
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let factors: Vec<String> = m.iter().map(|s| s.to_string()).collect();
            write_signed_term(f, i == 0, c, &factors)?;
        }
        Ok(())
    }
}

/// Writes `c * factors` with a leading sign handled for non-first terms.
pub(crate) fn write_signed_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Rational,
    factors: &[String],
) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if factors.is_empty() {
        return write!(f, "{abs}");
    }
    if !abs.is_one() {
        write!(f, "{abs}*")?;
    }
    write!(f, "{}", factors.join("*"))
}

/// A linear form `sum c_s * s` over function symbols.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LinearForm {
    terms: BTreeMap<FuncSymbol, Rational>,
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm::default()
    }

    pub fn symbol(s: FuncSymbol) -> Self {
        let mut out = LinearForm::zero();
        out.add_term(s, Rational::one());
        out
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

    pub fn terms(&self) -> impl Iterator<Item = (&FuncSymbol, &Rational)> {
        self.terms.iter()
    }

    pub fn get(&self, s: &FuncSymbol) -> Option<&Rational> {
        self.terms.get(s)
    }

    pub fn add_term(&mut self, s: FuncSymbol, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(s) {
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

    pub fn add_scaled(&mut self, other: &LinearForm, c: &Rational) {
        for (s, v) in &other.terms {
            self.add_term(*s, v * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> LinearForm {
        let mut out = LinearForm::zero();
        out.add_scaled(self, c);
        out
    }

    /// Formal derivative with respect to the generator: every symbol's order
    /// goes up by one; constants drop out.
    pub fn derivative(&self) -> LinearForm {
        let mut out = LinearForm::zero();
        for (s, c) in &self.terms {
            if let Some(d) = s.derivative() {
                out.add_term(d, c.clone());
            }
        }
        out
    }

    pub fn max_order(&self) -> u16 {
        self.terms.keys().map(|s| s.order).max().unwrap_or(0)
    }

    pub fn symbols(&self) -> impl Iterator<Item = FuncSymbol> + '_ {
        self.terms.keys().copied()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            write_signed_term(f, i == 0, c, &[s.to_string()])?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
