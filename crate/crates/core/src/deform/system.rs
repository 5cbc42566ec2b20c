//! Linear systems over the unknown coefficient functions, and their exact
//! solution with derivative prolongation.
//!
//! Each equation is a linear form with rational coefficients in symbols
//! `F^{(k)}`. Elimination treats every `(base, k)` as an independent column;
//! prolongation differentiates equations so that relations between a symbol
//! and its derivatives are propagated.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use super::DeformError;
use crate::diffalg::{FuncSymbol, JetMonomial, LinearForm, Rational, SymbolId};
use crate::lambda::LambdaMono;

/// Extra prolongation orders tried, beyond the first bound, while looking for
/// a stable pivot structure.
const MAX_EXTRA_PROLONGATION: u16 = 3;

/// Where an equation came from: the coefficient of `λ^I μ^J · jets`.
pub type CoefficientKey = (LambdaMono, JetMonomial);

#[derive(Clone, Debug)]
pub struct Equation {
    pub key: Option<CoefficientKey>,
    pub form: LinearForm,
}

/// Elimination preference: lower `(group, rank)` is pivoted first at a given
/// derivative order. Groups dominate derivative order, so a whole group is
/// eliminated before the next.
#[derive(Clone, Debug, Default)]
pub struct Ranking {
    map: HashMap<SymbolId, (u8, u32)>,
}

impl Ranking {
    pub fn new() -> Self {
        Ranking::default()
    }

    pub fn set(&mut self, base: SymbolId, group: u8, rank: u32) {
        self.map.insert(base, (group, rank));
    }

    pub fn get(&self, base: SymbolId) -> (u8, u32) {
        self.map.get(&base).copied().unwrap_or((u8::MAX, u32::MAX))
    }

    pub fn group(&self, base: SymbolId) -> u8 {
        self.get(base).0
    }

    /// Moves `keep` to the end of their group so elimination leaves them free
    /// whenever possible.
    pub fn prefer_free(&mut self, keep: &[SymbolId]) {
        for (i, b) in keep.iter().enumerate() {
            let (g, _) = self.get(*b);
            self.map.insert(*b, (g, u32::MAX - (keep.len() - i) as u32));
        }
    }

    /// The same ranking with every group shifted by `by`.
    pub fn shifted(&self, by: u8) -> Ranking {
        Ranking {
            map: self
                .map
                .iter()
                .map(|(k, (g, r))| (*k, (g.saturating_add(by), *r)))
                .collect(),
        }
    }

    pub fn contains(&self, base: SymbolId) -> bool {
        self.map.contains_key(&base)
    }

    fn key(&self, s: FuncSymbol) -> ColKey {
        let (group, rank) = self.get(s.base);
        ColKey {
            group,
            order: s.order,
            rank,
            sym: s,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct ColKey {
    group: u8,
    order: u16,
    rank: u32,
    sym: FuncSymbol,
}

impl Ord for ColKey {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.group, self.order, self.rank, self.sym.base, self.sym.order).cmp(&(
            o.group,
            o.order,
            o.rank,
            o.sym.base,
            o.sym.order,
        ))
    }
}

impl PartialOrd for ColKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

type Row = BTreeMap<ColKey, Rational>;

/// Homogeneous linear equations in function symbols.
#[derive(Clone, Debug, Default)]
pub struct ConstraintSystem {
    pub equations: Vec<Equation>,
    pub ranking: Ranking,
}

impl ConstraintSystem {
    pub fn new(ranking: Ranking) -> Self {
        ConstraintSystem {
            equations: Vec::new(),
            ranking,
        }
    }

    pub fn push(&mut self, key: Option<CoefficientKey>, form: LinearForm) {
        if !form.is_zero() {
            self.equations.push(Equation { key, form });
        }
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// A subsystem keeping only equations whose key satisfies `keep`.
    pub fn restrict<F>(&self, keep: F) -> ConstraintSystem
    where
        F: Fn(&CoefficientKey) -> bool,
    {
        ConstraintSystem {
            equations: self
                .equations
                .iter()
                .filter(|e| e.key.as_ref().is_some_and(&keep))
                .cloned()
                .collect(),
            ranking: self.ranking.clone(),
        }
    }

    pub fn bases(&self) -> BTreeSet<SymbolId> {
        self.equations
            .iter()
            .flat_map(|e| e.form.symbols().map(|s| s.base))
            .collect()
    }

    pub fn max_order(&self) -> u16 {
        self.equations.iter().map(|e| e.form.max_order()).max().unwrap_or(0)
    }

    /// Solves with prolongation, increasing the bound until the pivot
    /// structure stops changing.
    pub fn solve(&self) -> Result<Solution, DeformError> {
        self.solve_with(&BTreeSet::new(), 0)
    }

    /// As [`solve`](Self::solve), additionally tracking `unknowns` that may not
    /// occur in any equation and starting from at least `min_bound`.
    pub fn solve_with(&self, unknowns: &BTreeSet<SymbolId>, min_bound: u16) -> Result<Solution, DeformError> {
        let first = (self.max_order() + 1).max(min_bound);
        let mut prev = self.solve_at(unknowns, first);
        for bound in first + 1..=first + MAX_EXTRA_PROLONGATION {
            let next = self.solve_at(unknowns, bound);
            if next.signature() == prev.signature() {
                return Ok(prev);
            }
            prev = next;
        }
        Err(DeformError::ProlongationBound {
            bound: first + MAX_EXTRA_PROLONGATION,
        })
    }

    /// Eliminates the system prolonged up to derivative order `bound`.
    pub fn solve_at(&self, unknowns: &BTreeSet<SymbolId>, bound: u16) -> Solution {
        let mut ech = Echelon::default();
        for e in &self.equations {
            ech.insert(to_row(&self.ranking, &e.form));
        }
        // Prolong the reduced basis rather than every raw equation.
        let basis: Vec<Row> = ech.rows.values().cloned().collect();
        for row in basis {
            let mut cur = from_row(&row);
            while cur.max_order() < bound {
                cur = cur.derivative();
                if cur.is_zero() {
                    break;
                }
                ech.insert(to_row(&self.ranking, &cur));
            }
        }
        let reduced = ech.reduce();

        let mut bases: BTreeSet<SymbolId> = self.bases();
        bases.extend(unknowns.iter().copied());
        let mut lowest: BTreeMap<SymbolId, u16> = BTreeMap::new();
        let mut pivots = BTreeMap::new();
        for (k, row) in &reduced {
            let e = lowest.entry(k.sym.base).or_insert(k.order);
            *e = (*e).min(k.order);
            let mut expr = LinearForm::zero();
            for (c, v) in row {
                if c != k {
                    expr.add_term(c.sym, -v.clone());
                }
            }
            pivots.insert(k.sym, expr);
        }
        let free: Vec<SymbolId> = bases.iter().copied().filter(|b| !lowest.contains_key(b)).collect();
        Solution {
            pivots,
            lowest_pivot: lowest,
            free,
            bases,
            bound,
            system: self.clone(),
        }
    }
}

fn to_row(ranking: &Ranking, f: &LinearForm) -> Row {
    f.terms().map(|(s, c)| (ranking.key(*s), c.clone())).collect()
}

fn from_row(r: &Row) -> LinearForm {
    let mut f = LinearForm::zero();
    for (k, c) in r {
        f.add_term(k.sym, c.clone());
    }
    f
}

fn axpy(row: &mut Row, c: &Rational, other: &Row) {
    for (k, v) in other {
        let add = c * v;
        match row.get_mut(k) {
            Some(x) => {
                *x += add;
                if x.is_zero() {
                    row.remove(k);
                }
            }
            None => {
                row.insert(*k, add);
            }
        }
    }
}

/// Row echelon form with pivots keyed by leading column; leading coefficient 1.
#[derive(Default)]
struct Echelon {
    rows: BTreeMap<ColKey, Row>,
}

impl Echelon {
    fn insert(&mut self, mut row: Row) {
        loop {
            let Some((&lead, c)) = row.iter().next() else {
                return;
            };
            match self.rows.get(&lead) {
                Some(piv) => {
                    let c = -c.clone();
                    axpy(&mut row, &c, piv);
                }
                None => {
                    let inv = Rational::one() / c;
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    self.rows.insert(lead, row);
                    return;
                }
            }
        }
    }

    /// Fully reduced row echelon form.
    fn reduce(mut self) -> BTreeMap<ColKey, Row> {
        let keys: Vec<ColKey> = self.rows.keys().rev().copied().collect();
        let mut done: BTreeMap<ColKey, Row> = BTreeMap::new();
        for k in keys {
            let mut row = self.rows.remove(&k).unwrap();
            let targets: Vec<(ColKey, Rational)> = row
                .iter()
                .filter(|(c, _)| **c != k && done.contains_key(c))
                .map(|(c, v)| (*c, v.clone()))
                .collect();
            for (c, v) in targets {
                axpy(&mut row, &-v, &done[&c]);
            }
            done.insert(k, row);
        }
        done
    }
}

/// Result of eliminating a [`ConstraintSystem`].
#[derive(Clone, Debug)]
pub struct Solution {
    /// Pivot symbol -> expression in non-pivot symbols.
    pub pivots: BTreeMap<FuncSymbol, LinearForm>,
    /// Lowest derivative order at which each constrained base is a pivot.
    pub lowest_pivot: BTreeMap<SymbolId, u16>,
    /// Bases never pivoted: arbitrary functions in the solution.
    pub free: Vec<SymbolId>,
    pub bases: BTreeSet<SymbolId>,
    pub bound: u16,
    pub system: ConstraintSystem,
}

impl Solution {
    /// Number of free base functions.
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// Bases determined only up to a polynomial in the generator (lowest
    /// pivot above order 0).
    pub fn partially_determined(&self) -> Vec<(SymbolId, u16)> {
        self.lowest_pivot
            .iter()
            .filter(|(_, o)| **o > 0)
            .map(|(b, o)| (*b, *o))
            .collect()
    }

    fn signature(&self) -> (Vec<SymbolId>, BTreeMap<SymbolId, u16>) {
        (self.free.clone(), self.lowest_pivot.clone())
    }

    /// The value of a symbol in terms of non-pivot symbols. Symbols above
    /// the elimination bound are obtained by differentiating a lower pivot.
    pub fn resolve(&self, s: FuncSymbol) -> Result<LinearForm, DeformError> {
        self.resolve_depth(s, 0)
    }

    fn resolve_depth(&self, s: FuncSymbol, depth: u16) -> Result<LinearForm, DeformError> {
        if depth > 4 * (self.bound + 1) {
            return Err(DeformError::ProlongationBound { bound: self.bound });
        }
        if let Some(e) = self.pivots.get(&s) {
            return Ok(e.clone());
        }
        if s.order <= self.bound {
            return Ok(LinearForm::symbol(s));
        }
        let Some(&low) = self.lowest_pivot.get(&s.base) else {
            return Ok(LinearForm::symbol(s));
        };
        // Differentiate the highest pivot below `s`.
        let mut j = self.bound.min(s.order - 1);
        while j >= low && !self.pivots.contains_key(&s.base.at(j)) {
            j -= 1;
        }
        let mut expr = self.pivots[&s.base.at(j)].clone();
        for _ in j..s.order {
            expr = expr.derivative();
        }
        let mut out = LinearForm::zero();
        for (t, c) in expr.terms() {
            out.add_scaled(&self.resolve_depth(*t, depth + 1)?, c);
        }
        Ok(out)
    }

    /// Substitution closure for [`crate::diffalg::DiffPoly::substitute_symbols`].
    pub fn substitution(&self) -> impl Fn(FuncSymbol) -> Option<crate::diffalg::Coefficient> + '_ {
        move |s| {
            if !self.lowest_pivot.contains_key(&s.base) {
                return None;
            }
            let lf = self
                .resolve(s)
                .expect("prolongation bound exhausted during substitution");
            let mut c = crate::diffalg::Coefficient::zero();
            for (t, v) in lf.terms() {
                let mut m = crate::diffalg::FuncMonomial::new();
                m.push(*t);
                c.add_term(m, v.clone());
            }
            Some(c)
        }
    }

    /// Reduces a linear form modulo the solved relations; zero iff implied.
    pub fn reduce(&self, f: &LinearForm) -> Result<LinearForm, DeformError> {
        let mut out = LinearForm::zero();
        for (s, c) in f.terms() {
            if self.lowest_pivot.contains_key(&s.base) {
                out.add_scaled(&self.resolve(*s)?, c);
            } else {
                out.add_term(*s, c.clone());
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, e) in &self.pivots {
            writeln!(f, "{s} = {e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::int;

    fn sym(name: &str) -> FuncSymbol {
        FuncSymbol::function(name, "sys", 0)
    }

    fn lf(terms: &[(FuncSymbol, i64)]) -> LinearForm {
        let mut f = LinearForm::zero();
        for (s, c) in terms {
            f.add_term(*s, int(*c));
        }
        f
    }

    #[test]
    fn empty_system_keeps_everything_free() {
        let sys = ConstraintSystem::default();
        let unknowns: BTreeSet<SymbolId> = ["Xa", "Xb", "Xc"].iter().map(|n| sym(n).base).collect();
        let sol = sys.solve_with(&unknowns, 0).unwrap();
        assert_eq!(sol.dimension(), 3);
        assert!(sol.pivots.is_empty());
        let s = sym("Xa");
        assert_eq!(sol.resolve(s).unwrap(), LinearForm::symbol(s));
    }

    #[test]
    fn algebraic_pivot_propagates_to_derivatives() {
        // B - 3/2 A' = 0  =>  B' = 3/2 A''
        let (a, b) = (sym("Ya"), sym("Yb"));
        let mut sys = ConstraintSystem::default();
        let mut f = LinearForm::symbol(b);
        f.add_term(a.derivative().unwrap(), crate::diffalg::rat(-3, 2));
        sys.push(None, f);
        let sol = sys.solve().unwrap();
        assert_eq!(sol.free, vec![a.base]);
        let db = sol.resolve(b.base.at(5)).unwrap();
        assert_eq!(db, LinearForm::symbol(a.base.at(6)).scaled(&crate::diffalg::rat(3, 2)));
    }

    #[test]
    fn derivative_only_relation_is_partial() {
        // P' - Q' = 0: one of them is determined up to a constant.
        let (p, q) = (sym("Zp"), sym("Zq"));
        let mut sys = ConstraintSystem::default();
        sys.push(None, lf(&[(p.derivative().unwrap(), 1), (q.derivative().unwrap(), -1)]));
        let sol = sys.solve().unwrap();
        assert_eq!(sol.dimension(), 1);
        assert_eq!(sol.partially_determined().len(), 1);
    }

    #[test]
    fn hidden_integrability_condition_is_found() {
        // U = V', U' = 0 forces V'' = 0 and U = V'.
        let (u, v) = (sym("Wu"), sym("Wv"));
        let mut sys = ConstraintSystem::default();
        sys.push(None, lf(&[(u, 1), (v.derivative().unwrap(), -1)]));
        sys.push(None, lf(&[(u.derivative().unwrap(), 1)]));
        let sol = sys.solve().unwrap();
        assert_eq!(sol.dimension(), 0);
        assert!(sol.reduce(&lf(&[(v.base.at(2), 1)])).unwrap().is_zero());
    }

    #[test]
    fn equation_order_does_not_change_dimension() {
        let s: Vec<FuncSymbol> = ["Va", "Vb", "Vc", "Vd"].iter().map(|n| sym(n)).collect();
        let eqs = vec![
            lf(&[(s[0], 1), (s[1].derivative().unwrap(), 2)]),
            lf(&[(s[1], 1), (s[2], -1), (s[3].derivative().unwrap(), 1)]),
            lf(&[(s[0].derivative().unwrap(), 1), (s[2].base.at(2), 1)]),
        ];
        let mut a = ConstraintSystem::default();
        let mut b = ConstraintSystem::default();
        for e in &eqs {
            a.push(None, e.clone());
        }
        for e in eqs.iter().rev() {
            b.push(None, e.clone());
        }
        let (sa, sb) = (a.solve().unwrap(), b.solve().unwrap());
        assert_eq!(sa.dimension(), sb.dimension());
        assert_eq!(sa.pivots, sb.pivots);
    }
}
