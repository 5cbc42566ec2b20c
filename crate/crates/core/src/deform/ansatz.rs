//! Homogeneous ansatzes for scalar λ-brackets and generic Miura corrections.

use std::collections::BTreeSet;
use std::fmt;

use super::system::{ConstraintSystem, Ranking, Solution};
use super::{extract_equations, DeformError};
use crate::diffalg::{DiffPoly, FuncSymbol, JetMonomial, JetVar, MultiIndex, Space, SymbolId};
use crate::lambda::{skew_adjoint, BracketTable, LambdaMono, LambdaPoly};

/// A monomial shape `λ^k · Π ω_{I_j}` with `|I_j|` given by `jet_orders`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub letter: String,
    pub lambda_count: u32,
    /// Ascending jet orders, each at least 1.
    pub jet_orders: Vec<u32>,
}

impl Shape {
    pub fn describe(&self) -> String {
        let mut s = "λ".repeat(self.lambda_count as usize);
        for o in &self.jet_orders {
            match o {
                1 => s.push_str("∂ω"),
                n => s.push_str(&format!("∂{}ω", superscript(*n))),
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.letter, self.describe())
    }
}

/// One scalar unknown: the coefficient of `λ^lambda · jets`.
#[derive(Clone, Debug)]
pub struct Unknown {
    pub symbol: SymbolId,
    /// Index into the owning shape list.
    pub shape: usize,
    pub lambda: MultiIndex,
    pub jets: JetMonomial,
}

impl Unknown {
    pub fn name(&self) -> String {
        self.symbol.display_name()
    }
}

/// A scalar bracket entry, linear in unknown functions of `ω`.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub degree: u32,
    pub space: Space,
    pub shapes: Vec<Shape>,
    pub entry: LambdaPoly,
    /// Independent unknowns. After [`impose_skewsymmetry`] only the free ones
    /// remain; `raw_count` keeps the original number.
    pub unknowns: Vec<Unknown>,
    pub raw_count: usize,
}

impl Ansatz {
    pub fn bracket(&self) -> BracketTable {
        BracketTable::scalar(self.entry.clone()).expect("ansatz entries are scalar")
    }

    pub fn symbols(&self) -> BTreeSet<SymbolId> {
        self.unknowns.iter().map(|u| u.symbol).collect()
    }

    /// Elimination ranking in generation order.
    pub fn ranking(&self) -> Ranking {
        let mut r = Ranking::new();
        for (i, u) in self.unknowns.iter().enumerate() {
            r.set(u.symbol, 0, i as u32);
        }
        r
    }

    pub fn find(&self, name: &str) -> Option<&Unknown> {
        self.unknowns.iter().find(|u| u.name() == name)
    }
}

/// Partitions of `r` into parts ≥ 1, ascending parts, in the conventional
/// order used for lettering.
fn partitions(r: u32) -> Vec<Vec<u32>> {
    match r {
        0 => vec![vec![]],
        1 => vec![vec![1]],
        2 => vec![vec![1, 1], vec![2]],
        3 => vec![vec![3], vec![1, 2], vec![1, 1, 1]],
        4 => vec![vec![4], vec![1, 3], vec![1, 1, 2], vec![2, 2], vec![1, 1, 1, 1]],
        _ => {
            let mut out = Vec::new();
            generic_partitions(r, 1, &mut Vec::new(), &mut out);
            out
        }
    }
}

fn generic_partitions(left: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    for p in min..=left {
        cur.push(p);
        generic_partitions(left - p, p, cur, out);
        cur.pop();
    }
}

/// Shapes of total degree `degree`, lettered from `first`.
fn shapes(degree: u32, first: char) -> Vec<Shape> {
    let mut raw: Vec<(u32, Vec<u32>)> = Vec::new();
    for k in (0..degree).rev() {
        for p in partitions(degree - k) {
            raw.push((k, p));
        }
    }
    let pure = (degree, Vec::new());
    if degree % 2 == 1 {
        raw.insert(0, pure);
    } else {
        raw.push(pure);
    }
    raw.into_iter()
        .enumerate()
        .map(|(i, (k, p))| Shape {
            letter: letter(first, i),
            lambda_count: k,
            jet_orders: p,
        })
        .collect()
}

fn letter(first: char, i: usize) -> String {
    let c = first as u32 + i as u32;
    let end = if first.is_ascii_uppercase() { 'Z' } else { 'z' } as u32;
    if c <= end {
        char::from_u32(c).unwrap().to_string()
    } else {
        format!("{}{}", first, i)
    }
}

/// Multisets of `m` elements drawn from `pool`, as nondecreasing index lists.
fn multisets(pool: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(pool: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..pool {
            cur.push(i);
            rec(pool, m, i, cur, out);
            cur.pop();
        }
    }
    rec(pool, m, 0, &mut Vec::new(), &mut out);
    out
}

/// All jet monomials (generator 0) whose orders form `orders`.
fn jet_monomials(dim: usize, orders: &[u32]) -> Vec<JetMonomial> {
    let mut groups: Vec<(u32, usize)> = Vec::new();
    for &o in orders {
        match groups.last_mut() {
            Some((g, m)) if *g == o => *m += 1,
            _ => groups.push((o, 1)),
        }
    }
    let mut out: Vec<Vec<JetVar>> = vec![Vec::new()];
    for (o, m) in groups {
        let pool = MultiIndex::all_of_order(dim, o);
        let choices = multisets(pool.len(), m);
        let mut next = Vec::new();
        for prefix in &out {
            for c in &choices {
                let mut v = prefix.clone();
                v.extend(c.iter().map(|&i| JetVar {
                    generator: 0,
                    index: pool[i],
                }));
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|mut v| {
            v.sort();
            v.into_iter().collect()
        })
        .collect()
}

/// Index label such as `112,1` or `1,1,12`: λ directions, then all
/// first-order jet directions merged, then each higher jet.
pub fn unknown_label(lambda: &MultiIndex, jets: &[JetVar]) -> String {
    let mut groups = Vec::new();
    if !lambda.is_zero() {
        groups.push(lambda.direction_digits());
    }
    let mut first: Vec<char> = jets
        .iter()
        .filter(|v| v.index.order() == 1)
        .flat_map(|v| v.index.direction_digits().chars().collect::<Vec<_>>())
        .collect();
    first.sort();
    if !first.is_empty() {
        groups.push(first.into_iter().collect());
    }
    let mut higher: Vec<(u32, String)> = jets
        .iter()
        .filter(|v| v.index.order() > 1)
        .map(|v| (v.index.order(), v.index.direction_digits()))
        .collect();
    higher.sort();
    groups.extend(higher.into_iter().map(|(_, d)| d));
    groups.join(",")
}

fn monomial_poly(space: Space, sym: FuncSymbol, jets: &JetMonomial) -> DiffPoly {
    let mut p = DiffPoly::func(space, sym);
    for v in jets {
        p = &p * &DiffPoly::jet(space, *v);
    }
    p
}

/// The general homogeneous scalar entry of the given degree: one unknown
/// function of `ω` per monomial `λ^K · Π ω_{I_j}`.
pub fn generate_ansatz(degree: u32, space: Space) -> Result<Ansatz, DeformError> {
    if space.gens() != 1 {
        return Err(DeformError::NotScalar(space.gens()));
    }
    if degree < 3 {
        return Err(DeformError::InvalidDegree(degree));
    }
    let dim = space.dim();
    let shapes = shapes(degree, 'A');
    let mut unknowns = Vec::new();
    let mut entry = LambdaPoly::zero(space);
    for (si, shape) in shapes.iter().enumerate() {
        let lambdas = MultiIndex::all_of_order(dim, shape.lambda_count);
        let jets = jet_monomials(dim, &shape.jet_orders);
        let mut cells: Vec<(String, MultiIndex, JetMonomial)> = Vec::new();
        for k in &lambdas {
            for j in &jets {
                cells.push((unknown_label(k, j), *k, j.clone()));
            }
        }
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        for (label, k, j) in &cells {
            let sym = FuncSymbol::function(&shape.letter, label, 0);
            entry.add_assign(&LambdaPoly::monomial(
                LambdaMono::lambda(*k),
                monomial_poly(space, sym, j),
            ));
            unknowns.push(Unknown {
                symbol: sym.base,
                shape: si,
                lambda: *k,
                jets: j.clone(),
            });
        }
    }
    let raw_count = unknowns.len();
    Ok(Ansatz {
        degree,
        space,
        shapes,
        entry,
        unknowns,
        raw_count,
    })
}

/// Imposes `skew_adjoint(entry) == entry`. Unknowns on an even number of λ's
/// are eliminated in favour of the odd ones, which stay free.
pub fn impose_skewsymmetry(a: &Ansatz) -> Result<(Ansatz, Solution), DeformError> {
    let mut ranking = Ranking::new();
    for (i, u) in a.unknowns.iter().enumerate() {
        let group = if u.lambda.order() % 2 == 0 { 0 } else { 1 };
        ranking.set(u.symbol, group, i as u32);
    }
    let diff = &skew_adjoint(&a.entry) - &a.entry;
    let mut sys = ConstraintSystem::new(ranking.clone());
    for (key, form) in extract_equations(&diff, crate::par::Execution::Sequential)? {
        sys.push(Some(key), form);
    }
    let sol = sys.solve_with(&a.symbols(), 0)?;
    for b in sol.lowest_pivot.keys() {
        if ranking.group(*b) != 0 {
            return Err(DeformError::InconsistentSkew(format!(
                "odd unknown {} is constrained",
                b.display_name()
            )));
        }
    }
    if let Some(b) = sol.free.iter().find(|b| ranking.group(**b) == 0) {
        return Err(DeformError::InconsistentSkew(format!(
            "even unknown {} is left free",
            b.display_name()
        )));
    }
    let entry = a.entry.substitute_symbols(sol.substitution());
    let free: BTreeSet<SymbolId> = sol.free.iter().copied().collect();
    let reduced = Ansatz {
        degree: a.degree,
        space: a.space,
        shapes: a.shapes.clone(),
        entry,
        unknowns: a
            .unknowns
            .iter()
            .filter(|u| free.contains(&u.symbol))
            .cloned()
            .collect(),
        raw_count: a.raw_count,
    };
    Ok((reduced, sol))
}

/// A second-kind Miura correction `ω ↦ ω + ε^k F` with `F` homogeneous of
/// degree `k`.
#[derive(Clone, Debug)]
pub struct MiuraTransform {
    pub order: u32,
    pub f: DiffPoly,
    pub unknowns: Vec<Unknown>,
    pub shapes: Vec<Shape>,
}

impl MiuraTransform {
    /// A concrete correction; no unknowns are tracked.
    pub fn new(order: u32, f: DiffPoly) -> Result<Self, DeformError> {
        use crate::diffalg::Degree;
        match f.degree() {
            Degree::Zero => {}
            Degree::Homogeneous(d) if d == order => {}
            _ => return Err(DeformError::NotSecondKind(order)),
        }
        if order == 0 {
            return Err(DeformError::NotSecondKind(order));
        }
        Ok(MiuraTransform {
            order,
            f,
            unknowns: Vec::new(),
            shapes: Vec::new(),
        })
    }

    /// The general correction of degree `order` with unknown coefficient
    /// functions, lettered `f, g, …`.
    pub fn generic(space: Space, order: u32) -> Result<Self, DeformError> {
        if space.gens() != 1 {
            return Err(DeformError::NotScalar(space.gens()));
        }
        if order == 0 {
            return Err(DeformError::NotSecondKind(order));
        }
        let dim = space.dim();
        let shapes: Vec<Shape> = partitions(order)
            .into_iter()
            .enumerate()
            .map(|(i, p)| Shape {
                letter: letter('f', i),
                lambda_count: 0,
                jet_orders: p,
            })
            .collect();
        let zero = MultiIndex::zero(dim);
        let mut f = DiffPoly::zero(space);
        let mut unknowns = Vec::new();
        for (si, shape) in shapes.iter().enumerate() {
            let mut cells: Vec<(String, JetMonomial)> = jet_monomials(dim, &shape.jet_orders)
                .into_iter()
                .map(|j| (unknown_label(&zero, &j), j))
                .collect();
            cells.sort_by(|a, b| a.0.cmp(&b.0));
            for (label, j) in cells {
                let sym = FuncSymbol::function(&shape.letter, &label, 0);
                f = &f + &monomial_poly(space, sym, &j);
                unknowns.push(Unknown {
                    symbol: sym.base,
                    shape: si,
                    lambda: zero,
                    jets: j,
                });
            }
        }
        Ok(MiuraTransform {
            order,
            f,
            unknowns,
            shapes,
        })
    }
}
