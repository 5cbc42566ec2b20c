//! Infinitesimal Miura coboundaries `ω ↦ ω + ε^k F` of a scalar bracket.

use super::ansatz::{Ansatz, MiuraTransform};
use super::DeformError;
use crate::diffalg::{DiffPoly, FuncMonomial, FuncSymbol, Monomial};
use crate::lambda::{BracketTable, LambdaPoly};

fn scalar_entry(base: &BracketTable) -> Result<&LambdaPoly, DeformError> {
    if base.gens() != 1 {
        return Err(DeformError::NotScalar(base.gens()));
    }
    Ok(base.entry(0, 0))
}

/// `{F_λ ω} + {ω_λ F} − Σ_I ∂B/∂ω_I · ∂^I F`, with `B = {ω_λ ω}`.
pub fn coboundary_formula(base: &BracketTable, f: &DiffPoly) -> Result<LambdaPoly, DeformError> {
    let b = scalar_entry(base)?;
    let w = base.generator(0);
    let mut out = &base.master_formula(f, &w) + &base.master_formula(&w, f);
    for v in b.variables() {
        let db = b.partial_jet(&v);
        out = &out - &db.mul_diffpoly(&f.derivative_by(&v.index));
    }
    Ok(out)
}

fn eps_count(m: &Monomial, t: FuncSymbol) -> usize {
    m.funcs.iter().filter(|s| **s == t).count()
}

fn truncate(p: &DiffPoly, t: FuncSymbol) -> DiffPoly {
    p.filter_terms(|m| eps_count(m, t) <= 1)
}

/// Coefficient of `t^k`, with `t` removed.
fn eps_part(p: &DiffPoly, t: FuncSymbol, k: usize) -> DiffPoly {
    let mut out = DiffPoly::zero(p.space());
    for (m, c) in p.terms() {
        if eps_count(m, t) != k {
            continue;
        }
        let funcs: FuncMonomial = m.funcs.iter().copied().filter(|s| *s != t).collect();
        out.add_term(
            Monomial {
                jets: m.jets.clone(),
                funcs,
            },
            c.clone(),
        );
    }
    out
}

/// Rewrites a polynomial in `ω` in the coordinate `ω̃ = ω + tF`, to first
/// order in `t`: every `ω_I` becomes `ω̃_I − t ∂^I F` and every coefficient
/// function `S(ω)` becomes `S(ω̃) − t F S′(ω̃)`.
fn change_coordinates(p: &DiffPoly, f: &DiffPoly, t: FuncSymbol) -> DiffPoly {
    let space = p.space();
    let tp = DiffPoly::func(space, t);
    let mut out = DiffPoly::zero(space);
    for (m, c) in p.terms() {
        let mut acc = DiffPoly::constant(space, c.clone());
        for v in &m.jets {
            let repl = &DiffPoly::jet(space, *v) - &(&tp * &f.derivative_by(&v.index));
            acc = truncate(&(&acc * &repl), t);
        }
        for s in &m.funcs {
            let repl = match s.derivative() {
                Some(ds) if s.generator() == Some(0) => {
                    &DiffPoly::func(space, *s) - &(&(&tp * f) * &DiffPoly::func(space, ds))
                }
                _ => DiffPoly::func(space, *s),
            };
            acc = truncate(&(&acc * &repl), t);
        }
        out = &out + &acc;
    }
    out
}

/// Expands `{φ_λ φ}` for `φ = ω + tF`, changes coordinates back and keeps
/// the `t¹` part.
pub fn coboundary_direct(base: &BracketTable, f: &DiffPoly) -> Result<LambdaPoly, DeformError> {
    let b = scalar_entry(base)?;
    let space = base.space();
    let t = FuncSymbol::constant("eps");
    let phi = &base.generator(0) + &(&DiffPoly::func(space, t) * f);
    let full = base.master_formula(&phi, &phi);
    let rewritten = full.map_coefficients(|c| change_coordinates(&truncate(c, t), f, t));
    let order0 = rewritten.map_coefficients(|c| eps_part(c, t, 0));
    if order0 != *b {
        return Err(DeformError::CoboundaryMismatch);
    }
    Ok(rewritten.map_coefficients(|c| eps_part(c, t, 1)))
}

/// The deformation induced by `m` on a degree-2 scalar base, computed both
/// ways; the routes must agree.
pub fn trivial_coboundary(base: &BracketTable, m: &MiuraTransform) -> Result<Ansatz, DeformError> {
    let a = coboundary_formula(base, &m.f)?;
    let b = coboundary_direct(base, &m.f)?;
    if a != b {
        return Err(DeformError::CoboundaryMismatch);
    }
    Ok(Ansatz {
        degree: m.order + 2,
        space: base.space(),
        shapes: m.shapes.clone(),
        entry: a,
        unknowns: m.unknowns.clone(),
        raw_count: m.unknowns.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::{int, Degree, Space};
    use crate::lambda::{skew_adjoint, Alphabet};

    fn sp() -> Space {
        Space::new(2, 1).unwrap()
    }

    fn euler() -> BracketTable {
        let s = sp();
        let l = |k| LambdaPoly::var(s, Alphabet::Lambda, k);
        let e =
            &l(1).mul_diffpoly(&DiffPoly::jet_of(s, 0, &[1, 0])) - &l(0).mul_diffpoly(&DiffPoly::jet_of(s, 0, &[0, 1]));
        BracketTable::scalar(e).unwrap()
    }

    #[test]
    fn zero_correction_gives_zero() {
        let m = MiuraTransform::new(2, DiffPoly::zero(sp())).unwrap();
        assert!(trivial_coboundary(&euler(), &m).unwrap().entry.is_zero());
    }

    #[test]
    fn routes_agree_on_product_of_first_derivatives() {
        let s = sp();
        let f = &DiffPoly::jet_of(s, 0, &[1, 0]) * &DiffPoly::jet_of(s, 0, &[0, 1]);
        let a = coboundary_formula(&euler(), &f).unwrap();
        let b = coboundary_direct(&euler(), &f).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree(), Degree::Homogeneous(4));
    }

    #[test]
    fn generic_degree_two_is_skew_and_linear() {
        let m = MiuraTransform::generic(sp(), 2).unwrap();
        let c = trivial_coboundary(&euler(), &m).unwrap();
        assert_eq!(c.degree, 4);
        assert_eq!(skew_adjoint(&c.entry), c.entry);
        assert_eq!(c.entry.degree(), Degree::Homogeneous(4));
        for (_, p) in c.entry.terms() {
            for (_, coeff) in p.coefficients() {
                let (c0, _) = coeff.as_linear().unwrap();
                assert_eq!(c0, int(0));
            }
        }
    }
}
