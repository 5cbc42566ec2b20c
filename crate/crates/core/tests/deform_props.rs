use std::sync::LazyLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use pva_core::deform::{
    coboundary_direct, coboundary_formula, generate_ansatz, impose_skewsymmetry, jacobi_defect_linear, match_trivial,
    trivial_coboundary, Ansatz, ConstraintSystem, MiuraTransform, Solution, Verdict,
};
use pva_core::diffalg::Space;
use pva_core::lambda::{skew_adjoint, BracketTable};
use pva_core::models::euler_bracket;
use pva_core::par::Execution;
use pva_core::sampling;
use rand::seq::SliceRandom;

static EULER: LazyLock<BracketTable> = LazyLock::new(|| euler_bracket().table);

static SYSTEMS: LazyLock<Vec<(Ansatz, ConstraintSystem)>> = LazyLock::new(|| {
    [3, 4]
        .into_iter()
        .map(|d| {
            let (skew, _) = impose_skewsymmetry(&generate_ansatz(d, EULER.space()).unwrap()).unwrap();
            let sys = jacobi_defect_linear(&EULER, &skew, Execution::default()).unwrap();
            (skew, sys)
        })
        .collect()
});

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0xdef0),
        failure_persistence: None,
        ..Config::default()
    }
}

/// `sol` satisfies every equation of `sys`.
fn satisfies(sol: &Solution, sys: &ConstraintSystem) -> bool {
    sys.equations
        .iter()
        .all(|e| sol.reduce(&e.form).map(|r| r.is_zero()).unwrap_or(false))
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn coboundary_routes_agree(seed: u64, degree in 1u32..=3) {
        let f = sampling::random_homogeneous(EULER.space(), &mut sampling::rng(seed), degree, 3);
        prop_assert_eq!(coboundary_formula(&EULER, &f).unwrap(), coboundary_direct(&EULER, &f).unwrap());
    }

    #[test]
    fn solve_ignores_equation_order(seed: u64, which in 0usize..2) {
        let (skew, sys) = &SYSTEMS[which];
        let mut eqs = sys.equations.clone();
        eqs.shuffle(&mut sampling::rng(seed));
        let mut shuffled = ConstraintSystem::new(sys.ranking.clone());
        for e in eqs {
            shuffled.push(e.key, e.form);
        }
        let a = sys.solve_with(&skew.symbols(), 0).unwrap();
        let b = shuffled.solve_with(&skew.symbols(), 0).unwrap();
        prop_assert_eq!(a.dimension(), b.dimension());
        prop_assert!(satisfies(&a, &shuffled) && satisfies(&b, sys));
        for u in &skew.unknowns {
            for k in 0..=1 {
                prop_assert_eq!(a.resolve(u.symbol.at(k)).unwrap(), b.resolve(u.symbol.at(k)).unwrap());
            }
        }
    }
}

#[test]
fn reduced_ansatz_is_skewsymmetric() {
    for d in 3..=5 {
        let (skew, _) = impose_skewsymmetry(&generate_ansatz(d, EULER.space()).unwrap()).unwrap();
        assert_eq!(skew_adjoint(&skew.entry), skew.entry, "degree {d}");
    }
}

#[test]
fn generic_coboundaries_are_compatible() {
    for order in 1..=2 {
        let m = MiuraTransform::generic(EULER.space(), order).unwrap();
        let cob = trivial_coboundary(&EULER, &m).unwrap();
        let sys = jacobi_defect_linear(&EULER, &cob, Execution::default()).unwrap();
        assert!(sys.is_empty(), "order {order}: {} equations", sys.len());
    }
}

#[test]
fn extraction_is_deterministic_across_modes() {
    let (skew, _) = &SYSTEMS[1];
    let seq = jacobi_defect_linear(&EULER, skew, Execution::Sequential).unwrap();
    let par = jacobi_defect_linear(&EULER, skew, Execution::Parallel).unwrap();
    assert_eq!(seq.len(), par.len());
    for (a, b) in seq.equations.iter().zip(&par.equations) {
        assert_eq!(a.key, b.key);
        assert_eq!(a.form, b.form);
    }
}

/// Dropping the compatibility equations leaves deformations that no Miura
/// transformation produces.
#[test]
fn planted_noncoboundary_is_nontrivial() {
    for (skew, sys) in SYSTEMS.iter() {
        let empty = ConstraintSystem::new(sys.ranking.clone());
        let sol = empty.solve_with(&skew.symbols(), 0).unwrap();
        assert_eq!(sol.dimension(), skew.unknowns.len());
        let out = match_trivial(&sol, skew, &EULER, Execution::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Nontrivial);
        assert!(out.obstruction.as_deref().is_some_and(|o| o.ends_with(" = 0")));
    }
}

#[test]
fn scalar_only() {
    let s = Space::new(2, 2).unwrap();
    assert!(generate_ansatz(3, s).is_err());
    assert!(generate_ansatz(2, EULER.space()).is_err());
}
