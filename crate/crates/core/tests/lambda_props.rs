use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use pva_core::diffalg::{Degree, MultiIndex, Space};
use pva_core::lambda::{check_leibniz, check_sesquilinearity, skew_adjoint, BracketTable, LambdaMono, LambdaPoly};
use pva_core::models::euler_bracket;
use pva_core::par::Execution;
use pva_core::sampling::{self, SampleBounds};
use rand::Rng;

fn config() -> Config {
    Config {
        cases: 100,
        rng_seed: RngSeed::Fixed(0x1a4bda),
        failure_persistence: None,
        ..Config::default()
    }
}

fn space() -> impl Strategy<Value = Space> {
    prop_oneof![
        Just(Space::new(1, 1).unwrap()),
        Just(Space::new(2, 1).unwrap()),
        Just(Space::new(2, 2).unwrap()),
    ]
}

fn random_lambda<R: Rng>(s: Space, rng: &mut R, bounds: SampleBounds, max_exp: u32) -> LambdaPoly {
    let mut out = LambdaPoly::zero(s);
    for _ in 0..rng.gen_range(1..=3) {
        let e: Vec<u32> = (0..s.dim()).map(|_| rng.gen_range(0..=max_exp)).collect();
        let p = sampling::random_diffpoly(s, rng, bounds);
        out.add_assign(&LambdaPoly::monomial(LambdaMono::lambda(MultiIndex::new(&e)), p));
    }
    out
}

fn random_table<R: Rng>(s: Space, rng: &mut R, max_exp: u32) -> BracketTable {
    let bounds = SampleBounds {
        max_degree: 2,
        max_terms: 2,
        with_symbols: false,
    };
    let entries = (0..s.gens() * s.gens())
        .map(|_| random_lambda(s, rng, bounds, max_exp))
        .collect();
    BracketTable::from_entries(s, entries).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn skew_adjoint_is_an_involution(s in space(), seed: u64) {
        let bounds = SampleBounds { with_symbols: true, ..SampleBounds::default() };
        let p = random_lambda(s, &mut sampling::rng(seed), bounds, 2);
        prop_assert_eq!(skew_adjoint(&skew_adjoint(&p)), p);
    }

    #[test]
    fn master_formula_on_generators(s in space(), seed: u64) {
        let t = random_table(s, &mut sampling::rng(seed), 2);
        for i in 0..s.gens() {
            for j in 0..s.gens() {
                prop_assert_eq!(&t.master_formula(&t.generator(i), &t.generator(j)), t.entry(i, j));
            }
        }
    }

    #[test]
    fn sesquilinearity_and_leibniz_hold_for_any_table(s in space(), seed: u64) {
        let mut rng = sampling::rng(seed);
        let t = random_table(s, &mut rng, 1);
        let bounds = SampleBounds { max_degree: 2, max_terms: 2, with_symbols: false };
        let samples: Vec<_> = (0..2).map(|_| sampling::random_diffpoly(s, &mut rng, bounds)).collect();
        for r in check_sesquilinearity(&t, &samples, Execution::Sequential) {
            prop_assert!(r.passed(), "{}: {:?}", r.axiom, r.failures);
        }
        for r in check_leibniz(&t, &samples, Execution::Sequential) {
            prop_assert!(r.passed(), "{}: {:?}", r.axiom, r.failures);
        }
    }

    #[test]
    fn master_formula_is_graded(seed: u64, d1 in 0u32..3, d2 in 0u32..3) {
        let e = euler_bracket().table;
        let mut rng = sampling::rng(seed);
        let f = sampling::random_homogeneous(e.space(), &mut rng, d1, 2);
        let g = sampling::random_homogeneous(e.space(), &mut rng, d2, 2);
        let b = e.master_formula(&f, &g);
        prop_assert!(b.is_zero() || b.degree() == Degree::Homogeneous(d1 + d2 + 2));
    }
}
