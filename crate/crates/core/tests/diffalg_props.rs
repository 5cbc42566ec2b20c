use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use pva_core::diffalg::{Degree, DiffPoly, Space};
use pva_core::sampling::{self, SampleBounds};

fn config() -> Config {
    Config {
        cases: 128,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn space() -> impl Strategy<Value = Space> {
    prop_oneof![
        Just(Space::new(1, 1).unwrap()),
        Just(Space::new(2, 1).unwrap()),
        Just(Space::new(2, 2).unwrap()),
        Just(Space::new(3, 1).unwrap()),
    ]
}

fn sample(s: Space, seed: u64, with_symbols: bool) -> DiffPoly {
    let bounds = SampleBounds {
        with_symbols,
        ..SampleBounds::default()
    };
    sampling::random_diffpoly(s, &mut sampling::rng(seed), bounds)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn derivatives_commute(s in space(), seed: u64, i in 0usize..3, j in 0usize..3) {
        let (i, j) = (i % s.dim(), j % s.dim());
        let p = sample(s, seed, true);
        prop_assert_eq!(p.total_derivative(i).total_derivative(j), p.total_derivative(j).total_derivative(i));
    }

    #[test]
    fn leibniz(s in space(), a: u64, b: u64, i in 0usize..3) {
        let i = i % s.dim();
        let (p, q) = (sample(s, a, true), sample(s, b, true));
        let lhs = (&p * &q).total_derivative(i);
        let rhs = &(&p.total_derivative(i) * &q) + &(&p * &q.total_derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chain_rule(s in space(), seed: u64, i in 0usize..3) {
        let i = i % s.dim();
        let p = sample(s, seed, false);
        let mut vars = p.variables();
        vars.extend((0..s.gens()).map(|g| s.jet_var(g, &vec![0; s.dim()])));
        let mut sum = DiffPoly::zero(s);
        for v in &vars {
            sum = &sum + &(&p.partial_jet(v) * &DiffPoly::jet(s, v.raised(i)));
        }
        prop_assert_eq!(p.total_derivative(i), sum);
    }

    #[test]
    fn ring_laws(s in space(), a: u64, b: u64, c: u64) {
        let (p, q, r) = (sample(s, a, true), sample(s, b, true), sample(s, c, true));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn grading(s in space(), seed: u64, d1 in 0u32..4, d2 in 0u32..4, i in 0usize..3) {
        let i = i % s.dim();
        let mut rng = sampling::rng(seed);
        let p = sampling::random_homogeneous(s, &mut rng, d1, 3);
        let q = sampling::random_homogeneous(s, &mut rng, d2, 3);
        prop_assume!(!p.is_zero() && !q.is_zero());
        prop_assert_eq!(p.degree(), Degree::Homogeneous(d1));
        prop_assert_eq!((&p * &q).degree(), Degree::Homogeneous(d1 + d2));
        let dp = p.total_derivative(i);
        prop_assert!(dp.is_zero() || dp.degree() == Degree::Homogeneous(d1 + 1));
    }
}
