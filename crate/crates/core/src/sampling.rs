//! Seeded random differential polynomials for property checks.
//!
//! Bounds: jet degree at most `max_degree` (default 4), at most `max_terms`
//! terms (default 3), small nonzero integer coefficients.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diffalg::{int, DiffPoly, FuncSymbol, MultiIndex, Space};

#[derive(Clone, Copy, Debug)]
pub struct SampleBounds {
    pub max_degree: u32,
    pub max_terms: usize,
    /// Attach unknown function symbols of the generators to some terms.
    pub with_symbols: bool,
}

impl Default for SampleBounds {
    fn default() -> Self {
        SampleBounds {
            max_degree: 4,
            max_terms: 3,
            with_symbols: false,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_jet<R: Rng>(space: Space, rng: &mut R, order: u32) -> DiffPoly {
    let choices = MultiIndex::all_of_order(space.dim(), order);
    let idx = choices[rng.gen_range(0..choices.len())];
    let g = rng.gen_range(0..space.gens());
    let entries: Vec<u32> = idx.entries().collect();
    DiffPoly::jet_of(space, g, &entries)
}

/// A homogeneous-or-not random polynomial within `bounds`.
pub fn random_diffpoly<R: Rng>(space: Space, rng: &mut R, bounds: SampleBounds) -> DiffPoly {
    let nterms = rng.gen_range(1..=bounds.max_terms.max(1));
    let mut out = DiffPoly::zero(space);
    for _ in 0..nterms {
        let mut c = rng.gen_range(1..=3i64);
        if rng.gen_bool(0.5) {
            c = -c;
        }
        let mut term = DiffPoly::from_int(space, c);
        let mut left = rng.gen_range(0..=bounds.max_degree);
        while left > 0 {
            let o = rng.gen_range(1..=left);
            term = &term * &random_jet(space, rng, o);
            left -= o;
        }
        for _ in 0..rng.gen_range(0..=2) {
            let g = rng.gen_range(0..space.gens());
            term = &term * &DiffPoly::generator(space, g);
        }
        if bounds.with_symbols && rng.gen_bool(0.5) {
            let g = rng.gen_range(0..space.gens());
            let s = FuncSymbol::function("S", &format!("{}", rng.gen_range(1..=3)), g as u8);
            term = &term * &DiffPoly::func(space, s);
        }
        out = &out + &term;
    }
    if out.is_zero() {
        out = DiffPoly::constant(space, int(1));
    }
    out
}

/// A homogeneous polynomial of exactly `degree` (jets only).
pub fn random_homogeneous<R: Rng>(space: Space, rng: &mut R, degree: u32, max_terms: usize) -> DiffPoly {
    let mut out = DiffPoly::zero(space);
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let mut term = DiffPoly::from_int(space, rng.gen_range(-3..=3i64));
        let mut left = degree;
        while left > 0 {
            let o = rng.gen_range(1..=left);
            term = &term * &random_jet(space, rng, o);
            left -= o;
        }
        out = &out + &term;
    }
    out
}
