#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use squeezed_core::{AtomParams, Basis, BathParams, DensityMatrix, Op4, Params, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn bath(rng: &mut ChaCha8Rng, n_max: f64) -> BathParams {
    let n = rng.random_range(0.0..n_max);
    let bound = (n * (n + 1.0)).sqrt();
    // Put some mass exactly on the boundary.
    let frac = if rng.random_bool(0.2) { 1.0 } else { rng.random_range(0.0..1.0) };
    BathParams::new(n, frac * bound, rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn separated(rng: &mut ChaCha8Rng) -> Params {
    let b = bath(rng, 3.0);
    let atoms = AtomParams::new(
        rng.random_range(0.0..0.99),
        rng.random_range(-2.0..2.0),
        rng.random_range(-2.0..2.0),
    );
    Params::new(b, atoms).unwrap()
}

pub fn dicke(rng: &mut ChaCha8Rng) -> Params {
    let b = bath(rng, 3.0);
    let atoms = AtomParams::dicke(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    Params::new(b, atoms).unwrap()
}

/// `G G† / tr(G G†)` for complex Gaussian-ish `G`.
pub fn state(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let g = Op4::from_fn(|_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m / tr, Basis::Canonical).unwrap()
}

pub fn max_abs(m: &Op4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
