#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swallowtail_core::{ModelParams, RawParams, C64};

pub const CORPUS: usize = 10_000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Magnitudes and losses in `[0, 2]`, detunings in `[-2, 2]`, phases uniform.
pub fn random_params(rng: &mut impl Rng, equal_losses: bool) -> ModelParams {
    let mut ph = || rng.gen_range(-PI..PI);
    let phases = [ph(), ph(), ph(), ph()];
    let gamma_1 = rng.gen_range(0.0..2.0);
    RawParams {
        delta_omega_1: rng.gen_range(-2.0..2.0),
        delta_omega_2: rng.gen_range(-2.0..2.0),
        g: rng.gen_range(0.0..2.0),
        phi_g: phases[0],
        xi_1: rng.gen_range(0.0..2.0),
        phi_1: phases[1],
        xi_2: rng.gen_range(0.0..2.0),
        phi_2: phases[2],
        chi: rng.gen_range(0.0..2.0),
        phi_chi: phases[3],
        gamma_1,
        gamma_2: if equal_losses {
            gamma_1
        } else {
            rng.gen_range(0.0..2.0)
        },
    }
    .build()
    .unwrap()
}

/// Simple-model point: `χ = ξ₂ = 0`, arbitrary phases.
pub fn random_simple(rng: &mut impl Rng) -> ModelParams {
    let g = rng.gen_range(0.0..2.0);
    let xi = rng.gen_range(0.0..2.0);
    let gm: f64 = rng.gen_range(-2.0..2.0);
    RawParams {
        delta_omega_1: rng.gen_range(-2.0..2.0),
        delta_omega_2: rng.gen_range(-2.0..2.0),
        g,
        phi_g: rng.gen_range(-PI..PI),
        xi_1: xi,
        phi_1: rng.gen_range(-PI..PI),
        gamma_1: gm.max(0.0),
        gamma_2: (-gm).max(0.0),
        ..RawParams::default()
    }
    .build()
    .unwrap()
}

/// Largest distance under the best one-to-one assignment of `a` onto `b`.
pub fn matched_mismatch(a: &[C64; 4], b: &[C64; 4]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                if i == j || i == k || j == k {
                    continue;
                }
                let l = 6 - i - j - k;
                let p = [i, j, k, l];
                let worst = (0..4).map(|n| (a[n] - b[p[n]]).norm()).fold(0.0, f64::max);
                best = best.min(worst);
            }
        }
    }
    best
}
