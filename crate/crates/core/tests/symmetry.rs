mod common;

use common::{matched_mismatch, random_params, rng, CORPUS};
use proptest::prelude::*;
use swallowtail_core::model::{
    build_dynamical_matrix, particle_hole_residual, pseudo_hermiticity_residual,
    traceless_dynamical_matrix,
};
use swallowtail_core::spectral::{char_poly_coeffs, eig4};

#[test]
fn particle_hole_holds_on_corpus() {
    let mut rng = rng(1);
    for _ in 0..CORPUS {
        let p = random_params(&mut rng, false);
        let m = build_dynamical_matrix(&p);
        assert!(
            particle_hole_residual(&m) <= 1e-12 * m.frobenius_norm(),
            "{p:?}"
        );
        let roots = eig4(&traceless_dynamical_matrix(&p)).unwrap().roots;
        let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let conj = roots.map(|z| z.conj());
        assert!(
            matched_mismatch(&roots, &conj) <= 1e-10 * scale,
            "{p:?}: {roots:?}"
        );
    }
}

#[test]
fn equal_losses_give_pseudo_hermitian_quartets() {
    let mut rng = rng(2);
    for _ in 0..CORPUS {
        let p = random_params(&mut rng, true);
        let e = traceless_dynamical_matrix(&p);
        let n = e.frobenius_norm().max(1.0);
        assert!(pseudo_hermiticity_residual(&e) <= 1e-12 * n, "{p:?}");
        let c = char_poly_coeffs(&e).unwrap();
        assert!(c.r.abs() <= 1e-12 * n.powi(3), "{p:?}: r = {}", c.r);
        let roots = eig4(&e).unwrap().roots;
        let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let mirrored = roots.map(|z| -z.conj());
        assert!(
            matched_mismatch(&roots, &mirrored) <= 1e-10 * scale,
            "{p:?}: {roots:?}"
        );
    }
}

#[test]
fn lossless_matrix_is_pseudo_hermitian_before_shift() {
    let mut rng = rng(3);
    for _ in 0..1000 {
        let mut raw = random_params(&mut rng, true).raw();
        raw.gamma_1 = 0.0;
        raw.gamma_2 = 0.0;
        let m = build_dynamical_matrix(&raw.build().unwrap());
        assert!(pseudo_hermiticity_residual(&m) <= 1e-12 * m.frobenius_norm().max(1.0));
    }
}

proptest! {
    #[test]
    fn particle_hole_prop(seed in any::<u64>()) {
        let p = random_params(&mut rng(seed), false);
        let m = build_dynamical_matrix(&p);
        prop_assert!(particle_hole_residual(&m) <= 1e-12 * m.frobenius_norm());
        let c = char_poly_coeffs(&traceless_dynamical_matrix(&p));
        prop_assert!(c.is_ok());
    }
}
