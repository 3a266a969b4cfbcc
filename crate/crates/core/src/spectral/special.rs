//! Closed-form eigenvectors of the simple model on its special loci.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CVec4, C64, ONE, ZERO};
use crate::model::ModelParams;

/// Degeneracy loci with known analytic eigenvectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Locus {
    /// Exceptional lines: `u = 0` with `g ≠ 0`, or `γ₋ = 0` with `u = 4g²`.
    El,
    /// Four-fold point: `u = g = γ₋ = 0`, or `u = 0` with `γ₋ = ±4g`.
    Ep4,
    /// Three-fold diabolical line: `g = 0`, `u = γ₋²/4`.
    Dl3,
}

/// Eigenvector in the analytic normalisation, with its eigenvalue of the
/// traceless matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecialEigenvector {
    pub eigenvalue: C64,
    pub vector: CVec4,
}

fn ev(eigenvalue: C64, vector: CVec4) -> SpecialEigenvector {
    SpecialEigenvector { eigenvalue, vector }
}

fn near(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-10 * scale.max(1.0)
}

/// Analytic eigenvectors on a special locus of the simple model.
///
/// The formulas assume `δω₂ = 0`, `χ = ξ₂ = 0` and `δω₁ ≥ 0`; the last one
/// picks the branch of `√u`-type expressions the formulas were derived on.
pub fn special_eigenvectors(locus: Locus, p: &ModelParams) -> Result<Vec<SpecialEigenvector>> {
    if p.delta_omega_2() != 0.0 {
        return Err(Error::OffLocus("requires delta_omega_2 = 0".into()));
    }
    if !p.is_simple() {
        return Err(Error::OffLocus("requires chi = xi_2 = 0".into()));
    }
    if p.delta_omega_1() < 0.0 {
        return Err(Error::OffLocus("requires delta_omega_1 >= 0".into()));
    }
    let g = p.g();
    let gm = p.gamma_minus();
    let u = p.u();
    let xi = p.xi_1();
    let scale = xi * xi + p.delta_omega_1().powi(2) + g * g + gm * gm;
    let i = C64::i();
    let e = |phi: f64| C64::from_polar(1.0, phi);
    let (pg, p1) = (p.phi_g(), p.phi_1());

    match locus {
        Locus::El => {
            if near(u, 0.0, scale) && g > 0.0 {
                let w = C64::new(16.0 * g * g - gm * gm, 0.0).sqrt();
                let a = e(pg - p1) / (4.0 * g);
                let b = -i * e(2.0 * pg - p1);
                let c = e(pg) / (4.0 * g);
                Ok(vec![
                    ev(i * w / 4.0, [-a * (i * gm + w), b, c * (gm - i * w), ONE]),
                    ev(-i * w / 4.0, [a * (-i * gm + w), b, c * (gm + i * w), ONE]),
                ])
            } else if near(gm, 0.0, scale) && near(u, 4.0 * g * g, scale) && xi > 0.0 {
                let w = C64::new(xi * xi - 4.0 * g * g, 0.0).sqrt();
                let a = e(pg - p1) / xi;
                let b = e(2.0 * pg - p1) / xi;
                Ok(vec![
                    ev(
                        C64::new(-g, 0.0),
                        [-a * (2.0 * g + i * w), -b * (2.0 * g + i * w), e(pg), ONE],
                    ),
                    ev(
                        C64::new(g, 0.0),
                        [a * (-2.0 * g + i * w), b * (2.0 * g - i * w), -e(pg), ONE],
                    ),
                ])
            } else {
                Err(Error::OffLocus(
                    "EL needs u = 0 with g > 0, or gamma_minus = 0 with u = 4 g^2".into(),
                ))
            }
        }
        Locus::Ep4 => {
            if near(u, 0.0, scale) && near(g, 0.0, scale) && near(gm, 0.0, scale) {
                Ok(vec![
                    ev(ZERO, [ZERO, ZERO, ZERO, ONE]),
                    ev(ZERO, [-i * e(-p1), ZERO, ONE, ZERO]),
                    ev(ZERO, [ZERO, ONE, ZERO, ZERO]),
                ])
            } else if near(u, 0.0, scale) && g > 0.0 && near(gm.abs(), 4.0 * g, scale) {
                let sign = gm.signum();
                Ok(vec![ev(
                    ZERO,
                    [
                        -i * e(pg - p1) * sign,
                        -i * e(2.0 * pg - p1),
                        e(pg) * sign,
                        ONE,
                    ],
                )])
            } else {
                Err(Error::OffLocus(
                    "EP4 needs u = g = gamma_minus = 0, or u = 0 with gamma_minus = ±4 g".into(),
                ))
            }
        }
        Locus::Dl3 => {
            if !(near(g, 0.0, scale) && near(u, gm * gm / 4.0, scale)) {
                return Err(Error::OffLocus(
                    "DL3 needs g = 0 and u = gamma_minus^2 / 4".into(),
                ));
            }
            if xi == 0.0 {
                return Err(Error::OffLocus("DL3 eigenvectors need xi_1 > 0".into()));
            }
            let w = C64::new(4.0 * xi * xi - gm * gm, 0.0).sqrt();
            let a = e(-p1) / (2.0 * xi);
            let triple = C64::new(gm / 4.0, 0.0);
            Ok(vec![
                ev(triple, [ZERO, ZERO, ZERO, ONE]),
                ev(triple, [a * (gm - i * w), ZERO, ONE, ZERO]),
                ev(triple, [ZERO, ONE, ZERO, ZERO]),
                ev(
                    C64::new(-3.0 * gm / 4.0, 0.0),
                    [-a * (gm + i * w), ZERO, ONE, ZERO],
                ),
            ])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec_norm;
    use crate::model::{traceless_dynamical_matrix, RawParams};

    fn check_residuals(p: &ModelParams, vs: &[SpecialEigenvector]) {
        let e = traceless_dynamical_matrix(p);
        for sv in vs {
            let ev = e.mul_vec(&sv.vector);
            let r: f64 = (0..4)
                .map(|k| (ev[k] - sv.eigenvalue * sv.vector[k]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(
                r <= 1e-9 * e.frobenius_norm().max(1.0) * vec_norm(&sv.vector),
                "residual {r} for {sv:?}"
            );
        }
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn ep4_nontrivial_vector() {
        let p = ModelParams::simple(1.0, 0.0, 1.0, 1.0, 4.0).unwrap();
        let vs = special_eigenvectors(Locus::Ep4, &p).unwrap();
        assert_eq!(vs.len(), 1);
        assert_eq!(
            vs[0].vector,
            [c(0.0, -1.0), c(0.0, -1.0), c(1.0, 0.0), c(1.0, 0.0)]
        );
        check_residuals(&p, &vs);
        let p = ModelParams::simple(1.0, 0.0, 1.0, 1.0, -4.0).unwrap();
        check_residuals(&p, &special_eigenvectors(Locus::Ep4, &p).unwrap());
    }

    #[test]
    fn ep4_origin_vectors() {
        let p = ModelParams::simple(0.8, 0.0, 0.0, 0.8, 0.0).unwrap();
        let vs = special_eigenvectors(Locus::Ep4, &p).unwrap();
        assert_eq!(vs.len(), 3);
        check_residuals(&p, &vs);
    }

    #[test]
    fn dl3_vectors() {
        let p = ModelParams::simple(0.0, 0.0, 0.0, 1.0, 2.0).unwrap();
        let vs = special_eigenvectors(Locus::Dl3, &p).unwrap();
        assert_eq!(vs[0].vector, [ZERO, ZERO, ZERO, ONE]);
        assert_eq!(vs[0].eigenvalue, c(0.5, 0.0));
        check_residuals(&p, &vs);
        let raw = RawParams {
            delta_omega_1: 0.6,
            xi_1: 1.3,
            phi_1: 0.7,
            gamma_2: 2.0 * (1.3f64 * 1.3 - 0.36).sqrt(),
            ..Default::default()
        };
        let p = raw.build().unwrap();
        check_residuals(&p, &special_eigenvectors(Locus::Dl3, &p).unwrap());
    }

    #[test]
    fn el_vectors_on_u_zero() {
        let p = ModelParams::simple(0.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        let vs = special_eigenvectors(Locus::El, &p).unwrap();
        assert_eq!(
            vs[0].vector,
            [c(-1.0, 0.0), c(0.0, -1.0), c(0.0, -1.0), ONE]
        );
        check_residuals(&p, &vs);
        for (gm, phase) in [(1.5, 0.3), (-2.5, -1.2), (6.0, 2.0)] {
            let raw = RawParams {
                delta_omega_1: 0.9,
                xi_1: 0.9,
                g: 1.0,
                phi_g: phase,
                phi_1: 0.4,
                gamma_1: f64::max(gm, 0.0),
                gamma_2: f64::max(-gm, 0.0),
                ..Default::default()
            };
            let p = raw.build().unwrap();
            check_residuals(&p, &special_eigenvectors(Locus::El, &p).unwrap());
        }
    }

    #[test]
    fn el_vectors_on_second_branch() {
        let raw = RawParams {
            delta_omega_1: 0.5,
            g: 0.6,
            xi_1: (1.44f64 + 0.25).sqrt(),
            phi_g: 0.9,
            phi_1: -0.4,
            ..Default::default()
        };
        let p = raw.build().unwrap();
        check_residuals(&p, &special_eigenvectors(Locus::El, &p).unwrap());
    }

    #[test]
    fn off_locus_is_rejected() {
        let p = ModelParams::simple(0.0, 0.0, 1.0, 1.0, 0.3).unwrap();
        for locus in [Locus::El, Locus::Ep4, Locus::Dl3] {
            assert!(matches!(
                special_eigenvectors(locus, &p),
                Err(Error::OffLocus(_))
            ));
        }
        let p = ModelParams::simple(0.0, 0.5, 1.0, 0.0, 0.0).unwrap();
        assert!(special_eigenvectors(Locus::El, &p).is_err());
    }
}
