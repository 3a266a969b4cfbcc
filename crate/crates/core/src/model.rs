//! Dynamical matrices of the two-mode quadratic Hamiltonian with losses.
//!
//! The basis order is fixed to `(a1, a2, a1†, a2†)` throughout the crate;
//! the `τ` matrices used by the symmetry residuals are hard-coded in that
//! order.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix4, C64};

/// Plain parameter record. Every field defaults to zero; turn it into a
/// validated [`ModelParams`] with [`RawParams::build`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RawParams {
    pub delta_omega_1: f64,
    pub delta_omega_2: f64,
    pub g: f64,
    pub phi_g: f64,
    pub xi_1: f64,
    pub phi_1: f64,
    pub xi_2: f64,
    pub phi_2: f64,
    pub chi: f64,
    pub phi_chi: f64,
    pub gamma_1: f64,
    pub gamma_2: f64,
}

impl RawParams {
    pub fn build(self) -> Result<ModelParams> {
        ModelParams::try_from(self)
    }
}

/// Physical parameters of the general two-mode Hamiltonian plus losses.
///
/// Magnitudes are non-negative and phases are kept in `(-π, π]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    raw: RawParams,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(mut raw: RawParams) -> Result<Self> {
        let fields = [
            ("delta_omega_1", raw.delta_omega_1),
            ("delta_omega_2", raw.delta_omega_2),
            ("g", raw.g),
            ("phi_g", raw.phi_g),
            ("xi_1", raw.xi_1),
            ("phi_1", raw.phi_1),
            ("xi_2", raw.xi_2),
            ("phi_2", raw.phi_2),
            ("chi", raw.chi),
            ("phi_chi", raw.phi_chi),
            ("gamma_1", raw.gamma_1),
            ("gamma_2", raw.gamma_2),
        ];
        for (field, value) in fields {
            if !value.is_finite() {
                return Err(Error::NonFinite { field, value });
            }
        }
        let magnitudes = [
            ("g", raw.g),
            ("xi_1", raw.xi_1),
            ("xi_2", raw.xi_2),
            ("chi", raw.chi),
            ("gamma_1", raw.gamma_1),
            ("gamma_2", raw.gamma_2),
        ];
        for (field, value) in magnitudes {
            if value < 0.0 {
                return Err(Error::NegativeMagnitude { field, value });
            }
        }
        raw.phi_g = wrap_phase(raw.phi_g);
        raw.phi_1 = wrap_phase(raw.phi_1);
        raw.phi_2 = wrap_phase(raw.phi_2);
        raw.phi_chi = wrap_phase(raw.phi_chi);
        Ok(Self { raw })
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        p.raw
    }
}

/// Reduces a phase to `(-π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut y = phi.rem_euclid(TAU);
    if y > PI {
        y -= TAU;
    }
    // keep -0.0 out of serialised output
    y + 0.0
}

impl ModelParams {
    /// Simple model (no χ, no ξ₂, zero phases) from signed map variables.
    ///
    /// A negative `g` or `xi_1` is stored as its magnitude with phase π,
    /// which yields the same dynamical matrix. The loss difference is
    /// realised with `γ₁ = max(γ₋, 0)` and `γ₂ = max(−γ₋, 0)`.
    pub fn simple(
        delta_omega_1: f64,
        delta_omega_2: f64,
        g: f64,
        xi_1: f64,
        gamma_minus: f64,
    ) -> Result<Self> {
        let signed = |x: f64| if x < 0.0 { (-x, PI) } else { (x, 0.0) };
        let (g, phi_g) = signed(g);
        let (xi_1, phi_1) = signed(xi_1);
        RawParams {
            delta_omega_1,
            delta_omega_2,
            g,
            phi_g,
            xi_1,
            phi_1,
            gamma_1: gamma_minus.max(0.0),
            gamma_2: (-gamma_minus).max(0.0),
            ..Default::default()
        }
        .build()
    }

    pub fn raw(&self) -> RawParams {
        self.raw
    }

    pub fn delta_omega_1(&self) -> f64 {
        self.raw.delta_omega_1
    }
    pub fn delta_omega_2(&self) -> f64 {
        self.raw.delta_omega_2
    }
    pub fn g(&self) -> f64 {
        self.raw.g
    }
    pub fn phi_g(&self) -> f64 {
        self.raw.phi_g
    }
    pub fn xi_1(&self) -> f64 {
        self.raw.xi_1
    }
    pub fn phi_1(&self) -> f64 {
        self.raw.phi_1
    }
    pub fn xi_2(&self) -> f64 {
        self.raw.xi_2
    }
    pub fn phi_2(&self) -> f64 {
        self.raw.phi_2
    }
    pub fn chi(&self) -> f64 {
        self.raw.chi
    }
    pub fn phi_chi(&self) -> f64 {
        self.raw.phi_chi
    }
    pub fn gamma_1(&self) -> f64 {
        self.raw.gamma_1
    }
    pub fn gamma_2(&self) -> f64 {
        self.raw.gamma_2
    }

    /// `γ₊ = γ₁ + γ₂`
    pub fn gamma_plus(&self) -> f64 {
        self.raw.gamma_1 + self.raw.gamma_2
    }

    /// `γ₋ = γ₁ − γ₂`
    pub fn gamma_minus(&self) -> f64 {
        self.raw.gamma_1 - self.raw.gamma_2
    }

    /// `u = ξ₁² − δω₁²`
    pub fn u(&self) -> f64 {
        self.raw.xi_1 * self.raw.xi_1 - self.raw.delta_omega_1 * self.raw.delta_omega_1
    }

    /// True when the two-mode squeezing and mode-2 squeezing terms vanish.
    pub fn is_simple(&self) -> bool {
        self.raw.chi == 0.0 && self.raw.xi_2 == 0.0
    }
}

fn polar(mag: f64, phase: f64) -> C64 {
    C64::from_polar(mag, phase)
}

/// The raw dynamical matrix `Ẽ′` of the general model.
pub fn build_dynamical_matrix(p: &ModelParams) -> ComplexMatrix4 {
    let r = &p.raw;
    let i = C64::i();
    let a11 = C64::new(-r.gamma_1 / 2.0, 0.0) - i * r.delta_omega_1;
    let a22 = C64::new(-r.gamma_2 / 2.0, 0.0) - i * r.delta_omega_2;
    let g_m = polar(r.g, -r.phi_g);
    let g_p = polar(r.g, r.phi_g);
    let xi1_m = polar(r.xi_1, -r.phi_1);
    let xi1_p = polar(r.xi_1, r.phi_1);
    let xi2_m = polar(r.xi_2, -r.phi_2);
    let xi2_p = polar(r.xi_2, r.phi_2);
    let chi_m = polar(r.chi, -r.phi_chi);
    let chi_p = polar(r.chi, r.phi_chi);
    ComplexMatrix4([
        [a11, g_m, xi1_m, chi_m],
        [-g_p, a22, chi_m, xi2_m],
        [xi1_p, chi_p, a11.conj(), g_p],
        [chi_p, xi2_p, -g_m, a22.conj()],
    ])
}

/// `ℰ = Ẽ − Tr(Ẽ)/4 · I`.
///
/// Fails when the trace has an imaginary part, which no dynamical matrix of
/// this family can have.
pub fn tracelessize(m: &ComplexMatrix4) -> Result<ComplexMatrix4> {
    let m = m.checked()?;
    let tr = m.trace();
    let tol = 1e-10 * m.frobenius_norm().max(1.0);
    if tr.im.abs() > tol {
        return Err(Error::MalformedMatrix(format!(
            "trace has imaginary part {:e}",
            tr.im
        )));
    }
    Ok(m.shift(-tr / 4.0))
}

/// Traceless dynamical matrix of the model, `Ẽ + (γ₊/4)·I`.
pub fn traceless_dynamical_matrix(p: &ModelParams) -> ComplexMatrix4 {
    build_dynamical_matrix(p).shift(C64::new(p.gamma_plus() / 4.0, 0.0))
}

/// Input coupling `K = diag(√γ₁, √γ₂, √γ₁, √γ₂)`.
pub fn input_coupling_matrix(p: &ModelParams) -> ComplexMatrix4 {
    let a = C64::new(p.gamma_1().sqrt(), 0.0);
    let b = C64::new(p.gamma_2().sqrt(), 0.0);
    ComplexMatrix4::diag([a, b, a, b])
}

/// `τₓ M τₓ`: swaps the particle and hole blocks.
fn tau_x_conjugate(m: &ComplexMatrix4) -> ComplexMatrix4 {
    const SWAP: [usize; 4] = [2, 3, 0, 1];
    let mut out = ComplexMatrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            out.0[i][j] = m.0[SWAP[i]][SWAP[j]];
        }
    }
    out
}

/// `τ_z M τ_z`: negates the off-diagonal blocks.
fn tau_z_conjugate(m: &ComplexMatrix4) -> ComplexMatrix4 {
    let mut out = *m;
    for i in 0..4 {
        for j in 0..4 {
            if (i < 2) != (j < 2) {
                out.0[i][j] = -out.0[i][j];
            }
        }
    }
    out
}

/// `‖M − τₓ M* τₓ‖_F`
pub fn particle_hole_residual(m: &ComplexMatrix4) -> f64 {
    (*m - tau_x_conjugate(&m.conj())).frobenius_norm()
}

/// `‖M† + τ_z M τ_z‖_F`
pub fn pseudo_hermiticity_residual(m: &ComplexMatrix4) -> f64 {
    (m.adjoint() + tau_z_conjugate(m)).frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(f: impl FnOnce(&mut RawParams)) -> ModelParams {
        let mut raw = RawParams::default();
        f(&mut raw);
        raw.build().unwrap()
    }

    #[test]
    fn zero_params_give_zero_matrix() {
        assert_eq!(
            build_dynamical_matrix(&ModelParams::default()),
            ComplexMatrix4::zeros()
        );
    }

    #[test]
    fn beam_splitter_entries() {
        let m = build_dynamical_matrix(&params(|r| r.g = 1.0));
        let mut expect = ComplexMatrix4::zeros();
        expect.0[0][1] = C64::new(1.0, 0.0);
        expect.0[1][0] = C64::new(-1.0, 0.0);
        expect.0[2][3] = C64::new(1.0, 0.0);
        expect.0[3][2] = C64::new(-1.0, 0.0);
        assert!((m - expect).frobenius_norm() < 1e-15);
    }

    #[test]
    fn loss_on_mode_one_is_diagonal() {
        let m = build_dynamical_matrix(&params(|r| r.gamma_1 = 2.0));
        let expect = ComplexMatrix4::from_real_rows([
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ]);
        assert_eq!(m, expect);
        let t = tracelessize(&m).unwrap();
        let expect = ComplexMatrix4::diag([-0.5, 0.5, -0.5, 0.5].map(|x| C64::new(x, 0.0)));
        assert!((t - expect).frobenius_norm() < 1e-15);
    }

    #[test]
    fn tracelessize_edge_cases() {
        assert_eq!(
            tracelessize(&ComplexMatrix4::zeros()).unwrap(),
            ComplexMatrix4::zeros()
        );
        let lossless = build_dynamical_matrix(&params(|r| {
            r.g = 0.7;
            r.xi_1 = 1.3;
            r.delta_omega_1 = 0.4;
            r.phi_1 = 0.3;
        }));
        assert_eq!(tracelessize(&lossless).unwrap(), lossless);

        let mut bad = ComplexMatrix4::zeros();
        bad.0[0][0] = C64::new(0.0, 1.0);
        assert!(matches!(tracelessize(&bad), Err(Error::MalformedMatrix(_))));
    }

    #[test]
    fn coupling_matrix() {
        assert_eq!(
            input_coupling_matrix(&ModelParams::default()),
            ComplexMatrix4::zeros()
        );
        let k = input_coupling_matrix(&params(|r| {
            r.gamma_1 = 4.0;
            r.gamma_2 = 1.0;
        }));
        assert_eq!(
            k,
            ComplexMatrix4::diag([2.0, 1.0, 2.0, 1.0].map(|x| C64::new(x, 0.0)))
        );
        let k = input_coupling_matrix(&params(|r| {
            r.gamma_1 = 1.0;
            r.gamma_2 = 1.0;
        }));
        assert_eq!(k, ComplexMatrix4::identity());
    }

    #[test]
    fn particle_hole_residual_of_single_entry() {
        let mut m = ComplexMatrix4::zeros();
        m.0[0][0] = C64::new(0.0, 1.0);
        assert!((particle_hole_residual(&m) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(particle_hole_residual(&ComplexMatrix4::zeros()), 0.0);
    }

    #[test]
    fn asymmetric_loss_breaks_pseudo_hermiticity() {
        let p = params(|r| {
            r.gamma_1 = 1.0;
            r.g = 1.0;
        });
        let e = traceless_dynamical_matrix(&p);
        assert!(pseudo_hermiticity_residual(&e) > 0.1);
        assert!((pseudo_hermiticity_residual(&e) - 1.0).abs() < 1e-14);
        assert_eq!(pseudo_hermiticity_residual(&ComplexMatrix4::zeros()), 0.0);
    }

    #[test]
    fn validation_and_phase_wrapping() {
        let err = RawParams {
            g: -1.0,
            ..Default::default()
        }
        .build()
        .unwrap_err();
        assert_eq!(
            err,
            Error::NegativeMagnitude {
                field: "g",
                value: -1.0
            }
        );
        assert!(matches!(
            RawParams {
                phi_1: f64::NAN,
                ..Default::default()
            }
            .build(),
            Err(Error::NonFinite { field: "phi_1", .. })
        ));
        let p = params(|r| {
            r.phi_g = 3.0 * PI;
            r.phi_1 = -PI;
            r.phi_2 = 7.0;
        });
        assert!((p.phi_g() - PI).abs() < 1e-12);
        assert_eq!(p.phi_1(), PI);
        assert!((p.phi_2() - (7.0 - TAU)).abs() < 1e-12);
    }

    #[test]
    fn json_defaults_missing_fields_to_zero() {
        let p: ModelParams = serde_json::from_str(r#"{"g": 1.5, "gamma_1": 0.2}"#).unwrap();
        assert_eq!(p.g(), 1.5);
        assert_eq!(p.xi_1(), 0.0);
        assert!((p.gamma_minus() - 0.2).abs() < 1e-15);
        let text = serde_json::to_string(&p).unwrap();
        let back: ModelParams = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<ModelParams>(r#"{"chi": -0.1}"#).is_err());
    }

    #[test]
    fn signed_simple_constructor_matches_matrix() {
        let a = ModelParams::simple(0.3, 0.1, -0.8, 1.2, -0.5).unwrap();
        assert_eq!(a.g(), 0.8);
        assert_eq!(a.phi_g(), PI);
        assert_eq!(a.gamma_2(), 0.5);
        let m = traceless_dynamical_matrix(&a);
        // g e^{-iπ} = -0.8 in the (1,2) slot
        assert!((m.0[0][1] - C64::new(-0.8, 0.0)).norm() < 1e-15);
    }
}
