use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Harmonic modulation of `(ξ₁, g, γ₋)` around a closed loop in `φ`:
/// `ξ₁ = a_ξ(1 + m_ξ cos φ)`, `g = a_g(1 + m_g sin φ)`,
/// `γ₋ = a_γ(1 + m_γ cos φ)`. All phases are zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopSpec {
    pub a_xi: f64,
    pub m_xi: f64,
    pub a_g: f64,
    pub m_g: f64,
    pub a_gamma: f64,
    pub m_gamma: f64,
    #[serde(default)]
    pub delta_omega_1: f64,
    #[serde(default)]
    pub delta_omega_2: f64,
    #[serde(default = "default_samples")]
    pub n_samples: usize,
}

fn default_samples() -> usize {
    1024
}

pub const MIN_SAMPLES: usize = 64;

impl LoopSpec {
    /// Loop that winds around nothing.
    pub const L1: LoopSpec = LoopSpec {
        a_xi: 1.5,
        m_xi: 0.01,
        a_g: 1.5,
        m_g: 0.01,
        a_gamma: 1.0,
        m_gamma: 0.1,
        delta_omega_1: 0.0,
        delta_omega_2: 0.0,
        n_samples: 1024,
    };

    /// Loop that winds around the `q > 0` exceptional line.
    pub const L2: LoopSpec = LoopSpec {
        a_xi: 1.5,
        m_xi: 0.1,
        a_g: 1.4,
        m_g: 0.1,
        a_gamma: 0.1,
        m_gamma: 2.0,
        delta_omega_1: 0.0,
        delta_omega_2: 0.92,
        n_samples: 1024,
    };

    /// Checks the sample count, finiteness, and that `ξ₁` and `g` stay
    /// non-negative for every `φ` (not only on the sample grid, since the
    /// tracker refines steps).
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < MIN_SAMPLES {
            return Err(Error::InvalidArgument(format!(
                "n_samples must be at least {MIN_SAMPLES}, got {}",
                self.n_samples
            )));
        }
        let fields = [
            ("a_xi", self.a_xi),
            ("m_xi", self.m_xi),
            ("a_g", self.a_g),
            ("m_g", self.m_g),
            ("a_gamma", self.a_gamma),
            ("m_gamma", self.m_gamma),
            ("delta_omega_1", self.delta_omega_1),
            ("delta_omega_2", self.delta_omega_2),
        ];
        for (field, value) in fields {
            if !value.is_finite() {
                return Err(Error::NonFinite { field, value });
            }
        }
        for (name, a, m) in [("xi_1", self.a_xi, self.m_xi), ("g", self.a_g, self.m_g)] {
            if a - (a * m).abs() < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "modulated {name} changes sign along the loop"
                )));
            }
        }
        Ok(())
    }

    pub fn with_samples(mut self, n_samples: usize) -> Self {
        self.n_samples = n_samples;
        self
    }
}

/// Parameters at angle `φ`; `φ` is reduced modulo `2π` so that the loop
/// closes exactly.
pub fn loop_point(spec: &LoopSpec, phi: f64) -> ModelParams {
    let phi = phi.rem_euclid(TAU);
    let xi = spec.a_xi * (1.0 + spec.m_xi * phi.cos());
    let g = spec.a_g * (1.0 + spec.m_g * phi.sin());
    let gm = spec.a_gamma * (1.0 + spec.m_gamma * phi.cos());
    ModelParams::simple(spec.delta_omega_1, spec.delta_omega_2, g, xi, gm)
        .expect("finite loop parameters")
}
