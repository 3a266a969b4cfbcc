//! Forward map from Hamiltonian parameters to `(q, r, s)`, its Jacobian,
//! local inversion, and pseudo-Hermitian-plane crossings.

use serde::{Deserialize, Serialize};

use crate::braid::{loop_point, LoopSpec};
use crate::catastrophe::discriminant;
use crate::error::{Error, Result};
use crate::model::{traceless_dynamical_matrix, ModelParams};
use crate::spectral::{char_poly_coeffs, Quartic};

/// The inversion variables `(γ₋, ξ₁, g)` of the simple model. `ξ₁` and `g`
/// are signed here; a negative value stands for the magnitude with phase π.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MapVariables {
    pub gamma_minus: f64,
    pub xi_1: f64,
    pub g: f64,
}

impl MapVariables {
    pub fn new(gamma_minus: f64, xi_1: f64, g: f64) -> Self {
        Self {
            gamma_minus,
            xi_1,
            g,
        }
    }

    /// Reads `(γ₋, ξ₁, g)` off simple-model parameters.
    pub fn from_params(p: &ModelParams) -> Self {
        Self::new(p.gamma_minus(), p.xi_1(), p.g())
    }

    pub fn to_params(&self, delta_omega_1: f64, delta_omega_2: f64) -> Result<ModelParams> {
        ModelParams::simple(
            delta_omega_1,
            delta_omega_2,
            self.g,
            self.xi_1,
            self.gamma_minus,
        )
    }

    fn as_array(&self) -> [f64; 3] {
        [self.gamma_minus, self.xi_1, self.g]
    }

    fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

/// Parameters together with their control-space image.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapPoint {
    pub params: ModelParams,
    pub coeffs: Quartic,
    /// Present for the simple model (`χ = ξ₂ = 0`).
    pub jacobian_det: Option<f64>,
}

impl MapPoint {
    pub fn new(params: ModelParams) -> Self {
        Self {
            params,
            coeffs: forward_map(&params),
            jacobian_det: params.is_simple().then(|| jacobian(&params).det),
        }
    }
}

/// Closed-form `(q, r, s)` of the simple model (`χ = ξ₂ = 0`, any detunings).
pub fn simple_map(v: &MapVariables, delta_omega_1: f64, delta_omega_2: f64) -> Quartic {
    let (gm, xi, g) = (v.gamma_minus, v.xi_1, v.g);
    let (d1, d2) = (delta_omega_1, delta_omega_2);
    let u = xi * xi - d1 * d1;
    let big_g = g * g - gm * gm / 16.0;
    Quartic::new(
        2.0 * big_g - u + d2 * d2,
        gm / 2.0 * (u + d2 * d2),
        big_g * big_g
            - gm * gm / 16.0 * (xi * xi - d1 * d1 - d2 * d2)
            - 2.0 * g * g * d1 * d2
            - u * d2 * d2,
    )
}

/// Closed-form `(q, r, s)` of the general model including `ξ₂`, `χ` and all phases.
pub fn general_map(p: &ModelParams) -> Quartic {
    let gm = p.gamma_minus();
    let (g, x1, x2, c) = (p.g(), p.xi_1(), p.xi_2(), p.chi());
    let (d1, d2) = (p.delta_omega_1(), p.delta_omega_2());
    let (pg, p1, p2, pc) = (p.phi_g(), p.phi_1(), p.phi_2(), p.phi_chi());
    let (gm2, g2, x12, x22, c2) = (gm * gm, g * g, x1 * x1, x2 * x2, c * c);
    let (d12, d22) = (d1 * d1, d2 * d2);

    let q = -gm2 / 8.0 + 2.0 * g2 - x12 - x22 - 2.0 * c2 + d12 + d22;
    let r = gm / 2.0 * (x12 - x22 - d12 + d22);
    let s = gm2 / 16.0 * (2.0 * c2 + d12 + d22 - x12 - x22) + gm2 * gm2 / 256.0 + g2 * g2
        - g2 / 8.0 * (gm2 + 16.0 * (c2 + d1 * d2))
        + 4.0 * g * c * (x2 * d1 * (pg - pc + p2).sin() - x1 * d2 * (-pg - pc + p1).sin())
        + (x22 - d22) * (x12 - d12)
        + 2.0 * x1 * x2 * (g2 * (-2.0 * pg + p1 - p2).cos() - c2 * (-2.0 * pc + p1 + p2).cos())
        + c2 * c2
        - 2.0 * c2 * d1 * d2;
    Quartic::new(q, r, s)
}

/// `(q, r, s)` from the closed form matching the parameters' generality.
///
/// Debug builds cross-check against the trace/determinant computation.
pub fn forward_map(p: &ModelParams) -> Quartic {
    let c = if p.is_simple() {
        simple_map(
            &MapVariables::from_params(p),
            p.delta_omega_1(),
            p.delta_omega_2(),
        )
    } else {
        general_map(p)
    };
    if cfg!(debug_assertions) {
        let e = traceless_dynamical_matrix(p);
        let n = e.frobenius_norm().max(1.0);
        let direct = char_poly_coeffs(&e).expect("dynamical matrices are particle-hole symmetric");
        debug_assert!(
            (c.q - direct.q).abs() <= 1e-10 * n * n
                && (c.r - direct.r).abs() <= 1e-10 * n.powi(3)
                && (c.s - direct.s).abs() <= 1e-10 * n.powi(4),
            "closed form {c:?} disagrees with {direct:?}"
        );
    }
    c
}

/// Jacobian of `(q, r, s)` with respect to `(γ₋, ξ₁, g)` at fixed detunings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Jacobian {
    /// Rows `q, r, s`; columns `γ₋, ξ₁, g`.
    pub matrix: [[f64; 3]; 3],
    pub det: f64,
}

/// Analytic Jacobian of the simple-model map.
///
/// `χ` and `ξ₂` are ignored; the map variables are read with
/// [`MapVariables::from_params`].
pub fn jacobian(p: &ModelParams) -> Jacobian {
    jacobian_at(
        &MapVariables::from_params(p),
        p.delta_omega_1(),
        p.delta_omega_2(),
    )
}

pub fn jacobian_at(v: &MapVariables, delta_omega_1: f64, delta_omega_2: f64) -> Jacobian {
    let (gm, x, g) = (v.gamma_minus, v.xi_1, v.g);
    let (d1, d2) = (delta_omega_1, delta_omega_2);
    let gm2 = gm * gm;
    let m = [
        [-gm / 4.0, -2.0 * x, 4.0 * g],
        [(x * x - d1 * d1 + d2 * d2) / 2.0, gm * x, 0.0],
        [
            gm / 64.0 * (gm2 - 16.0 * g * g + 8.0 * (d1 * d1 + d2 * d2 - x * x)),
            -x / 8.0 * (gm2 + 16.0 * d2 * d2),
            4.0 * g * g * g - g / 4.0 * (gm2 + 16.0 * d1 * d2),
        ],
    ];
    Jacobian {
        matrix: m,
        det: det3(&m),
    }
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Solves `m x = b` by Gaussian elimination with partial pivoting.
fn solve3(m: &[[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let mut a = [[0.0; 4]; 3];
    for i in 0..3 {
        a[i][..3].copy_from_slice(&m[i]);
        a[i][3] = b[i];
    }
    for k in 0..3 {
        let p = (k..3).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k] == 0.0 {
            return None;
        }
        a.swap(k, p);
        for i in (k + 1)..3 {
            let f = a[i][k] / a[k][k];
            for j in k..4 {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let acc: f64 = ((i + 1)..3).map(|j| a[i][j] * x[j]).sum();
        x[i] = (a[i][3] - acc) / a[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

const MAX_NEWTON: usize = 100;

/// Newton inversion of the simple map at `δω₂ = 0`.
///
/// The branch is the one the seed lies in; `ξ₁` and `g` come back
/// non-negative. A converged point where
/// `|det J| < 1e-10` is reported as [`Error::SingularMap`], which carries
/// the point.
pub fn invert_local(
    target: &Quartic,
    delta_omega_1: f64,
    seed: MapVariables,
) -> Result<MapVariables> {
    let d1 = delta_omega_1;
    let sc = target.scale();
    let weights = [sc, sc.powf(1.5), sc * sc];
    let residual = |x: &[f64; 3]| {
        let c = simple_map(&MapVariables::from_array(*x), d1, 0.0);
        [c.q - target.q, c.r - target.r, c.s - target.s]
    };
    let merit = |f: &[f64; 3]| {
        f.iter()
            .zip(&weights)
            .map(|(a, w)| (a / w).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let converged = |f: &[f64; 3]| f.iter().zip(&weights).all(|(a, w)| a.abs() <= 1e-10 * w);

    let mut x = seed.as_array();
    let mut f = residual(&x);
    let mut done = converged(&f);
    let mut polish = 2;
    for _ in 0..MAX_NEWTON {
        if done {
            if polish == 0 {
                break;
            }
            polish -= 1;
        }
        let j = jacobian_at(&MapVariables::from_array(x), d1, 0.0);
        let Some(dx) = solve3(&j.matrix, f.map(|v| -v)) else {
            break;
        };
        let m0 = merit(&f);
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let trial = [x[0] + t * dx[0], x[1] + t * dx[1], x[2] + t * dx[2]];
            let ft = residual(&trial);
            if merit(&ft) < m0 {
                accepted = Some((trial, ft));
                break;
            }
            t /= 2.0;
        }
        match accepted {
            Some((nx, nf)) => {
                x = nx;
                f = nf;
            }
            None if done => break,
            None => {
                // no decrease along the direction: take the full step
                x = [x[0] + dx[0], x[1] + dx[1], x[2] + dx[2]];
                f = residual(&x);
            }
        }
        done = done || converged(&f);
    }
    if !converged(&f) {
        return Err(Error::NoInverseFound {
            iterations: MAX_NEWTON,
            residual: merit(&f),
        });
    }
    // the map only sees ξ₁² and g² here; report magnitudes
    let point = MapVariables::new(x[0], x[1].abs(), x[2].abs());
    let det = jacobian_at(&point, d1, 0.0).det;
    if det.abs() < 1e-10 {
        return Err(Error::SingularMap { det, point });
    }
    Ok(point)
}

/// `s` at a pseudo-Hermitian-plane point of the simple model.
///
/// The plane `r = 0` is reached either with `γ₋ = 0` or with
/// `u + δω₂² = 0`; each branch has its own closed form.
pub fn php_crossing_s(p: &ModelParams) -> Result<f64> {
    if !p.is_simple() {
        return Err(Error::NotOnPhp("closed forms need chi = xi_2 = 0".into()));
    }
    let (gm, g, xi) = (p.gamma_minus(), p.g(), p.xi_1());
    let (d1, d2) = (p.delta_omega_1(), p.delta_omega_2());
    let u = p.u();
    let q = forward_map(p).q;
    let mag = 1f64
        .max(xi * xi)
        .max(d1 * d1)
        .max(d2 * d2)
        .max(g * g)
        .max(gm * gm);
    let (g2, xi2) = (g * g, xi * xi);
    if gm.abs() <= 1e-12 * mag.sqrt() {
        let w = xi2 - d1 * d1 + d2 * d2;
        Ok(q * q / 4.0 - 2.0 * g2 * d1 * d2 + g2 * (xi2 - d1 * d1 - d2 * d2) - w * w / 4.0)
    } else if (u + d2 * d2).abs() <= 1e-12 * mag {
        Ok(q * q / 4.0 + d2 / 4.0 * (gm * gm * d2 - 8.0 * g2 * d1 - 8.0 * g2 * d2))
    } else {
        Err(Error::NotOnPhp(format!(
            "need gamma_minus = 0 or xi_1^2 - delta_omega_1^2 + delta_omega_2^2 = 0 \
             (gamma_minus = {gm}, u + delta_omega_2^2 = {})",
            u + d2 * d2
        )))
    }
}

/// Position of a pseudo-Hermitian-plane crossing relative to the
/// exceptional-line parabola `s = q²/4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Above,
    Below,
    On,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElBranch {
    /// `q > 0`: degenerate imaginary pairs.
    Plus,
    /// `q < 0`: degenerate real pairs.
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhpCrossing {
    pub phi: f64,
    pub q: f64,
    pub s: f64,
    pub side: Side,
    /// Sign of `dr/dφ` at the crossing.
    pub direction: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub crossings: Vec<PhpCrossing>,
    pub crossings_above: usize,
    pub crossings_below: usize,
    /// Signed count of crossings through the region `s > q²/4` of the
    /// plane; non-zero when the loop winds around the exceptional line.
    pub linking: i32,
    /// Branch of the exceptional line the loop winds around.
    pub branch: Option<ElBranch>,
    pub min_abs_discriminant: f64,
    pub encloses_el_plus: bool,
    pub encloses_el_minus: bool,
    pub warnings: Vec<String>,
}

/// Samples the loop and reports how it crosses the pseudo-Hermitian plane.
pub fn loop_feasibility(spec: &LoopSpec) -> Result<FeasibilityReport> {
    spec.validate()?;
    let n = spec.n_samples;
    let tau = std::f64::consts::TAU;
    let at = |phi: f64| forward_map(&loop_point(spec, phi));
    let samples: Vec<(f64, Quartic)> = (0..=n)
        .map(|k| {
            let phi = tau * k as f64 / n as f64;
            (phi, at(phi))
        })
        .collect();

    let mut min_d = f64::INFINITY;
    let mut crossings = Vec::new();
    for w in samples.windows(2) {
        let (p0, c0) = w[0];
        let (p1, c1) = w[1];
        min_d = min_d.min(discriminant(&c0).abs() / c0.scale().powi(6));
        let crosses = (c0.r < 0.0 && c1.r >= 0.0) || (c0.r > 0.0 && c1.r <= 0.0);
        if !crosses {
            continue;
        }
        let (mut a, mut b) = (p0, p1);
        for _ in 0..80 {
            if b - a <= 1e-13 {
                break;
            }
            let mid = 0.5 * (a + b);
            if at(mid).r * c0.r > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let phi = 0.5 * (a + b);
        let c = at(phi);
        let gap = c.s - c.q * c.q / 4.0;
        let tol = 1e-10 * c.scale().powi(2);
        let side = if gap > tol {
            Side::Above
        } else if gap < -tol {
            Side::Below
        } else {
            Side::On
        };
        let direction = if c1.r > c0.r { 1 } else { -1 };
        crossings.push(PhpCrossing {
            phi,
            q: c.q,
            s: c.s,
            side,
            direction,
        });
    }

    let above: Vec<&PhpCrossing> = crossings.iter().filter(|c| c.side == Side::Above).collect();
    let below: Vec<&PhpCrossing> = crossings.iter().filter(|c| c.side == Side::Below).collect();
    let linking: i32 = above.iter().map(|c| c.direction as i32).sum();

    let branch = if linking != 0 && !above.is_empty() && !below.is_empty() {
        parabola_branch(above[0], below[0])
    } else {
        None
    };

    let threshold = 1e-8;
    let clear = min_d > threshold;
    let mut warnings = Vec::new();
    if spec.delta_omega_2 == 0.0 {
        warnings.push(
            "delta_omega_2 = 0: the plane can only be crossed through gamma_minus = 0 or on the \
             exceptional line itself, so only loops around EL(-) are possible"
                .to_string(),
        );
    }
    if crossings.iter().any(|c| c.side == Side::On) {
        warnings.push("loop crosses the plane on the exceptional line".into());
    }
    if !clear {
        warnings.push(format!(
            "loop comes within |D| = {min_d:e} of the swallowtail"
        ));
    }
    Ok(FeasibilityReport {
        crossings_above: above.len(),
        crossings_below: below.len(),
        linking,
        branch,
        min_abs_discriminant: min_d,
        encloses_el_plus: linking != 0 && branch == Some(ElBranch::Plus) && clear,
        encloses_el_minus: linking != 0 && branch == Some(ElBranch::Minus) && clear,
        warnings,
        crossings,
    })
}

/// Where the in-plane segment between a crossing above and one below the
/// parabola meets `s = q²/4`.
fn parabola_branch(above: &PhpCrossing, below: &PhpCrossing) -> Option<ElBranch> {
    let f = |t: f64| {
        let q = above.q + t * (below.q - above.q);
        let s = above.s + t * (below.s - above.s);
        s - q * q / 4.0
    };
    // f(0) > 0 > f(1); bisect
    let (mut a, mut b) = (0.0, 1.0);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if f(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let q = above.q + 0.5 * (a + b) * (below.q - above.q);
    if q > 0.0 {
        Some(ElBranch::Plus)
    } else if q < 0.0 {
        Some(ElBranch::Minus)
    } else {
        None
    }
}
