//! Root-level and eigenvector-level spectral analysis of traceless 4×4
//! dynamical matrices.

mod cluster;
mod eig;
mod quartic;
mod special;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{CVec4, ComplexMatrix4, C64};

pub use cluster::{cluster_roots, clustering_radius, Cluster};
pub use eig::{eig4, eigenvector_matrix_det, Gauge};
pub use quartic::solve_depressed_quartic;
pub use special::{special_eigenvectors, Locus, SpecialEigenvector};

pub(crate) use quartic::consolidate;

/// Coefficients of the depressed quartic `λ⁴ + qλ² + rλ + s`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quartic {
    pub q: f64,
    pub r: f64,
    pub s: f64,
}

impl Quartic {
    pub const fn new(q: f64, r: f64, s: f64) -> Self {
        Self { q, r, s }
    }

    /// Coefficients of `∏(λ − λᵢ)`; the roots must sum to zero.
    pub fn from_roots(roots: &[C64; 4]) -> Self {
        let mut c = [
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ];
        for (k, root) in roots.iter().enumerate() {
            for j in (1..=k + 1).rev() {
                let prev = c[j - 1];
                c[j] -= prev * root;
            }
        }
        Self::new(c[2].re, c[3].re, c[4].re)
    }

    pub fn is_finite(&self) -> bool {
        self.q.is_finite() && self.r.is_finite() && self.s.is_finite()
    }

    pub fn eval(&self, z: C64) -> C64 {
        ((z * z + self.q) * z + self.r) * z + self.s
    }

    pub fn eval_derivative(&self, z: C64) -> C64 {
        (z * z * 4.0 + 2.0 * self.q) * z + self.r
    }

    /// Typical root magnitude: `max(1, |q|^½, |r|^⅓, |s|^¼)`.
    pub fn lambda_scale(&self) -> f64 {
        1f64.max(self.q.abs().sqrt())
            .max(self.r.abs().cbrt())
            .max(self.s.abs().powf(0.25))
    }

    /// Quasi-homogeneous control-space scale, the square of
    /// [`Quartic::lambda_scale`]: `q ~ scale`, `r ~ scale^1.5`, `s ~ scale²`.
    pub fn scale(&self) -> f64 {
        self.lambda_scale().powi(2)
    }
}

/// `q = −½Tr ℰ²`, `r = −⅓Tr ℰ³`, `s = det ℰ` of a traceless matrix.
///
/// Particle-hole symmetry makes all three real; an imaginary part above
/// `1e-10·n^k` (with `n = max(1, ‖E‖_F)` and `k` the degree) is reported as a
/// symmetry violation.
pub fn char_poly_coeffs(e: &ComplexMatrix4) -> Result<Quartic> {
    let e = e.checked()?;
    let n = e.frobenius_norm().max(1.0);
    let tr = e.trace();
    if tr.norm() > 1e-10 * n {
        return Err(Error::MalformedMatrix(format!(
            "matrix is not traceless (trace {tr})"
        )));
    }
    let e2 = e * e;
    let e3 = e2 * e;
    let q = -e2.trace() / 2.0;
    let r = -e3.trace() / 3.0;
    let s = e.det();
    for (name, value, k) in [("q", q, 2), ("r", r, 3), ("s", s, 4)] {
        let tol = 1e-10 * n.powi(k);
        if value.im.abs() > tol {
            return Err(Error::SymmetryViolation {
                coefficient: name,
                imag: value.im,
                tol,
            });
        }
    }
    // + 0.0 turns -0 into 0
    Ok(Quartic::new(q.re + 0.0, r.re + 0.0, s.re + 0.0))
}

/// `4 − rank(E − λI)` with pivots below `1e-8·‖E‖_F` treated as zero.
pub fn geometric_multiplicity(e: &ComplexMatrix4, lambda: C64) -> usize {
    let threshold = 1e-8 * e.frobenius_norm();
    4 - e.shift(-lambda).rank(threshold)
}

/// Four roots with their cluster structure and, when computed from a
/// matrix, eigenvectors and defectiveness data.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// Sorted by `(Re, Im)`.
    pub roots: [C64; 4],
    pub clusters: Vec<Cluster>,
    /// Per cluster; present only for matrix input.
    pub geometric_multiplicities: Option<Vec<usize>>,
    /// Per cluster; `algebraic > geometric`.
    pub defective: Option<Vec<bool>>,
    /// One vector per root (aligned with `roots`); vectors of a defective
    /// cluster repeat.
    pub eigenvectors: Option<[CVec4; 4]>,
}

impl Spectrum {
    /// Root-only spectrum of a quartic.
    pub fn of_quartic(c: &Quartic) -> Self {
        Self::from_roots(solve_depressed_quartic(c))
    }

    pub(crate) fn from_roots(roots: [C64; 4]) -> Self {
        let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
        Self {
            clusters: cluster_roots(&roots, scale),
            roots,
            geometric_multiplicities: None,
            defective: None,
            eigenvectors: None,
        }
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.algebraic).collect()
    }

    /// Number of roots with `|Im λ| <= tol`.
    pub fn real_root_count(&self, tol: f64) -> usize {
        self.roots.iter().filter(|z| z.im.abs() <= tol).count()
    }
}

pub(crate) fn ser_complex<S: Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

#[derive(Serialize)]
struct ClusterJson<'a> {
    indices: &'a [usize],
    mean: [f64; 2],
    algebraic_multiplicity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    geometric_multiplicity: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    defective: Option<bool>,
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    roots: Vec<[f64; 2]>,
    clusters: Vec<ClusterJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigenvectors: Option<Vec<Vec<[f64; 2]>>>,
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pair = |z: &C64| [z.re, z.im];
        SpectrumJson {
            roots: self.roots.iter().map(pair).collect(),
            clusters: self
                .clusters
                .iter()
                .enumerate()
                .map(|(k, c)| ClusterJson {
                    indices: &c.members,
                    mean: pair(&c.mean),
                    algebraic_multiplicity: c.algebraic,
                    geometric_multiplicity: self.geometric_multiplicities.as_ref().map(|g| g[k]),
                    defective: self.defective.as_ref().map(|d| d[k]),
                })
                .collect(),
            eigenvectors: self
                .eigenvectors
                .as_ref()
                .map(|vs| vs.iter().map(|v| v.iter().map(pair).collect()).collect()),
        }
        .serialize(s)
    }
}
