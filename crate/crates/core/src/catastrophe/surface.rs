//! Point-cloud sampling of the discriminant zero set.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classify, discriminant, DegeneracyClass, Kind};
use crate::error::{Error, Result};
use crate::model::{traceless_dynamical_matrix, ModelParams};
use crate::parammap::forward_map;
use crate::spectral::Quartic;

/// Evenly spaced samples `min..=max`. A single sample needs `min == max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        let a = Self { min, max, n };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::InvalidArgument("axis bounds must be finite".into()));
        }
        match self.n {
            0 => Err(Error::InvalidArgument(
                "axis needs at least one sample".into(),
            )),
            1 if self.min != self.max => Err(Error::InvalidArgument(
                "a single-sample axis needs min == max".into(),
            )),
            1 => Ok(()),
            _ if self.min >= self.max => Err(Error::InvalidArgument(format!(
                "empty range [{}, {}]",
                self.min, self.max
            ))),
            _ => Ok(()),
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        if self.n == 1 {
            self.min
        } else if k + 1 == self.n {
            self.max
        } else {
            self.min + (self.max - self.min) * k as f64 / (self.n - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.value(k)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParametricMode {
    /// `(λ−a)²(λ−c)(λ+2a+c)` over `(a, c)`.
    DoubleReal,
    /// `(λ−a)²((λ+a)² + b²)` over `(a, b)`.
    DoubleComplex,
    /// Decoupled modes `g = 0`, `δω₂ = 0` over `(u, γ₋)`.
    GZeroDiabolical,
    /// `g = ±√u/2 + γ₋/4`, `δω₁ = δω₂ = 0` over `(u, γ₋)`, both signs.
    GOffsetExceptional,
}

impl ParametricMode {
    pub fn axis_names(&self) -> [&'static str; 2] {
        match self {
            ParametricMode::DoubleReal => ["a", "c"],
            ParametricMode::DoubleComplex => ["a", "b"],
            ParametricMode::GZeroDiabolical | ParametricMode::GOffsetExceptional => {
                ["u", "gamma_minus"]
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Provenance {
    Implicit {
        q: Axis,
        r: Axis,
        s: Axis,
    },
    Parametric {
        mode: ParametricMode,
        axes: [Axis; 2],
        names: [String; 2],
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeshPoint {
    pub coeffs: Quartic,
    pub class: DegeneracyClass,
    /// Parametric coordinates, in the order of the provenance axis names.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfaceMesh {
    pub points: Vec<MeshPoint>,
    pub provenance: Provenance,
}

/// Acceptance bound for points on the surface.
pub(crate) fn on_surface(c: &Quartic) -> bool {
    discriminant(c).abs() <= 1e-8 * c.scale().powi(6)
}

fn double_real(a: f64, c: f64) -> Quartic {
    let k = -2.0 * a * c - c * c;
    Quartic::new(k - 3.0 * a * a, 2.0 * a * (a * a - k), a * a * k)
}

fn double_complex(a: f64, b: f64) -> Quartic {
    Quartic::new(
        b * b - 2.0 * a * a,
        -2.0 * a * b * b,
        a * a * (a * a + b * b),
    )
}

fn physical_point(p: ModelParams, parameters: [f64; 2]) -> Result<MeshPoint> {
    let coeffs = forward_map(&p);
    let e = traceless_dynamical_matrix(&p);
    Ok(MeshPoint {
        class: classify(&coeffs, Some(&e))?,
        coeffs,
        parameters: Some(parameters),
    })
}

fn parametric_points(mode: ParametricMode, x: f64, y: f64) -> Result<Vec<MeshPoint>> {
    let algebraic = |coeffs: Quartic| -> Result<Vec<MeshPoint>> {
        Ok(vec![MeshPoint {
            class: classify(&coeffs, None)?,
            coeffs,
            parameters: Some([x, y]),
        }])
    };
    match mode {
        ParametricMode::DoubleReal => algebraic(double_real(x, y)),
        ParametricMode::DoubleComplex => algebraic(double_complex(x, y)),
        ParametricMode::GZeroDiabolical => {
            let (u, gm) = (x, y);
            let p = ModelParams::simple((-u).max(0.0).sqrt(), 0.0, 0.0, u.max(0.0).sqrt(), gm)?;
            Ok(vec![physical_point(p, [u, gm])?])
        }
        ParametricMode::GOffsetExceptional => {
            let (u, gm) = (x, y);
            if u < 0.0 {
                return Ok(Vec::new());
            }
            let root = u.sqrt();
            [1.0, -1.0]
                .into_iter()
                .map(|sign| {
                    let g = sign * root / 2.0 + gm / 4.0;
                    physical_point(ModelParams::simple(0.0, 0.0, g, root, gm)?, [u, gm])
                })
                .collect()
        }
    }
}

/// Samples one of the closed-form parametrisations of the surface.
///
/// Points are emitted in grid order (first axis outer); points failing the
/// `|D| <= 1e-8·scale⁶` bound are dropped.
pub fn sample_surface_parametric(mode: ParametricMode, axes: [Axis; 2]) -> Result<SurfaceMesh> {
    for a in &axes {
        a.validate()?;
    }
    let grid: Vec<(f64, f64)> = axes[0]
        .values()
        .into_iter()
        .flat_map(|x| axes[1].values().into_iter().map(move |y| (x, y)))
        .collect();
    let chunks: Vec<Vec<MeshPoint>> = grid
        .par_iter()
        .map(|&(x, y)| parametric_points(mode, x, y))
        .collect::<Result<_>>()?;
    let points = chunks
        .into_iter()
        .flatten()
        .filter(|p| on_surface(&p.coeffs))
        .collect();
    let names = mode.axis_names().map(String::from);
    Ok(SurfaceMesh {
        points,
        provenance: Provenance::Parametric { mode, axes, names },
    })
}

/// `∂D/∂s`
fn discriminant_ds(q: f64, r: f64, s: f64) -> f64 {
    768.0 * s * s - 256.0 * q * q * s + 16.0 * q.powi(4) + 144.0 * q * r * r
}

/// Bisects a sign change of `f` on `[a, b]` to floating-point resolution.
fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if f(m) * fa > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn scan_line(q: f64, r: f64, s_axis: &Axis) -> Vec<f64> {
    let d = |s: f64| discriminant(&Quartic::new(q, r, s));
    let dd = |s: f64| discriminant_ds(q, r, s);
    let ss = s_axis.values();
    let mut found: Vec<f64> = Vec::new();
    for (k, &s) in ss.iter().enumerate() {
        if d(s) == 0.0 {
            found.push(s);
        }
        if k + 1 == ss.len() {
            break;
        }
        let t = ss[k + 1];
        let (d0, d1) = (d(s), d(t));
        if d0 * d1 < 0.0 {
            found.push(bisect(d, s, t));
        }
        // tangential zeros sit at sign changes of the derivative; a near
        // miss must pass the classifier's tighter zero test
        if dd(s) * dd(t) < 0.0 {
            let z = bisect(dd, s, t);
            let c = Quartic::new(q, r, z);
            if discriminant(&c).abs() <= 1e-10 * c.scale().powi(6) {
                found.push(z);
            }
        }
    }
    found.sort_by(f64::total_cmp);
    let tol = 1e-9 * s_axis.max.abs().max(s_axis.min.abs()).max(1.0);
    found.dedup_by(|a, b| (*a - *b).abs() <= tol);
    found
}

/// Zeros of the discriminant along `s`-lines of a `(q, r)` grid.
///
/// Sign changes of `D` locate transversal crossings; sign changes of
/// `∂D/∂s` locate tangential ones. Each bracket is bisected to machine
/// resolution and kept when `|D| <= 1e-8·scale⁶` and the point does not
/// classify as [`Kind::Regular`].
pub fn sample_surface_implicit(q: Axis, r: Axis, s: Axis) -> Result<SurfaceMesh> {
    for a in [&q, &r, &s] {
        a.validate()?;
    }
    let lines: Vec<(f64, f64)> = q
        .values()
        .into_iter()
        .flat_map(|qv| r.values().into_iter().map(move |rv| (qv, rv)))
        .collect();
    let chunks: Vec<Vec<MeshPoint>> = lines
        .par_iter()
        .map(|&(qv, rv)| {
            scan_line(qv, rv, &s)
                .into_iter()
                .map(|sv| Quartic::new(qv, rv, sv))
                .filter(on_surface)
                .map(|coeffs| {
                    Ok(MeshPoint {
                        class: classify(&coeffs, None)?,
                        coeffs,
                        parameters: None,
                    })
                })
                .filter(|p| !matches!(p, Ok(m) if m.class.kind == Kind::Regular))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(SurfaceMesh {
        points: chunks.into_iter().flatten().collect(),
        provenance: Provenance::Implicit { q, r, s },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catastrophe::{Defectiveness, Kind};

    #[test]
    fn double_real_origin_is_ep4() {
        let m = sample_surface_parametric(
            ParametricMode::DoubleReal,
            [
                Axis::new(0.0, 0.0, 1).unwrap(),
                Axis::new(0.0, 0.0, 1).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(m.points.len(), 1);
        assert_eq!(m.points[0].coeffs, Quartic::new(0.0, 0.0, 0.0));
        assert_eq!(m.points[0].class.kind, Kind::EP4);
    }

    #[test]
    fn double_complex_expansion() {
        assert_eq!(double_complex(0.0, 1.0), Quartic::new(1.0, 0.0, 0.0));
        let c = double_complex(0.7, 1.3);
        assert!(discriminant(&c).abs() < 1e-12);
    }

    #[test]
    fn g_zero_point_has_expected_r() {
        let m = sample_surface_parametric(
            ParametricMode::GZeroDiabolical,
            [
                Axis::new(1.0, 1.0, 1).unwrap(),
                Axis::new(1.0, 1.0, 1).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(m.points.len(), 1);
        let p = &m.points[0];
        assert!((p.coeffs.r - 0.5).abs() < 1e-14);
        assert_eq!(p.class.kind, Kind::S1);
        assert_eq!(p.class.defectiveness, Defectiveness::Diabolical);

        // √u = γ₋/2 puts the lossy pair's upper root on the double one
        let m = sample_surface_parametric(
            ParametricMode::GZeroDiabolical,
            [
                Axis::new(1.0, 1.0, 1).unwrap(),
                Axis::new(2.0, 2.0, 1).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(m.points[0].class.kind, Kind::DL3);
    }

    #[test]
    fn g_offset_sheets() {
        let m = sample_surface_parametric(
            ParametricMode::GOffsetExceptional,
            [
                Axis::new(0.5, 2.0, 4).unwrap(),
                Axis::new(0.5, 3.0, 4).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(m.points.len(), 32);
        for p in &m.points {
            assert_ne!(p.class.kind, Kind::Regular);
        }
    }

    #[test]
    fn implicit_recovers_tangential_zero() {
        let m = sample_surface_implicit(
            Axis::new(2.0, 2.0, 1).unwrap(),
            Axis::new(0.0, 0.0, 1).unwrap(),
            Axis::new(0.5, 1.7, 7).unwrap(),
        )
        .unwrap();
        assert_eq!(m.points.len(), 1);
        assert!((m.points[0].coeffs.s - 1.0).abs() < 1e-9);
        assert_eq!(m.points[0].class.kind, Kind::ELplus);
    }

    #[test]
    fn implicit_empty_box() {
        // D(1, 1, s) > 0 for s in [1, 2]
        let m = sample_surface_implicit(
            Axis::new(1.0, 1.0, 1).unwrap(),
            Axis::new(1.0, 1.0, 1).unwrap(),
            Axis::new(1.0, 2.0, 11).unwrap(),
        )
        .unwrap();
        assert!(m.points.is_empty());
    }

    #[test]
    fn implicit_box_around_origin() {
        let a = Axis::new(-0.1, 0.1, 5).unwrap();
        let m = sample_surface_implicit(a, a, Axis::new(-0.1, 0.1, 21).unwrap()).unwrap();
        assert!(!m.points.is_empty());
        for p in &m.points {
            assert!(on_surface(&p.coeffs));
        }
        assert!(m.points.iter().any(|p| p.class.kind == Kind::EP4));
    }

    #[test]
    fn axis_validation() {
        assert!(Axis::new(1.0, 0.0, 3).is_err());
        assert!(Axis::new(0.0, 0.0, 3).is_err());
        assert!(Axis::new(0.0, 1.0, 1).is_err());
        assert!(Axis::new(0.0, 1.0, 0).is_err());
        assert_eq!(
            Axis::new(0.0, 1.0, 3).unwrap().values(),
            vec![0.0, 0.5, 1.0]
        );
    }
}
