//! Control-space analysis of the swallowtail: discriminant, cubic
//! resolvent, classification and surface sampling.

mod surface;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix4;
use crate::spectral::{char_poly_coeffs, eig4, solve_depressed_quartic, Quartic};

pub use surface::{
    sample_surface_implicit, sample_surface_parametric, Axis, MeshPoint, ParametricMode,
    Provenance, SurfaceMesh,
};

/// `D = 16q⁴s − 4q³r² − 128q²s² + 144qr²s − 27r⁴ + 256s³`
pub fn discriminant(c: &Quartic) -> f64 {
    let (q, r, s) = (c.q, c.r, c.s);
    let q2 = q * q;
    let r2 = r * r;
    ((256.0 * s - 128.0 * q2) * s + 16.0 * q2 * q2 + 144.0 * q * r2) * s
        - r2 * (4.0 * q2 * q + 27.0 * r2)
}

/// `L = −2q³ − 9r² + 8qs`
pub fn cubic_resolvent(c: &Quartic) -> f64 {
    let (q, r, s) = (c.q, c.r, c.s);
    -2.0 * q * q * q - 9.0 * r * r + 8.0 * q * s
}

/// Stratum of the swallowtail a control point belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Regular,
    /// Double real root with two further real roots.
    S1,
    /// Double real root with a complex-conjugate pair.
    S2,
    /// Two double real roots `±√(−q/2)`.
    ELminus,
    /// Two double imaginary roots `±i√(q/2)`.
    ELplus,
    DL3,
    EP4,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Regular => "Regular",
            Kind::S1 => "S1",
            Kind::S2 => "S2",
            Kind::ELminus => "ELminus",
            Kind::ELplus => "ELplus",
            Kind::DL3 => "DL3",
            Kind::EP4 => "EP4",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Defectiveness {
    NotApplicable,
    Diabolical,
    Exceptional,
    Mixed,
    Unknown,
}

impl Defectiveness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Defectiveness::NotApplicable => "NotApplicable",
            Defectiveness::Diabolical => "Diabolical",
            Defectiveness::Exceptional => "Exceptional",
            Defectiveness::Mixed => "Mixed",
            Defectiveness::Unknown => "Unknown",
        }
    }
}

/// Values and thresholds the classification was decided on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witnesses {
    pub d: f64,
    pub l: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub scale: f64,
    pub eps_d: f64,
    pub eps_l: f64,
    pub eps_q: f64,
    pub eps_r: f64,
    /// Some tested quantity lies within a factor 10 of its threshold.
    pub boundary: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyClass {
    pub kind: Kind,
    pub defectiveness: Defectiveness,
    pub witnesses: Witnesses,
}

/// Multiplier applied to every zero-test threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub scale: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { scale: 1.0 }
    }
}

fn near_threshold(x: f64, eps: f64) -> bool {
    let x = x.abs();
    x >= eps / 10.0 && x <= eps * 10.0
}

/// Classifies a control point by the swallowtail stratification.
///
/// With a matrix the defectiveness of the degenerate clusters is also
/// determined; the matrix coefficients must agree with `c`.
pub fn classify(c: &Quartic, e: Option<&ComplexMatrix4>) -> Result<DegeneracyClass> {
    classify_with(c, e, Tolerances::default())
}

pub fn classify_with(
    c: &Quartic,
    e: Option<&ComplexMatrix4>,
    tol: Tolerances,
) -> Result<DegeneracyClass> {
    if !c.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "non-finite coefficients {c:?}"
        )));
    }
    let sigma = c.scale();
    if let Some(m) = e {
        let direct = char_poly_coeffs(m)?;
        let ok = (direct.q - c.q).abs() <= 1e-8 * sigma
            && (direct.r - c.r).abs() <= 1e-8 * sigma.powf(1.5)
            && (direct.s - c.s).abs() <= 1e-8 * sigma * sigma;
        if !ok {
            return Err(Error::InputMismatch(format!(
                "matrix has coefficients {direct:?}, expected {c:?}"
            )));
        }
    }

    let t = 1e-10 * tol.scale;
    let eps_d = t * sigma.powi(6);
    let eps_l = t * sigma.powi(3);
    let eps_q = t * sigma;
    let eps_r = t * sigma;
    let d = discriminant(c);
    let l = cubic_resolvent(c);
    let boundary = near_threshold(d, eps_d)
        || near_threshold(l, eps_l)
        || near_threshold(c.q, eps_q)
        || near_threshold(c.r, eps_r);
    let mut witnesses = Witnesses {
        d,
        l,
        q: c.q,
        r: c.r,
        s: c.s,
        scale: sigma,
        eps_d,
        eps_l,
        eps_q,
        eps_r,
        boundary,
    };

    // Off the higher strata the one double root is real and equals
    // a = r(q² + 12s)/L; the other two roots solve λ² + 2aλ + q + 3a² = 0
    // and are real iff q + 2a² <= 0. Counting near-real computed roots
    // instead is unreliable next to the DL3 line, where rounding alone
    // gives the double root an imaginary part of order √ε.
    let sheet = |l: f64| {
        let a = c.r * (c.q * c.q + 12.0 * c.s) / l;
        if c.q + 2.0 * a * a <= 0.0 {
            Kind::S1
        } else {
            Kind::S2
        }
    };
    let counted_sheet = || {
        let roots = solve_depressed_quartic(c);
        let real = roots
            .iter()
            .filter(|z| z.im.abs() <= 1e-8 * c.lambda_scale())
            .count();
        if real == 4 {
            Kind::S1
        } else {
            Kind::S2
        }
    };
    let kind = if d.abs() > eps_d {
        Kind::Regular
    } else if l.abs() > eps_l {
        sheet(l)
    } else if c.q.abs() <= eps_q {
        Kind::EP4
    } else if c.r.abs() <= eps_r {
        if c.q < 0.0 {
            Kind::ELminus
        } else {
            Kind::ELplus
        }
    } else if c.q < 0.0 {
        Kind::DL3
    } else {
        // q > 0 with r ≠ 0 cannot have L = 0 on the surface; report the
        // sheet and flag it
        witnesses.boundary = true;
        counted_sheet()
    };

    let defectiveness = match e {
        None => Defectiveness::Unknown,
        Some(_) if kind == Kind::Regular => Defectiveness::NotApplicable,
        Some(m) => defectiveness_of(m)?,
    };
    Ok(DegeneracyClass {
        kind,
        defectiveness,
        witnesses,
    })
}

fn defectiveness_of(m: &ComplexMatrix4) -> Result<Defectiveness> {
    let sp = eig4(m)?;
    let gms = sp
        .geometric_multiplicities
        .as_ref()
        .expect("eig4 sets multiplicities");
    let mut exceptional = 0;
    let mut diabolical = 0;
    let mut mixed = 0;
    for (cl, &gm) in sp.clusters.iter().zip(gms) {
        if cl.algebraic < 2 {
            continue;
        }
        if gm == 1 {
            exceptional += 1;
        } else if gm == cl.algebraic {
            diabolical += 1;
        } else {
            mixed += 1;
        }
    }
    Ok(match (exceptional, diabolical, mixed) {
        (0, 0, 0) => Defectiveness::Unknown,
        (_, 0, 0) => Defectiveness::Exceptional,
        (0, _, 0) => Defectiveness::Diabolical,
        _ => Defectiveness::Mixed,
    })
}
