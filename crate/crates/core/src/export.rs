//! CSV writers. Floats use the shortest representation that round-trips.

use std::fmt::Write;

use crate::braid::BraidResult;
use crate::catastrophe::SurfaceMesh;
use crate::parammap::MapPoint;

pub const MESH_HEADER: &str = "q,r,s,kind,defectiveness";
pub const STRANDS_HEADER: &str = "phi,strand,re_lambda,im_lambda";
pub const MAP_HEADER: &str = "gamma_minus,xi_1,g,delta_omega_1,delta_omega_2,q,r,s,det_J";

/// Shortest round-trip decimal; negative zero prints as `0`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

pub fn mesh_csv(mesh: &SurfaceMesh) -> String {
    let mut out = String::from(MESH_HEADER);
    out.push('\n');
    for p in &mesh.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(p.coeffs.q),
            fmt_f64(p.coeffs.r),
            fmt_f64(p.coeffs.s),
            p.class.kind.as_str(),
            p.class.defectiveness.as_str()
        );
    }
    out
}

/// One row per sample and strand; strands are numbered from 1.
pub fn strands_csv(result: &BraidResult) -> String {
    let mut out = String::from(STRANDS_HEADER);
    out.push('\n');
    for (phi, row) in result.strands.phis.iter().zip(&result.strands.values) {
        for (k, z) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(*phi),
                k + 1,
                fmt_f64(z.re),
                fmt_f64(z.im)
            );
        }
    }
    out
}

/// Map points as `gamma_minus,xi_1,g,...`; `det_J` is empty when unavailable.
pub fn map_csv(points: &[MapPoint]) -> String {
    let mut out = String::from(MAP_HEADER);
    out.push('\n');
    for p in points {
        let m = &p.params;
        let det = p.jacobian_det.map(fmt_f64).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_f64(m.gamma_minus()),
            fmt_f64(m.xi_1()),
            fmt_f64(m.g()),
            fmt_f64(m.delta_omega_1()),
            fmt_f64(m.delta_omega_2()),
            fmt_f64(p.coeffs.q),
            fmt_f64(p.coeffs.r),
            fmt_f64(p.coeffs.s),
            det
        );
    }
    out
}
