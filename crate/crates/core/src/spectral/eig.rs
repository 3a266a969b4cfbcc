//! Complex Schur decomposition of 4×4 matrices and eigenvector recovery.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{from_columns, vec_norm, vec_scale, CVec4, ComplexMatrix4, C64, ONE, ZERO};
use crate::spectral::cluster::lex_cmp;
use crate::spectral::{char_poly_coeffs, consolidate, geometric_multiplicity, Spectrum};

const MAX_SWEEPS: usize = 200;

/// Unitary `Z` and upper-triangular `T` with `A = Z T Z†`.
struct Schur {
    t: [[C64; 4]; 4],
    z: [[C64; 4]; 4],
}

/// Rotation `[[c, s], [−s̄, c]]` mapping `(a, b)` to `(ρ, 0)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, ONE);
    }
    let rho = na.hypot(nb);
    (na / rho, (a / na) * b.conj() / rho)
}

fn rotate_rows(m: &mut [[C64; 4]; 4], k: usize, c: f64, s: C64) {
    for j in 0..4 {
        let (x, y) = (m[k][j], m[k + 1][j]);
        m[k][j] = x * c + s * y;
        m[k + 1][j] = -s.conj() * x + y * c;
    }
}

fn rotate_cols(m: &mut [[C64; 4]; 4], k: usize, c: f64, s: C64) {
    for row in m.iter_mut() {
        let (x, y) = (row[k], row[k + 1]);
        row[k] = x * c + y * s.conj();
        row[k + 1] = -x * s + y * c;
    }
}

fn hessenberg(a: &ComplexMatrix4) -> ([[C64; 4]; 4], [[C64; 4]; 4]) {
    let mut h = a.0;
    let mut z = ComplexMatrix4::identity().0;
    for k in 0..2 {
        // Householder reflector zeroing h[k+2..][k]
        let alpha: f64 = ((k + 1)..4).map(|i| h[i][k].norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = h[k + 1][k];
        let phase = if x0.norm() == 0.0 {
            ONE
        } else {
            x0 / x0.norm()
        };
        let mut v = [ZERO; 4];
        for i in (k + 1)..4 {
            v[i] = h[i][k];
        }
        v[k + 1] += phase * alpha;
        let vn: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vn == 0.0 {
            continue;
        }
        // H ← P H P with P = I − 2vv†/‖v‖²
        for j in 0..4 {
            let dot: C64 = (0..4).map(|i| v[i].conj() * h[i][j]).sum();
            let f = dot * 2.0 / vn;
            for i in 0..4 {
                h[i][j] -= v[i] * f;
            }
        }
        for row in h.iter_mut().chain(z.iter_mut()) {
            let dot: C64 = (0..4).map(|j| row[j] * v[j]).sum();
            let f = dot * 2.0 / vn;
            for j in 0..4 {
                row[j] -= f * v[j].conj();
            }
        }
        for i in (k + 2)..4 {
            h[i][k] = ZERO;
        }
    }
    (h, z)
}

/// Eigenvalue of the trailing 2×2 block closer to its last diagonal entry.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr / 4.0 - det).sqrt();
    let l1 = tr / 2.0 + disc;
    let l2 = tr / 2.0 - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn schur(a: &ComplexMatrix4) -> Result<Schur> {
    let (mut h, mut z) = hessenberg(a);
    let mut hi = 3usize;
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;
    while hi > 0 {
        // deflate negligible subdiagonals
        let mut lo = 0;
        for k in (1..=hi).rev() {
            let scale = h[k][k].norm() + h[k - 1][k - 1].norm();
            let scale = if scale == 0.0 {
                a.frobenius_norm()
            } else {
                scale
            };
            if h[k][k - 1].norm() <= f64::EPSILON * scale {
                h[k][k - 1] = ZERO;
                lo = k;
                break;
            }
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        since_deflation += 1;

        let mut shift = wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi]);
        if since_deflation.is_multiple_of(11) {
            // exceptional shift to break cycles
            let extra = h[hi][hi - 1].norm()
                + if hi >= 2 {
                    h[hi - 1][hi - 2].norm()
                } else {
                    0.0
                };
            shift = h[hi][hi] + C64::new(0.75 * extra, 0.4375 * extra);
        }

        let mut w = h;
        for i in lo..=hi {
            w[i][i] -= shift;
        }
        let mut rots = Vec::with_capacity(3);
        for k in lo..hi {
            let (c, s) = givens(w[k][k], w[k + 1][k]);
            rotate_rows(&mut w, k, c, s);
            rots.push((k, c, s));
        }
        for &(k, c, s) in &rots {
            rotate_rows(&mut h, k, c, s);
        }
        for &(k, c, s) in &rots {
            rotate_cols(&mut h, k, c, s);
            rotate_cols(&mut z, k, c, s);
        }
        // keep the Hessenberg pattern exact
        for i in 2..4 {
            for j in 0..(i - 1) {
                h[i][j] = ZERO;
            }
        }
    }
    for i in 1..4 {
        for j in 0..i {
            h[i][j] = ZERO;
        }
    }
    Ok(Schur { t: h, z })
}

/// Eigenvector of the triangular factor for diagonal entry `k`, mapped back
/// through `Z` and normalised.
fn schur_vector(s: &Schur, k: usize) -> CVec4 {
    let t = &s.t;
    let tnorm = ComplexMatrix4(*t).frobenius_norm();
    let smin = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE);
    let lambda = t[k][k];
    let mut y = [ZERO; 4];
    y[k] = ONE;
    for j in (0..k).rev() {
        let acc: C64 = ((j + 1)..=k).map(|m| t[j][m] * y[m]).sum();
        let mut d = t[j][j] - lambda;
        if d.norm() < smin {
            d = C64::new(smin, 0.0);
        }
        y[j] = -acc / d;
    }
    let v = ComplexMatrix4(s.z).mul_vec(&y);
    normalize(&v)
}

fn normalize(v: &CVec4) -> CVec4 {
    let n = vec_norm(v);
    if n == 0.0 {
        *v
    } else {
        vec_scale(v, C64::new(1.0 / n, 0.0))
    }
}

/// Dense eigendecomposition of a 4×4 complex matrix.
///
/// Eigenvalues come from a shifted QR iteration; when the matrix is
/// particle-hole symmetric they are cleaned with the same coincidence and
/// conjugation rules as the quartic solver. Simple eigenvalues take their
/// vector from the Schur form; for repeated ones the numerical null space of
/// `E − λI` is used and padded by repetition when the cluster is defective.
pub fn eig4(e: &ComplexMatrix4) -> Result<Spectrum> {
    let e = e.checked()?;
    let s = schur(&e)?;
    let raw = [s.t[0][0], s.t[1][1], s.t[2][2], s.t[3][3]];
    let coeffs = char_poly_coeffs(&e).ok();
    let roots = consolidate(raw, coeffs.as_ref());
    let mut spectrum = Spectrum::from_roots(roots);

    let threshold = 1e-8 * e.frobenius_norm();
    let mut vectors = [[ZERO; 4]; 4];
    let mut geometric = Vec::with_capacity(spectrum.clusters.len());
    let mut used = [false; 4];
    for cl in &spectrum.clusters {
        let gm = geometric_multiplicity(&e, cl.mean).clamp(1, cl.algebraic);
        geometric.push(gm);
        let basis: Vec<CVec4> = if cl.algebraic == 1 {
            let k = nearest_unused(&raw, cl.mean, &mut used);
            vec![schur_vector(&s, k)]
        } else {
            let ns = e.shift(-cl.mean).null_space(threshold);
            for _ in 0..cl.algebraic {
                nearest_unused(&raw, cl.mean, &mut used);
            }
            if ns.is_empty() {
                vec![schur_vector(&s, 0)]
            } else {
                ns.iter().map(normalize).collect()
            }
        };
        for (slot, &idx) in cl.members.iter().enumerate() {
            vectors[idx] = basis[slot.min(basis.len() - 1)];
        }
    }
    spectrum.defective = Some(
        spectrum
            .clusters
            .iter()
            .zip(&geometric)
            .map(|(c, &g)| c.algebraic > g)
            .collect(),
    );
    spectrum.geometric_multiplicities = Some(geometric);
    spectrum.eigenvectors = Some(vectors);
    Ok(spectrum)
}

fn nearest_unused(raw: &[C64; 4], target: C64, used: &mut [bool; 4]) -> usize {
    let k = (0..4)
        .filter(|&i| !used[i])
        .min_by(|&a, &b| {
            (raw[a] - target)
                .norm()
                .total_cmp(&(raw[b] - target).norm())
        })
        .expect("more clusters than eigenvalues");
    used[k] = true;
    k
}

/// Normalisation convention for eigenvector columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gauge {
    /// Reduced echelon form read from the last coordinate backwards: each
    /// vector of a cluster has a unit entry at its own pivot and zeros at the
    /// other vectors' pivots.
    Echelon,
    /// Unit norm with the first significant component real and positive.
    Unit,
}

const NEGLIGIBLE: f64 = 1e-12;
const SIGNIFICANT: f64 = 1e-6;

/// Determinant of the eigenvector matrix `U`.
///
/// Columns are grouped by cluster, clusters ordered by decreasing algebraic
/// multiplicity and then by `(Re, Im)` of the mean. Defective clusters
/// repeat a column, so `det U` vanishes exactly on exceptional points.
pub fn eigenvector_matrix_det(e: &ComplexMatrix4, gauge: Gauge) -> Result<C64> {
    let e = e.checked()?;
    let spectrum = eig4(&e)?;
    let vectors = spectrum.eigenvectors.expect("eig4 fills eigenvectors");
    let mut order: Vec<usize> = (0..spectrum.clusters.len()).collect();
    order.sort_by(|&a, &b| {
        let (ca, cb) = (&spectrum.clusters[a], &spectrum.clusters[b]);
        cb.algebraic
            .cmp(&ca.algebraic)
            .then(lex_cmp(&ca.mean, &cb.mean))
    });

    let mut columns: Vec<CVec4> = Vec::with_capacity(4);
    for k in order {
        let cl = &spectrum.clusters[k];
        let mut basis: Vec<CVec4> = Vec::new();
        for &i in &cl.members {
            if !basis.contains(&vectors[i]) {
                basis.push(vectors[i]);
            }
        }
        let reduced = match gauge {
            Gauge::Echelon => echelon_gauge(&basis, columns.len())?,
            Gauge::Unit => basis.iter().map(unit_gauge).collect(),
        };
        for slot in 0..cl.algebraic {
            columns.push(reduced[slot.min(reduced.len() - 1)]);
        }
    }
    let cols: [CVec4; 4] = columns.try_into().expect("four columns");
    Ok(from_columns(&cols).det())
}

fn unit_gauge(v: &CVec4) -> CVec4 {
    let v = normalize(v);
    match v.iter().find(|z| z.norm() > NEGLIGIBLE) {
        Some(z) => vec_scale(&v, z.conj() / z.norm()),
        None => v,
    }
}

/// Reverse-coordinate reduced row echelon form of a cluster basis.
fn echelon_gauge(basis: &[CVec4], first_column: usize) -> Result<Vec<CVec4>> {
    let mut rows: Vec<CVec4> = basis.iter().map(normalize).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut free_rows: Vec<usize> = (0..rows.len()).collect();
    for col in (0..4).rev() {
        if free_rows.is_empty() {
            break;
        }
        let (pos, &best) = free_rows
            .iter()
            .enumerate()
            .max_by(|a, b| rows[*a.1][col].norm().total_cmp(&rows[*b.1][col].norm()))
            .unwrap();
        let mag = rows[best][col].norm();
        if mag <= NEGLIGIBLE {
            continue;
        }
        if mag < SIGNIFICANT {
            return Err(Error::GaugeUnavailable {
                index: first_column + pivots.len(),
            });
        }
        let inv = ONE / rows[best][col];
        rows[best] = vec_scale(&rows[best], inv);
        for other in 0..rows.len() {
            if other != best {
                let f = rows[other][col];
                for j in 0..4 {
                    let t = rows[best][j];
                    rows[other][j] -= f * t;
                }
            }
        }
        free_rows.remove(pos);
        pivots.push((col, best));
    }
    // descending pivot index, which is the discovery order
    Ok(pivots.iter().map(|&(_, r)| rows[r]).collect())
}
