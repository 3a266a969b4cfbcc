//! Closed-form roots of the depressed quartic plus the clean-up pass shared
//! with the matrix eigensolver.

use crate::linalg::C64;
use crate::spectral::cluster::{cluster_roots, lex_cmp};
use crate::spectral::Quartic;

const TAU: f64 = 1e-10;

/// All four roots of `λ⁴ + qλ² + rλ + s`, sorted by `(Re, Im)`.
///
/// Ferrari seeds are Newton polished, then coincident roots are merged and
/// the multiset is made exactly closed under complex conjugation.
pub fn solve_depressed_quartic(c: &Quartic) -> [C64; 4] {
    let raw = ferrari(c).map(|z| polish(c, z));
    consolidate(raw, Some(c))
}

fn ferrari(c: &Quartic) -> [C64; 4] {
    let (q, r, s) = (c.q, c.r, c.s);
    // λ⁴ + qλ² + rλ + s = (λ² + m)² − (αλ − β)² whenever m solves
    // m³ − (q/2)m² − s·m + (qs/2 − r²/8) = 0.
    let ms = cubic_roots(-q / 2.0, -s, q * s / 2.0 - r * r / 8.0);
    let m = ms
        .into_iter()
        .max_by(|a, b| (a * 2.0 - q).norm().total_cmp(&(b * 2.0 - q).norm()))
        .unwrap();
    let alpha = (m * 2.0 - q).sqrt();
    if alpha == C64::new(0.0, 0.0) {
        // r = 0 and m = q/2: p = (λ² + q/2)² − (q²/4 − s)
        let d = C64::new(q * q / 4.0 - s, 0.0).sqrt();
        let (a, b) = (C64::new(-q / 2.0, 0.0) + d, C64::new(-q / 2.0, 0.0) - d);
        let (a, b) = (a.sqrt(), b.sqrt());
        return [a, -a, b, -b];
    }
    let beta = C64::new(r, 0.0) / (alpha * 2.0);
    let [x1, x2] = quadratic_roots(-alpha, m + beta);
    let [x3, x4] = quadratic_roots(alpha, m - beta);
    [x1, x2, x3, x4]
}

/// Roots of `x² + b x + c` without cancellation in the larger root.
fn quadratic_roots(b: C64, c: C64) -> [C64; 2] {
    let d = (b * b - c * 4.0).sqrt();
    let t = if (b.conj() * d).re >= 0.0 {
        -(b + d) / 2.0
    } else {
        -(b - d) / 2.0
    };
    if t == C64::new(0.0, 0.0) {
        [t, t]
    } else {
        [t, c / t]
    }
}

/// Roots of the monic cubic `x³ + a x² + b x + c` by Cardano, Newton polished.
fn cubic_roots(a: f64, b: f64, c: f64) -> [C64; 3] {
    let p = b - a * a / 3.0;
    let qq = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = C64::new(qq * qq / 4.0 + p * p * p / 27.0, 0.0).sqrt();
    let half = C64::new(-qq / 2.0, 0.0);
    let u3 = if (half + disc).norm() >= (half - disc).norm() {
        half + disc
    } else {
        half - disc
    };
    let u = u3.cbrt();
    let omega = C64::new(-0.5, 3f64.sqrt() / 2.0);
    let mut ts = [C64::new(0.0, 0.0); 3];
    let mut w = C64::new(1.0, 0.0);
    for t in ts.iter_mut() {
        let uk = u * w;
        *t = if uk.norm() == 0.0 {
            uk
        } else {
            uk - p / (uk * 3.0)
        };
        w *= omega;
    }
    ts.map(|t| {
        let mut x = t - a / 3.0;
        let f = |x: C64| ((x + a) * x + b) * x + c;
        let df = |x: C64| (x * 3.0 + 2.0 * a) * x + b;
        for _ in 0..4 {
            let fx = f(x);
            let d = df(x);
            if d.norm() == 0.0 {
                break;
            }
            let nx = x - fx / d;
            if f(nx).norm() < fx.norm() {
                x = nx;
            } else {
                break;
            }
        }
        x
    })
}

/// Up to five Newton steps on the quartic, each accepted only if it reduces `|p|`.
fn polish(c: &Quartic, mut z: C64) -> C64 {
    let mut pz = c.eval(z);
    for _ in 0..5 {
        let d = c.eval_derivative(z);
        if d.norm() == 0.0 || pz.norm() == 0.0 {
            break;
        }
        let nz = z - pz / d;
        let pn = c.eval(nz);
        if pn.norm() < pz.norm() {
            z = nz;
            pz = pn;
        } else {
            break;
        }
    }
    z
}

/// Merges numerically coincident roots and, when the coefficients are
/// known, snaps coefficient-certified triple and quadruple roots and makes
/// the multiset exactly conjugation-closed. The result is sorted by `(Re, Im)`.
pub(crate) fn consolidate(mut roots: [C64; 4], coeffs: Option<&Quartic>) -> [C64; 4] {
    if let Some(c) = coeffs {
        let sc = c.lambda_scale();
        let (s2, s3, s4) = (sc * sc, sc * sc * sc, sc * sc * sc * sc);
        if c.q.abs() <= TAU * s2 && c.r.abs() <= TAU * s3 && c.s.abs() <= TAU * s4 {
            let mean = roots.iter().sum::<C64>() / 4.0;
            roots = [mean; 4];
        } else if c.q < 0.0 {
            let mu = c.r.signum() * (-c.q / 6.0).sqrt();
            if (c.r - 8.0 * mu.powi(3)).abs() <= TAU * s3
                && (c.s + 3.0 * mu.powi(4)).abs() <= TAU * s4
            {
                let target = C64::new(mu, 0.0);
                let mut idx = [0usize, 1, 2, 3];
                idx.sort_by(|&a, &b| {
                    (roots[a] - target)
                        .norm()
                        .total_cmp(&(roots[b] - target).norm())
                });
                let mean = idx[..3].iter().map(|&i| roots[i]).sum::<C64>() / 3.0;
                for &i in &idx[..3] {
                    roots[i] = mean;
                }
            }
        }
    }

    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for cl in cluster_roots(&roots, scale) {
        for &i in &cl.members {
            roots[i] = cl.mean;
        }
    }

    if coeffs.is_some() {
        roots = conjugate_symmetrize(roots);
    }
    roots.sort_by(lex_cmp);
    roots.map(|z| C64::new(z.re + 0.0, z.im + 0.0))
}

/// The ten involutions of four elements.
const INVOLUTIONS: [[usize; 4]; 10] = [
    [0, 1, 2, 3],
    [1, 0, 2, 3],
    [2, 1, 0, 3],
    [3, 1, 2, 0],
    [0, 2, 1, 3],
    [0, 3, 2, 1],
    [0, 1, 3, 2],
    [1, 0, 3, 2],
    [2, 3, 0, 1],
    [3, 2, 1, 0],
];

fn conjugate_symmetrize(roots: [C64; 4]) -> [C64; 4] {
    let cost =
        |p: &[usize; 4]| -> f64 { (0..4).map(|i| (roots[i] - roots[p[i]].conj()).norm()).sum() };
    let best = INVOLUTIONS
        .iter()
        .min_by(|a, b| cost(a).total_cmp(&cost(b)))
        .unwrap();
    let mut out = roots;
    for i in 0..4 {
        out[i] = (roots[i] + roots[best[i]].conj()) / 2.0;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[C64; 4], b: &[C64; 4], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn origin_gives_quadruple_zero() {
        let r = solve_depressed_quartic(&Quartic::new(0.0, 0.0, 0.0));
        assert_eq!(r, [c(0.0, 0.0); 4]);
    }

    #[test]
    fn el_plus_double_imaginary_pair() {
        let r = solve_depressed_quartic(&Quartic::new(2.0, 0.0, 1.0));
        let expect = [c(0.0, -1.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 1.0)];
        assert!(close(&r, &expect, 1e-12), "{r:?}");
    }

    #[test]
    fn triple_root() {
        let r = solve_depressed_quartic(&Quartic::new(-1.5, 1.0, -0.1875));
        let expect = [c(-1.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)];
        assert!(close(&r, &expect, 1e-12), "{r:?}");
    }

    #[test]
    fn simple_roots_of_known_product() {
        // (λ−1)(λ+2)(λ²−2λ+5) = λ⁴ − λ³ ...; use a traceless product instead:
        // (λ−1)(λ−2)(λ+1.5+i)(λ+1.5−i)
        let roots = [c(1.0, 0.0), c(2.0, 0.0), c(-1.5, 1.0), c(-1.5, -1.0)];
        let q = Quartic::from_roots(&roots);
        let got = solve_depressed_quartic(&q);
        let expect = [c(-1.5, -1.0), c(-1.5, 1.0), c(1.0, 0.0), c(2.0, 0.0)];
        assert!(close(&got, &expect, 1e-12), "{got:?}");
    }

    #[test]
    fn biquadratic_with_alpha_zero_branch() {
        // λ⁴ − 5λ² + 4 = (λ²−1)(λ²−4)
        let got = solve_depressed_quartic(&Quartic::new(-5.0, 0.0, 4.0));
        let expect = [c(-2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
        assert!(close(&got, &expect, 1e-12), "{got:?}");
    }

    #[test]
    fn residual_bound_on_large_coefficients() {
        let q = Quartic::new(-3.0e4, 1.2e5, 2.0e7);
        for z in solve_depressed_quartic(&q) {
            let s = q.lambda_scale();
            assert!(q.eval(z).norm() <= 1e-10 * s.powi(4));
        }
    }
}
