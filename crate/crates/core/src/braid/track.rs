//! Continuation of the four eigenvalues along a loop.

use std::f64::consts::TAU;

use rayon::prelude::*;

use super::loops::{loop_point, LoopSpec};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::parammap::forward_map;
use crate::spectral::solve_depressed_quartic;

const MAX_HALVINGS: usize = 12;

/// Eigenvalues sampled on the uniform `φ` grid, one column per strand.
#[derive(Clone, Debug, PartialEq)]
pub struct Strands {
    pub phis: Vec<f64>,
    /// `n_samples + 1` rows; column `k` is strand `k` throughout.
    pub values: Vec<[C64; 4]>,
    /// Smallest pairwise eigenvalue distance met, refined steps included.
    pub min_gap: f64,
    /// Largest eigenvalue magnitude met, at least 1.
    pub scale: f64,
}

pub(crate) fn all_permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn min_pairwise(v: &[C64; 4]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..4 {
        for j in (i + 1)..4 {
            m = m.min((v[i] - v[j]).norm());
        }
    }
    m
}

/// Best `p` minimising `Σ |to[p[k]] − from[k]|`, with its cost.
pub(crate) fn best_matching(from: &[C64; 4], to: &[C64; 4]) -> ([usize; 4], f64, f64) {
    let mut best = ([0, 1, 2, 3], f64::INFINITY);
    let mut second = f64::INFINITY;
    for p in all_permutations() {
        let cost: f64 = (0..4).map(|k| (to[p[k]] - from[k]).norm()).sum();
        if cost < best.1 {
            second = best.1;
            best = (p, cost);
        } else if cost < second {
            second = cost;
        }
    }
    (best.0, best.1, second)
}

fn roots_at(spec: &LoopSpec, phi: f64) -> [C64; 4] {
    solve_depressed_quartic(&forward_map(&loop_point(spec, phi)))
}

/// Sort key used for strand labels: `(Im, Re)`.
pub(crate) fn im_order(v: &[C64; 4]) -> [usize; 4] {
    let mut idx = [0, 1, 2, 3];
    idx.sort_by(|&a, &b| {
        v[a].im
            .total_cmp(&v[b].im)
            .then(v[a].re.total_cmp(&v[b].re))
    });
    idx
}

struct Tracker<'a> {
    spec: &'a LoopSpec,
    scale: f64,
    min_gap: f64,
}

impl Tracker<'_> {
    fn advance(
        &mut self,
        prev: &[C64; 4],
        a: f64,
        b: f64,
        next: [C64; 4],
        depth: usize,
    ) -> Result<[C64; 4]> {
        let gap = min_pairwise(prev).min(min_pairwise(&next));
        self.min_gap = self.min_gap.min(gap);
        if gap < 1e-7 * self.scale {
            return Err(Error::LoopTouchesDegeneracy { phi: b, gap });
        }
        let (p, _, _) = best_matching(prev, &next);
        let matched = [next[p[0]], next[p[1]], next[p[2]], next[p[3]]];
        let jump = (0..4)
            .map(|k| (matched[k] - prev[k]).norm())
            .fold(0.0, f64::max);
        if jump <= gap / 4.0 {
            return Ok(matched);
        }
        if depth == MAX_HALVINGS {
            return Err(Error::Discontinuous { phi: b, jump, gap });
        }
        let mid = 0.5 * (a + b);
        let at_mid = roots_at(self.spec, mid);
        let half = self.advance(prev, a, mid, at_mid, depth + 1)?;
        self.advance(&half, mid, b, next, depth + 1)
    }
}

/// Follows the four eigenvalues of the loop's traceless matrix around `φ ∈ [0, 2π]`.
///
/// Strands are labelled by the `(Im, Re)` order of the eigenvalues at
/// `φ = 0`. Each grid step is matched by minimal total distance and halved
/// (up to 12 times) while some strand jumps by more than a quarter of the
/// current smallest gap.
pub fn track_eigenvalues(spec: &LoopSpec) -> Result<Strands> {
    spec.validate()?;
    let n = spec.n_samples;
    let phis: Vec<f64> = (0..=n).map(|k| TAU * k as f64 / n as f64).collect();
    let grid: Vec<[C64; 4]> = phis.par_iter().map(|&phi| roots_at(spec, phi)).collect();
    let scale = grid.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);

    let order = im_order(&grid[0]);
    let first = order.map(|k| grid[0][k]);
    let mut tracker = Tracker {
        spec,
        scale,
        min_gap: min_pairwise(&first),
    };
    let mut values = Vec::with_capacity(n + 1);
    values.push(first);
    for k in 1..=n {
        let prev = values[k - 1];
        let next = tracker.advance(&prev, phis[k - 1], phis[k], grid[k], 0)?;
        values.push(next);
    }
    Ok(Strands {
        phis,
        values,
        min_gap: tracker.min_gap,
        scale,
    })
}

/// `perm[k]` is the strand whose starting value strand `k` ends on.
pub fn extract_permutation(strands: &Strands) -> Result<[usize; 4]> {
    let first = strands.values.first().expect("non-empty strands");
    let last = strands.values.last().expect("non-empty strands");
    let (p, cost, second) = best_matching(last, first);
    if cost > 1e-6 * strands.scale {
        return Err(Error::OpenStrands(cost));
    }
    if second - cost <= 1e-9 {
        return Err(Error::AmbiguousMatching(second - cost));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_loop_has_constant_strands() {
        let spec = LoopSpec {
            m_xi: 0.0,
            m_g: 0.0,
            m_gamma: 0.0,
            n_samples: 64,
            ..LoopSpec::L2
        };
        let s = track_eigenvalues(&spec).unwrap();
        assert_eq!(s.values.len(), 65);
        for row in &s.values {
            assert_eq!(row, &s.values[0]);
        }
        assert_eq!(s.min_gap, min_pairwise(&s.values[0]));
        assert_eq!(extract_permutation(&s).unwrap(), [0, 1, 2, 3]);
    }

    #[test]
    fn l1_returns_to_start() {
        let s = track_eigenvalues(&LoopSpec::L1.with_samples(256)).unwrap();
        assert_eq!(extract_permutation(&s).unwrap(), [0, 1, 2, 3]);
        assert!(s.min_gap > 1.0);
    }

    #[test]
    fn l2_swaps_in_pairs() {
        let s = track_eigenvalues(&LoopSpec::L2.with_samples(256)).unwrap();
        let p = extract_permutation(&s).unwrap();
        for k in 0..4 {
            assert_ne!(p[k], k);
            assert_eq!(p[p[k]], k);
        }
    }

    #[test]
    fn loop_through_a_degeneracy_is_rejected() {
        // g = 0 decouples the modes; the lossless mode contributes a
        // double eigenvalue all along the loop
        let spec = LoopSpec {
            a_xi: 1.0,
            m_xi: 0.2,
            a_g: 0.0,
            m_g: 0.0,
            a_gamma: 0.3,
            m_gamma: 0.5,
            delta_omega_1: 0.0,
            delta_omega_2: 0.0,
            n_samples: 64,
        };
        assert!(matches!(
            track_eigenvalues(&spec),
            Err(Error::LoopTouchesDegeneracy { .. })
        ));
    }

    #[test]
    fn permutation_count() {
        assert_eq!(all_permutations().len(), 24);
    }
}
