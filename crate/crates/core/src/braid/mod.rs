//! Eigenvalue braids along closed parameter loops.

mod loops;
mod track;
mod word;

use serde::Serialize;

use crate::error::{Error, Result};

pub use loops::{loop_point, LoopSpec, MIN_SAMPLES};
pub use track::{extract_permutation, track_eigenvalues, Strands};
pub use word::{braid_invariants, extract_braid_word, reduce, Generator};

/// How many times [`compute_braid`] doubles the sample count when a step
/// hides more than one crossing.
const MAX_DOUBLINGS: u32 = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct BraidResult {
    pub strands: Strands,
    /// Zero-based; see [`extract_permutation`].
    pub permutation: [usize; 4],
    pub word: Vec<Generator>,
    pub exponent_sum: i32,
    pub min_gap: f64,
    /// Sample count actually used.
    pub n_samples: usize,
}

impl BraidResult {
    /// Cycle type of the permutation, longest cycle first.
    pub fn cycle_type(&self) -> Vec<usize> {
        cycle_type(&self.permutation)
    }
}

pub fn cycle_type(perm: &[usize; 4]) -> Vec<usize> {
    let mut seen = [false; 4];
    let mut out = Vec::new();
    for start in 0..4 {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

#[derive(Serialize)]
struct BraidJson<'a> {
    word: &'a [Generator],
    permutation: [usize; 4],
    cycle_type: Vec<usize>,
    exponent_sum: i32,
    min_gap: f64,
    n_samples: usize,
}

impl Serialize for BraidResult {
    /// Word as signed generator indices, permutation one-based.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BraidJson {
            word: &self.word,
            permutation: self.permutation.map(|k| k + 1),
            cycle_type: self.cycle_type(),
            exponent_sum: self.exponent_sum,
            min_gap: self.min_gap,
            n_samples: self.n_samples,
        }
        .serialize(s)
    }
}

/// Tracks the loop, extracts the permutation and the reduced braid word.
///
/// When a sampling step contains crossings that cannot be told apart, the
/// sample count is doubled (up to four times).
pub fn compute_braid(spec: &LoopSpec) -> Result<BraidResult> {
    spec.validate()?;
    let mut last_err = None;
    for k in 0..=MAX_DOUBLINGS {
        let s = spec.with_samples(spec.n_samples << k);
        let strands = track_eigenvalues(&s)?;
        let word = match extract_braid_word(&strands) {
            Ok(w) => w,
            Err(e @ Error::Resolution { .. }) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let permutation = extract_permutation(&strands)?;
        let (word_perm, exponent_sum) = braid_invariants(&word);
        if word_perm != permutation {
            return Err(Error::InvalidArgument(format!(
                "word permutation {word_perm:?} disagrees with strand permutation {permutation:?}"
            )));
        }
        return Ok(BraidResult {
            min_gap: strands.min_gap,
            strands,
            permutation,
            word,
            exponent_sum,
            n_samples: s.n_samples,
        });
    }
    Err(last_err.expect("loop ran at least once"))
}
