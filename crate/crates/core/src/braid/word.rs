//! Braid words in B₄ read off eigenvalue strands.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::track::{im_order, Strands};
use crate::error::{Error, Result};

/// `σᵢ` (positive) or `σᵢ⁻¹`, `i ∈ {1, 2, 3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    index: u8,
    positive: bool,
}

impl Generator {
    pub fn new(index: u8, positive: bool) -> Result<Self> {
        if !(1..=3).contains(&index) {
            return Err(Error::InvalidArgument(format!(
                "generator index must be 1, 2 or 3, got {index}"
            )));
        }
        Ok(Self { index, positive })
    }

    /// From the signed form `±i`.
    pub fn from_signed(v: i32) -> Result<Self> {
        let index = u8::try_from(v.unsigned_abs())
            .map_err(|_| Error::InvalidArgument(format!("bad generator {v}")))?;
        Self::new(index, v > 0)
    }

    pub fn index(&self) -> u8 {
        self.index
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn signed(&self) -> i32 {
        if self.positive {
            self.index as i32
        } else {
            -(self.index as i32)
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            index: self.index,
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "s{}", self.index)
        } else {
            write!(f, "s{}^-1", self.index)
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i32(self.signed())
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i32::deserialize(d)?;
        Generator::from_signed(v).map_err(serde::de::Error::custom)
    }
}

/// Cancels `σᵢ^ε σᵢ^−ε` pairs, also across letters `σⱼ` with `|i − j| ≥ 2`,
/// which commute with `σᵢ`.
pub fn reduce(word: &[Generator]) -> Vec<Generator> {
    let mut out: Vec<Generator> = Vec::with_capacity(word.len());
    'letters: for &x in word {
        for j in (0..out.len()).rev() {
            let y = out[j];
            if y == x.inverse() {
                out.remove(j);
                continue 'letters;
            }
            if (y.index as i32 - x.index as i32).abs() < 2 {
                break;
            }
        }
        out.push(x);
    }
    out
}

/// Permutation induced by a word and its exponent sum.
///
/// `perm[k] = j` means the strand starting in position `k` ends on the
/// starting value of position `j`, matching [`super::extract_permutation`].
pub fn braid_invariants(word: &[Generator]) -> ([usize; 4], i32) {
    let mut arrangement = [0usize, 1, 2, 3];
    for g in word {
        let i = g.index as usize;
        arrangement.swap(i - 1, i);
    }
    let mut perm = [0usize; 4];
    for (pos, &strand) in arrangement.iter().enumerate() {
        perm[strand] = pos;
    }
    let exponent_sum = word.iter().map(|g| if g.positive { 1 } else { -1 }).sum();
    (perm, exponent_sum)
}

/// Reads crossings off the strands and returns the reduced word.
///
/// Strands are ordered by `Im λ` (ties by `Re λ`) at each sample. When two
/// neighbours exchange places between samples, one generator is emitted
/// at their lower position; it is positive when the strand moving up has
/// the smaller `Re λ` at the step midpoint. Several disjoint exchanges in
/// one step are emitted in ascending position. Any other change of order
/// is a [`Error::Resolution`] error.
///
/// Ordering by `Re λ` instead cannot work here: for a traceless,
/// particle-hole symmetric spectrum the real parts come as `±a, ±b` and
/// every crossing in `Re` is a four-fold coincidence.
pub fn extract_braid_word(strands: &Strands) -> Result<Vec<Generator>> {
    let mut word = Vec::new();
    for (k, pair) in strands.values.windows(2).enumerate() {
        let (v0, v1) = (&pair[0], &pair[1]);
        let o0 = im_order(v0);
        let o1 = im_order(v1);
        if o0 == o1 {
            continue;
        }
        let mut i = 0;
        while i < 4 {
            if o0[i] == o1[i] {
                i += 1;
                continue;
            }
            if i + 1 < 4 && o0[i] == o1[i + 1] && o0[i + 1] == o1[i] {
                let up = o0[i];
                let down = o0[i + 1];
                let re_up = 0.5 * (v0[up].re + v1[up].re);
                let re_down = 0.5 * (v0[down].re + v1[down].re);
                if re_up == re_down {
                    return Err(Error::Resolution {
                        phi: strands.phis[k],
                    });
                }
                word.push(Generator {
                    index: (i + 1) as u8,
                    positive: re_up < re_down,
                });
                i += 2;
            } else {
                return Err(Error::Resolution {
                    phi: strands.phis[k],
                });
            }
        }
    }
    Ok(reduce(&word))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i32]) -> Vec<Generator> {
        v.iter()
            .map(|&x| Generator::from_signed(x).unwrap())
            .collect()
    }

    #[test]
    fn invariants_of_small_words() {
        assert_eq!(braid_invariants(&[]), ([0, 1, 2, 3], 0));
        assert_eq!(braid_invariants(&w(&[-1, 3])), ([1, 0, 3, 2], 0));
        assert_eq!(braid_invariants(&w(&[1, 1])), ([0, 1, 2, 3], 2));
        assert_eq!(braid_invariants(&w(&[1, 2])).0, [2, 0, 1, 3]);
    }

    #[test]
    fn reduction() {
        assert_eq!(reduce(&w(&[1, -1])), vec![]);
        assert_eq!(reduce(&w(&[1, 3, -1])), w(&[3]));
        assert_eq!(reduce(&w(&[1, 2, -1])), w(&[1, 2, -1]));
        assert_eq!(reduce(&w(&[-1, 3, -3, 1])), vec![]);
        assert_eq!(reduce(&w(&[2, 2])), w(&[2, 2]));
    }

    #[test]
    fn generator_bounds() {
        assert!(Generator::from_signed(0).is_err());
        assert!(Generator::from_signed(4).is_err());
        assert_eq!(Generator::from_signed(-2).unwrap().to_string(), "s2^-1");
        let json = serde_json::to_string(&w(&[-1, 3])).unwrap();
        assert_eq!(json, "[-1,3]");
        let back: Vec<Generator> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w(&[-1, 3]));
    }
}
