//! Fixed-size 4×4 complex matrices and the small dense kernels built on them.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// A complex 4-vector.
pub type CVec4 = [C64; 4];

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major 4×4 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMatrix4(pub [[C64; 4]; 4]);

impl Default for ComplexMatrix4 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl ComplexMatrix4 {
    pub fn zeros() -> Self {
        Self([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::diag([ONE; 4])
    }

    pub fn diag(d: [C64; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, &v) in d.iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    pub fn from_real_rows(rows: [[f64; 4]; 4]) -> Self {
        Self(rows.map(|row| row.map(|x| C64::new(x, 0.0))))
    }

    /// Validates that all entries are finite.
    pub fn checked(self) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::MalformedMatrix("non-finite entry".into()))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|row| row.map(|z| z.conj())))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                t.0[j][i] = self.0[i][j];
            }
        }
        t
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scale(&self, a: C64) -> Self {
        Self(self.0.map(|row| row.map(|z| z * a)))
    }

    /// `self + a·I`.
    pub fn shift(&self, a: C64) -> Self {
        let mut m = *self;
        for i in 0..4 {
            m.0[i][i] += a;
        }
        m
    }

    pub fn mul_vec(&self, v: &CVec4) -> CVec4 {
        let mut out = [ZERO; 4];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// Determinant by Laplace expansion over complementary 2×2 minors of the
    /// first two and last two rows.
    pub fn det(&self) -> C64 {
        let m = &self.0;
        let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
        };
        const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut acc = ZERO;
        for &(a, b) in &PAIRS {
            let (c, d) = complement(a, b);
            // sign of the permutation (a b c d) relative to (0 1 2 3)
            let sign = if (a + b) % 2 == 1 { 1.0 } else { -1.0 };
            acc += minor(0, 1, a, b) * minor(2, 3, c, d) * sign;
        }
        acc
    }

    /// Rank by Gaussian elimination with complete pivoting; pivots of
    /// magnitude `<= threshold` count as zero.
    pub fn rank(&self, threshold: f64) -> usize {
        Elimination::run(self, threshold).rank
    }

    /// Basis of the numerical null space (columns of the returned list),
    /// using the same pivot rule as [`ComplexMatrix4::rank`].
    pub fn null_space(&self, threshold: f64) -> Vec<CVec4> {
        Elimination::run(self, threshold).null_vectors()
    }
}

fn complement(a: usize, b: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&k| k != a && k != b);
    (rest.next().unwrap(), rest.next().unwrap())
}

impl Index<(usize, usize)> for ComplexMatrix4 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Add for ComplexMatrix4 {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl Sub for ComplexMatrix4 {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl Mul for ComplexMatrix4 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..4 {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

pub fn vec_norm(v: &CVec4) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_sub(a: &CVec4, b: &CVec4) -> CVec4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

pub fn vec_scale(v: &CVec4, s: C64) -> CVec4 {
    v.map(|z| z * s)
}

/// Matrix whose columns are the given vectors.
pub fn from_columns(cols: &[CVec4; 4]) -> ComplexMatrix4 {
    let mut m = ComplexMatrix4::zeros();
    for (j, col) in cols.iter().enumerate() {
        for i in 0..4 {
            m.0[i][j] = col[i];
        }
    }
    m
}

/// Upper-trapezoidal factor from complete-pivoting elimination.
struct Elimination {
    u: [[C64; 4]; 4],
    col_perm: [usize; 4],
    rank: usize,
}

impl Elimination {
    fn run(m: &ComplexMatrix4, threshold: f64) -> Self {
        let mut a = m.0;
        let mut col_perm = [0, 1, 2, 3];
        let mut rank = 0;
        for k in 0..4 {
            let mut best = (k, k, -1.0);
            for i in k..4 {
                for j in k..4 {
                    let v = a[i][j].norm();
                    if v > best.2 {
                        best = (i, j, v);
                    }
                }
            }
            let (pi, pj, pv) = best;
            if pv <= threshold {
                break;
            }
            a.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            col_perm.swap(k, pj);
            for i in (k + 1)..4 {
                let f = a[i][k] / a[k][k];
                a[i][k] = ZERO;
                for j in (k + 1)..4 {
                    let t = a[k][j];
                    a[i][j] -= f * t;
                }
            }
            rank += 1;
        }
        Self {
            u: a,
            col_perm,
            rank,
        }
    }

    fn null_vectors(&self) -> Vec<CVec4> {
        let r = self.rank;
        (r..4)
            .map(|free| {
                let mut y = [ZERO; 4];
                y[free] = ONE;
                for i in (0..r).rev() {
                    let mut acc = self.u[i][free];
                    for j in (i + 1)..r {
                        acc += self.u[i][j] * y[j];
                    }
                    y[i] = -acc / self.u[i][i];
                }
                let mut x = [ZERO; 4];
                for (k, &c) in self.col_perm.iter().enumerate() {
                    x[c] = y[k];
                }
                x
            })
            .collect()
    }
}
