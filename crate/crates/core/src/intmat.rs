//! Integer matrices inducing toral automorphisms.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::MatF;
use crate::math::fract;
use crate::{Error, Result};

/// An n×n integer matrix with determinant ±1, acting on 𝕋ⁿ = ℝⁿ/ℤⁿ.
///
/// Unimodularity makes the induced map invertible on the torus with an
/// integer inverse, so powers (positive and negative) stay exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl IntegerMatrix {
    /// Builds the matrix, rejecting anything with |det| ≠ 1.
    pub fn new(n: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != n * n || n == 0 {
            return Err(Error::Dimension);
        }
        let m = Self { n, entries };
        let d = m.det();
        if d != 1 && d != -1 {
            return Err(Error::NotUnimodular { det: d });
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { n, entries }
    }

    /// The 2×2 hyperbolic automorphism [[2,1],[1,1]].
    pub fn cat() -> Self {
        Self::new(2, vec![2, 1, 1, 1]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// Determinant by fraction-free (Bareiss) elimination in i128.
    pub fn det(&self) -> i64 {
        det_bareiss(self.n, &self.entries.iter().map(|&e| e as i128).collect::<Vec<_>>())
            as i64
    }

    /// Determinant of the submatrix with the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> i64 {
        debug_assert_eq!(rows.len(), cols.len());
        let k = rows.len();
        let sub: Vec<i128> = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.at(r, c) as i128))
            .collect();
        det_bareiss(k, &sub) as i64
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.at(k, j);
                }
            }
        }
        IntegerMatrix { n, entries }
    }

    /// Exact integer inverse via the adjugate; valid because det = ±1.
    pub fn inverse(&self) -> IntegerMatrix {
        let n = self.n;
        let d = self.det();
        let mut entries = vec![0i64; n * n];
        let idx: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = idx.iter().copied().filter(|&r| r != j).collect();
                let cols: Vec<usize> = idx.iter().copied().filter(|&c| c != i).collect();
                let cof = if rows.is_empty() { 1 } else { self.minor(&rows, &cols) };
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                entries[i * n + j] = d * sign * cof;
            }
        }
        IntegerMatrix { n, entries }
    }

    /// Integer power; negative exponents go through the exact inverse.
    pub fn pow(&self, e: i64) -> IntegerMatrix {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = IntegerMatrix::identity(self.n);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Applies the matrix to a lift in ℝⁿ.
    pub fn apply_lift(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j) as f64 * x[j]).sum())
            .collect()
    }

    /// Applies the matrix on the torus (reduce after the lift action).
    pub fn apply_mod(&self, x: &[f64]) -> Vec<f64> {
        self.apply_lift(x).into_iter().map(fract).collect()
    }

    pub fn to_matf(&self) -> MatF {
        MatF {
            rows: self.n,
            cols: self.n,
            data: self.entries.iter().map(|&e| e as f64).collect(),
        }
    }

    /// Block-diagonal sum, e.g. two cat maps glued into an automorphism of 𝕋⁴.
    pub fn direct_sum(&self, other: &IntegerMatrix) -> IntegerMatrix {
        let n = self.n + other.n;
        let mut entries = vec![0i64; n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                entries[i * n + j] = self.at(i, j);
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                entries[(self.n + i) * n + (self.n + j)] = other.at(i, j);
            }
        }
        IntegerMatrix { n, entries }
    }
}

fn det_bareiss(n: usize, entries: &[i128]) -> i128 {
    if n == 0 {
        return 1;
    }
    let mut a = entries.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                return 0;
            };
            for j in 0..n {
                a.swap(k * n + j, swap * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] =
                    (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
            }
        }
        prev = a[k * n + k];
    }
    sign * a[n * n - 1]
}

/// Random unimodular matrix with entries bounded by `max_abs`, built from
/// elementary shears and swaps (each preserves |det| = 1).
pub fn random_unimodular(
    n: usize,
    max_abs: i64,
    rng: &mut crate::rng::SplitMix64,
) -> IntegerMatrix {
    let mut m = IntegerMatrix::identity(n);
    let mut steps = 0;
    while steps < 24 {
        let op = rng.next_u64() % 3;
        let i = (rng.next_u64() % n as u64) as usize;
        let mut j = (rng.next_u64() % n as u64) as usize;
        if i == j {
            j = (j + 1) % n;
        }
        match op {
            0 => {
                // rows[i] += s * rows[j], backed out if any entry escapes the bound
                let s: i64 = if rng.next_u64() & 1 == 0 { 1 } else { -1 };
                let mut next = m.clone();
                for c in 0..n {
                    next.entries[i * n + c] += s * next.entries[j * n + c];
                }
                if next.entries.iter().all(|e| e.abs() <= max_abs) {
                    m = next;
                }
            }
            1 => {
                for c in 0..n {
                    m.entries.swap(i * n + c, j * n + c);
                }
            }
            _ => {
                for c in 0..n {
                    m.entries[i * n + c] = -m.entries[i * n + c];
                }
            }
        }
        steps += 1;
    }
    debug_assert_eq!(m.det().abs(), 1);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn rejects_non_unimodular() {
        assert!(IntegerMatrix::new(2, vec![2, 0, 0, 2]).is_err());
        assert!(IntegerMatrix::new(2, vec![2, 1, 1, 1]).is_ok());
    }

    #[test]
    fn inverse_and_pow_are_exact() {
        let a = IntegerMatrix::cat();
        let inv = a.inverse();
        assert_eq!(inv.entries(), &[1, -1, -1, 2]);
        assert_eq!(a.mul(&inv), IntegerMatrix::identity(2));
        assert_eq!(a.pow(-2), inv.mul(&inv));
    }

    #[test]
    fn minor_matches_definition() {
        let a = IntegerMatrix::new(3, vec![2, 1, 0, 1, 1, 0, 0, 0, 1]).unwrap();
        assert_eq!(a.minor(&[0, 1], &[0, 1]), 1);
        assert_eq!(a.minor(&[0, 2], &[0, 2]), 2);
    }

    #[test]
    fn random_unimodular_has_unit_det_and_bounded_entries() {
        let mut rng = SplitMix64::new(42);
        for _ in 0..200 {
            let m = random_unimodular(3, 3, &mut rng);
            assert_eq!(m.det().abs(), 1);
            assert!(m.entries().iter().all(|e| e.abs() <= 3));
        }
    }

    #[test]
    fn cat_map_moves_half_half_to_half_zero() {
        let a = IntegerMatrix::cat();
        let y = a.apply_mod(&[0.5, 0.5]);
        assert!((y[0] - 0.5).abs() < 1e-15 && y[1].abs() < 1e-15);
    }
}
