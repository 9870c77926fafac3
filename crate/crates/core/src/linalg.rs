//! Dense linear algebra on small matrices (dimension ≤ 6).
//!
//! Phase spaces here are at most 4-dimensional and induced homology actions
//! at most 6×6, so everything is plain row-major `Vec<f64>` with direct
//! loops: Gaussian elimination with partial pivoting, modified Gram-Schmidt,
//! and a Jacobi eigensolver for symmetric matrices (which also yields
//! singular values). No dependencies, fully deterministic.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::Real;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    Real::sqrt(dot(a, a))
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MatF {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl MatF {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn mul(&self, other: &MatF) -> MatF {
        assert_eq!(self.cols, other.rows);
        let mut out = MatF::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect()
    }

    pub fn transpose(&self) -> MatF {
        let mut out = MatF::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// A^T A, the Gram matrix of the columns.
    pub fn gram(&self) -> MatF {
        let mut out = MatF::zeros(self.cols, self.cols);
        for i in 0..self.cols {
            for j in i..self.cols {
                let mut s = 0.0;
                for r in 0..self.rows {
                    s += self[(r, i)] * self[(r, j)];
                }
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out
    }
}

impl core::ops::Index<(usize, usize)> for MatF {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for MatF {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `m x = rhs` by Gaussian elimination with partial pivoting.
/// Returns `None` when the pivot collapses (matrix numerically singular).
pub fn solve(m: &MatF, rhs: &[f64]) -> Option<Vec<f64>> {
    assert_eq!(m.rows, m.cols);
    assert_eq!(m.rows, rhs.len());
    let n = m.rows;
    let mut a = m.clone();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if Real::abs(a[(r, col)]) > Real::abs(a[(piv, col)]) {
                piv = r;
            }
        }
        if Real::abs(a[(piv, col)]) < 1e-300 {
            return None;
        }
        if piv != col {
            for j in 0..n {
                let t = a[(col, j)];
                a[(col, j)] = a[(piv, j)];
                a[(piv, j)] = t;
            }
            b.swap(col, piv);
        }
        let inv = 1.0 / a[(col, col)];
        for r in col + 1..n {
            let f = a[(r, col)] * inv;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                a[(r, j)] -= f * a[(col, j)];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[(i, j)] * x[j];
        }
        x[i] = s / a[(i, i)];
    }
    Some(x)
}

/// Matrix inverse via column-by-column solves. `None` when singular.
pub fn inverse(m: &MatF) -> Option<MatF> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut out = MatF::zeros(n, n);
    let mut e = vec![0.0; n];
    for col in 0..n {
        e[col] = 1.0;
        let x = solve(m, &e)?;
        e[col] = 0.0;
        for r in 0..n {
            out[(r, col)] = x[r];
        }
    }
    Some(out)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
/// sorted descending.
pub fn sym_eigenvalues(m: &MatF) -> Vec<f64> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if Real::abs(apq) < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + Real::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + Real::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / Real::sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eig
}

/// Singular values of a (possibly rectangular) matrix, sorted descending.
pub fn singular_values(m: &MatF) -> Vec<f64> {
    let gram = if m.rows >= m.cols {
        m.gram()
    } else {
        m.transpose().gram()
    };
    sym_eigenvalues(&gram)
        .into_iter()
        .map(|e| Real::sqrt(if e > 0.0 { e } else { 0.0 }))
        .collect()
}

/// Modified Gram-Schmidt on a set of vectors, in place.
/// Returns the diagonal of R: the norm of each vector's component
/// orthogonal to its predecessors.
pub fn orthonormalize(frame: &mut [Vec<f64>]) -> Vec<f64> {
    let mut diag = Vec::with_capacity(frame.len());
    for i in 0..frame.len() {
        for j in 0..i {
            let proj = dot(&frame[i], &frame[j]);
            let prev = frame[j].clone();
            for (vi, pj) in frame[i].iter_mut().zip(prev.iter()) {
                *vi -= proj * pj;
            }
        }
        let r = norm(&frame[i]);
        diag.push(r);
        if r > 0.0 {
            for vi in frame[i].iter_mut() {
                *vi /= r;
            }
        }
    }
    diag
}

/// k-dimensional volume of the parallelepiped spanned by the given vectors
/// (square root of the Gram determinant).
pub fn gram_volume(vectors: &[&[f64]]) -> f64 {
    let k = vectors.len();
    let mut g = MatF::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = dot(vectors[i], vectors[j]);
        }
    }
    let d = det(&g);
    Real::sqrt(if d > 0.0 { d } else { 0.0 })
}

/// Determinant by LU with partial pivoting.
pub fn det(m: &MatF) -> f64 {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    let mut sign = 1.0;
    let mut prod = 1.0;
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if Real::abs(a[(r, col)]) > Real::abs(a[(piv, col)]) {
                piv = r;
            }
        }
        if a[(piv, col)] == 0.0 {
            return 0.0;
        }
        if piv != col {
            sign = -sign;
            for j in 0..n {
                let t = a[(col, j)];
                a[(col, j)] = a[(piv, j)];
                a[(piv, j)] = t;
            }
        }
        prod *= a[(col, col)];
        let inv = 1.0 / a[(col, col)];
        for r in col + 1..n {
            let f = a[(r, col)] * inv;
            for j in col..n {
                a[(r, j)] -= f * a[(col, j)];
            }
        }
    }
    sign * prod
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_recovers_known_solution() {
        let m = MatF::from_rows(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let x = solve(&m, &[3.0, 2.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_values_of_cat_matrix() {
        // symmetric positive definite, so singular values equal eigenvalues
        let m = MatF::from_rows(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let sv = singular_values(&m);
        assert!((sv[0] - 2.618033988749895).abs() < 1e-12);
        assert!((sv[1] - 0.381966011250105).abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_diag_tracks_expansion() {
        let mut frame = alloc::vec![alloc::vec![3.0, 0.0], alloc::vec![1.0, 2.0]];
        let d = orthonormalize(&mut frame);
        assert!((d[0] - 3.0).abs() < 1e-14);
        assert!((d[1] - 2.0).abs() < 1e-14);
        assert!(dot(&frame[0], &frame[1]).abs() < 1e-14);
    }

    #[test]
    fn gram_volume_of_unit_square_embedded_in_r3() {
        let a = [1.0, 0.0, 0.0];
        let b = [0.0, 1.0, 0.0];
        assert!((gram_volume(&[&a, &b]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn det_matches_hand_value() {
        let m = MatF::from_rows(&[&[2.0, 1.0, 0.0], &[1.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        assert!((det(&m) - 1.0).abs() < 1e-12);
    }
}
