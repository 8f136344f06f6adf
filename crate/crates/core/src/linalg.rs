//! Small dense matrices over a [`Scalar`], with Gaussian elimination.

use std::ops::{Index, IndexMut};

use crate::scalar::{Scalar, Tolerance};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.clone() * b.clone();
                    out[(i, j)] = out[(i, j)].clone() + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect()
    }

    /// Row vector times matrix: `vᵀ M`.
    pub fn vec_mul(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.rows, v.len(), "shape mismatch in vector-matrix product");
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(S::zero(), |acc, i| {
                    if v[i].is_zero() || self[(i, j)].is_zero() {
                        acc
                    } else {
                        acc + v[i].clone() * self[(i, j)].clone()
                    }
                })
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|a| a * s.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn map(&self, mut f: impl FnMut(S) -> S) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().cloned().map(&mut f).collect() }
    }

    fn zip(&self, other: &Self, f: impl Fn(S, S) -> S) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().cloned().zip(other.data.iter().cloned()).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Commutator `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn max_abs(&self) -> S {
        crate::scalar::max_abs(self.data.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn symmetric_part(&self) -> Self {
        let half = S::from_ratio(1, 2);
        self.add(&self.transpose()).scale(&half)
    }

    pub fn antisymmetric_part(&self) -> Self {
        let half = S::from_ratio(1, 2);
        self.sub(&self.transpose()).scale(&half)
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self, tol: &Tolerance) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // exact mode: first nonzero; float mode: partial pivoting
            let pick = if S::EXACT {
                (r..m.rows).find(|&i| !m[(i, c)].is_zero())
            } else {
                (r..m.rows)
                    .filter(|&i| !tol.is_pivot_zero(&m[(i, c)]))
                    .max_by(|&a, &b| m[(a, c)].abs().partial_cmp(&m[(b, c)].abs()).unwrap())
            };
            let Some(p) = pick else { continue };
            m.swap_rows(r, p);
            let inv = S::one() / m[(r, c)].clone();
            for j in 0..m.cols {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in 0..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                    m[(i, j)] = v;
                }
                if !S::EXACT {
                    m[(i, c)] = S::zero();
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, tol: &Tolerance) -> usize {
        self.rref(tol).1.len()
    }

    /// Basis of the right kernel `{x : Mx = 0}`.
    pub fn nullspace(&self, tol: &Tolerance) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![S::zero(); self.cols];
                x[f] = S::one();
                for (row, &p) in pivots.iter().enumerate() {
                    x[p] = -r[(row, f)].clone();
                }
                x
            })
            .collect()
    }

    /// One solution of `Mx = b` (free variables set to zero), or `None` if inconsistent.
    pub fn solve(&self, b: &[S], tol: &Tolerance) -> Option<Vec<S>> {
        assert_eq!(self.rows, b.len());
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref(tol);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self, tol: &Tolerance) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let (r, pivots) = aug.rref(tol);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    pub fn det(&self) -> S {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let pick = if S::EXACT {
                (c..n).find(|&i| !m[(i, c)].is_zero())
            } else {
                (c..n)
                    .filter(|&i| !m[(i, c)].is_zero())
                    .max_by(|&a, &b| m[(a, c)].abs().partial_cmp(&m[(b, c)].abs()).unwrap())
            };
            let Some(p) = pick else { return S::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() / piv.clone();
                for j in c..n {
                    let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Pivots of a symmetric LDLᵀ factorisation without pivoting, or `None`
    /// if a zero pivot shows up before the end.
    fn ldl_pivots(&self) -> Option<Vec<S>> {
        let n = self.rows;
        let mut m = self.clone();
        let mut piv = Vec::with_capacity(n);
        for c in 0..n {
            let p = m[(c, c)].clone();
            if p.is_zero() {
                return None;
            }
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() / p.clone();
                for j in c..n {
                    let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
            piv.push(p);
        }
        Some(piv)
    }

    /// Positive definiteness of a symmetric matrix via LDLᵀ pivots.
    pub fn is_positive_definite(&self, tol: &Tolerance) -> bool {
        if !self.is_square() {
            return false;
        }
        match self.ldl_pivots() {
            Some(p) => p.iter().all(|x| {
                if S::EXACT {
                    x.is_positive()
                } else {
                    x.to_f64() > tol.tau
                }
            }),
            None => false,
        }
    }

    /// Positive semidefiniteness: PD on the range, zero on the kernel.
    ///
    /// Exact for rationals: restrict to a complement of the kernel, then test PD.
    pub fn is_positive_semidefinite(&self, tol: &Tolerance) -> bool {
        if !self.is_square() {
            return false;
        }
        // for symmetric M the row space complements the kernel and M is
        // nonsingular on it, so PSD reduces to PD of the restriction
        let (r, pivots) = self.rref(tol);
        if pivots.is_empty() {
            return true;
        }
        let basis: Vec<Vec<S>> = (0..pivots.len()).map(|i| r.row(i)).collect();
        let b = Self::from_rows(basis);
        let restricted = b.mul(self).mul(&b.transpose());
        restricted.is_positive_definite(tol)
    }

    pub fn flatten(&self) -> Vec<S> {
        self.data.clone()
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            acc + x.clone() * y.clone()
        }
    })
}

pub fn vec_add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vec_sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vec_scale<S: Scalar>(a: &[S], s: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn unit<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    #[test]
    fn inverse_and_det() {
        let tol = Tolerance::default();
        let m: Matrix<Q> = Matrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(), q(18, 1));
        let inv = m.inverse(&tol).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        let sing: Matrix<Q> = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.det(), q(0, 1));
        assert!(sing.inverse(&tol).is_none());
    }

    #[test]
    fn nullspace_and_solve() {
        let tol = Tolerance::default();
        let m: Matrix<Q> = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let ker = m.nullspace(&tol);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert!(m.mul_vec(k).iter().all(|x| x.is_zero()));
        }
        let x = m.solve(&[q(1, 1), q(2, 1)], &tol).unwrap();
        assert_eq!(m.mul_vec(&x), vec![q(1, 1), q(2, 1)]);
        assert!(m.solve(&[q(1, 1), q(3, 1)], &tol).is_none());
    }

    #[test]
    fn definiteness() {
        let tol = Tolerance::default();
        let pd: Matrix<Q> = Matrix::from_i64(&[&[2, -1], &[-1, 2]]);
        assert!(pd.is_positive_definite(&tol));
        let indefinite: Matrix<Q> = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert!(!indefinite.is_positive_definite(&tol));
        assert!(!indefinite.is_positive_semidefinite(&tol));
        let psd: Matrix<Q> = Matrix::from_i64(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 0]]);
        assert!(!psd.is_positive_definite(&tol));
        assert!(psd.is_positive_semidefinite(&tol));
        let neg: Matrix<Q> = Matrix::from_i64(&[&[1, 0], &[0, -1]]);
        assert!(!neg.is_positive_semidefinite(&tol));
    }

    #[test]
    fn float_mode_agrees() {
        let tol = Tolerance::default();
        let m: Matrix<f64> = Matrix::from_rows(vec![vec![4.0, 1.0], vec![2.0, 3.0]]);
        let inv = m.inverse(&tol).unwrap();
        let id = m.mul(&inv);
        assert!(id.sub(&Matrix::identity(2)).max_abs() < 1e-12);
        assert!((m.det() - 10.0).abs() < 1e-12);
    }
}
