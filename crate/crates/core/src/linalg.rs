//! Small dense linear algebra over any [`Scalar`]: row reduction, kernels,
//! solves and inverses. Exact over rationals; partial pivoting with an
//! absolute threshold over floats.

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Pivot threshold for float elimination, relative to the largest entry.
pub const PIVOT_TOL: f64 = 1e-11;

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
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
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, o: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        Matrix::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * o[(k, j)].clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (k, vk) in v.iter().enumerate() {
                    acc = acc + self[(i, k)].clone() * vk.clone();
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Matrix<S>) -> Matrix<S> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + o[(i, j)].clone())
    }

    pub fn sub(&self, o: &Matrix<S>) -> Matrix<S> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - o[(i, j)].clone())
    }

    pub fn scale(&self, s: &S) -> Matrix<S> {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Absolute pivot threshold for this matrix.
    fn threshold(&self) -> f64 {
        PIVOT_TOL * self.max_magnitude().max(1.0)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    /// Only the first `ncols` columns are eligible as pivots.
    pub fn rref_in_place(&mut self, ncols: usize) -> Vec<usize> {
        let tol = self.threshold();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols.min(self.cols) {
            if r == self.rows {
                break;
            }
            let mut best = None;
            let mut best_mag = 0.0;
            for i in r..self.rows {
                let x = &self[(i, c)];
                if x.negligible(tol) {
                    continue;
                }
                let m = x.magnitude();
                if best.is_none() || (!S::is_exact() && m > best_mag) {
                    best = Some(i);
                    best_mag = m;
                    if S::is_exact() {
                        break;
                    }
                }
            }
            let Some(p) = best else {
                for i in r..self.rows {
                    self[(i, c)] = S::zero();
                }
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip().expect("nonzero pivot");
            for j in 0..self.cols {
                let v = self[(r, j)].clone() * inv.clone();
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in 0..self.cols {
                    let v = self[(i, j)].clone() - f.clone() * self[(r, j)].clone();
                    self[(i, j)] = v;
                }
                self[(i, c)] = S::zero();
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let n = m.cols;
        m.rref_in_place(n).len()
    }

    /// Basis of the kernel `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let n = m.cols;
        let pivots = m.rref_in_place(n);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); n];
                v[f] = S::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `A x = b` (any shape). Free variables are set to zero.
    /// Returns the solution, the rank, and the inconsistency of the reduced
    /// system (largest leftover right-hand side; zero when consistent).
    pub fn solve(&self, b: &[S]) -> LinearSolution<S> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.rref_in_place(self.cols);
        let mut x = vec![S::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[(r, self.cols)].clone();
        }
        let inconsistency = (pivots.len()..self.rows)
            .map(|r| aug[(r, self.cols)].magnitude())
            .fold(0.0, f64::max);
        LinearSolution {
            x,
            rank: pivots.len(),
            inconsistency,
        }
    }

    pub fn inverse(&self) -> Option<Matrix<S>> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
    }

    /// Determinant by elimination (no pivot threshold).
    pub fn determinant(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let mut p = None;
            let mut best = 0.0;
            for i in c..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let mag = m[(i, c)].magnitude();
                if p.is_none() || mag > best {
                    p = Some(i);
                    best = mag;
                }
            }
            let Some(p) = p else { return S::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            let inv = piv.recip().expect("nonzero pivot");
            for i in c + 1..n {
                let f = m[(i, c)].clone() * inv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Leading principal minors, used as the positive-definiteness test.
    pub fn leading_minors(&self) -> Vec<S> {
        (1..=self.rows)
            .map(|k| Matrix::from_fn(k, k, |i, j| self[(i, j)].clone()).determinant())
            .collect()
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(Scalar::to_f64)
    }
}

impl Matrix<f64> {
    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    /// Numerical rank from singular values, relative tolerance `rtol`.
    pub fn numerical_rank(&self, rtol: f64) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let sv = self.to_nalgebra().singular_values();
        let top = sv.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > rtol * top).count()
    }
}

#[derive(Clone, Debug)]
pub struct LinearSolution<S> {
    pub x: Vec<S>,
    pub rank: usize,
    pub inconsistency: f64,
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};

    #[test]
    fn exact_inverse_and_determinant() {
        let m: Matrix<Q> = Matrix::from_rows(vec![
            vec![q(2, 1), q(1, 1)],
            vec![q(1, 1), q(1, 1)],
        ]);
        assert_eq!(m.determinant(), q(1, 1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m: Matrix<Q> = Matrix::from_rows(vec![vec![q(1, 1), q(2, 1), q(3, 1)]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v)[0].is_zero());
        }
    }

    #[test]
    fn inconsistent_system_is_reported() {
        let m: Matrix<f64> = Matrix::from_rows(vec![vec![1.0], vec![1.0]]);
        let s = m.solve(&[1.0, 2.0]);
        assert!(s.inconsistency > 0.1);
        let s = m.solve(&[1.0, 1.0]);
        assert!(s.inconsistency < 1e-14);
        assert_eq!(s.x, vec![1.0]);
    }
}
