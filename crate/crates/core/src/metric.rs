//! Riemannian metrics on a Lie algebra, carried by an orthonormal coframe.

use thiserror::Error;

use crate::exterior::{wedge_sign, Form};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("coframe is degenerate")]
    Degenerate,
    #[error("bilinear form is not positive definite (leading minor {0} is not positive)")]
    NotPositive(usize),
    #[error("orthonormal coframe needs a square root not available at this level")]
    Irrational,
}

/// A positive definite inner product on the algebra.
///
/// `g[(i, j)] = g(e_i, e_j)`. The coframe rows are the orthonormal 1-forms
/// written in the generators; their wedge in order is the volume form.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric<S> {
    g: Matrix<S>,
    coframe: Matrix<S>,
    coframe_inv: Matrix<S>,
    vol: Form<S>,
}

impl<S: Scalar> Metric<S> {
    /// The metric making the given 1-forms orthonormal, oriented by their order.
    pub fn from_coframe(e: &[Form<S>]) -> Result<Self, MetricError> {
        let n = e.len();
        let c = Matrix::from_rows(e.iter().map(|f| f.covector()).collect());
        if c.cols() != n {
            return Err(MetricError::Degenerate);
        }
        let inv = c.inverse().ok_or(MetricError::Degenerate)?;
        let g = c.transpose().mul(&c);
        let vol = e
            .iter()
            .fold(Form::constant(n, S::one()), |acc, f| acc.wedge(f));
        Ok(Metric {
            g,
            coframe: c,
            coframe_inv: inv,
            vol,
        })
    }

    /// Metric from its Gram matrix on the generators, oriented by
    /// `e^1 ∧ … ∧ e^n`. The coframe comes from a Cholesky factorisation,
    /// so over the rationals it exists only when the pivots are squares.
    pub fn from_matrix(g: &Matrix<S>) -> Result<Self, MetricError> {
        let n = g.rows();
        let tol = 1e-12 * g.max_magnitude().max(1.0);
        // g = U^T U with U upper triangular; rows of U are the coframe.
        let mut u: Matrix<S> = Matrix::zeros(n, n);
        for i in 0..n {
            let mut d = g[(i, i)].clone();
            for k in 0..i {
                d = d - u[(k, i)].clone() * u[(k, i)].clone();
            }
            if d.to_f64() <= tol {
                return Err(MetricError::NotPositive(i + 1));
            }
            let s = d.sqrt().ok_or(MetricError::Irrational)?;
            let r = s.recip().ok_or(MetricError::Degenerate)?;
            u[(i, i)] = s;
            for j in i + 1..n {
                let mut v = g[(i, j)].clone();
                for k in 0..i {
                    v = v - u[(k, i)].clone() * u[(k, j)].clone();
                }
                u[(i, j)] = v * r.clone();
            }
        }
        let rows: Vec<Form<S>> = (0..n).map(|i| Form::from_covector(u.row(i))).collect();
        let mut m = Metric::from_coframe(&rows)?;
        m.g = g.clone();
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.g
    }

    pub fn volume(&self) -> &Form<S> {
        &self.vol
    }

    pub fn coframe(&self) -> Vec<Form<S>> {
        (0..self.dim())
            .map(|i| Form::from_covector(self.coframe.row(i)))
            .collect()
    }

    /// The dual orthonormal frame, as columns of the inverse coframe matrix.
    pub fn frame(&self) -> Vec<Vec<S>> {
        (0..self.dim()).map(|a| self.coframe_inv.column(a)).collect()
    }

    /// Rewrites a form in the orthonormal coframe (coefficient of `E^I`).
    pub fn to_orthonormal(&self, a: &Form<S>) -> Form<S> {
        a.transform(&self.coframe_inv)
    }

    pub fn from_orthonormal(&self, a: &Form<S>) -> Form<S> {
        a.transform(&self.coframe)
    }

    pub fn hodge_star(&self, a: &Form<S>) -> Form<S> {
        let n = self.dim();
        let full = ((1u16 << n) - 1) as u8;
        let mut out = Form::zero(n, n - a.degree());
        for (m, c) in self.to_orthonormal(a).terms() {
            let rest = full & !m.0;
            let s = wedge_sign(m.0, rest);
            out.add_term(rest, if s > 0 { c.clone() } else { -c.clone() });
        }
        self.from_orthonormal(&out)
    }

    pub fn inner_product(&self, a: &Form<S>, b: &Form<S>) -> S {
        assert_eq!(a.degree(), b.degree(), "inner product of different degrees");
        let ea = self.to_orthonormal(a);
        let eb = self.to_orthonormal(b);
        ea.terms()
            .fold(S::zero(), |acc, (m, c)| acc + c.clone() * eb.coeff(m.0))
    }

    pub fn norm_squared(&self, a: &Form<S>) -> S {
        self.inner_product(a, a)
    }

    /// `v ↦ g(v, ·)`.
    pub fn flat(&self, v: &[S]) -> Form<S> {
        Form::from_covector(&self.g.mul_vec(v))
    }

    /// Inverse of [`Metric::flat`].
    pub fn sharp(&self, beta: &Form<S>) -> Vec<S> {
        // g^{-1} = C^{-1} C^{-T}
        let w = self.coframe_inv.transpose().mul_vec(&beta.covector());
        self.coframe_inv.mul_vec(&w)
    }

    pub fn apply(&self, v: &[S], w: &[S]) -> S {
        let gw = self.g.mul_vec(w);
        v.iter()
            .zip(gw)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b)
    }

    /// Positive-definiteness test by leading principal minors.
    pub fn check_positive(g: &Matrix<S>, tol: f64) -> Result<(), MetricError> {
        for (k, m) in g.leading_minors().iter().enumerate() {
            if m.to_f64() <= tol {
                return Err(MetricError::NotPositive(k + 1));
            }
        }
        Ok(())
    }

    pub fn to_f64(&self) -> Metric<f64> {
        Metric {
            g: self.g.to_f64(),
            coframe: self.coframe.to_f64(),
            coframe_inv: self.coframe_inv.to_f64(),
            vol: self.vol.to_f64(),
        }
    }
}

/// The flat metric with the generators orthonormal.
pub fn standard<S: Scalar>(dim: usize) -> Metric<S> {
    let e: Vec<Form<S>> = (0..dim).map(|i| Form::generator(dim, i)).collect();
    Metric::from_coframe(&e).expect("standard coframe")
}
