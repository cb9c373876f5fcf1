//! Stable forms: Hitchin's invariant of a 3-form in six dimensions, the
//! almost complex structure it induces, and SU(3)- and SU(2)-structures
//! built on top of it.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exterior::Form;
use crate::linalg::Matrix;
use crate::metric::{Metric, MetricError};
use crate::scalar::{Scalar, Q};

/// `ψ⁺ ∧ ψ⁻ = c ω³` with `c = 2/3`, the value taken by the model
/// `ω = e¹⁴+e²³+e⁶⁵`, `Ψ = (e¹+ie⁴)∧(e²+ie³)∧(e⁶+ie⁵)`.
pub const NORMALIZATION: (i64, i64) = (2, 3);

pub fn normalization<S: Scalar>() -> S {
    S::from_ratio(NORMALIZATION.0, NORMALIZATION.1)
}

/// Overall sign relating `K_ρ/√(-λ)` to `J` when only a volume form is
/// known: with this choice the model `Re((e¹+ie²)∧(e³+ie⁴)∧(e⁵+ie⁶))` and
/// `vol = e¹²³⁴⁵⁶` give `J e₁ = e₂`.
const STANDALONE_SIGN: i64 = -1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructureError {
    #[error("expected {expected} dimensions, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("{0} has the wrong degree")]
    Degree(&'static str),
    #[error("{0} is degenerate")]
    Degenerate(&'static str),
    #[error("3-form is not stable of complex type (lambda = {0})")]
    NotComplexType(f64),
    #[error("a square root is not available at this level; retry with floats")]
    Irrational,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("structure fails validation:\n{0}")]
    Invalid(ValidationReport),
}

/// One named check of a validation run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub exact: bool,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new(exact: bool) -> Self {
        ValidationReport {
            exact,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, residual: f64) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            residual,
        });
    }

    /// Records that `f` vanishes (exactly, or within `tol` for floats).
    pub fn push_zero<S: Scalar>(&mut self, name: &str, f: &Form<S>, tol: f64) {
        let r = f.max_abs();
        let ok = if S::is_exact() { f.is_zero() } else { r <= tol };
        self.push(name, ok, r);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual.abs()).fold(0.0, f64::max)
    }

    pub fn absorb(&mut self, prefix: &str, other: ValidationReport) {
        for c in other.checks {
            self.push(format!("{prefix}{}", c.name), c.passed, c.residual);
        }
    }

    fn failed_with(exact: bool, name: &str, err: &StructureError) -> Self {
        let mut r = ValidationReport::new(exact);
        r.push(format!("{name}: {err}"), false, f64::INFINITY);
        r
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<32} residual {:e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.residual
            )?;
        }
        Ok(())
    }
}

/// `K_ρ` and `λ(ρ) = tr(K²)/6` for a 3-form on a 6-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct Hitchin<S> {
    pub k: Matrix<S>,
    pub lambda: S,
}

/// `K(v) = A((v ⌟ ρ) ∧ ρ)` where `A(ζ)` is the vector with `A(ζ) ⌟ vol = ζ`.
pub fn hitchin_invariant<S: Scalar>(rho: &Form<S>, vol: &Form<S>) -> Result<Hitchin<S>, StructureError> {
    check_dim(rho, 6)?;
    if rho.degree() != 3 && !rho.is_zero() {
        return Err(StructureError::Degree("rho"));
    }
    if vol.degree() != 6 {
        return Err(StructureError::Degree("vol"));
    }
    let v_inv = vol
        .scalar_part()
        .recip()
        .ok_or(StructureError::Degenerate("volume form"))?;
    let full = 0b11_1111u8;
    let mut k = Matrix::zeros(6, 6);
    for j in 0..6 {
        let zeta = rho.interior_basis(j).wedge(rho);
        for i in 0..6 {
            let c = zeta.coeff(full & !(1 << i)) * v_inv.clone();
            k[(i, j)] = if i % 2 == 0 { c } else { -c };
        }
    }
    let lambda = k.mul(&k).trace() * S::from_ratio(1, 6);
    Ok(Hitchin { k, lambda })
}

fn check_dim<S: Scalar>(f: &Form<S>, n: usize) -> Result<(), StructureError> {
    if f.dim() != n {
        Err(StructureError::Dimension {
            expected: n,
            found: f.dim(),
        })
    } else {
        Ok(())
    }
}

fn complex_type<S: Scalar>(h: &Hitchin<S>) -> Result<S, StructureError> {
    if h.lambda.to_f64() >= 0.0 || h.lambda.is_zero() {
        return Err(StructureError::NotComplexType(h.lambda.to_f64()));
    }
    let r = (-h.lambda.clone()).sqrt().ok_or(StructureError::Irrational)?;
    r.recip().ok_or(StructureError::Irrational)
}

/// `ψ⁻(X, Y, Z) = −ψ⁺(JX, Y, Z)`, averaged over the three slots.
pub fn psi_minus_from<S: Scalar>(psi_plus: &Form<S>, j: &Matrix<S>) -> Form<S> {
    psi_plus.derivation(j).scale(&S::from_ratio(-1, 3))
}

/// `J = ±K/√(−λ)` and `ψ⁻` for a complex-type stable 3-form, with the sign
/// fixed by the orientation of `vol`.
pub fn almost_complex_from_psi<S: Scalar>(
    psi_plus: &Form<S>,
    vol: &Form<S>,
) -> Result<(Matrix<S>, Form<S>), StructureError> {
    let h = hitchin_invariant(psi_plus, vol)?;
    let inv = complex_type(&h)?;
    let j = h.k.scale(&(inv * S::from_i64(STANDALONE_SIGN)));
    let pm = psi_minus_from(psi_plus, &j);
    Ok((j, pm))
}

/// `g(X, Y) = ω(X, JY)` on the generator basis.
pub fn compatible_metric<S: Scalar>(omega: &Form<S>, j: &Matrix<S>) -> Matrix<S> {
    let n = omega.dim();
    Matrix::from_fn(n, n, |a, b| {
        (0..n).fold(S::zero(), |acc, m| acc + omega.component(&[a, m]) * j[(m, b)].clone())
    })
}

/// An SU(3)-structure `(ω, ψ⁺)` with its derived `J`, `ψ⁻` and metric.
#[derive(Clone, Debug, PartialEq)]
pub struct Su3Structure<S> {
    pub omega: Form<S>,
    pub psi_plus: Form<S>,
    pub psi_minus: Form<S>,
    pub j: Matrix<S>,
    pub g: Matrix<S>,
    pub lambda: S,
}

impl<S: Scalar> Su3Structure<S> {
    /// Computes the derived data without insisting on the compatibility
    /// conditions; see [`Su3Structure::validate`].
    pub fn derive(omega: &Form<S>, psi_plus: &Form<S>) -> Result<Self, StructureError> {
        check_dim(omega, 6)?;
        check_dim(psi_plus, 6)?;
        if omega.degree() != 2 {
            return Err(StructureError::Degree("omega"));
        }
        if psi_plus.degree() != 3 {
            return Err(StructureError::Degree("psiPlus"));
        }
        let vol = omega.power(3).scale(&S::from_ratio(1, 6));
        if vol.is_zero() {
            return Err(StructureError::Degenerate("omega"));
        }
        let h = hitchin_invariant(psi_plus, &vol)?;
        let inv = complex_type(&h)?;
        let mut j = h.k.scale(&inv);
        let mut g = compatible_metric(omega, &j);
        if g.trace().to_f64() < 0.0 {
            j = j.scale(&-S::one());
            g = g.scale(&-S::one());
        }
        let psi_minus = psi_minus_from(psi_plus, &j);
        Ok(Su3Structure {
            omega: omega.clone(),
            psi_plus: psi_plus.clone(),
            psi_minus,
            j,
            g,
            lambda: h.lambda,
        })
    }

    /// Derives and validates; fails unless every check passes.
    pub fn new(omega: &Form<S>, psi_plus: &Form<S>, tol: f64) -> Result<Self, StructureError> {
        let s = Self::derive(omega, psi_plus)?;
        let r = s.validate(tol);
        if r.passed() {
            Ok(s)
        } else {
            Err(StructureError::Invalid(r))
        }
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        let mut r = ValidationReport::new(S::is_exact());
        let lam = self.lambda.to_f64();
        r.push("stable_complex_type", lam < 0.0, lam);
        let w3 = self.omega.power(3);
        r.push("omega_nondegenerate", !w3.is_zero() && w3.max_abs() > tol, w3.max_abs());
        r.push_zero("psi_plus_wedge_omega", &self.psi_plus.wedge(&self.omega), tol);
        r.push_zero("psi_minus_wedge_omega", &self.psi_minus.wedge(&self.omega), tol);
        let norm = self.psi_plus.wedge(&self.psi_minus) - w3.scale(&normalization());
        r.push_zero("normalization", &norm, tol);
        let asym = self.g.sub(&self.g.transpose()).max_magnitude();
        r.push("metric_symmetric", exact_or(asym, tol, S::is_exact()), asym);
        let minor = self
            .g
            .leading_minors()
            .iter()
            .map(Scalar::to_f64)
            .fold(f64::INFINITY, f64::min);
        r.push("metric_positive", minor > tol, minor);
        let jj = self.j.mul(&self.j).add(&Matrix::identity(6)).max_magnitude();
        r.push("j_squared", exact_or(jj, tol, S::is_exact()), jj);
        r
    }

    pub fn volume(&self) -> Form<S> {
        self.omega.power(3).scale(&S::from_ratio(1, 6))
    }

    /// The metric with an orthonormal coframe (Cholesky; may need floats).
    pub fn metric(&self) -> Result<Metric<S>, MetricError> {
        Metric::from_matrix(&self.g)
    }

    pub fn to_f64(&self) -> Su3Structure<f64> {
        Su3Structure {
            omega: self.omega.to_f64(),
            psi_plus: self.psi_plus.to_f64(),
            psi_minus: self.psi_minus.to_f64(),
            j: self.j.to_f64(),
            g: self.g.to_f64(),
            lambda: self.lambda.to_f64(),
        }
    }
}

fn exact_or(residual: f64, tol: f64, exact: bool) -> bool {
    if exact {
        residual == 0.0
    } else {
        residual <= tol
    }
}

/// Validation that never fails outright: derivation errors become entries.
pub fn su3_validate<S: Scalar>(omega: &Form<S>, psi_plus: &Form<S>, tol: f64) -> ValidationReport {
    match Su3Structure::derive(omega, psi_plus) {
        Ok(s) => s.validate(tol),
        Err(e) => ValidationReport::failed_with(S::is_exact(), "derive", &e),
    }
}

/// Exact validation when the square roots involved are rational, float
/// validation with tolerance `tol` otherwise.
pub fn su3_validate_rational(omega: &Form<Q>, psi_plus: &Form<Q>, tol: f64) -> ValidationReport {
    match Su3Structure::derive(omega, psi_plus) {
        Ok(s) => s.validate(0.0),
        Err(StructureError::Irrational) => su3_validate(&omega.to_f64(), &psi_plus.to_f64(), tol),
        Err(e) => ValidationReport::failed_with(true, "derive", &e),
    }
}

/// `ω = ω₃ + η∧α`, `ψ⁺ = ω₁∧η − ω₂∧α` on the algebra with a sixth
/// generator `η` appended.
pub fn product_forms<S: Scalar>(alpha: &Form<S>, omega: &[Form<S>; 3]) -> (Form<S>, Form<S>) {
    let eta = Form::generator(6, 5);
    let a = alpha.embed(6);
    let w: Vec<Form<S>> = omega.iter().map(|f| f.embed(6)).collect();
    let om = w[2].clone() + eta.wedge(&a);
    let psi = w[0].wedge(&eta) - w[1].wedge(&a);
    (om, psi)
}

/// An SU(2)-structure `(α, ω₁, ω₂, ω₃)` on a 5-dimensional algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Su2Structure<S> {
    pub alpha: Form<S>,
    pub omega: [Form<S>; 3],
    /// The vector with `α(R) = 1` annihilating `ω₁`.
    pub reeb: Vec<S>,
    /// Metric on the generators, read off from the product structure.
    pub g: Matrix<S>,
    product: Su3Structure<S>,
}

impl<S: Scalar> Su2Structure<S> {
    pub fn derive(alpha: &Form<S>, omega: [Form<S>; 3]) -> Result<Self, StructureError> {
        check_dim(alpha, 5)?;
        if alpha.degree() != 1 {
            return Err(StructureError::Degree("alpha"));
        }
        for w in &omega {
            check_dim(w, 5)?;
            if w.degree() != 2 {
                return Err(StructureError::Degree("omega_i"));
            }
        }
        let w1 = Matrix::from_fn(5, 5, |a, b| omega[0].component(&[a, b]));
        let ker = w1.nullspace();
        if ker.len() != 1 {
            return Err(StructureError::Degenerate("omega1"));
        }
        let r = &ker[0];
        let ar = alpha.interior(r).scalar_part();
        let inv = ar.recip().ok_or(StructureError::Degenerate("alpha on ker omega1"))?;
        let reeb: Vec<S> = r.iter().map(|x| x.clone() * inv.clone()).collect();
        let (om, psi) = product_forms(alpha, &omega);
        let product = Su3Structure::derive(&om, &psi)?;
        let g = Matrix::from_fn(5, 5, |a, b| product.g[(a, b)].clone());
        Ok(Su2Structure {
            alpha: alpha.clone(),
            omega,
            reeb,
            g,
            product,
        })
    }

    pub fn new(alpha: &Form<S>, omega: [Form<S>; 3], tol: f64) -> Result<Self, StructureError> {
        let s = Self::derive(alpha, omega)?;
        let r = s.validate(tol);
        if r.passed() {
            Ok(s)
        } else {
            Err(StructureError::Invalid(r))
        }
    }

    pub fn psi2(&self) -> Form<S> {
        self.omega[1].wedge(&self.alpha)
    }

    pub fn psi3(&self) -> Form<S> {
        self.omega[2].wedge(&self.alpha)
    }

    /// The SU(3)-structure `(ω₃ + η∧α, ω₁∧η − ω₂∧α)` on the product with a line.
    pub fn product(&self) -> &Su3Structure<S> {
        &self.product
    }

    /// Inner product of 1-forms.
    pub fn dual_matrix(&self) -> Option<Matrix<S>> {
        self.g.inverse()
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        let exact = S::is_exact();
        let mut r = ValidationReport::new(exact);
        let sq = self.omega[0].wedge(&self.omega[0]);
        let mut worst = Form::zero(5, 4);
        let mut worst_abs = -1.0;
        for i in 0..3 {
            for j in i..3 {
                let mut d = self.omega[i].wedge(&self.omega[j]);
                if i == j {
                    d = d - sq.clone();
                }
                if d.max_abs() > worst_abs {
                    worst_abs = d.max_abs();
                    worst = d;
                }
            }
        }
        r.push_zero("omega_products", &worst, tol);
        r.push("omega1_squared_nonzero", sq.max_abs() > tol && !sq.is_zero(), sq.max_abs());
        let top = self.alpha.wedge(&sq);
        r.push("alpha_wedge_omega1_squared", top.max_abs() > tol && !top.is_zero(), top.max_abs());
        let mut contr = Form::zero(5, 1);
        for w in &self.omega[1..] {
            let c = w.interior(&self.reeb);
            if c.max_abs() > contr.max_abs() {
                contr = c;
            }
        }
        r.push_zero("reeb_contractions", &contr, tol);
        r.absorb("product.", self.product.validate(tol));
        match self.adapted_coframe() {
            Ok(e) => {
                let res = self.reconstruction_residual(&e);
                r.push("adapted_coframe", exact_or(res, tol, exact), res);
            }
            Err(err) => r.push(format!("adapted_coframe: {err}"), false, f64::INFINITY),
        }
        r
    }

    fn dual_product(&self, a: &Form<S>, b: &Form<S>, ginv: &Matrix<S>) -> S {
        let va = a.covector();
        let vb = ginv.mul_vec(&b.covector());
        va.into_iter().zip(vb).fold(S::zero(), |acc, (x, y)| acc + x * y)
    }

    /// A coframe `e¹..e⁵` in which the structure takes the standard form
    /// `α = e⁵, ω₁ = e¹²+e³⁴, ω₂ = e¹³+e⁴², ω₃ = e¹⁴+e²³`.
    ///
    /// `e¹` is a unit covector orthogonal to `α`; the others are
    /// `e^{k+1} = e₁ ⌟ ω_k`. Over the rationals the generators are tried in
    /// turn for one whose projection has rational length.
    pub fn adapted_coframe(&self) -> Result<[Form<S>; 5], StructureError> {
        let ginv = self.g.inverse().ok_or(StructureError::Degenerate("metric"))?;
        let mut best: Option<(Form<S>, S)> = None;
        for k in 0..5 {
            let ek = Form::generator(5, k);
            let proj = self.dual_product(&ek, &self.alpha, &ginv);
            let beta = ek - self.alpha.scale(&proj);
            let n = self.dual_product(&beta, &beta, &ginv);
            if n.to_f64() <= 1e-12 {
                continue;
            }
            if S::is_exact() {
                if let Some(s) = n.sqrt() {
                    best = Some((beta, s));
                    break;
                }
            } else if best.as_ref().is_none_or(|(_, s)| n.to_f64() > s.to_f64().powi(2)) {
                let s = n.sqrt().ok_or(StructureError::Irrational)?;
                best = Some((beta, s));
            }
        }
        let (beta, len) = best.ok_or(StructureError::Irrational)?;
        let e1 = beta.scale(&len.recip().ok_or(StructureError::Irrational)?);
        let x = ginv.mul_vec(&e1.covector());
        Ok([
            e1,
            self.omega[0].interior(&x),
            self.omega[1].interior(&x),
            self.omega[2].interior(&x),
            self.alpha.clone(),
        ])
    }

    /// Largest deviation between the structure and the standard forms
    /// written in the coframe `e`.
    pub fn reconstruction_residual(&self, e: &[Form<S>; 5]) -> f64 {
        let std = standard_su2_in(e);
        let mut res = (&std.0 - &self.alpha).max_abs();
        for i in 0..3 {
            res = res.max((&std.1[i] - &self.omega[i]).max_abs());
        }
        res
    }

    pub fn to_f64(&self) -> Su2Structure<f64> {
        Su2Structure {
            alpha: self.alpha.to_f64(),
            omega: [
                self.omega[0].to_f64(),
                self.omega[1].to_f64(),
                self.omega[2].to_f64(),
            ],
            reeb: self.reeb.iter().map(Scalar::to_f64).collect(),
            g: self.g.to_f64(),
            product: self.product.to_f64(),
        }
    }
}

/// `(α, [ω₁, ω₂, ω₃])` in standard form with respect to a coframe.
pub fn standard_su2_in<S: Scalar>(e: &[Form<S>; 5]) -> (Form<S>, [Form<S>; 3]) {
    let w = |a: usize, b: usize| e[a].wedge(&e[b]);
    (
        e[4].clone(),
        [w(0, 1) + w(2, 3), w(0, 2) + w(3, 1), w(0, 3) + w(1, 2)],
    )
}

/// The standard structure on the generators themselves.
pub fn standard_su2<S: Scalar>() -> (Form<S>, [Form<S>; 3]) {
    let e: [Form<S>; 5] = std::array::from_fn(|i| Form::generator(5, i));
    standard_su2_in(&e)
}

pub fn su2_validate<S: Scalar>(alpha: &Form<S>, omega: &[Form<S>; 3], tol: f64) -> ValidationReport {
    match Su2Structure::derive(alpha, omega.clone()) {
        Ok(s) => s.validate(tol),
        Err(e) => ValidationReport::failed_with(S::is_exact(), "derive", &e),
    }
}

/// Exact where possible, falling back to floats when a square root is
/// irrational.
pub fn su2_validate_rational(alpha: &Form<Q>, omega: &[Form<Q>; 3], tol: f64) -> ValidationReport {
    let exact = su2_validate(alpha, omega, 0.0);
    let irrational = exact.checks.iter().any(|c| c.name.contains("square root"));
    if irrational {
        let w = [omega[0].to_f64(), omega[1].to_f64(), omega[2].to_f64()];
        su2_validate(&alpha.to_f64(), &w, tol)
    } else {
        exact
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn f(dim: usize, t: &[(i64, &str)]) -> Form<Q> {
        Form::from_digits(dim, t)
    }

    fn vol6() -> Form<Q> {
        f(6, &[(1, "123456")])
    }

    /// Re and Im of (e1+ie2)(e3+ie4)(e5+ie6), expanded by hand.
    fn model_psi() -> (Form<Q>, Form<Q>) {
        (
            f(6, &[(1, "135"), (-1, "146"), (-1, "236"), (-1, "245")]),
            f(6, &[(1, "136"), (1, "145"), (1, "235"), (-1, "246")]),
        )
    }

    #[test]
    fn k_squared_is_lambda_identity_on_model() {
        let (p, _) = model_psi();
        let h = hitchin_invariant(&p, &vol6()).unwrap();
        assert!(h.lambda < q(0, 1));
        assert_eq!(h.k.mul(&h.k), Matrix::identity(6).scale(&h.lambda));
    }

    #[test]
    fn decomposable_forms_are_not_stable() {
        let h = hitchin_invariant(&f(6, &[(1, "123")]), &vol6()).unwrap();
        assert_eq!(h.k, Matrix::zeros(6, 6));
        assert_eq!(h.lambda, q(0, 1));
        let real = f(6, &[(1, "123"), (1, "456")]);
        let h = hitchin_invariant(&real, &vol6()).unwrap();
        assert!(h.lambda > q(0, 1));
        assert!(matches!(
            almost_complex_from_psi(&real, &vol6()),
            Err(StructureError::NotComplexType(_))
        ));
    }

    #[test]
    fn model_complex_structure() {
        let (p, m) = model_psi();
        let (j, pm) = almost_complex_from_psi(&p, &vol6()).unwrap();
        assert_eq!(j[(1, 0)], q(1, 1));
        assert_eq!(j[(0, 1)], q(-1, 1));
        assert_eq!(pm, m);
    }

    #[test]
    fn scaling_psi_scales_psi_minus() {
        let (p, m) = model_psi();
        let (j1, _) = almost_complex_from_psi(&p, &vol6()).unwrap();
        let (j2, pm) = almost_complex_from_psi(&p.scale(&q(8, 1)), &vol6()).unwrap();
        assert_eq!(j1, j2);
        assert_eq!(pm, m.scale(&q(8, 1)));
    }

    #[test]
    fn normalization_constant_from_model() {
        // ω = e14+e23+e65 and Ψ = (e1+ie4)(e2+ie3)(e6+ie5)
        let om = f(6, &[(1, "14"), (1, "23"), (1, "65")]);
        let pp = f(6, &[(1, "126"), (1, "346"), (-1, "135"), (-1, "425")]);
        let pm = f(6, &[(1, "125"), (1, "345"), (1, "136"), (1, "426")]);
        let s = Su3Structure::derive(&om, &pp).unwrap();
        assert_eq!(s.psi_minus, pm);
        let lhs = pp.wedge(&pm);
        assert_eq!(lhs, om.power(3).scale(&normalization()));
        assert!(s.validate(0.0).passed());
    }

    #[test]
    fn standard_su2_validates_with_standard_coframe() {
        let (a, w) = standard_su2::<Q>();
        let s = Su2Structure::new(&a, w, 0.0).unwrap();
        let e = s.adapted_coframe().unwrap();
        for (i, ei) in e.iter().enumerate() {
            assert_eq!(ei, &Form::generator(5, i));
        }
    }

    #[test]
    fn negated_omega3_fails() {
        let (a, mut w) = standard_su2::<Q>();
        w[2] = -w[2].clone();
        let r = su2_validate(&a, &w, 0.0);
        assert!(!r.passed(), "{r}");
    }

    #[test]
    fn split_heisenberg_example() {
        let a = f(5, &[(1, "2")]);
        let w = [
            f(5, &[(1, "34"), (1, "15")]),
            f(5, &[(1, "31"), (1, "54")]),
            f(5, &[(1, "35"), (1, "41")]),
        ];
        let s = Su2Structure::new(&a, w, 0.0).unwrap();
        assert_eq!(s.psi2(), f(5, &[(1, "312"), (1, "542")]));
        assert_eq!(s.psi3(), f(5, &[(1, "352"), (1, "412")]));
    }
}
