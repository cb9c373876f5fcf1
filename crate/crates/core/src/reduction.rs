//! Passing between six and five dimensions along a central direction:
//! the quotient SU(2)-structure of an SU(3)-structure, the lift of an
//! SU(2)-structure to a circle bundle, and the torsion dictionary between
//! the two.

use thiserror::Error;

use crate::exterior::Form;
use crate::liealg::{AlgebraError, LieAlgebra};
use crate::linalg::Matrix;
use crate::scalar::{Jet, Scalar, Q};
use crate::stable::{StructureError, Su2Structure, Su3Structure, ValidationReport};
use crate::torsion::{extract_su2_torsion, extract_su3_torsion, Su2Torsion, Su3Torsion};

#[derive(Debug, Error, PartialEq)]
pub enum ReductionError {
    #[error("the vector is not central")]
    NotCentral,
    #[error("the vector is zero")]
    ZeroVector,
    #[error("the curvature form is not closed")]
    NotClosed,
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The result of reducing along a central vector `X`.
#[derive(Clone, Debug)]
pub struct Reduction<S> {
    /// `(α, ω₁, ω₂, ω₃) = (X⌟ω, X⌟ψ⁺, X⌟ψ⁻, t X⌟(ω∧η))` on the quotient.
    pub su2: Su2Structure<S>,
    /// The quotient algebra, in the coframe `basis` of `Ann(X)`.
    pub quotient: LieAlgebra,
    /// `dη`, written on the quotient.
    pub phi: Form<S>,
    /// The norm of `X`.
    pub t: S,
    pub x: Vec<S>,
    /// The connection form `η = t⁻² X♭`, with `η(X) = 1`, on the total space.
    pub eta: Form<S>,
    /// Rows: a basis of `Ann(X)` followed by a complement with value 1 on `X`.
    pub basis: Matrix<Q>,
    basis_inv: Matrix<Q>,
}

impl<S: Scalar> Reduction<S> {
    /// Writes a form on the total space annihilated by `X` on the quotient.
    pub fn descend(&self, f: &Form<S>) -> Option<Form<S>> {
        f.transform(&self.basis_inv.map(S::from_rational)).restrict(5)
    }

    /// `W = η∧Ξ + Δ` with `Ξ = X⌟W`; returns `(Ξ, Δ)` on the quotient.
    pub fn split(&self, w: &Form<S>) -> (Form<S>, Form<S>) {
        let xi = w.interior(&self.x);
        let delta = w.clone() - self.eta.wedge(&xi);
        (
            self.descend(&xi).expect("contraction descends"),
            self.descend(&delta).expect("remainder descends"),
        )
    }
}

/// Reduces `s` along the rational direction `x`, which must be central.
/// With `normalize`, `X` is rescaled to unit length so that `t = 1`.
pub fn reduce<S: Scalar>(
    s: &Su3Structure<S>,
    g: &LieAlgebra,
    x: &[Q],
    normalize: bool,
) -> Result<Reduction<S>, ReductionError> {
    let n = g.dim();
    if n != 6 || x.len() != 6 {
        return Err(ReductionError::Precondition("reduction needs a 6-dimensional algebra".into()));
    }
    if x.iter().all(Scalar::is_zero) {
        return Err(ReductionError::ZeroVector);
    }
    if !g.is_central(x) {
        return Err(ReductionError::NotCentral);
    }
    let mut xs: Vec<S> = x.iter().map(S::from_rational).collect();
    let t2 = quadratic(&s.g, &xs);
    let mut t = t2.sqrt().ok_or(StructureError::Irrational)?;
    if normalize {
        let inv = t.recip().ok_or(ReductionError::ZeroVector)?;
        xs = xs.into_iter().map(|v| v * inv.clone()).collect();
        t = S::one();
    }
    let t2 = t.clone() * t.clone();
    let flat = Form::from_covector(&s.g.mul_vec(&xs));
    let eta = flat.scale(&t2.recip().ok_or(ReductionError::ZeroVector)?);

    let mut rows = Matrix::from_rows(vec![x.to_vec()]).nullspace();
    let k = x.iter().position(|v| !Scalar::is_zero(v)).expect("nonzero");
    let mut comp = vec![Q::zero(); 6];
    comp[k] = Scalar::recip(&x[k]).expect("nonzero");
    rows.push(comp);
    let basis = Matrix::from_rows(rows);
    let basis_inv = basis.inverse().expect("complement is transverse");

    let d1 = (0..5)
        .map(|i| {
            let b = Form::from_covector(basis.row(i));
            g.d(&b)
                .transform(&basis_inv)
                .restrict(5)
                .ok_or(ReductionError::NotCentral)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let quotient = LieAlgebra::new(d1)?;

    let mut red = Reduction {
        su2: placeholder_su2()?,
        quotient,
        phi: Form::zero(5, 2),
        t: t.clone(),
        x: xs.clone(),
        eta: eta.clone(),
        basis,
        basis_inv,
    };
    let down = |f: Form<S>| red.descend(&f).ok_or(ReductionError::NotCentral);
    let alpha = down(s.omega.interior(&xs))?;
    let w1 = down(s.psi_plus.interior(&xs))?;
    let w2 = down(s.psi_minus.interior(&xs))?;
    let w3 = down(s.omega.wedge(&eta).interior(&xs).scale(&t))?;
    let phi = down(g.d(&eta))?;
    red.su2 = Su2Structure::derive(&alpha, [w1, w2, w3])?;
    red.phi = phi;
    Ok(red)
}

fn placeholder_su2<S: Scalar>() -> Result<Su2Structure<S>, ReductionError> {
    let (a, w) = crate::stable::standard_su2::<S>();
    Ok(Su2Structure::derive(&a, w)?)
}

fn quadratic<S: Scalar>(g: &Matrix<S>, x: &[S]) -> S {
    let gx = g.mul_vec(x);
    x.iter()
        .zip(gx)
        .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b)
}

/// `ω = t⁻¹ω₃ + η∧α`, `ψ⁺ = ω₁∧η − t⁻²ω₂∧α`, `ψ⁻ = ω₂∧η + t⁻²ω₁∧α`
/// with `η` the appended sixth generator.
pub fn lift_forms<S: Scalar>(alpha: &Form<S>, omega: &[Form<S>; 3], t: &S) -> (Form<S>, Form<S>, Form<S>) {
    let ti = t.recip().expect("t must be nonzero");
    let ti2 = ti.clone() * ti.clone();
    let eta = Form::generator(6, 5);
    let a = alpha.embed(6);
    let w: Vec<Form<S>> = omega.iter().map(|f| f.embed(6)).collect();
    let om = w[2].scale(&ti) + eta.wedge(&a);
    let pp = w[0].wedge(&eta) - w[1].wedge(&a).scale(&ti2);
    let pm = w[1].wedge(&eta) + w[0].wedge(&a).scale(&ti2);
    (om, pp, pm)
}

/// The circle bundle `⟨η⟩ ⊕ V⁵` with `dη = φ` and the SU(3)-structure on it.
pub fn lift<S: Scalar>(
    alpha: &Form<S>,
    omega: &[Form<S>; 3],
    phi: &Form<Q>,
    t: &S,
    base: &LieAlgebra,
) -> Result<(LieAlgebra, Su3Structure<S>), ReductionError> {
    if !base.d(phi).is_zero() {
        return Err(ReductionError::NotClosed);
    }
    if t.to_f64() <= 0.0 {
        return Err(ReductionError::Precondition("t must be positive".into()));
    }
    let g = base.extend(phi)?;
    let (om, pp, _) = lift_forms(alpha, omega, t);
    let s = Su3Structure::derive(&om, &pp)?;
    Ok((g, s))
}

/// Residuals of the conditions on the quotient of a symplectic half-flat
/// structure: the unit-length ones
/// `dα = 0, dω₁ = 0, dω₃ = −φ∧α, d(ω₂∧α) = ω₁∧φ`
/// and their versions for a fibre length `t`
/// `d(ω₂∧α) = t²ω₁∧φ + 2 d log t∧ω₂∧α`, `dω₃ = d log t∧ω₃ − tα∧φ`.
///
/// When the algebra carries a parameter, `t` may be a jet in it and
/// `d log t = (t'/t) dx`; otherwise `t` is constant.
pub fn check_gcy_conditions<S: Scalar>(
    alpha: &Form<S>,
    omega: &[Form<S>; 3],
    phi: &Form<S>,
    t: &S,
    g: &LieAlgebra,
    tol: f64,
) -> ValidationReport {
    let n = g.dim();
    let dlog = dlog(t, g);
    let psi2 = omega[1].wedge(alpha);
    let mut r = ValidationReport::new(S::is_exact());
    r.push_zero("dalpha", &g.d(alpha), tol);
    r.push_zero("domega1", &g.d(&omega[0]), tol);
    r.push_zero("unit: domega3 + phi^alpha", &(g.d(&omega[2]) + phi.wedge(alpha)), tol);
    r.push_zero("unit: d(omega2^alpha) - omega1^phi", &(g.d(&psi2) - omega[0].wedge(phi)), tol);
    let t2 = t.clone() * t.clone();
    let e1 = g.d(&psi2) - omega[0].wedge(phi).scale(&t2) - dlog.wedge(&psi2).scale(&S::from_i64(2));
    r.push_zero("d(omega2^alpha) - t^2 omega1^phi - 2dlogt^omega2^alpha", &e1, tol);
    let e2 = g.d(&omega[2]) - dlog.wedge(&omega[2]) + alpha.wedge(phi).scale(t);
    r.push_zero("domega3 - dlogt^omega3 + t alpha^phi", &e2, tol);
    debug_assert_eq!(alpha.dim(), n);
    r
}

/// `d log t` for a constant `t` (zero) or a jet in the algebra's parameter.
pub fn dlog<S: Scalar>(t: &S, g: &LieAlgebra) -> Form<S> {
    match g.parameter() {
        Some(p) => {
            let l = t.derivative() * t.recip().expect("t nonzero");
            Form::generator(g.dim(), p).scale(&l)
        }
        None => Form::zero(g.dim(), 1),
    }
}

/// Pullbacks of `ω`, `ψ⁺` and `ψ⁻` to a 3-dimensional subspace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LagrangianTest {
    /// Largest `|ω(vₐ, v_b)|`.
    pub omega: f64,
    pub psi_plus: f64,
    pub psi_minus: f64,
}

impl LagrangianTest {
    pub fn lagrangian(&self, tol: f64) -> bool {
        self.omega <= tol
    }

    /// `ω` and `Im Ψ = ψ⁻` both vanish.
    pub fn special_lagrangian(&self, tol: f64) -> bool {
        self.omega <= tol && self.psi_minus <= tol
    }

    /// Lagrangian with `Re Ψ = ψ⁺` vanishing instead, i.e. calibrated by `ψ⁻`.
    pub fn special_lagrangian_rotated(&self, tol: f64) -> bool {
        self.omega <= tol && self.psi_plus <= tol
    }
}

pub fn lagrangian_test<S: Scalar>(s: &Su3Structure<S>, v: &[Vec<S>]) -> LagrangianTest {
    assert_eq!(v.len(), 3);
    let mut omega: f64 = 0.0;
    for a in 0..3 {
        for b in a + 1..3 {
            let x = s.omega.interior(&v[a]).interior(&v[b]).scalar_part();
            omega = omega.max(x.magnitude());
        }
    }
    let on = |f: &Form<S>| f.interior(&v[0]).interior(&v[1]).interior(&v[2]).scalar_part().magnitude();
    LagrangianTest {
        omega,
        psi_plus: on(&s.psi_plus),
        psi_minus: on(&s.psi_minus),
    }
}

/// Metric operations on the quotient through the inverse Gram matrix of
/// the SU(2)-structure's metric.
struct Dual<S> {
    ginv: Matrix<S>,
}

impl<S: Scalar> Dual<S> {
    fn new(s: &Su2Structure<S>) -> Self {
        Dual {
            ginv: s.g.inverse().expect("metric is nondegenerate"),
        }
    }

    fn sharp(&self, b: &Form<S>) -> Vec<S> {
        self.ginv.mul_vec(&b.covector())
    }

    /// `⟨eᴵ, eᴶ⟩ = det g⁻¹[I, J]`, so that `|e¹²|² = 1` for orthonormal `e`.
    fn inner(&self, a: &Form<S>, b: &Form<S>) -> S {
        let mut acc = S::zero();
        for (ma, ca) in a.terms() {
            let ia = ma.indices();
            for (mb, cb) in b.terms() {
                let ib = mb.indices();
                let m = Matrix::from_fn(ia.len(), ib.len(), |r, c| self.ginv[(ia[r], ib[c])].clone());
                acc = acc + ca.clone() * cb.clone() * m.determinant();
            }
        }
        acc
    }

    /// `eᴵ ⌟ b = ι(eⁱᵖ♯)⋯ι(eⁱ¹♯) b`, extended linearly: `e¹² ⌟ e¹²³ = e³`.
    fn contract(&self, a: &Form<S>, b: &Form<S>) -> Form<S> {
        let n = b.dim();
        let mut out = Form::zero(n, b.degree().saturating_sub(a.degree()));
        for (m, c) in a.terms() {
            let mut x = b.clone();
            for i in m.indices() {
                x = x.interior(&self.sharp(&Form::generator(n, i)));
            }
            out = out + x.scale(c);
        }
        out
    }
}

/// `β ↦ β − ⟨β, α⟩α`, the part orthogonal to `α`.
fn perp1<S: Scalar>(s: &Su2Structure<S>, b: &Form<S>) -> Form<S> {
    let c = b.interior(&s.reeb).scalar_part();
    b.clone() - s.alpha.scale(&c)
}

/// Projection of a 2-form to `Λ²₋`: drop `α∧(R⌟σ)` and the `ωᵢ` parts.
fn asd<S: Scalar>(s: &Su2Structure<S>, d: &Dual<S>, sigma: &Form<S>) -> Form<S> {
    let mut out = sigma.clone() - s.alpha.wedge(&sigma.interior(&s.reeb));
    for w in &s.omega {
        let c = d.inner(&out, w) * d.inner(w, w).recip().expect("nonzero");
        out = out - w.scale(&c);
    }
    out
}

/// The torsion of the quotient SU(2)-structure written through the
/// components of the SU(3)-torsion on the total space, split as
/// `Wᵢ = η∧Ξᵢ + Δᵢ`. For a fibre length depending on the base, pass
/// `d log t` (on the quotient); for constant `t` this is zero.
///
/// `Δ₂±` is not anti-self-dual in general: its `ω₃` part enters `g₁³`,
/// `g₂³` alongside `⟨Ξ₂±, α⟩` (primitivity of `W₂±` ties the two), and only
/// its `Λ²₋` part goes to `σ₁`, `σ₂`. Two-forms are contracted with the
/// pairing `eᴵ ⌟` above, which fixes the coefficient of `ω₃ ⌟ Δ₃`.
pub fn quotient_torsion_table<S: Scalar>(red: &Reduction<S>, w: &Su3Torsion<S>, dlog_t: &Form<S>) -> Su2Torsion<S> {
    let s = &red.su2;
    let d = Dual::new(s);
    let t = red.t.clone();
    let ti = t.recip().expect("t nonzero");
    let ti2 = ti.clone() * ti.clone();
    let half = S::from_ratio(1, 2);
    let three_halves = S::from_ratio(3, 2);
    let two = S::from_i64(2);
    let (xi2p, de2p) = red.split(&w.w2p);
    let (xi2m, de2m) = red.split(&w.w2m);
    let (xi3, de3) = red.split(&w.w3);
    let (xi4, de4) = red.split(&w.w4);
    let (xi5, de5) = red.split(&w.w5);
    let (xi4, xi5) = (xi4.scalar_part(), xi5.scalar_part());
    let a = &s.alpha;
    let om = &s.omega;

    let lambda = -d.inner(&de5, a);
    let f = [
        three_halves.clone() * w.w1m.clone() - half.clone() * d.inner(&xi3, &om[0]),
        -(three_halves * w.w1p.clone()) - half.clone() * d.inner(&xi3, &om[1]),
        -(ti.clone() * xi4) - half.clone() * d.inner(&xi3, &om[2]),
    ];
    let g = [
        -(ti2 * xi5),
        -(two.clone() * ti.clone() * w.w1p.clone()) - ti.clone() * d.inner(&xi2p, a)
            - half.clone() * d.inner(&de2p, &om[2]),
        -(two * ti.clone() * w.w1m.clone()) - ti.clone() * d.inner(&xi2m, a)
            - half.clone() * d.inner(&de2m, &om[2]),
    ];
    let beta = -perp1(s, &de4) - d.contract(a, &xi3);
    let gamma = [
        -perp1(s, &de5) - d.contract(&xi2p, &om[1]).scale(&ti),
        -perp1(s, &de5) + d.contract(&xi2m, &om[0]).scale(&ti),
        perp1(s, &(de4 + dlog_t.clone() + d.contract(&om[2], &de3).scale(&t))),
    ];
    let omega_minus = -asd(s, &d, &xi3);
    let sigma = [
        -asd(s, &d, &de2p),
        -asd(s, &d, &de2m),
        asd(s, &d, &(d.contract(a, &de3) - red.phi.clone())).scale(&t),
    ];
    Su2Torsion {
        lambda,
        f,
        g,
        beta,
        gamma,
        omega_minus,
        sigma,
        reconstruction_residual: 0.0,
        consistency_residual: 0.0,
        ranks: [0, 0],
    }
}

/// Largest component-wise difference between two torsion tables.
pub fn su2_torsion_distance<S: Scalar>(a: &Su2Torsion<S>, b: &Su2Torsion<S>) -> f64 {
    let sc = |x: &S, y: &S| (x.clone() - y.clone()).magnitude();
    let fm = |x: &Form<S>, y: &Form<S>| (x.clone() - y.clone()).max_abs();
    let mut m = sc(&a.lambda, &b.lambda);
    for i in 0..3 {
        m = m
            .max(sc(&a.f[i], &b.f[i]))
            .max(sc(&a.g[i], &b.g[i]))
            .max(fm(&a.gamma[i], &b.gamma[i]))
            .max(fm(&a.sigma[i], &b.sigma[i]));
    }
    m.max(fm(&a.beta, &b.beta)).max(fm(&a.omega_minus, &b.omega_minus))
}

/// Table versus direct extraction on the quotient of `s` along `x`.
#[derive(Clone, Debug)]
pub struct TableCheck<S> {
    pub table: Su2Torsion<S>,
    pub direct: Su2Torsion<S>,
    pub max_difference: f64,
}

pub fn check_torsion_table<S: Scalar>(
    s: &Su3Structure<S>,
    g: &LieAlgebra,
    x: &[Q],
    normalize: bool,
    tol: f64,
) -> Result<TableCheck<S>, ReductionError> {
    let red = reduce(s, g, x, normalize)?;
    let w = extract_su3_torsion(s, g, tol).map_err(|e| ReductionError::Precondition(e.to_string()))?;
    let direct = extract_su2_torsion(&red.su2, &red.quotient, tol)
        .map_err(|e| ReductionError::Precondition(e.to_string()))?;
    let table = quotient_torsion_table(&red, &w, &Form::zero(5, 1));
    let max_difference = su2_torsion_distance(&table, &direct);
    Ok(TableCheck {
        table,
        direct,
        max_difference,
    })
}

/// A basis of the closed `k`-forms.
pub fn closed_forms(g: &LieAlgebra, k: usize) -> Vec<Form<Q>> {
    g.d_matrix::<Q>(k)
        .nullspace()
        .into_iter()
        .map(|v| Form::from_vector(g.dim(), k, &v))
        .collect()
}

/// Data for a circle bundle over a five-dimensional algebra.
#[derive(Clone, Debug)]
pub struct LiftData {
    pub alpha: Form<Q>,
    pub omega: [Form<Q>; 3],
    pub phi: Form<Q>,
    pub t: Q,
}

/// A random rational SU(2)-structure (the standard one in a random integer
/// coframe), a random closed `φ` and a random constant `t`.
pub fn random_lift_data<R: rand::Rng>(rng: &mut R, base: &LieAlgebra) -> LiftData {
    let n = base.dim();
    let coframe = loop {
        let m = Matrix::from_fn(n, n, |i, j| {
            let d = if i == j { 1 } else { 0 };
            Q::from_i64(d + rng.gen_range(-2..=2))
        });
        if !m.determinant().is_zero() {
            break m;
        }
    };
    let e: Vec<Form<Q>> = (0..n).map(|i| Form::from_covector(coframe.row(i))).collect();
    let e: [Form<Q>; 5] = e.try_into().expect("five-dimensional base");
    let (alpha, omega) = crate::stable::standard_su2_in(&e);
    let mut phi = Form::zero(n, 2);
    for c in closed_forms(base, 2) {
        phi = phi + c.scale(&Q::from_i64(rng.gen_range(-2..=2)));
    }
    let t = [crate::scalar::q(1, 1), crate::scalar::q(1, 2), crate::scalar::q(2, 1), crate::scalar::q(3, 1)]
        [rng.gen_range(0..4)]
    .clone();
    LiftData { alpha, omega, phi, t }
}

/// Directions along which to reduce: a basis of the centre. For any
/// central `X` the image of `d` lies in `Λ²(Ann X)`, so every nonzero
/// combination qualifies.
pub fn central_directions(g: &LieAlgebra) -> Vec<Vec<Q>> {
    g.center()
}

/// `∂_α f = ⟨α, df⟩`, given `df`.
pub fn partial_alpha<S: Scalar>(s: &Su2Structure<S>, df: &Form<S>) -> S {
    Dual::new(s).inner(&s.alpha, df)
}

/// `J₃` on 1-forms: `J₃α = 0` and `ω₁∧β = ω₂∧J₃β` on `α⊥`, which is
/// `β ↦ β♯ ⌟ ω₃`.
pub fn j3<S: Scalar>(s: &Su2Structure<S>, beta: &Form<S>) -> Form<S> {
    let d = Dual::new(s);
    d.contract(&perp1(s, beta), &s.omega[2])
}

/// Residuals of the equations an integrable lift imposes on the quotient
/// and the fibre length, with `t` a jet in the coordinate `x`, `α = dx`.
#[derive(Clone, Debug)]
pub struct IntegrableCheck<S> {
    /// `∂²_α log t − (∂_α log t)² − 2t⁻¹‖(d log t)_{Λ¹}‖²`.
    pub eq_t: f64,
    /// `dω₃ − (d log t)_{Λ¹}∧ω₃ − (∂_α t)⁻¹ α∧(2 d log t∧dᶜlog t − ddᶜlog t)₋`.
    pub eq_omega3: f64,
    /// Largest of `dα`, `dω₁`, `dω₂`.
    pub closed: f64,
    /// `φ` from the formula, when `∂_α log t ≠ 0`.
    pub phi: Option<Form<S>>,
    pub phi_closed: f64,
}

pub fn integrable_quotient_check<S: Scalar>(
    s: &Su2Structure<Jet<S>>,
    g: &LieAlgebra,
    t: &Jet<S>,
) -> Result<IntegrableCheck<S>, ReductionError> {
    let p = g
        .parameter()
        .ok_or_else(|| ReductionError::Precondition("the algebra carries no coordinate".into()))?;
    let n = g.dim();
    if s.alpha != Form::generator(n, p) {
        return Err(ReductionError::Precondition("α must be dx".into()));
    }
    let d = Dual::new(s);
    let val = |f: &Form<Jet<S>>| f.map(|c| c.value().clone());
    let ti = t.recip().ok_or(ReductionError::Precondition("t vanishes".into()))?;
    let dlog = dlog(t, g);
    let dlog_perp = perp1(s, &dlog);
    let sa = d.inner(&s.alpha, &dlog);
    let saa = d.inner(&s.alpha, &Form::generator(n, p).scale(&sa.derivative()));
    let two = Jet::from_i64(2);
    let eq_t = saa - sa.clone() * sa.clone() - two.clone() * ti.clone() * d.inner(&dlog_perp, &dlog_perp);

    let dc = j3(s, &dlog);
    let big = dlog.wedge(&dc).scale(&two) - g.d(&dc);
    let big = asd(s, &d, &big);
    let dat = t.derivative() * d.inner(&s.alpha, &Form::generator(n, p));
    let omega3 = if dat.value().is_zero() {
        f64::INFINITY
    } else {
        let r = g.d(&s.omega[2])
            - dlog_perp.wedge(&s.omega[2])
            - s.alpha.wedge(&big).scale(&dat.recip().expect("nonzero"));
        val(&r).max_abs()
    };
    let closed = [g.d(&s.alpha), g.d(&s.omega[0]), g.d(&s.omega[1])]
        .iter()
        .map(|f| val(f).max_abs())
        .fold(0.0, f64::max);
    let (phi, phi_closed) = if sa.value().is_zero() {
        (None, f64::INFINITY)
    } else {
        let ti2 = ti.clone() * ti.clone();
        let phi = s.omega[2].scale(&(ti.clone() * sa.clone()))
            - big.scale(&(ti2.clone() * sa.recip().expect("nonzero")))
            - s.alpha.wedge(&dc).scale(&(two * ti2));
        // dφ needs one more derivative than φ carries at order 2
        let closed = if phi.terms().all(|(_, c)| c.order() >= 1) {
            val(&g.d(&phi)).max_abs()
        } else {
            f64::NAN
        };
        (Some(val(&phi)), closed)
    };
    Ok(IntegrableCheck {
        eq_t: eq_t.value().magnitude(),
        eq_omega3: omega3,
        closed,
        phi,
        phi_closed,
    })
}

/// The closing example: `N = R⁵` with the standard SU(2)-structure,
/// `α = dx`, `t = (1−x)⁻¹`, and on the bundle with `dη = ω₃`
/// `ω = (1−x)ω₃ + η∧α`, `Ψ = (ω₁+iω₂)∧(η + i(1−x)²α)`.
#[derive(Clone, Debug)]
pub struct FinalExample<S: Scalar> {
    pub base: LieAlgebra,
    pub total: LieAlgebra,
    pub su2: Su2Structure<Jet<S>>,
    pub t: Jet<S>,
    pub omega: Form<Jet<S>>,
    pub psi_plus: Form<Jet<S>>,
    pub psi_minus: Form<Jet<S>>,
}

pub fn build_final_example<S: Scalar>(x: &S) -> Result<FinalExample<S>, ReductionError> {
    let one = Jet::<S>::one();
    let xj = Jet::variable(x.clone());
    let u = one - xj;
    let t = u.recip().ok_or(ReductionError::Precondition("x = 1".into()))?;
    let (alpha, om) = crate::stable::standard_su2::<Jet<S>>();
    let su2 = Su2Structure::derive(&alpha, om.clone())?;
    let base = LieAlgebra::abelian(5).with_parameter(4)?;
    let phi = crate::stable::standard_su2::<Q>().1[2].clone();
    let total = LieAlgebra::abelian(5).extend(&phi)?.with_parameter(4)?;
    let eta = Form::generator(6, 5);
    let a = alpha.embed(6);
    let w: Vec<Form<Jet<S>>> = om.iter().map(|f| f.embed(6)).collect();
    let u2 = u.clone() * u.clone();
    let omega = w[2].scale(&u) + eta.wedge(&a);
    let psi_plus = w[0].wedge(&eta) - w[1].wedge(&a).scale(&u2);
    let psi_minus = w[1].wedge(&eta) + w[0].wedge(&a).scale(&u2);
    Ok(FinalExample {
        base,
        total,
        su2,
        t,
        omega,
        psi_plus,
        psi_minus,
    })
}

impl<S: Scalar> FinalExample<S> {
    /// The structure at the sample point, with `dω`, `dψ±` computed along
    /// the coordinate.
    pub fn torsion(&self, tol: f64) -> Result<(Su3Structure<S>, Su3Torsion<S>), ReductionError> {
        let val = |f: &Form<Jet<S>>| f.map(|c| c.value().clone());
        let s = Su3Structure::new(&val(&self.omega), &val(&self.psi_plus), tol)?;
        let w = crate::torsion::su3_torsion_from(
            &s,
            &val(&self.total.d(&self.omega)),
            &val(&self.total.d(&self.psi_plus)),
            &val(&self.total.d(&self.psi_minus)),
            tol,
        )
        .map_err(|e| ReductionError::Precondition(e.to_string()))?;
        Ok((s, w))
    }

    pub fn check(&self) -> Result<IntegrableCheck<S>, ReductionError> {
        integrable_quotient_check(&self.su2, &self.base, &self.t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::structures::{explicit_pair, flat_su3, hypo_examples, irreducible};
    use crate::torsion::{is_hypo, su3_predicates};

    fn unit(i: usize) -> Vec<Q> {
        (0..6).map(|j| if i == j { q(1, 1) } else { q(0, 1) }).collect()
    }

    #[test]
    fn reduce_explicit_structure_along_e4() {
        let (om, psi) = explicit_pair(&q(1, 1));
        let s = Su3Structure::new(&om, &psi, 0.0).unwrap();
        let g = irreducible();
        let r = reduce(&s, &g, &unit(3), false).unwrap();
        assert_eq!(r.t, q(2, 1));
        assert_eq!(r.eta, Form::generator(6, 3));
        assert_eq!(r.phi, Form::from_digits(5, &[(1, "12")]));
        assert_eq!(r.quotient.notation(), "(0,0,0,13,23)");
        assert_eq!(r.su2.alpha, Form::from_digits(5, &[(2, "3")]));
        // the adapted coframe needs √2 here
        let rep = r.su2.to_f64().validate(1e-12);
        assert!(rep.passed(), "{rep}");
        let rep = check_gcy_conditions(&r.su2.alpha, &r.su2.omega, &r.phi, &r.t, &r.quotient, 0.0);
        assert!(rep.get("d(omega2^alpha) - t^2 omega1^phi - 2dlogt^omega2^alpha").unwrap().passed, "{rep}");
        assert!(rep.get("domega3 - dlogt^omega3 + t alpha^phi").unwrap().passed, "{rep}");

        let r = reduce(&s, &g, &unit(3), true).unwrap();
        assert_eq!(r.t, q(1, 1));
        let rep = check_gcy_conditions(&r.su2.alpha, &r.su2.omega, &r.phi, &r.t, &r.quotient, 0.0);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn centre_fibres_are_lagrangian() {
        let (om, psi) = explicit_pair(&q(1, 1));
        let s = Su3Structure::new(&om, &psi, 0.0).unwrap();
        let c = irreducible().center();
        let l = lagrangian_test(&s, &c);
        // Lagrangian, but `ψ⁺` rather than `ψ⁻` vanishes on the fibres
        assert!(l.lagrangian(0.0));
        assert_eq!(l.psi_plus, 0.0);
        assert_eq!(l.psi_minus, 2.0);
        assert!(l.special_lagrangian_rotated(0.0));
        assert!(!l.special_lagrangian(0.0));
    }

    #[test]
    fn non_central_vector_is_rejected() {
        let (om, psi) = explicit_pair(&q(1, 1));
        let s = Su3Structure::new(&om, &psi, 0.0).unwrap();
        assert!(matches!(reduce(&s, &irreducible(), &unit(0), false), Err(ReductionError::NotCentral)));
    }

    #[test]
    fn torus_reduces_to_flat_quotient() {
        let (om, psi) = flat_su3::<Q>();
        let s = Su3Structure::new(&om, &psi, 0.0).unwrap();
        let g = LieAlgebra::abelian(6);
        for i in 0..6 {
            let r = reduce(&s, &g, &unit(i), false).unwrap();
            assert_eq!(r.t, q(1, 1));
            assert!(r.phi.is_zero());
            assert!(r.quotient.differentials().iter().all(Form::is_zero));
            assert!(check_gcy_conditions(&r.su2.alpha, &r.su2.omega, &r.phi, &r.t, &r.quotient, 0.0).passed());
        }
    }

    #[test]
    fn lift_examples_are_symplectic_half_flat_and_round_trip() {
        for ex in hypo_examples() {
            let base = ex.algebra();
            let rep = check_gcy_conditions(&ex.alpha, &ex.omega, &ex.phi, &q(1, 1), &base, 0.0);
            assert!(rep.passed(), "{}: {rep}", ex.name);
            for t in [q(1, 1), q(3, 2)] {
                let (g, s) = lift(&ex.alpha, &ex.omega, &ex.phi, &t, &base).unwrap();
                assert!(s.validate(0.0).passed(), "{}", ex.name);
                if t == q(1, 1) {
                    let p = su3_predicates(&s, &g, 0.0);
                    assert!(p.symplectic_half_flat, "{}", ex.name);
                }
                let r = reduce(&s, &g, &unit(5), false).unwrap();
                assert_eq!(r.t, t);
                assert_eq!(r.su2.alpha, ex.alpha);
                assert_eq!(r.su2.omega, ex.omega);
                assert_eq!(r.phi, ex.phi);
                assert_eq!(r.quotient, base);
            }
        }
    }

    #[test]
    fn perturbed_phi_breaks_conditions() {
        let ex = &hypo_examples()[2];
        let phi = ex.phi.clone() + Form::from_digits(5, &[(1, "23")]);
        let rep = check_gcy_conditions(&ex.alpha, &ex.omega, &phi, &q(1, 1), &ex.algebra(), 0.0);
        assert!(!rep.get("unit: domega3 + phi^alpha").unwrap().passed);
    }

    #[test]
    fn flat_lift_is_half_flat_iff_hypo() {
        let (a, w) = crate::stable::standard_su2::<Q>();
        let base = LieAlgebra::parse("(0,0,0,0,12)").unwrap();
        let s2 = Su2Structure::new(&a, w.clone(), 0.0).unwrap();
        let (g, s) = lift(&a, &w, &Form::zero(5, 2), &q(1, 1), &base).unwrap();
        assert_eq!(su3_predicates(&s, &g, 0.0).half_flat, is_hypo(&s2, &base, 0.0));
    }

    fn show<S: Scalar>(c: &TableCheck<S>) -> String {
        format!("table {:?}\ndirect {:?}", c.table.table(), c.direct.table())
    }

    #[test]
    fn table_matches_direct_extraction_on_explicit_reduction() {
        let (om, psi) = explicit_pair(&q(1, 1));
        let s = Su3Structure::new(&om, &psi, 0.0).unwrap();
        let c = check_torsion_table(&s, &irreducible(), &unit(3), true, 0.0).unwrap();
        assert_eq!(c.max_difference, 0.0, "{}", show(&c));
        let c = check_torsion_table(&s, &irreducible(), &unit(3), false, 0.0).unwrap();
        assert_eq!(c.max_difference, 0.0, "{}", show(&c));
    }

    #[test]
    fn table_matches_direct_extraction_on_lifts() {
        for ex in hypo_examples() {
            for t in [q(1, 1), q(2, 1)] {
                let (g, s) = lift(&ex.alpha, &ex.omega, &ex.phi, &t, &ex.algebra()).unwrap();
                let c = check_torsion_table(&s, &g, &unit(5), false, 0.0).unwrap();
                assert_eq!(c.max_difference, 0.0, "{} t={t}\n{}", ex.name, show(&c));
            }
        }
    }

    #[test]
    fn table_matches_direct_extraction_on_random_lifts() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let bases = ["(0,0,0,0,0)", "(0,0,0,0,12)", "(0,0,0,12,13)"];
        for k in 0..12 {
            let base = LieAlgebra::parse(bases[k % 3]).unwrap();
            let l = random_lift_data(&mut rng, &base);
            let (g, s) = lift(&l.alpha, &l.omega, &l.phi, &l.t, &base).unwrap();
            let c = check_torsion_table(&s, &g, &unit(5), false, 0.0).unwrap();
            assert_eq!(c.max_difference, 0.0, "case {k}\n{}", show(&c));
        }
    }

    #[test]
    fn j3_satisfies_its_defining_identity() {
        let ex = &hypo_examples()[1];
        let s = Su2Structure::new(&ex.alpha, ex.omega.clone(), 0.0).unwrap();
        assert!(j3(&s, &s.alpha).is_zero());
        for i in 0..5 {
            let b = perp1(&s, &Form::generator(5, i));
            assert_eq!(s.omega[0].wedge(&b), s.omega[1].wedge(&j3(&s, &b)));
            assert_eq!(j3(&s, &j3(&s, &b)), -b);
        }
    }

    #[test]
    fn final_example_is_integrable() {
        for x in [q(0, 1), q(1, 4), q(1, 2)] {
            let ex = build_final_example(&x).unwrap();
            let c = ex.check().unwrap();
            assert_eq!(c.eq_t, 0.0);
            assert_eq!(c.eq_omega3, 0.0);
            assert_eq!(c.closed, 0.0);
            assert_eq!(c.phi.unwrap(), ex.su2.omega[2].map(|v| v.value().clone()));
            let (s, w) = ex.torsion(0.0).unwrap();
            assert_eq!(s.psi_minus, ex.psi_minus.map(|v| v.value().clone()));
            assert!(w.nonzero(0.0).is_empty(), "{:?}", w.table());
        }
    }

    #[test]
    fn constant_t_is_singular_for_the_curvature_formula() {
        let ex = build_final_example(&q(0, 1)).unwrap();
        let c = integrable_quotient_check(&ex.su2, &ex.base, &Jet::constant(q(2, 1))).unwrap();
        assert_eq!(c.eq_t, 0.0);
        assert!(c.phi.is_none());
    }
}
