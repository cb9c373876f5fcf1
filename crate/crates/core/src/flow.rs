//! The half-flat evolution equations
//! `∂ₜψ⁺ = dω`, `∂ₜ(½ω²) = −dψ⁻`
//! as an ODE on invariant forms, the explicit solution on
//! `(0,0,0,12,13,23)`, and the G₂-form `φ = ω∧dt + ψ⁺` on the product
//! with an interval.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exterior::{masks_of_degree, Form};
use crate::liealg::LieAlgebra;
use crate::linalg::Matrix;
use crate::metric::Metric;
use crate::scalar::{Jet, Scalar};
use crate::stable::{StructureError, Su3Structure};
use crate::structures::{explicit_pair, explicit_time, explicit_time_derivatives};

/// Half-flat residuals above this abort an integration.
pub const HALF_FLAT_TOL: f64 = 1e-6;
/// `|ω³|` below this counts as degeneration.
pub const DEGENERATE_TOL: f64 = 1e-9;
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("ω∧· is not invertible on 2-forms")]
    Lefschetz,
    #[error("half-flat residual {residual:e} at t = {t}")]
    ResidualBlowUp { t: f64, residual: f64 },
    #[error("Newton iteration for u(t) did not converge (t = {0})")]
    Newton(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub t: f64,
    pub omega: Form<f64>,
    #[serde(rename = "psiPlus")]
    pub psi_plus: Form<f64>,
}

impl FlowState {
    pub fn structure(&self) -> Result<Su3Structure<f64>, StructureError> {
        Su3Structure::derive(&self.omega, &self.psi_plus)
    }

    /// Largest of `|dψ⁺|` and `|d(ω²)|`.
    pub fn half_flat_residual(&self, g: &LieAlgebra) -> f64 {
        g.d(&self.psi_plus)
            .max_abs()
            .max(g.d(&self.omega.wedge(&self.omega)).max_abs())
    }

    fn axpy(&self, h: f64, k: &(Form<f64>, Form<f64>)) -> FlowState {
        FlowState {
            t: self.t + h,
            omega: self.omega.clone() + k.1.scale(&h),
            psi_plus: self.psi_plus.clone() + k.0.scale(&h),
        }
    }
}

/// Solves `ω∧β = γ` for a 2-form `β`, given a 4-form `γ` in dimension 6.
pub fn lefschetz_inverse<S: Scalar>(omega: &Form<S>, gamma: &Form<S>) -> Result<Form<S>, FlowError> {
    let n = omega.dim();
    let src = masks_of_degree(n, 2);
    let dst = masks_of_degree(n, 4);
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (j, &b) in src.iter().enumerate() {
        let mut e = Form::zero(n, 2);
        e.add_term(b, S::one());
        let img = omega.wedge(&e);
        for (i, &c) in dst.iter().enumerate() {
            m[(i, j)] = img.coeff(c);
        }
    }
    let rhs: Vec<S> = dst.iter().map(|&c| gamma.coeff(c)).collect();
    let sol = m.solve(&rhs);
    if sol.rank < src.len() {
        return Err(FlowError::Lefschetz);
    }
    Ok(Form::from_vector(n, 2, &sol.x))
}

/// `(∂ₜψ⁺, ∂ₜω) = (dω, L_ω⁻¹(−dψ⁻))`.
pub fn flow_rhs(g: &LieAlgebra, s: &FlowState) -> Result<(Form<f64>, Form<f64>), FlowError> {
    let st = s.structure()?;
    let dpsi = g.d(&s.omega);
    let domega = lefschetz_inverse(&s.omega, &-g.d(&st.psi_minus))?;
    Ok((dpsi, domega))
}

/// Why an integration stopped.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlowEnd {
    Completed,
    /// `ω³` (or the stability of `ψ⁺`) degenerated at this time.
    Degenerate { t: f64, reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub states: Vec<FlowState>,
    /// Largest half-flat residual met along the way.
    pub max_residual: f64,
    pub end: FlowEnd,
}

impl Trajectory {
    pub fn last(&self) -> &FlowState {
        self.states.last().expect("trajectory holds its initial state")
    }
}

/// Classical RK4 with a fixed step, shortened uniformly so that the last
/// step lands on `t_end`. Checks the half-flat conditions after every step.
pub fn evolve(g: &LieAlgebra, s0: &FlowState, t_end: f64, step: f64) -> Result<Trajectory, FlowError> {
    let span = t_end - s0.t;
    let n = (span.abs() / step.abs()).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut states = vec![s0.clone()];
    let mut max_residual = s0.half_flat_residual(g);
    let mut s = s0.clone();
    for _ in 0..n {
        let k = match rk4_increments(g, &s, h) {
            Ok(k) => k,
            Err(FlowError::Structure(e)) => {
                return Ok(Trajectory {
                    states,
                    max_residual,
                    end: FlowEnd::Degenerate {
                        t: s.t,
                        reason: e.to_string(),
                    },
                })
            }
            Err(e) => return Err(e),
        };
        let mut next = s.axpy(h, &k);
        next.t = s.t + h;
        let res = next.half_flat_residual(g);
        max_residual = max_residual.max(res);
        if res > HALF_FLAT_TOL {
            return Err(FlowError::ResidualBlowUp { t: next.t, residual: res });
        }
        if next.omega.power(3).max_abs() < DEGENERATE_TOL {
            states.push(next.clone());
            return Ok(Trajectory {
                states,
                max_residual,
                end: FlowEnd::Degenerate {
                    t: next.t,
                    reason: "ω³ vanishes".into(),
                },
            });
        }
        states.push(next.clone());
        s = next;
    }
    if let Some(last) = states.last_mut() {
        last.t = t_end;
    }
    Ok(Trajectory {
        states,
        max_residual,
        end: FlowEnd::Completed,
    })
}

/// The weighted increment `(k₁ + 2k₂ + 2k₃ + k₄)/6`.
fn rk4_increments(g: &LieAlgebra, s: &FlowState, h: f64) -> Result<(Form<f64>, Form<f64>), FlowError> {
    let k1 = flow_rhs(g, s)?;
    let k2 = flow_rhs(g, &s.axpy(h / 2.0, &k1))?;
    let k3 = flow_rhs(g, &s.axpy(h / 2.0, &k2))?;
    let k4 = flow_rhs(g, &s.axpy(h, &k3))?;
    let comb = |a: &Form<f64>, b: &Form<f64>, c: &Form<f64>, d: &Form<f64>| {
        (a.clone() + b.scale(&2.0) + c.scale(&2.0) + d.clone()).scale(&(1.0 / 6.0))
    };
    Ok((comb(&k1.0, &k2.0, &k3.0, &k4.0), comb(&k1.1, &k2.1, &k3.1, &k4.1)))
}

/// The explicit family as a flow state at parameter `u`.
pub fn explicit_state(u: f64) -> FlowState {
    let (omega, psi_plus) = explicit_pair(&u);
    FlowState {
        t: explicit_time(&u),
        omega,
        psi_plus,
    }
}

/// Inverts `t(u)` by Newton's method from `seed`.
pub fn u_from_t(t: f64, seed: f64) -> Result<f64, FlowError> {
    let mut u = seed;
    for _ in 0..100 {
        let f = explicit_time(&u) - t;
        let (d1, _) = explicit_time_derivatives(&u);
        let du = f / d1;
        u -= du;
        if du.abs() <= 1e-14 * u.abs().max(1.0) {
            return Ok(u);
        }
    }
    // stalled at rounding level
    if (explicit_time(&u) - t).abs() <= 1e-12 * t.abs().max(1.0) {
        Ok(u)
    } else {
        Err(FlowError::Newton(t))
    }
}

/// `u` as a jet in `t`: `du/dt = 1/t'`, `d²u/dt² = −t''/t'³`.
pub fn u_jet(u: f64) -> Jet<f64> {
    let (d1, d2) = explicit_time_derivatives(&u);
    Jet::new(u, 1.0 / d1, -d2 / (d1 * d1 * d1))
}

/// Largest deviation in `∂ₜψ⁺ = dω` and `∂ₜ(½ω²) = −dψ⁻` for the
/// explicit family at `u`, with `t`-derivatives by the chain rule.
pub fn explicit_consistency(g: &LieAlgebra, u: f64) -> Result<f64, FlowError> {
    let (om, psi) = explicit_pair(&u_jet(u));
    let d1 = |f: &Form<Jet<f64>>| f.map(|c| *c.d1());
    let v = |f: &Form<Jet<f64>>| f.map(|c| *c.value());
    let s = Su3Structure::derive(&v(&om), &v(&psi))?;
    let a = (d1(&psi) - g.d(&v(&om))).max_abs();
    let b = (d1(&om.wedge(&om)).scale(&0.5) + g.d(&s.psi_minus)).max_abs();
    Ok(a.max(b))
}

/// The product algebra `g ⊕ ⟨∂ₜ⟩` with `t` as coordinate (`e⁷ = dt`).
pub fn product_algebra(g: &LieAlgebra) -> LieAlgebra {
    let n = g.dim();
    let mut d1: Vec<Form<crate::scalar::Q>> = g.differentials().iter().map(|f| f.embed(n + 1)).collect();
    d1.push(Form::zero(n + 1, 2));
    LieAlgebra::new(d1)
        .expect("product with a line")
        .with_parameter(n)
        .expect("parameter in range")
}

/// `φ = ω∧dt + ψ⁺` on the product algebra.
pub fn assemble_g2<S: Scalar>(omega: &Form<S>, psi_plus: &Form<S>) -> Form<S> {
    let n = omega.dim() + 1;
    let dt = Form::generator(n, n - 1);
    omega.embed(n).wedge(&dt) + psi_plus.embed(n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct G2Residuals {
    pub d_phi: f64,
    pub d_star_phi: f64,
    /// `⋆φ − (½ω² + ψ⁻∧dt)`, comparing the metric star with the closed formula.
    pub star_formula: f64,
}

/// `dφ` and `d⋆φ` for `φ = ω∧dt + ψ⁺` with `t`-jet coefficients; the
/// 7-metric is the SU(3) metric plus `dt²`.
pub fn g2_validate(g7: &LieAlgebra, omega: &Form<Jet<f64>>, psi_plus: &Form<Jet<f64>>) -> Result<G2Residuals, FlowError> {
    let s = Su3Structure::derive(omega, psi_plus)?;
    let n = omega.dim() + 1;
    let gm = Matrix::from_fn(n, n, |i, j| {
        if i < n - 1 && j < n - 1 {
            s.g[(i, j)].clone()
        } else if i == j {
            Jet::one()
        } else {
            Jet::zero()
        }
    });
    let metric = Metric::from_matrix(&gm).map_err(|e| FlowError::Structure(StructureError::Metric(e)))?;
    let phi = assemble_g2(omega, psi_plus);
    let star = metric.hodge_star(&phi);
    let dt = Form::generator(n, n - 1);
    let formula = omega.wedge(omega).embed(n).scale(&Jet::from_ratio(1, 2)) + s.psi_minus.embed(n).wedge(&dt);
    let v = |f: &Form<Jet<f64>>| f.map(|c| *c.value()).max_abs();
    Ok(G2Residuals {
        d_phi: v(&g7.d(&phi)),
        d_star_phi: v(&g7.d(&star)),
        star_formula: v(&(star - formula)),
    })
}

/// [`g2_validate`] on the explicit family at `u`.
pub fn explicit_g2_residuals(g: &LieAlgebra, u: f64) -> Result<G2Residuals, FlowError> {
    let (om, psi) = explicit_pair(&u_jet(u));
    g2_validate(&product_algebra(g), &om, &psi)
}

/// Maximal coefficient difference between a state and the explicit
/// family at the `u` matching its time.
pub fn explicit_error(s: &FlowState, seed: f64) -> Result<(f64, f64), FlowError> {
    let u = u_from_t(s.t, seed)?;
    let e = explicit_state(u);
    let err = (s.omega.clone() - e.omega).max_abs().max((s.psi_plus.clone() - e.psi_plus).max_abs());
    Ok((u, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{flat_su3, g2_model, irreducible};

    #[test]
    fn lefschetz_round_trip() {
        let (om, _) = flat_su3::<f64>();
        assert_eq!(lefschetz_inverse(&om, &om.wedge(&om)).unwrap(), om);
        let b = Form::from_digits(6, &[(1, "12"), (-3, "35"), (2, "46")]);
        let r = lefschetz_inverse(&om, &om.wedge(&b)).unwrap();
        assert!((r - b).max_abs() < 1e-12);
        assert_eq!(lefschetz_inverse(&Form::<f64>::from_digits(6, &[(1, "12")]), &Form::zero(6, 4)), Err(FlowError::Lefschetz));
    }

    #[test]
    fn rhs_at_symplectic_point_and_torus() {
        let g = irreducible();
        let (dpsi, _) = flow_rhs(&g, &explicit_state(1.0)).unwrap();
        assert_eq!(dpsi.max_abs(), 0.0);
        let (om, psi) = flat_su3::<f64>();
        let s = FlowState { t: 0.0, omega: om, psi_plus: psi };
        let (a, b) = flow_rhs(&LieAlgebra::abelian(6), &s).unwrap();
        assert!(a.is_zero() && b.is_zero());
        let tr = evolve(&LieAlgebra::abelian(6), &s, 1.0, 0.1).unwrap();
        assert_eq!(tr.last().omega, s.omega);
        assert_eq!(tr.end, FlowEnd::Completed);
    }

    #[test]
    fn explicit_family_solves_the_flow() {
        let g = irreducible();
        assert_eq!(explicit_time(&1.0), -11.6);
        for u in [0.8, 0.9, 1.0, 1.1, 1.5] {
            assert!(explicit_consistency(&g, u).unwrap() < 1e-12, "u = {u}");
        }
        // dω = 3(u²−1)/u η¹²³
        let u = 1.5;
        let d = g.d(&explicit_state(u).omega);
        assert!((d.coeff(0b111) - 3.0 * (u * u - 1.0) / u).abs() < 1e-12);
    }

    #[test]
    fn newton_inverts_time() {
        for u in [0.8, 1.0, 1.3] {
            let t = explicit_time(&u);
            assert!((u_from_t(t, 1.0).unwrap() - u).abs() < 1e-12);
        }
    }

    #[test]
    fn rk4_follows_explicit_solution() {
        let g = irreducible();
        let s0 = explicit_state(1.0);
        let tr = evolve(&g, &s0, explicit_time(&0.9), DEFAULT_STEP).unwrap();
        assert!(tr.max_residual < 1e-8);
        let (u, err) = explicit_error(tr.last(), 1.0).unwrap();
        assert!((u - 0.9).abs() < 1e-9);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn g2_form_is_closed_and_coclosed() {
        let g = irreducible();
        for u in [1.0, 1.2] {
            let r = explicit_g2_residuals(&g, u).unwrap();
            assert!(r.d_phi < 1e-12, "{r:?}");
            assert!(r.d_star_phi < 1e-7, "{r:?}");
            assert!(r.star_formula < 1e-10, "{r:?}");
        }
    }

    #[test]
    fn coframe_at_one_gives_the_model_g2_form() {
        let e = crate::structures::explicit_coframe(&1.0).unwrap();
        let mut e7: Vec<Form<f64>> = e.iter().map(|f| f.embed(7)).collect();
        e7.push(Form::generator(7, 6));
        let s = explicit_state(1.0);
        assert_eq!(g2_model::<f64>().substitute(&e7), assemble_g2(&s.omega, &s.psi_plus));
    }
}
