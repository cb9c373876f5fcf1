//! Explicit structures used throughout: the flat models, the hypo
//! structures on the three admissible five-dimensional quotients, and the
//! one-parameter family of half-flat structures on `(0,0,0,12,13,23)`.

use crate::exterior::Form;
use crate::liealg::LieAlgebra;
use crate::scalar::{Scalar, Q};
use crate::stable::StructureError;

pub const IRREDUCIBLE: &str = "(0,0,0,12,13,23)";
pub const REDUCIBLE: &str = "(0,0,0,0,12,13)";
pub const TORUS: &str = "(0,0,0,0,0,0)";

fn f<S: Scalar>(dim: usize, t: &[(i64, &str)]) -> Form<S> {
    Form::from_digits(dim, t)
}

/// `ω = e¹⁴+e²³+e⁶⁵`, `ψ⁺ = Re (e¹+ie⁴)∧(e²+ie³)∧(e⁶+ie⁵)`.
pub fn flat_su3<S: Scalar>() -> (Form<S>, Form<S>) {
    (
        f(6, &[(1, "14"), (1, "23"), (1, "65")]),
        f(6, &[(1, "126"), (1, "346"), (-1, "135"), (-1, "425")]),
    )
}

/// The model G₂ form `e¹⁴⁷+e²⁵⁷+e³⁶⁷+e¹²³−e¹⁵⁶−e⁴²⁶−e⁴⁵³`.
pub fn g2_model<S: Scalar>() -> Form<S> {
    f(
        7,
        &[
            (1, "147"),
            (1, "257"),
            (1, "367"),
            (1, "123"),
            (-1, "156"),
            (-1, "426"),
            (-1, "453"),
        ],
    )
}

/// `(ω, ψ⁺)` in the form that a G₂ structure `ω∧e⁷ + ψ⁺` is the model:
/// `ω = e¹⁴+e²⁵+e³⁶`, `ψ⁺ = e¹²³−e¹⁵⁶−e⁴²⁶−e⁴⁵³`.
pub fn g2_compatible_su3<S: Scalar>() -> (Form<S>, Form<S>) {
    (
        f(6, &[(1, "14"), (1, "25"), (1, "36")]),
        f(6, &[(1, "123"), (-1, "156"), (-1, "426"), (-1, "453")]),
    )
}

pub fn irreducible() -> LieAlgebra {
    LieAlgebra::parse(IRREDUCIBLE).expect("valid notation")
}

/// `3u² − 1`.
fn k<S: Scalar>(u: &S) -> S {
    S::from_i64(3) * u.clone() * u.clone() - S::one()
}

/// The family
/// `ω = u⁻¹η¹⁶ − u⁻¹η²⁵ − (3u²−1)u⁻¹η³⁴`,
/// `ψ⁺ = (3u²−1)²/(4u⁶) η¹²³ − 2η¹⁵⁴ + 2η⁶²⁴ + η⁶⁵³`
/// on `(0,0,0,12,13,23)`, half-flat for every `u` and symplectic at `u = ±1`.
pub fn explicit_pair<S: Scalar>(u: &S) -> (Form<S>, Form<S>) {
    let inv = u.recip().expect("u must be nonzero");
    let kk = k(u);
    let mut om = Form::zero(6, 2);
    om = om + Form::monomial(6, &[0, 5], inv.clone());
    om = om + Form::monomial(6, &[1, 4], -inv.clone());
    om = om + Form::monomial(6, &[2, 3], -(kk.clone() * inv.clone()));
    let c = kk.clone() * kk * inv.powi(6) * S::from_ratio(1, 4);
    let mut psi = Form::monomial(6, &[0, 1, 2], c);
    psi = psi + f(6, &[(-2, "154"), (2, "624"), (1, "653")]);
    (om, psi)
}

/// `t(u) = −12 + 1/(2u³) − 1/(10u⁵)`, the time along the flow.
pub fn explicit_time<S: Scalar>(u: &S) -> S {
    let inv = u.recip().expect("u must be nonzero");
    S::from_i64(-12) + S::from_ratio(1, 2) * inv.powi(3) - S::from_ratio(1, 10) * inv.powi(5)
}

/// `dt/du = −3/(2u⁴) + 1/(2u⁶)` and its derivative.
pub fn explicit_time_derivatives<S: Scalar>(u: &S) -> (S, S) {
    let inv = u.recip().expect("u must be nonzero");
    let d1 = S::from_ratio(-3, 2) * inv.powi(4) + S::from_ratio(1, 2) * inv.powi(6);
    let d2 = S::from_i64(6) * inv.powi(5) - S::from_i64(3) * inv.powi(7);
    (d1, d2)
}

/// The orthonormal coframe `E¹..E⁶` of the family, ordered so that
/// `ω = E¹⁴+E²⁵+E³⁶` and `ψ⁺ = E¹²³−E¹⁵⁶−E⁴²⁶−E⁴⁵³`.
pub fn explicit_coframe<S: Scalar>(u: &S) -> Result<[Form<S>; 6], StructureError> {
    let kk = k(u);
    let u2 = u.clone() * u.clone();
    let a = (kk.clone() * S::from_ratio(1, 2) * u2.powi(2).recip().ok_or(StructureError::Irrational)?)
        .sqrt()
        .ok_or(StructureError::Irrational)?;
    let b = (S::from_i64(2) * u2.clone() * kk.recip().ok_or(StructureError::Degenerate("3u^2-1"))?)
        .sqrt()
        .ok_or(StructureError::Irrational)?;
    let c = kk * S::from_ratio(1, 2) * u2.recip().expect("u nonzero");
    let g = |i: usize, s: S| Form::generator(6, i).scale(&s);
    Ok([
        g(0, a.clone()),
        g(1, a),
        g(2, c),
        g(5, b.clone()),
        g(4, -b),
        g(3, S::from_i64(-2) * u.clone()),
    ])
}

/// An SU(2)-structure on a five-dimensional algebra together with the
/// closed 2-form `φ` defining a circle bundle over it.
#[derive(Clone, Debug, PartialEq)]
pub struct HypoExample {
    pub name: &'static str,
    pub notation: &'static str,
    pub alpha: Form<Q>,
    pub omega: [Form<Q>; 3],
    pub phi: Form<Q>,
}

impl HypoExample {
    pub fn algebra(&self) -> LieAlgebra {
        LieAlgebra::parse(self.notation)
            .expect("valid notation")
            .with_name(self.name)
    }

    pub fn psi2(&self) -> Form<Q> {
        self.omega[1].wedge(&self.alpha)
    }

    pub fn psi3(&self) -> Form<Q> {
        self.omega[2].wedge(&self.alpha)
    }
}

/// The four structures on `(0,0,0,0,0)`, `(0,0,0,0,12)` and
/// `(0,0,0,12,13)` whose circle bundles carry symplectic half-flat
/// structures.
pub fn hypo_examples() -> Vec<HypoExample> {
    let g = |t: &[(i64, &str)]| f::<Q>(5, t);
    vec![
        HypoExample {
            name: "abelian",
            notation: "(0,0,0,0,0)",
            alpha: g(&[(1, "5")]),
            omega: [
                g(&[(1, "12"), (1, "34")]),
                g(&[(1, "13"), (1, "42")]),
                g(&[(1, "14"), (1, "23")]),
            ],
            phi: Form::zero(5, 2),
        },
        HypoExample {
            name: "heisenberg_split",
            notation: "(0,0,0,0,12)",
            alpha: g(&[(1, "2")]),
            omega: [
                g(&[(1, "34"), (1, "15")]),
                g(&[(1, "31"), (1, "54")]),
                g(&[(1, "35"), (1, "41")]),
            ],
            phi: g(&[(-1, "13")]),
        },
        HypoExample {
            name: "quotient_twisted",
            notation: "(0,0,0,12,13)",
            alpha: g(&[(1, "1")]),
            omega: [
                g(&[(1, "24"), (1, "35")]),
                g(&[(1, "23"), (1, "54")]),
                g(&[(1, "25"), (1, "43")]),
            ],
            phi: g(&[(-2, "23")]),
        },
        HypoExample {
            name: "quotient_trivial",
            notation: "(0,0,0,12,13)",
            alpha: g(&[(1, "1")]),
            omega: [
                g(&[(1, "24"), (-1, "35")]),
                g(&[(-1, "23"), (1, "54")]),
                g(&[(1, "25"), (-1, "43")]),
            ],
            phi: Form::zero(5, 2),
        },
    ]
}
