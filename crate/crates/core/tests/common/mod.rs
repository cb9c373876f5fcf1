//! Randomized invariants shared by the property suite and the acceptance run.
#![allow(dead_code)]

use halfflat::exterior::masks_of_degree;
use halfflat::flow::lefschetz_inverse;
use halfflat::linalg::Matrix;
use halfflat::metric::Metric;
use halfflat::reduction::{lift, random_lift_data, reduce};
use halfflat::stable::hitchin_invariant;
use halfflat::{q, Form, LieAlgebra, Scalar, Q};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Nilpotent algebras of dimension 4 to 7.
pub const ALGEBRAS: &[&str] = &[
    "(0,0,0,12)",
    "(0,0,0,0,0)",
    "(0,0,0,0,12)",
    "(0,0,0,12,13)",
    "(0,0,12,13,14)",
    "(0,0,0,0,0,0)",
    "(0,0,0,0,12,13)",
    "(0,0,0,12,13,23)",
    "(0,0,12,13,14,15)",
    "(0,0,0,12,13,14+23)",
    "(0,0,0,0,0,0,12)",
    "(0,0,0,12,13,23,0)",
];

pub const FIVE_DIM: &[&str] = &["(0,0,0,0,0)", "(0,0,0,0,12)", "(0,0,0,12,13)", "(0,0,12,13,14)"];

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn rational() -> impl Strategy<Value = Q> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

/// A rational form of the given shape; about half of the coefficients vanish.
pub fn form(dim: usize, degree: usize) -> impl Strategy<Value = Form<Q>> {
    let len = masks_of_degree(dim, degree).len();
    prop::collection::vec(prop_oneof![Just(q(0, 1)), rational()], len)
        .prop_map(move |v| Form::from_vector(dim, degree, &v))
}

fn algebra(i: usize) -> LieAlgebra {
    LieAlgebra::parse(ALGEBRAS[i]).expect("valid notation")
}

/// An invertible integer matrix close to the identity.
pub fn invertible(n: usize) -> impl Strategy<Value = Matrix<Q>> {
    prop::collection::vec(-2i64..=2, n * n)
        .prop_map(move |v| Matrix::from_fn(n, n, |i, j| Q::from_i64(v[i * n + j] + i64::from(i == j))))
        .prop_filter("singular", |m| !m.determinant().is_zero())
}

fn err(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

pub fn d_squared(cases: u32) -> Result<(), String> {
    let strat = (0..ALGEBRAS.len(), 0usize..=6).prop_flat_map(|(i, p)| {
        let n = algebra(i).dim();
        (Just(i), form(n, p.min(n)))
    });
    runner(cases)
        .run(&strat, |(i, f)| {
            let g = algebra(i);
            let dd = g.d(&g.d(&f));
            prop_assert!(dd.is_zero(), "d²{f:?} = {dd:?} on {}", ALGEBRAS[i]);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn leibniz(cases: u32) -> Result<(), String> {
    let strat = (0..ALGEBRAS.len(), 0usize..=3, 0usize..=3).prop_flat_map(|(i, p, r)| {
        let n = algebra(i).dim();
        (Just(i), form(n, p), form(n, r))
    });
    runner(cases)
        .run(&strat, |(i, a, b)| {
            let g = algebra(i);
            let sign = if a.degree() % 2 == 0 { q(1, 1) } else { q(-1, 1) };
            let lhs = g.d(&a.wedge(&b));
            let rhs = g.d(&a).wedge(&b) + a.wedge(&g.d(&b)).scale(&sign);
            if lhs != rhs {
                return Err(err(format!("Leibniz fails on {}: {a:?} ∧ {b:?}", ALGEBRAS[i])));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `⋆⋆ = (−1)^{p(n−p)}` and `a∧⋆b = ⟨a,b⟩ vol` for the metric of a random
/// rational coframe.
pub fn hodge(cases: u32) -> Result<(), String> {
    let strat = (4usize..=7, 0usize..=7).prop_flat_map(|(n, p)| {
        let p = p.min(n);
        (invertible(n), form(n, p), form(n, p))
    });
    runner(cases)
        .run(&strat, |(c, a, b)| {
            let n = c.rows();
            let p = a.degree();
            let e: Vec<Form<Q>> = (0..n).map(|i| Form::from_covector(c.row(i))).collect();
            let m = Metric::from_coframe(&e).map_err(|e| err(e.to_string()))?;
            let sign = if (p * (n - p)) % 2 == 0 { q(1, 1) } else { q(-1, 1) };
            prop_assert_eq!(m.hodge_star(&m.hodge_star(&a)), a.scale(&sign));
            prop_assert_eq!(a.wedge(&m.hodge_star(&b)), m.volume().scale(&m.inner_product(&a, &b)));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `K_ρ² = λ(ρ)·Id` for every 3-form in dimension 6.
pub fn hitchin_square(cases: u32) -> Result<(), String> {
    let vol = Form::from_digits(6, &[(1, "123456")]);
    runner(cases)
        .run(&form(6, 3), |rho| {
            let h = hitchin_invariant(&rho, &vol).map_err(|e| err(e.to_string()))?;
            prop_assert_eq!(h.k.mul(&h.k), Matrix::identity(6).scale(&h.lambda));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `L_ω⁻¹(ω∧β) = β` for a nondegenerate `ω` in dimension 6.
pub fn lefschetz_round_trip(cases: u32) -> Result<(), String> {
    let om0 = Form::<Q>::from_digits(6, &[(1, "12"), (1, "34"), (1, "56")]);
    runner(cases)
        .run(&(invertible(6), form(6, 2)), |(m, beta)| {
            let omega = om0.transform(&m);
            let back = lefschetz_inverse(&omega, &omega.wedge(&beta)).map_err(|e| err(e.to_string()))?;
            prop_assert_eq!(back, beta);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Reducing the lift of `(α, ωᵢ, φ, t)` along the fibre returns the data.
pub fn reduce_lift(cases: u32) -> Result<(), String> {
    let fibre: Vec<Q> = (0..6).map(|i| Q::from_i64(i64::from(i == 5))).collect();
    runner(cases)
        .run(&(0..FIVE_DIM.len(), any::<u64>()), |(i, seed)| {
            let base = LieAlgebra::parse(FIVE_DIM[i]).expect("valid notation");
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data = random_lift_data(&mut rng, &base);
            let (g, s) = lift(&data.alpha, &data.omega, &data.phi, &data.t, &base).map_err(|e| err(e.to_string()))?;
            let r = reduce(&s, &g, &fibre, false).map_err(|e| err(e.to_string()))?;
            prop_assert_eq!(&r.t, &data.t);
            prop_assert_eq!(&r.su2.alpha, &data.alpha);
            prop_assert_eq!(&r.su2.omega, &data.omega);
            prop_assert_eq!(&r.phi, &data.phi);
            prop_assert_eq!(&r.quotient, &base);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub type Suite = fn(u32) -> Result<(), String>;

/// The six suites with their names, as run by the acceptance check.
pub fn suites() -> Vec<(&'static str, Suite)> {
    vec![
        ("d²=0", d_squared),
        ("Leibniz", leibniz),
        ("Hodge", hodge),
        ("K²=λ·Id", hitchin_square),
        ("Lefschetz round-trip", lefschetz_round_trip),
        ("reduce∘lift", reduce_lift),
    ]
}
