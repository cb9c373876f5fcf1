//! Numerical search for symplectic half-flat and hypo structures.
//!
//! Unknowns are the coefficients of the structure forms; the residual
//! collects closure, compatibility, normalization, a scale gauge and two
//! barriers keeping the stable form of complex type with a positive metric.
//! Least squares by Levenberg–Marquardt with seeded random restarts.
//!
//! A "not found" verdict is evidence only: it says the restarts did not get
//! below the threshold, not that no structure exists.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exterior::{masks_of_degree, Form};
use crate::io::{Su2Json, Su3Json};
use crate::liealg::LieAlgebra;
use crate::reduction::{check_gcy_conditions, lift, lift_forms};
use crate::scalar::{Jet, Scalar, Q};
use crate::stable::{hitchin_invariant, normalization, su2_validate, su3_validate, Su3Structure, ValidationReport};
use crate::structures::hypo_examples;
use crate::torsion::su3_predicates;

pub const DEFAULT_THRESHOLD: f64 = 1e-10;
pub const DEFAULT_RESTARTS: usize = 100;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;
/// Central-difference step for the Jacobian.
pub const FD_STEP: f64 = 1e-6;
/// Starting coefficients are uniform in `[-START_RANGE, START_RANGE]`.
pub const START_RANGE: f64 = 2.0;
/// Starts need `λ(ψ⁺) < START_LAMBDA_MAX` and `|ω³| > START_VOLUME_MIN`.
pub const START_LAMBDA_MAX: f64 = -0.1;
pub const START_VOLUME_MIN: f64 = 0.1;
const MAX_START_ATTEMPTS: usize = 10_000;
/// The barriers switch on at `λ > -BARRIER_MARGIN` and at metric
/// eigenvalues below `BARRIER_MARGIN`.
pub const BARRIER_MARGIN: f64 = 1e-3;
/// `|ω³|` is fixed to this value, killing the homothety.
pub const SCALE: f64 = 6.0;
/// Tolerance of the float re-validation of a witness.
pub const WITNESS_TOL: f64 = 1e-8;
/// A restart stops when its best residual has not dropped by this factor
/// over `STALL_WINDOW` iterations.
const STALL_FACTOR: f64 = 0.5;
const STALL_WINDOW: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    /// `dω = 0`, `dψ⁺ = 0` in dimension 6.
    #[serde(rename = "shf")]
    SymplecticHalfFlat,
    /// `dα = 0`, `dω₁ = 0`, `dω₃ = −φ∧α`, `d(ω₂∧α) = ω₁∧φ`, `dφ = 0` in
    /// dimension 5, with `φ` among the unknowns.
    #[serde(rename = "hypo_with_eq4")]
    HypoWithEq4,
}

impl Kind {
    pub fn dim(self) -> usize {
        match self {
            Kind::SymplecticHalfFlat => 6,
            Kind::HypoWithEq4 => 5,
        }
    }

    /// ω: 15, ψ⁺: 20; or α: 5, ωᵢ: 3×10, φ: 10.
    pub fn unknowns(self) -> usize {
        match self {
            Kind::SymplecticHalfFlat => 35,
            Kind::HypoWithEq4 => 45,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::SymplecticHalfFlat => "shf",
            Kind::HypoWithEq4 => "hypo_with_eq4",
        })
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "shf" | "symplectic_half_flat" => Ok(Kind::SymplecticHalfFlat),
            "hypo" | "hypo_with_eq4" => Ok(Kind::HypoWithEq4),
            _ => Err(format!("unknown search kind {s:?} (expected shf or hypo_with_eq4)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchProblem {
    pub algebra: LieAlgebra,
    pub kind: Kind,
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub threshold: f64,
    /// Stop after the first restart that yields a validated witness.
    pub stop_on_success: bool,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SearchError {
    #[error("{kind} search needs a {expected}-dimensional algebra, got dimension {found}")]
    Dimension { kind: Kind, expected: usize, found: usize },
    #[error("expected {expected} unknowns, got {found}")]
    Unknowns { expected: usize, found: usize },
}

impl SearchProblem {
    pub fn new(algebra: LieAlgebra, kind: Kind) -> Result<Self, SearchError> {
        if algebra.dim() != kind.dim() {
            return Err(SearchError::Dimension {
                kind,
                expected: kind.dim(),
                found: algebra.dim(),
            });
        }
        Ok(SearchProblem {
            algebra,
            kind,
            restarts: DEFAULT_RESTARTS,
            seed: 0,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            threshold: DEFAULT_THRESHOLD,
            stop_on_success: true,
        })
    }

    pub fn with_restarts(mut self, n: usize) -> Self {
        self.restarts = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn check_len(&self, x: &[impl Sized]) -> Result<(), SearchError> {
        if x.len() == self.kind.unknowns() {
            Ok(())
        } else {
            Err(SearchError::Unknowns {
                expected: self.kind.unknowns(),
                found: x.len(),
            })
        }
    }
}

/// The structure forms encoded by an unknown vector.
#[derive(Clone, Debug, PartialEq)]
pub enum Candidate<S> {
    Su3 { omega: Form<S>, psi_plus: Form<S> },
    Su2 { alpha: Form<S>, omega: [Form<S>; 3], phi: Form<S> },
}

impl<S: Scalar> Candidate<S> {
    pub fn decode(kind: Kind, x: &[S]) -> Self {
        assert_eq!(x.len(), kind.unknowns());
        match kind {
            Kind::SymplecticHalfFlat => Candidate::Su3 {
                omega: Form::from_vector(6, 2, &x[..15]),
                psi_plus: Form::from_vector(6, 3, &x[15..]),
            },
            Kind::HypoWithEq4 => Candidate::Su2 {
                alpha: Form::from_vector(5, 1, &x[..5]),
                omega: [
                    Form::from_vector(5, 2, &x[5..15]),
                    Form::from_vector(5, 2, &x[15..25]),
                    Form::from_vector(5, 2, &x[25..35]),
                ],
                phi: Form::from_vector(5, 2, &x[35..]),
            },
        }
    }

    pub fn encode(&self) -> Vec<S> {
        match self {
            Candidate::Su3 { omega, psi_plus } => [omega.to_vector(), psi_plus.to_vector()].concat(),
            Candidate::Su2 { alpha, omega, phi } => [
                alpha.to_vector(),
                omega[0].to_vector(),
                omega[1].to_vector(),
                omega[2].to_vector(),
                phi.to_vector(),
            ]
            .concat(),
        }
    }

    /// `(ω, ψ⁺)` in dimension 6: the forms themselves, or the product with
    /// a line (`t = 1` lift) for an SU(2) candidate.
    pub fn su3_forms(&self) -> (Form<S>, Form<S>) {
        match self {
            Candidate::Su3 { omega, psi_plus } => (omega.clone(), psi_plus.clone()),
            Candidate::Su2 { alpha, omega, .. } => {
                let (w, p, _) = lift_forms(alpha, omega, &S::one());
                (w, p)
            }
        }
    }

    pub fn to_f64(&self) -> Candidate<f64> {
        match self {
            Candidate::Su3 { omega, psi_plus } => Candidate::Su3 {
                omega: omega.to_f64(),
                psi_plus: psi_plus.to_f64(),
            },
            Candidate::Su2 { alpha, omega, phi } => Candidate::Su2 {
                alpha: alpha.to_f64(),
                omega: [omega[0].to_f64(), omega[1].to_f64(), omega[2].to_f64()],
                phi: phi.to_f64(),
            },
        }
    }
}

/// A named slice of the residual vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Block<S> {
    pub name: &'static str,
    pub values: Vec<S>,
}

impl Block<f64> {
    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a + v * v).sqrt()
    }
}

fn block<S>(name: &'static str, values: Vec<S>) -> Block<S> {
    Block { name, values }
}

/// The polynomial-and-square-root part of the residual, generic so that it
/// can be differentiated with jets.
fn smooth_blocks<S: Scalar>(g: &LieAlgebra, c: &Candidate<S>) -> (Vec<Block<S>>, Option<Su3Structure<S>>) {
    let mut b = Vec::new();
    match c {
        Candidate::Su3 { omega, psi_plus } => {
            b.push(block("d_omega", g.d(omega).to_vector()));
            b.push(block("d_psi_plus", g.d(psi_plus).to_vector()));
        }
        Candidate::Su2 { alpha, omega, phi } => {
            b.push(block("d_alpha", g.d(alpha).to_vector()));
            b.push(block("d_omega1", g.d(&omega[0]).to_vector()));
            b.push(block("d_omega3_plus_phi_alpha", (g.d(&omega[2]) + phi.wedge(alpha)).to_vector()));
            let e = g.d(&omega[1].wedge(alpha)) - omega[0].wedge(phi);
            b.push(block("d_psi2_minus_omega1_phi", e.to_vector()));
            b.push(block("d_phi", g.d(phi).to_vector()));
            let sq = omega[0].wedge(&omega[0]);
            let products = [
                omega[0].wedge(&omega[1]),
                omega[0].wedge(&omega[2]),
                omega[1].wedge(&omega[2]),
                omega[1].wedge(&omega[1]) - sq.clone(),
                omega[2].wedge(&omega[2]) - sq,
            ];
            b.push(block("su2_products", products.iter().flat_map(Form::to_vector).collect()));
        }
    }
    let (w, p) = c.su3_forms();
    b.push(block("psi_plus_wedge_omega", p.wedge(&w).to_vector()));
    let w3 = w.power(3);
    let s = Su3Structure::derive(&w, &p).ok();
    let norm = match &s {
        Some(s) => (s.psi_plus.wedge(&s.psi_minus) - w3.scale(&normalization())).scalar_part(),
        None => S::zero(),
    };
    b.push(block("normalization", vec![norm]));
    let top = w3.scalar_part();
    let mag = if top.to_f64() < 0.0 { -top } else { top };
    b.push(block("scale", vec![mag - S::from_i64(SCALE as i64)]));
    (b, s)
}

fn barrier_blocks(c: &Candidate<f64>, s: Option<&Su3Structure<f64>>) -> Vec<Block<f64>> {
    let (w, p) = c.su3_forms();
    let vol = w.power(3).scale(&(1.0 / 6.0));
    let stability = match hitchin_invariant(&p, &vol) {
        Ok(h) if vol.max_abs() > 0.0 => (h.lambda + BARRIER_MARGIN).max(0.0),
        _ => 1.0,
    };
    let metric = match s {
        Some(s) => (BARRIER_MARGIN - min_eigenvalue(&s.g.to_nalgebra())).max(0.0),
        None => 1.0,
    };
    vec![block("stability", vec![stability]), block("metric", vec![metric])]
}

fn min_eigenvalue(g: &DMatrix<f64>) -> f64 {
    let sym = (g + g.transpose()) * 0.5;
    sym.symmetric_eigenvalues().min()
}

/// The residual blocks at `x`.
pub fn residual_blocks(p: &SearchProblem, x: &[f64]) -> Result<Vec<Block<f64>>, SearchError> {
    p.check_len(x)?;
    Ok(blocks_unchecked(p, x))
}

fn blocks_unchecked(p: &SearchProblem, x: &[f64]) -> Vec<Block<f64>> {
    let c = Candidate::decode(p.kind, x);
    let (mut b, s) = smooth_blocks(&p.algebra, &c);
    b.extend(barrier_blocks(&c, s.as_ref()));
    b
}

/// Closure, compatibility, normalization, scale and barrier residuals,
/// concatenated.
pub fn residual_vector(p: &SearchProblem, x: &[f64]) -> Result<Vec<f64>, SearchError> {
    Ok(residual_blocks(p, x)?.into_iter().flat_map(|b| b.values).collect())
}

fn residual_unchecked(p: &SearchProblem, x: &[f64]) -> Vec<f64> {
    blocks_unchecked(p, x).into_iter().flat_map(|b| b.values).collect()
}

pub fn norm(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |a, v| a + v * v).sqrt()
}

/// Forward-mode Jacobian of the smooth rows (everything but the barriers).
pub fn smooth_jacobian(p: &SearchProblem, x: &[f64]) -> Result<DMatrix<f64>, SearchError> {
    p.check_len(x)?;
    let n = x.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let xj: Vec<Jet<f64>> = x
            .iter()
            .enumerate()
            .map(|(i, v)| if i == j { Jet::variable(*v) } else { Jet::constant(*v) })
            .collect();
        let c = Candidate::decode(p.kind, &xj);
        let (b, _) = smooth_blocks(&p.algebra, &c);
        cols.push(b.into_iter().flat_map(|b| b.values).map(|v| *v.d1()).collect::<Vec<f64>>());
    }
    let m = cols[0].len();
    Ok(DMatrix::from_fn(m, n, |i, j| cols[j][i]))
}

/// Central differences with step `h`.
pub fn numerical_jacobian(f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], h: f64) -> DMatrix<f64> {
    let mut xp = x.to_vec();
    let mut cols = Vec::with_capacity(x.len());
    for j in 0..x.len() {
        xp[j] = x[j] + h;
        let fp = f(&xp);
        xp[j] = x[j] - h;
        let fm = f(&xp);
        xp[j] = x[j];
        cols.push(fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect::<Vec<f64>>());
    }
    let m = cols.first().map_or(0, Vec::len);
    DMatrix::from_fn(m, x.len(), |i, j| cols[j][i])
}

#[derive(Clone, Debug, PartialEq)]
pub struct LmOutcome {
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Levenberg–Marquardt on `‖f(x)‖₂` with a central-difference Jacobian and
/// Nielsen's damping update (`μ` scaled by `ν`, `ν` doubling on rejection).
/// Stops below `target`, on stagnation, or after `max_iterations`.
pub fn levenberg_marquardt(
    f: impl Fn(&[f64]) -> Vec<f64>,
    x0: &[f64],
    max_iterations: usize,
    target: f64,
) -> LmOutcome {
    let mut x = DVector::from_column_slice(x0);
    let mut r = DVector::from_vec(f(x.as_slice()));
    let mut cost = r.norm_squared();
    let mut mu = -1.0;
    let mut nu = 2.0;
    let mut checkpoint = cost.sqrt();
    let mut it = 0;
    while it < max_iterations && cost.sqrt() > target {
        it += 1;
        if it % STALL_WINDOW == 0 {
            if cost.sqrt() > STALL_FACTOR * checkpoint {
                break;
            }
            checkpoint = cost.sqrt();
        }
        let jac = numerical_jacobian(&f, x.as_slice(), FD_STEP);
        let a = jac.transpose() * &jac;
        let grad = jac.transpose() * &r;
        if mu < 0.0 {
            mu = 1e-3 * a.diagonal().max().max(1e-12);
        }
        let mut accepted = false;
        while !accepted && mu < 1e30 {
            let mut m = a.clone();
            for i in 0..m.nrows() {
                m[(i, i)] += mu;
            }
            let Some(ch) = m.cholesky() else {
                mu *= nu;
                nu *= 2.0;
                continue;
            };
            let delta = ch.solve(&-&grad);
            if delta.norm() <= 1e-15 * (x.norm() + 1e-15) {
                return LmOutcome {
                    x: x.as_slice().to_vec(),
                    residual: cost.sqrt(),
                    iterations: it,
                };
            }
            let xn = &x + &delta;
            let rn = DVector::from_vec(f(xn.as_slice()));
            let cn = rn.norm_squared();
            let predicted = delta.dot(&(&delta * mu - &grad));
            let rho = (cost - cn) / predicted;
            if cn.is_finite() && rho > 0.0 {
                x = xn;
                r = rn;
                cost = cn;
                mu *= (1.0 / 3.0f64).max(1.0 - (2.0 * rho - 1.0).powi(3));
                nu = 2.0;
                accepted = true;
            } else {
                mu *= nu;
                nu *= 2.0;
            }
        }
        if !accepted {
            break;
        }
    }
    LmOutcome {
        x: x.as_slice().to_vec(),
        residual: cost.sqrt(),
        iterations: it,
    }
}

/// `λ(ψ⁺)` and `|ω³|` of a candidate, used to screen starting points.
fn start_quality(kind: Kind, x: &[f64]) -> Option<(f64, f64)> {
    let (w, p) = Candidate::decode(kind, x).su3_forms();
    let w3 = w.power(3);
    let vol = w3.abs_top();
    let h = hitchin_invariant(&p, &w3.scale(&(1.0 / 6.0))).ok()?;
    Some((h.lambda, vol))
}

trait AbsTop {
    fn abs_top(&self) -> f64;
}

impl AbsTop for Form<f64> {
    fn abs_top(&self) -> f64 {
        self.scalar_part().abs()
    }
}

/// The restart's random stream: the problem seed, stream number `k`.
fn restart_rng(seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    rng
}

/// A starting point satisfying the screening rule, and the number of draws.
pub fn starting_point(kind: Kind, seed: u64, k: usize) -> (Vec<f64>, usize) {
    let mut rng = restart_rng(seed, k);
    let mut x = Vec::new();
    for attempt in 1..=MAX_START_ATTEMPTS {
        x = (0..kind.unknowns())
            .map(|_| rng.gen_range(-START_RANGE..=START_RANGE))
            .collect();
        if let Some((lam, vol)) = start_quality(kind, &x) {
            if lam < START_LAMBDA_MAX && vol > START_VOLUME_MIN {
                return (x, attempt);
            }
        }
    }
    (x, MAX_START_ATTEMPTS)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestartLog {
    pub restart: usize,
    pub start_draws: usize,
    pub iterations: usize,
    pub residual: f64,
    pub validated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Found,
    NotFoundBelowThreshold,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Su3(Su3Json<f64>),
    Su2(Su2Json<f64>),
}

impl Witness {
    fn from_candidate(c: &Candidate<f64>) -> Self {
        match c {
            Candidate::Su3 { omega, psi_plus } => Witness::Su3(Su3Json {
                omega: omega.clone(),
                psi_plus: psi_plus.clone(),
            }),
            Candidate::Su2 { alpha, omega, phi } => {
                let mut j = Su2Json::new(alpha, omega);
                j.t = Some(1.0);
                j.phi = Some(phi.clone());
                Witness::Su2(j)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub algebra: String,
    pub kind: Kind,
    pub seed: u64,
    pub threshold: f64,
    pub best_residual: f64,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub restarts: Vec<RestartLog>,
    pub note: String,
}

struct Outcome {
    log: RestartLog,
    x: Vec<f64>,
}

/// Independent float re-validation of a candidate: the structure checks and
/// the target closure conditions at [`WITNESS_TOL`].
pub fn validate_candidate(g: &LieAlgebra, c: &Candidate<f64>) -> ValidationReport {
    let tol = WITNESS_TOL;
    match c {
        Candidate::Su3 { omega, psi_plus } => {
            let mut r = su3_validate(omega, psi_plus, tol);
            match Su3Structure::derive(omega, psi_plus) {
                Ok(s) => {
                    let pr = su3_predicates(&s, g, tol);
                    r.push("symplectic_half_flat", pr.symplectic_half_flat, g.d(omega).max_abs().max(g.d(psi_plus).max_abs()));
                }
                Err(e) => r.push(format!("structure: {e}"), false, f64::INFINITY),
            }
            r
        }
        Candidate::Su2 { alpha, omega, phi } => {
            let mut r = su2_validate(alpha, omega, tol);
            r.absorb("eq4.", check_gcy_conditions(alpha, omega, phi, &1.0, g, tol));
            r.push_zero("d_phi", &g.d(phi), tol);
            let (w, p) = c.su3_forms();
            r.absorb("lift.", su3_validate(&w, &p, tol));
            r
        }
    }
}

fn run_restart(p: &SearchProblem, k: usize) -> Outcome {
    let (x0, draws) = starting_point(p.kind, p.seed, k);
    let out = levenberg_marquardt(|x| residual_unchecked(p, x), &x0, p.max_iterations, p.threshold * 1e-2);
    let validated = out.residual < p.threshold
        && validate_candidate(&p.algebra, &Candidate::decode(p.kind, &out.x)).passed();
    Outcome {
        log: RestartLog {
            restart: k,
            start_draws: draws,
            iterations: out.iterations,
            residual: out.residual,
            validated,
        },
        x: out.x,
    }
}

#[cfg(feature = "parallel")]
fn run_batch(p: &SearchProblem, ks: std::ops::Range<usize>) -> Vec<Outcome> {
    use rayon::prelude::*;
    ks.into_par_iter().map(|k| run_restart(p, k)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_batch(p: &SearchProblem, ks: std::ops::Range<usize>) -> Vec<Outcome> {
    ks.map(|k| run_restart(p, k)).collect()
}

fn batch_size() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads().max(1)
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Runs the restarts (in parallel batches when enabled) and merges them by
/// restart index, so the result depends only on the problem and seed.
pub fn minimize(p: &SearchProblem) -> SearchResult {
    let mut outs: Vec<Outcome> = Vec::new();
    let mut start = 0;
    while start < p.restarts {
        let end = (start + batch_size()).min(p.restarts);
        outs.extend(run_batch(p, start..end));
        if p.stop_on_success && outs.iter().any(|o| o.log.validated) {
            break;
        }
        start = end;
    }
    if p.stop_on_success {
        if let Some(i) = outs.iter().position(|o| o.log.validated) {
            outs.truncate(i + 1);
        }
    }
    let best = outs
        .iter()
        .map(|o| o.log.residual)
        .fold(f64::INFINITY, f64::min);
    let found = outs.iter().find(|o| o.log.validated);
    let verdict = if found.is_some() {
        Verdict::Found
    } else {
        Verdict::NotFoundBelowThreshold
    };
    let note = match verdict {
        Verdict::Found => "witness re-validated with independent structure and closure checks".to_string(),
        Verdict::NotFoundBelowThreshold => format!(
            "evidence only: {} restarts did not reach {:e}; this does not prove that no structure exists",
            outs.len(),
            p.threshold
        ),
    };
    SearchResult {
        algebra: p.algebra.notation(),
        kind: p.kind,
        seed: p.seed,
        threshold: p.threshold,
        best_residual: best,
        verdict,
        witness: found.map(|o| Witness::from_candidate(&Candidate::decode(p.kind, &o.x))),
        restarts: outs.into_iter().map(|o| o.log).collect(),
        note,
    }
}

/// Exact check of one listed five-dimensional example.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExampleCheck {
    pub name: String,
    pub algebra: String,
    pub phi: Form<Q>,
    /// The quotient equations with `t = 1`, over `Q`.
    pub equations: ValidationReport,
    pub su2: ValidationReport,
    /// `dω = 0`, `dψ⁺ = 0` for the lift, over `Q`.
    pub lift_symplectic_half_flat: bool,
    pub lift_structure: ValidationReport,
}

impl ExampleCheck {
    pub fn passed(&self) -> bool {
        self.equations.passed() && self.su2.passed() && self.lift_symplectic_half_flat && self.lift_structure.passed()
    }
}

/// Rational verification of the four listed hypo examples and of their
/// circle-bundle lifts; every residual must vanish exactly.
pub fn verify_listed_examples() -> Vec<ExampleCheck> {
    hypo_examples()
        .into_iter()
        .map(|ex| {
            let g = ex.algebra();
            let one = Q::from_i64(1);
            let mut equations = check_gcy_conditions(&ex.alpha, &ex.omega, &ex.phi, &one, &g, 0.0);
            equations.push_zero("d_phi", &g.d(&ex.phi), 0.0);
            let su2 = su2_validate(&ex.alpha, &ex.omega, 0.0);
            let (shf, lift_structure) = match lift(&ex.alpha, &ex.omega, &ex.phi, &one, &g) {
                Ok((total, s)) => (
                    su3_predicates(&s, &total, 0.0).symplectic_half_flat,
                    s.validate(0.0),
                ),
                Err(e) => {
                    let mut r = ValidationReport::new(true);
                    r.push(format!("lift: {e}"), false, f64::INFINITY);
                    (false, r)
                }
            };
            ExampleCheck {
                name: ex.name.to_string(),
                algebra: ex.notation.to_string(),
                phi: ex.phi.clone(),
                equations,
                su2,
                lift_symplectic_half_flat: shf,
                lift_structure,
            }
        })
        .collect()
}

/// Number of coefficients of a `k`-form in dimension `n`.
pub fn block_len(n: usize, k: usize) -> usize {
    masks_of_degree(n, k).len()
}
