//! Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
//! Exits nonzero when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use halfflat::curvature::{
    compare_with, compare_with_reference, corrected_curvature_reference, explicit_curvature, holonomy_span,
};
use halfflat::flow::{evolve, explicit_consistency, explicit_error, explicit_state, FlowEnd};
use halfflat::reduction::{build_final_example, check_torsion_table, lift, random_lift_data};
use halfflat::search::{minimize, verify_listed_examples, Kind, SearchProblem, Verdict};
use halfflat::stable::Su3Structure;
use halfflat::structures::{explicit_pair, explicit_time, g2_model, hypo_examples, irreducible};
use halfflat::torsion::{extract_su3_torsion, Su3Torsion};
use halfflat::{q, LieAlgebra, Scalar, Q};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const C1_RUNTIME: Duration = Duration::from_secs(1);
const C2_SAMPLES: [f64; 5] = [0.8, 0.9, 1.0, 1.1, 1.5];
const C2_TOL: f64 = 1e-12;
const C3_U_END: f64 = 0.8;
const C3_STEP: f64 = 1e-3;
const C3_COEFF_TOL: f64 = 1e-6;
const C3_HALF_FLAT_TOL: f64 = 1e-8;
const C3_RUNTIME: Duration = Duration::from_secs(10);
const C4_SAMPLES: [f64; 2] = [1.0, 1.2];
const C4_RICCI_TOL: f64 = 1e-8;
const C4_HOLONOMY_DIM: usize = 14;
const C4_STABILIZER_TOL: f64 = 1e-7;
const C4_REFERENCE_TOL: f64 = 1e-8;
const C4_RUNTIME: Duration = Duration::from_secs(30);
const C5_ZERO: f64 = 1e-10;
const C5_NONZERO: f64 = 1e-3;
const C5_RECONSTRUCTION: f64 = 1e-9;
const C6_TOL: f64 = 1e-8;
const C6_RANDOM_LIFTS: usize = 20;
const C6_SEED: u64 = 6;
const C7_TOL: f64 = 1e-12;
const C7_TORSION_TOL: f64 = 1e-8;
const C8_RESTARTS: usize = 100;
const C8_SEED: u64 = 0;
const C8_THRESHOLD: f64 = 1e-10;
const C8_NEGATIVE_FLOOR: f64 = 1e-6;
const C8_RUNTIME: Duration = Duration::from_secs(300);
const C9_CASES: u32 = 1000;

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            passed: true,
            summary: String::new(),
            details: Vec::new(),
        }
    }

    /// Records a gated sub-check.
    fn gate(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.passed = false;
            self.details.push(format!("failed: {}", what.into()));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(what.into());
    }

    fn timed(&mut self, start: Instant, limit: Duration) -> String {
        let t = start.elapsed();
        self.gate(t < limit, format!("runtime {t:.2?} exceeds {limit:?}"));
        format!("{t:.2?}")
    }
}

fn c1() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let checks = verify_listed_examples();
    let rt = o.timed(start, C1_RUNTIME);
    for c in &checks {
        // nondegeneracy checks carry witness values, not residuals
        let exact = [&c.equations, &c.su2, &c.lift_structure].iter().all(|r| r.exact);
        let worst = c.equations.max_residual();
        o.gate(
            c.passed() && exact && worst == 0.0,
            format!("{} on {}: equations residual {worst:e}, exact {exact}", c.name, c.algebra),
        );
    }
    o.gate(checks.len() == 4, format!("{} example structures", checks.len()));
    o.summary = format!("{} structures, exact quotient equations and symplectic half-flat lifts, {rt}", checks.len());
    o
}

fn c2() -> Outcome {
    let mut o = Outcome::new();
    let g = irreducible();
    let mut worst: f64 = 0.0;
    for u in C2_SAMPLES {
        match explicit_consistency(&g, u) {
            Ok(r) => {
                worst = worst.max(r);
                o.gate(r < C2_TOL, format!("u={u}: residual {r:e}"));
            }
            Err(e) => o.gate(false, format!("u={u}: {e}")),
        }
    }
    o.summary = format!("max residual {worst:.3e} < {C2_TOL:e} at u in {C2_SAMPLES:?}");
    o
}

fn c3() -> Outcome {
    let mut o = Outcome::new();
    let g = irreducible();
    let start = Instant::now();
    let s0 = explicit_state(1.0);
    let t_end = explicit_time(&C3_U_END);
    let traj = match evolve(&g, &s0, t_end, C3_STEP) {
        Ok(t) => t,
        Err(e) => {
            o.gate(false, e.to_string());
            return o;
        }
    };
    let rt = o.timed(start, C3_RUNTIME);
    o.gate(traj.end == FlowEnd::Completed, format!("ended early: {:?}", traj.end));
    match explicit_error(traj.last(), C3_U_END) {
        Ok((u, err)) => {
            o.gate((u - C3_U_END).abs() < 1e-9, format!("final u = {u}"));
            o.gate(err < C3_COEFF_TOL, format!("coefficient error {err:e}"));
            o.gate(
                traj.max_residual < C3_HALF_FLAT_TOL,
                format!("half-flat residual {:e}", traj.max_residual),
            );
            o.summary = format!(
                "t {:.4} -> {t_end:.6}, {} steps, coefficient error {err:.3e}, half-flat residual {:.3e}, {rt}",
                s0.t,
                traj.states.len() - 1,
                traj.max_residual
            );
        }
        Err(e) => o.gate(false, e.to_string()),
    }
    o
}

fn c4() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let phi = g2_model::<f64>();
    let mut parts = Vec::new();
    let mut all_ops = Vec::new();
    for u in C4_SAMPLES {
        let c = match explicit_curvature(u) {
            Ok(c) => c,
            Err(e) => {
                o.gate(false, format!("u={u}: {e}"));
                continue;
            }
        };
        let ric = c.ricci().norm();
        o.gate(ric < C4_RICCI_TOL, format!("u={u}: Ricci norm {ric:e}"));
        let ops = c.operators();
        let h = holonomy_span(&ops, Some(&phi));
        let stab = h.stabilizer_residual.unwrap_or(f64::INFINITY);
        o.gate(h.dim == C4_HOLONOMY_DIM, format!("u={u}: span dimension {}", h.dim));
        o.gate(stab < C4_STABILIZER_TOL, format!("u={u}: span acts on the G2 form by {stab:e}"));
        all_ops.extend(ops);
        match compare_with_reference(&c, u, C4_REFERENCE_TOL) {
            Ok(cmp) => {
                o.gate(
                    cmp.unambiguous < C4_REFERENCE_TOL,
                    format!("u={u}: unflagged terms differ from the quoted curvature by {:e}", cmp.unambiguous),
                );
                for (a, b, got, quoted) in &cmp.mismatches {
                    o.note(format!("u={u}: ({a},{b}) computed {got:.12} quoted {quoted:.12}"));
                }
                o.note(format!("u={u}: flagged terms (reported, not gated) differ by {:.3e}", cmp.flagged));
                parts.push(format!("u={u}: Ricci {ric:.1e}, span {}, unflagged {:.1e}", h.dim, cmp.unambiguous));
            }
            Err(e) => o.gate(false, format!("u={u}: {e}")),
        }
        if let Ok(r) = corrected_curvature_reference(u).and_then(|r| compare_with(&c, &r, C4_REFERENCE_TOL)) {
            o.note(format!(
                "u={u}: quoted expression with -c5(E25-E36)^2 added matches to {:.3e} (reported)",
                r.unambiguous.max(r.flagged)
            ));
        }
    }
    let joint = holonomy_span(&all_ops, Some(&phi));
    o.gate(joint.dim == C4_HOLONOMY_DIM, format!("joint span dimension {}", joint.dim));
    let rt = o.timed(start, C4_RUNTIME);
    o.summary = format!("{}; {rt}", parts.join("; "));
    o
}

/// Gates the symplectic half-flat signature: only `W₂⁻` survives.
fn signature(o: &mut Outcome, label: &str, w: &Su3Torsion<Q>) -> f64 {
    let mut w2m = 0.0;
    for (name, v) in w.table() {
        if name == "W2-" {
            w2m = v;
            o.gate(v > C5_NONZERO, format!("{label}: |W2-| = {v:e}"));
        } else {
            o.gate(v < C5_ZERO, format!("{label}: |{name}| = {v:e}"));
        }
    }
    o.gate(
        w.reconstruction_residual < C5_RECONSTRUCTION,
        format!("{label}: reconstruction residual {:e}", w.reconstruction_residual),
    );
    w2m
}

fn c5() -> Outcome {
    let mut o = Outcome::new();
    let mut parts = Vec::new();
    let one = q(1, 1);
    for ex in hypo_examples() {
        let base = ex.algebra();
        let (g, s) = match lift(&ex.alpha, &ex.omega, &ex.phi, &one, &base) {
            Ok(x) => x,
            Err(e) => {
                o.gate(false, format!("{}: {e}", ex.name));
                continue;
            }
        };
        let w = match extract_su3_torsion(&s, &g, 0.0) {
            Ok(w) => w,
            Err(e) => {
                o.gate(false, format!("{}: {e}", ex.name));
                continue;
            }
        };
        if ex.phi.is_zero() && base.differentials().iter().all(|d| d.is_zero()) {
            // the flat torus: torsion-free, so W2- cannot be nonzero
            let worst = w.table().iter().map(|(_, v)| *v).fold(0.0, f64::max);
            o.gate(worst == 0.0, format!("torus lift: torsion {worst:e}"));
            o.note(format!("torus lift {}: every component 0 (flat, reported)", g.notation()));
            continue;
        }
        let w2m = signature(&mut o, ex.name, &w);
        parts.push(format!("{} {}: |W2-| {w2m:.3}", ex.name, g.notation()));
    }
    let (om, psi) = explicit_pair(&one);
    match Su3Structure::new(&om, &psi, 0.0).map_err(|e| e.to_string()).and_then(|s| {
        extract_su3_torsion(&s, &irreducible(), 0.0).map_err(|e| e.to_string())
    }) {
        Ok(w) => {
            let w2m = signature(&mut o, "explicit u=1", &w);
            parts.push(format!("explicit u=1: |W2-| {w2m:.3}"));
        }
        Err(e) => o.gate(false, format!("explicit u=1: {e}")),
    }
    o.summary = parts.join("; ");
    o
}

fn c6() -> Outcome {
    let mut o = Outcome::new();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let g = irreducible();
    let (om, psi) = explicit_pair(&q(1, 1));
    let s = Su3Structure::new(&om, &psi, 0.0).expect("explicit pair at u=1");
    for x in g.center() {
        match check_torsion_table(&s, &g, &x, false, 0.0) {
            Ok(c) => {
                worst = worst.max(c.max_difference);
                count += 1;
                o.gate(c.max_difference < C6_TOL, format!("u=1 along {x:?}: {:e}", c.max_difference));
            }
            Err(e) => o.gate(false, format!("u=1 along {x:?}: {e}")),
        }
    }
    let fibre: Vec<Q> = (0..6).map(|i| Q::from_i64(i64::from(i == 5))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(C6_SEED);
    for k in 0..C6_RANDOM_LIFTS {
        let base = LieAlgebra::parse(common::FIVE_DIM[k % common::FIVE_DIM.len()]).expect("valid notation");
        let d = random_lift_data(&mut rng, &base);
        let res = lift(&d.alpha, &d.omega, &d.phi, &d.t, &base)
            .map_err(|e| e.to_string())
            .and_then(|(tg, ts)| check_torsion_table(&ts, &tg, &fibre, false, 0.0).map_err(|e| e.to_string()));
        match res {
            Ok(c) => {
                worst = worst.max(c.max_difference);
                count += 1;
                o.gate(c.max_difference < C6_TOL, format!("lift {k} on {}: {:e}", base.notation(), c.max_difference));
            }
            Err(e) => o.gate(false, format!("lift {k} on {}: {e}", base.notation())),
        }
    }
    o.summary = format!("{count} reductions, largest table-vs-direct difference {worst:e} (exact)");
    o
}

fn c7() -> Outcome {
    let mut o = Outcome::new();
    let mut parts = Vec::new();
    for (label, x) in [("0", q(0, 1)), ("1/4", q(1, 4)), ("1/2", q(1, 2))] {
        let ex = match build_final_example(&x) {
            Ok(ex) => ex,
            Err(e) => {
                o.gate(false, format!("x={label}: {e}"));
                continue;
            }
        };
        match ex.check() {
            Ok(c) => {
                o.gate(c.eq_t < C7_TOL, format!("x={label}: equation for t {:e}", c.eq_t));
                o.gate(c.eq_omega3 < C7_TOL, format!("x={label}: equation for omega3 {:e}", c.eq_omega3));
                o.gate(c.closed < C7_TOL, format!("x={label}: closure {:e}", c.closed));
                let target = ex.su2.omega[2].map(|v| v.value().clone());
                o.gate(c.phi.as_ref() == Some(&target), format!("x={label}: phi = {:?}", c.phi));
            }
            Err(e) => o.gate(false, format!("x={label}: {e}")),
        }
        match ex.torsion(0.0) {
            Ok((_, w)) => {
                let worst = w.table().iter().map(|(_, v)| *v).fold(0.0, f64::max);
                o.gate(worst < C7_TORSION_TOL, format!("x={label}: torsion {worst:e}"));
                parts.push(format!("x={label}: torsion {worst:e}"));
            }
            Err(e) => o.gate(false, format!("x={label}: {e}")),
        }
    }
    o.summary = format!("phi = omega3 exactly; {}", parts.join(", "));
    o
}

fn c8() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let positive = [
        ("(0,0,0,0,0,0)", Kind::SymplecticHalfFlat),
        ("(0,0,0,0,12,13)", Kind::SymplecticHalfFlat),
        ("(0,0,0,12,13,23)", Kind::SymplecticHalfFlat),
        ("(0,0,0,0,0)", Kind::HypoWithEq4),
        ("(0,0,0,0,12)", Kind::HypoWithEq4),
        ("(0,0,0,12,13)", Kind::HypoWithEq4),
    ];
    let problem = |notation: &str, kind| {
        let mut p = SearchProblem::new(LieAlgebra::parse(notation).expect("valid notation"), kind)
            .expect("dimension matches")
            .with_restarts(C8_RESTARTS)
            .with_seed(C8_SEED);
        p.threshold = C8_THRESHOLD;
        p
    };
    let mut found = 0;
    for (notation, kind) in positive {
        let r = minimize(&problem(notation, kind));
        let ok = r.verdict == Verdict::Found && r.best_residual < C8_THRESHOLD;
        o.gate(ok, format!("{notation} {kind}: best residual {:e}", r.best_residual));
        if ok {
            found += 1;
        }
        o.note(format!(
            "{notation} {kind}: residual {:.3e} after {} restarts",
            r.best_residual,
            r.restarts.len()
        ));
    }
    let neg = minimize(&problem("(0,0,0,0,0,12)", Kind::SymplecticHalfFlat));
    o.gate(
        neg.verdict == Verdict::NotFoundBelowThreshold && neg.best_residual >= C8_NEGATIVE_FLOOR,
        format!("(0,0,0,0,0,12): best residual {:e}", neg.best_residual),
    );
    let rt = o.timed(start, C8_RUNTIME);
    o.summary = format!(
        "witnesses on {found}/6 algebras; (0,0,0,0,0,12) best residual {:.3e} over {} restarts; {rt}",
        neg.best_residual,
        neg.restarts.len()
    );
    o
}

fn c9() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut names = Vec::new();
    for (name, suite) in common::suites() {
        match suite(C9_CASES) {
            Ok(()) => names.push(name),
            Err(e) => o.gate(false, format!("{name}: {e}")),
        }
    }
    o.summary = format!(
        "{} x {C9_CASES} cases without failure ({}), {:.2?}",
        names.len(),
        names.join(", "),
        start.elapsed()
    );
    o
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("exact verification of the example structures", c1),
        ("explicit solution satisfies the evolution", c2),
        ("flow reproduces the explicit solution", c3),
        ("curvature and holonomy", c4),
        ("torsion signature of symplectic half-flat structures", c5),
        ("quotient torsion table", c6),
        ("integrable lift over R^5", c7),
        ("classification by search", c8),
        ("property suites", c9),
    ];
    // `cargo test --test acceptance -- 1 4` runs a subset
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (i, (title, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {} {tag}: {title}: {}", i + 1, o.summary);
        for d in &o.details {
            println!("    {d}");
        }
        if !o.passed {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all selected criteria pass");
    } else {
        println!("acceptance: criteria {failed:?} FAIL");
        std::process::exit(1);
    }
}
