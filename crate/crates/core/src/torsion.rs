//! Intrinsic torsion of SU(3)-structures in six dimensions and SU(2)-structures
//! in five, read off from the exterior derivatives of the defining forms by
//! linear solves with the type conditions imposed as extra equations.

use serde::Serialize;
use thiserror::Error;

use crate::exterior::{masks_of_degree, Form};
use crate::liealg::LieAlgebra;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::stable::{StructureError, Su2Structure, Su3Structure};

/// Default threshold below which a float component counts as zero.
pub const ZERO_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorsionError {
    #[error("the {line} equation is inconsistent (residual {residual:e})")]
    Inconsistent { line: &'static str, residual: f64 },
    #[error("the {line} equation determines only {rank} of {expected} components")]
    Underdetermined {
        line: &'static str,
        rank: usize,
        expected: usize,
    },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Columns of a linear problem: the images of each unknown in every block
/// of equations. Blocks after the first few are homogeneous constraints.
struct Problem<S> {
    dim: usize,
    degrees: Vec<usize>,
    cols: Vec<Vec<Form<S>>>,
}

struct Solved<S> {
    x: Vec<S>,
    rank: usize,
    inconsistency: f64,
}

impl<S: Scalar> Problem<S> {
    fn new(dim: usize, degrees: &[usize]) -> Self {
        Problem {
            dim,
            degrees: degrees.to_vec(),
            cols: Vec::new(),
        }
    }

    /// Adds one unknown; `images` lists its contribution to each block.
    fn push(&mut self, images: Vec<Form<S>>) {
        assert_eq!(images.len(), self.degrees.len());
        self.cols.push(images);
    }

    /// Adds the unknown components of a `p`-form `x` given the block images
    /// of the monomial basis; returns the number of columns added.
    fn push_form(&mut self, p: usize, mut images: impl FnMut(&Form<S>) -> Vec<Form<S>>) -> usize {
        let masks = masks_of_degree(self.dim, p);
        for &m in &masks {
            let mut basis = Form::zero(self.dim, p);
            basis.add_term(m, S::one());
            let im = images(&basis);
            self.push(im);
        }
        masks.len()
    }

    fn solve(&self, targets: &[Form<S>]) -> Solved<S> {
        let masks: Vec<Vec<u8>> = self
            .degrees
            .iter()
            .map(|&d| masks_of_degree(self.dim, d))
            .collect();
        let nrows: usize = masks.iter().map(Vec::len).sum();
        let mut a = Matrix::zeros(nrows, self.cols.len());
        let mut b = vec![S::zero(); nrows];
        let mut r = 0;
        for (blk, ms) in masks.iter().enumerate() {
            for &m in ms {
                for (k, col) in self.cols.iter().enumerate() {
                    a[(r, k)] = col[blk].coeff(m);
                }
                if let Some(t) = targets.get(blk) {
                    b[r] = t.coeff(m);
                }
                r += 1;
            }
        }
        let sol = a.solve(&b);
        Solved {
            x: sol.x,
            rank: sol.rank,
            inconsistency: sol.inconsistency,
        }
    }
}

fn form_from<S: Scalar>(dim: usize, p: usize, x: &[S]) -> Form<S> {
    Form::from_vector(dim, p, x)
}

fn is_negligible<S: Scalar>(r: f64, tol: f64) -> bool {
    if S::is_exact() {
        r == 0.0
    } else {
        r <= tol
    }
}

/// Torsion components of an SU(3)-structure:
///
/// ```text
/// dψ⁺ = ψ⁺∧W₅ + W₂⁺∧ω + W₁⁺ω²
/// dψ⁻ = ψ⁻∧W₅ + W₂⁻∧ω + W₁⁻ω²
/// dω  = −(3/2)W₁⁻ψ⁺ + (3/2)W₁⁺ψ⁻ + W₃ + W₄∧ω
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct Su3Torsion<S> {
    pub w1p: S,
    pub w1m: S,
    pub w2p: Form<S>,
    pub w2m: Form<S>,
    pub w3: Form<S>,
    pub w4: Form<S>,
    pub w5: Form<S>,
    /// `W₁±` as they appear in the `dω` line.
    pub w1p_from_omega: S,
    pub w1m_from_omega: S,
    /// `W₅` as it appears in the `dψ⁻` line.
    pub w5_from_minus: Form<S>,
    /// Largest deviation between the two readings of `W₁±` and `W₅`.
    pub cross_line_residual: f64,
    /// Largest deviation of the reassembled right-hand sides.
    pub reconstruction_residual: f64,
    /// Solved ranks of the `dψ±` lines (22 = 6 + 15 + 1 before the
    /// 14 type conditions on `W₂`) and of the `dω` line.
    pub ranks: [usize; 3],
}

/// Torsion from the derivatives of the defining forms, which may come
/// from any algebra (or be given directly for parametric families).
pub fn su3_torsion_from<S: Scalar>(
    s: &Su3Structure<S>,
    d_omega: &Form<S>,
    d_psi_plus: &Form<S>,
    d_psi_minus: &Form<S>,
    tol: f64,
) -> Result<Su3Torsion<S>, TorsionError> {
    let om = &s.omega;
    let om2 = om.wedge(om);
    let j = &s.j;

    // dψ± lines: unknowns W5 (6), W2 (15), W1 (1); constraints:
    // J-invariance of W2 (Λ²) and W2∧ω² = 0 (Λ⁶).
    let psi_line = |psi: &Form<S>, target: &Form<S>, line: &'static str| {
        let mut p = Problem::new(6, &[4, 2, 6]);
        p.push_form(1, |b| vec![psi.wedge(b), Form::zero(6, 2), Form::zero(6, 6)]);
        p.push_form(2, |b| vec![b.wedge(om), b.transform(j) - b.clone(), b.wedge(&om2)]);
        p.push(vec![om2.clone(), Form::zero(6, 2), Form::zero(6, 6)]);
        let sol = p.solve(std::slice::from_ref(target));
        check(line, &sol, 22, tol)?;
        let w5 = form_from(6, 1, &sol.x[0..6]);
        let w2 = form_from(6, 2, &sol.x[6..21]);
        Ok::<_, TorsionError>((w5, w2, sol.x[21].clone(), sol.rank))
    };
    let (w5, w2p, w1p, r1) = psi_line(&s.psi_plus, d_psi_plus, "dpsi+")?;
    let (w5m, w2m, w1m, _) = psi_line(&s.psi_minus, d_psi_minus, "dpsi-")?;

    // dω line: unknowns W1- (1), W1+ (1), W3 (20), W4 (6); constraints
    // W3∧ω = 0 (Λ⁵), W3∧ψ± = 0 (Λ⁶ twice).
    let mut p = Problem::new(6, &[3, 5, 6, 6]);
    let z = |d: usize| Form::zero(6, d);
    let c32 = S::from_ratio(3, 2);
    p.push(vec![s.psi_plus.scale(&-c32.clone()), z(5), z(6), z(6)]);
    p.push(vec![s.psi_minus.scale(&c32), z(5), z(6), z(6)]);
    p.push_form(3, |b| {
        vec![
            b.clone(),
            b.wedge(om),
            b.wedge(&s.psi_plus),
            b.wedge(&s.psi_minus),
        ]
    });
    p.push_form(1, |b| vec![b.wedge(om), z(5), z(6), z(6)]);
    let sol = p.solve(std::slice::from_ref(d_omega));
    check("domega", &sol, 28, tol)?;
    let w1m_o = sol.x[0].clone();
    let w1p_o = sol.x[1].clone();
    let w3 = form_from(6, 3, &sol.x[2..22]);
    let w4 = form_from(6, 1, &sol.x[22..28]);

    let cross = [
        (w1p.clone() - w1p_o.clone()).magnitude(),
        (w1m.clone() - w1m_o.clone()).magnitude(),
        (&w5 - &w5m).max_abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    let rec_p = s.psi_plus.wedge(&w5) + w2p.wedge(om) + om2.scale(&w1p) - d_psi_plus.clone();
    let rec_m = s.psi_minus.wedge(&w5) + w2m.wedge(om) + om2.scale(&w1m) - d_psi_minus.clone();
    let c = S::from_ratio(3, 2);
    let rec_o = s.psi_plus.scale(&-(c.clone() * w1m_o.clone()))
        + s.psi_minus.scale(&(c * w1p_o.clone()))
        + w3.clone()
        + w4.wedge(om)
        - d_omega.clone();
    let reconstruction = rec_p.max_abs().max(rec_m.max_abs()).max(rec_o.max_abs());

    Ok(Su3Torsion {
        w1p,
        w1m,
        w2p,
        w2m,
        w3,
        w4,
        w5,
        w1p_from_omega: w1p_o,
        w1m_from_omega: w1m_o,
        w5_from_minus: w5m,
        cross_line_residual: cross,
        reconstruction_residual: reconstruction,
        ranks: [r1, r1, sol.rank],
    })
}

fn check<S: Scalar>(line: &'static str, sol: &Solved<S>, unknowns: usize, tol: f64) -> Result<(), TorsionError> {
    if !is_negligible::<S>(sol.inconsistency, tol) {
        return Err(TorsionError::Inconsistent {
            line,
            residual: sol.inconsistency,
        });
    }
    if sol.rank != unknowns {
        return Err(TorsionError::Underdetermined {
            line,
            rank: sol.rank,
            expected: unknowns,
        });
    }
    Ok(())
}

pub fn extract_su3_torsion<S: Scalar>(
    s: &Su3Structure<S>,
    g: &LieAlgebra,
    tol: f64,
) -> Result<Su3Torsion<S>, TorsionError> {
    su3_torsion_from(s, &g.d(&s.omega), &g.d(&s.psi_plus), &g.d(&s.psi_minus), tol)
}

impl<S: Scalar> Su3Torsion<S> {
    /// `(name, size)` for each component; sizes are coefficient norms.
    pub fn table(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("W1+", self.w1p.magnitude()),
            ("W1-", self.w1m.magnitude()),
            ("W2+", self.w2p.coeff_norm()),
            ("W2-", self.w2m.coeff_norm()),
            ("W3", self.w3.coeff_norm()),
            ("W4", self.w4.coeff_norm()),
            ("W5", self.w5.coeff_norm()),
        ]
    }

    /// Names of the components larger than `tol`.
    pub fn nonzero(&self, tol: f64) -> Vec<&'static str> {
        self.table()
            .into_iter()
            .filter(|(_, v)| *v > tol)
            .map(|(n, _)| n)
            .collect()
    }

    pub fn report(&self) -> TorsionReport {
        TorsionReport {
            components: self.table().into_iter().map(|(n, v)| (n.to_string(), v)).collect(),
            reconstruction_residual: self.reconstruction_residual,
            consistency_residual: self.cross_line_residual,
        }
    }
}

/// Serializable summary of a torsion computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionReport {
    pub components: Vec<(String, f64)>,
    pub reconstruction_residual: f64,
    pub consistency_residual: f64,
}

/// Torsion components of an SU(2)-structure:
///
/// ```text
/// dα  = α∧β + Σ fʲ ωⱼ + ω⁻
/// dωᵢ = γᵢ∧ωᵢ + λ α∧ωᵢ + Σ_{j≠i} gᵢʲ α∧ωⱼ + α∧σᵢ⁻,   gᵢʲ = −gⱼⁱ
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct Su2Torsion<S> {
    pub lambda: S,
    pub f: [S; 3],
    /// `g₁², g₁³, g₂³`.
    pub g: [S; 3],
    pub beta: Form<S>,
    pub gamma: [Form<S>; 3],
    pub omega_minus: Form<S>,
    pub sigma: [Form<S>; 3],
    pub reconstruction_residual: f64,
    /// Leftover of the over-determined `dωᵢ` system.
    pub consistency_residual: f64,
    /// Ranks of the `dα` system (10 = 4+3+3) and the joint `dωᵢ` system
    /// (25 = 1+3+12+9).
    pub ranks: [usize; 2],
}

impl<S: Scalar> Su2Torsion<S> {
    /// `gᵢʲ` for 0-indexed `i ≠ j`.
    pub fn g_ij(&self, i: usize, j: usize) -> S {
        match (i, j) {
            (0, 1) => self.g[0].clone(),
            (0, 2) => self.g[1].clone(),
            (1, 2) => self.g[2].clone(),
            (a, b) if a > b => -self.g_ij(b, a),
            _ => S::zero(),
        }
    }

    pub fn table(&self) -> Vec<(String, f64)> {
        let mut t = vec![("lambda".to_string(), self.lambda.magnitude())];
        for i in 0..3 {
            t.push((format!("f{}", i + 1), self.f[i].magnitude()));
        }
        for (k, n) in ["g12", "g13", "g23"].iter().enumerate() {
            t.push((n.to_string(), self.g[k].magnitude()));
        }
        t.push(("beta".into(), self.beta.coeff_norm()));
        for i in 0..3 {
            t.push((format!("gamma{}", i + 1), self.gamma[i].coeff_norm()));
        }
        t.push(("omega-".into(), self.omega_minus.coeff_norm()));
        for i in 0..3 {
            t.push((format!("sigma{}", i + 1), self.sigma[i].coeff_norm()));
        }
        t
    }

    pub fn report(&self) -> TorsionReport {
        TorsionReport {
            components: self.table(),
            reconstruction_residual: self.reconstruction_residual,
            consistency_residual: self.consistency_residual,
        }
    }
}

/// Adds the `Λ²₋` conditions `R ⌟ σ = 0`, `σ∧ωᵢ∧α = 0` for a 2-form unknown.
fn asd_constraints<S: Scalar>(s: &Su2Structure<S>, b: &Form<S>) -> [Form<S>; 4] {
    let a = &s.alpha;
    [
        b.interior(&s.reeb),
        b.wedge(&s.omega[0]).wedge(a),
        b.wedge(&s.omega[1]).wedge(a),
        b.wedge(&s.omega[2]).wedge(a),
    ]
}

pub fn su2_torsion_from<S: Scalar>(
    s: &Su2Structure<S>,
    d_alpha: &Form<S>,
    d_omega: &[Form<S>; 3],
    tol: f64,
) -> Result<Su2Torsion<S>, TorsionError> {
    let a = &s.alpha;
    let w = &s.omega;
    let z = |d: usize| Form::zero(5, d);
    let reeb_form = |b: &Form<S>| Form::constant(5, b.interior(&s.reeb).scalar_part());

    // dα: β (5, with β(R) = 0), f (3), ω⁻ (10, in Λ²₋).
    // blocks: Λ² equation, β(R) (Λ⁰), ω⁻: R⌟ (Λ¹), ∧ωᵢ∧α (Λ⁵ ×3)
    let mut p = Problem::new(5, &[2, 0, 1, 5, 5, 5]);
    p.push_form(1, |b| vec![a.wedge(b), reeb_form(b), z(1), z(5), z(5), z(5)]);
    for wj in w {
        p.push(vec![wj.clone(), z(0), z(1), z(5), z(5), z(5)]);
    }
    p.push_form(2, |b| {
        let [c0, c1, c2, c3] = asd_constraints(s, b);
        vec![b.clone(), z(0), c0, c1, c2, c3]
    });
    let sol = p.solve(std::slice::from_ref(d_alpha));
    check("dalpha", &sol, 18, tol)?;
    let beta = form_from(5, 1, &sol.x[0..5]);
    let f = [sol.x[5].clone(), sol.x[6].clone(), sol.x[7].clone()];
    let omega_minus = form_from(5, 2, &sol.x[8..18]);
    let rank_a = sol.rank;

    // dωᵢ jointly: λ (1), g (3), γᵢ (3×5), σᵢ (3×10).
    // blocks: three Λ³ equations, then per γᵢ one Λ⁰ row, per σᵢ the
    // Λ²₋ conditions.
    let mut degrees = vec![3, 3, 3];
    degrees.extend([0, 0, 0]);
    for _ in 0..3 {
        degrees.extend([1, 5, 5, 5]);
    }
    let nblk = degrees.len();
    let mut p = Problem::new(5, &degrees);
    let zeros = || -> Vec<Form<S>> { degrees.iter().map(|&d| z(d)).collect() };
    // λ
    let mut col = zeros();
    for i in 0..3 {
        col[i] = a.wedge(&w[i]);
    }
    p.push(col);
    // g12, g13, g23: gᵢʲ α∧ωⱼ in line i and −gᵢʲ α∧ωᵢ in line j
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let mut col = zeros();
        col[i] = a.wedge(&w[j]);
        col[j] = -a.wedge(&w[i]);
        p.push(col);
    }
    for i in 0..3 {
        p.push_form(1, |b| {
            let mut col = zeros();
            col[i] = b.wedge(&w[i]);
            col[3 + i] = reeb_form(b);
            col
        });
    }
    for i in 0..3 {
        p.push_form(2, |b| {
            let mut col = zeros();
            col[i] = a.wedge(b);
            let cs = asd_constraints(s, b);
            for (k, c) in cs.into_iter().enumerate() {
                col[6 + 4 * i + k] = c;
            }
            col
        });
    }
    debug_assert_eq!(p.cols[0].len(), nblk);
    let sol = p.solve(d_omega);
    check("domega_i", &sol, 49, tol)?;
    let x = &sol.x;
    let lambda = x[0].clone();
    let g = [x[1].clone(), x[2].clone(), x[3].clone()];
    let gamma = [
        form_from(5, 1, &x[4..9]),
        form_from(5, 1, &x[9..14]),
        form_from(5, 1, &x[14..19]),
    ];
    let sigma = [
        form_from(5, 2, &x[19..29]),
        form_from(5, 2, &x[29..39]),
        form_from(5, 2, &x[39..49]),
    ];

    let mut t = Su2Torsion {
        lambda,
        f,
        g,
        beta,
        gamma,
        omega_minus,
        sigma,
        reconstruction_residual: 0.0,
        consistency_residual: sol.inconsistency,
        ranks: [rank_a, sol.rank],
    };
    let mut da = a.wedge(&t.beta) + t.omega_minus.clone();
    for j in 0..3 {
        da = da + w[j].scale(&t.f[j]);
    }
    let mut rec = (da - d_alpha.clone()).max_abs();
    for i in 0..3 {
        let mut di = t.gamma[i].wedge(&w[i]) + a.wedge(&w[i]).scale(&t.lambda) + a.wedge(&t.sigma[i]);
        for j in 0..3 {
            if j != i {
                di = di + a.wedge(&w[j]).scale(&t.g_ij(i, j));
            }
        }
        rec = rec.max((di - d_omega[i].clone()).max_abs());
    }
    t.reconstruction_residual = rec;
    Ok(t)
}

pub fn extract_su2_torsion<S: Scalar>(
    s: &Su2Structure<S>,
    g: &LieAlgebra,
    tol: f64,
) -> Result<Su2Torsion<S>, TorsionError> {
    let dw = [g.d(&s.omega[0]), g.d(&s.omega[1]), g.d(&s.omega[2])];
    su2_torsion_from(s, &g.d(&s.alpha), &dw, tol)
}

/// Dimension of the solution space of homogeneous type conditions on
/// `p`-forms.
fn type_dimension<S: Scalar>(dim: usize, p: usize, degrees: &[usize], cond: impl Fn(&Form<S>) -> Vec<Form<S>>) -> usize {
    let mut pr = Problem::new(dim, degrees);
    let n = pr.push_form(p, cond);
    n - pr.solve(&[]).rank
}

/// Dimensions of the spaces `W₂±`, `W₃` range over for this structure:
/// primitive (1,1)-forms (8) and primitive forms of type (2,1)+(1,2) (12).
pub fn su3_type_dimensions<S: Scalar>(s: &Su3Structure<S>) -> [usize; 2] {
    let om2 = s.omega.wedge(&s.omega);
    let w2 = type_dimension(6, 2, &[2, 6], |b| vec![b.transform(&s.j) - b.clone(), b.wedge(&om2)]);
    let w3 = type_dimension(6, 3, &[5, 6, 6], |b| {
        vec![b.wedge(&s.omega), b.wedge(&s.psi_plus), b.wedge(&s.psi_minus)]
    });
    [w2, w3]
}

/// Dimensions of `Λ¹` (4) and `Λ²₋` (3) for this structure.
pub fn su2_type_dimensions<S: Scalar>(s: &Su2Structure<S>) -> [usize; 2] {
    let l1 = type_dimension(5, 1, &[0], |b| vec![Form::constant(5, b.interior(&s.reeb).scalar_part())]);
    let l2 = type_dimension(5, 2, &[1, 5, 5, 5], |b| asd_constraints(s, b).to_vec());
    [l1, l2]
}

/// Integrability conditions read directly from the exterior derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Su3Predicates {
    /// `d(ω²) = 0` and `dψ⁺ = 0`.
    pub half_flat: bool,
    /// `dω = 0` and `dψ⁺ = 0`.
    pub symplectic_half_flat: bool,
    /// `dω = dψ⁺ = dψ⁻ = 0`.
    pub integrable: bool,
}

pub fn su3_predicates<S: Scalar>(s: &Su3Structure<S>, g: &LieAlgebra, tol: f64) -> Su3Predicates {
    let zero = |f: &Form<S>| is_negligible::<S>(f.max_abs(), tol) && (!S::is_exact() || f.is_zero());
    let dw = zero(&g.d(&s.omega));
    let dw2 = zero(&g.d(&s.omega.wedge(&s.omega)));
    let dp = zero(&g.d(&s.psi_plus));
    let dm = zero(&g.d(&s.psi_minus));
    Su3Predicates {
        half_flat: dw2 && dp,
        symplectic_half_flat: dw && dp,
        integrable: dw && dp && dm,
    }
}

/// `ω₁`, `ω₂∧α` and `ω₃∧α` closed.
pub fn is_hypo<S: Scalar>(s: &Su2Structure<S>, g: &LieAlgebra, tol: f64) -> bool {
    [g.d(&s.omega[0]), g.d(&s.psi2()), g.d(&s.psi3())]
        .iter()
        .all(|f| is_negligible::<S>(f.max_abs(), tol) && (!S::is_exact() || f.is_zero()))
}
