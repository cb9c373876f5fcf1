//! Browser bindings: three operations returning JSON strings.

use halfflat::curvature::{explicit_curvature, holonomy_span};
use halfflat::io::Su3Json;
use halfflat::liealg::{AlgebraCatalog, JacobiResult};
use halfflat::stable::Su3Structure;
use halfflat::structures::g2_model;
use halfflat::torsion::{extract_su3_torsion, su3_predicates};
use halfflat::{LieAlgebra, Q};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const TOL: f64 = 1e-10;

/// A builtin name (`irreducible6`) or structure equations.
fn algebra(s: &str) -> Result<LieAlgebra, String> {
    let s = s.trim();
    let cat = AlgebraCatalog::builtin();
    if let Some(e) = cat.entries.iter().find(|e| e.name == s) {
        return e.algebra().map_err(|e| e.to_string());
    }
    LieAlgebra::parse(s).map_err(|e| e.to_string())
}

pub fn algebra_info(notation: &str) -> Result<Value, String> {
    let g = algebra(notation)?;
    let jacobi = match g.jacobi_check() {
        JacobiResult::Pass => json!({"passed": true}),
        JacobiResult::Fail { generator, .. } => json!({"passed": false, "generator": generator}),
    };
    // Betti numbers of the Chevalley–Eilenberg complex
    let n = g.dim();
    let rank = |k: usize| if k < n { g.d_matrix::<Q>(k).rank() } else { 0 };
    let betti: Vec<usize> = (0..=n)
        .map(|k| {
            let dim = halfflat::exterior::masks_of_degree(n, k).len();
            dim - rank(k) - if k > 0 { rank(k - 1) } else { 0 }
        })
        .collect();
    let center: Vec<Vec<String>> = g
        .center()
        .iter()
        .map(|v| v.iter().map(ToString::to_string).collect())
        .collect();
    Ok(json!({
        "notation": g.notation(),
        "dim": n,
        "jacobi": jacobi,
        "center": center,
        "betti": betti,
    }))
}

fn torsion_of<S: halfflat::io::JsonScalar>(g: &LieAlgebra, j: &Su3Json<S>) -> Result<Value, String> {
    let s = Su3Structure::new(&j.omega, &j.psi_plus, TOL).map_err(|e| e.to_string())?;
    let w = extract_su3_torsion(&s, g, TOL).map_err(|e| e.to_string())?;
    let p = su3_predicates(&s, g, TOL);
    Ok(json!({
        "components": w.table().into_iter().map(|(n, v)| json!({"name": n, "norm": v})).collect::<Vec<_>>(),
        "nonzero": w.nonzero(TOL),
        "reconstruction": w.reconstruction_residual,
        "halfFlat": p.half_flat,
        "symplecticHalfFlat": p.symplectic_half_flat,
        "integrable": p.integrable,
    }))
}

/// Torsion of `{"omega", "psiPlus"}`; rational coefficients are kept exact.
pub fn torsion_info(notation: &str, structure: &str) -> Result<Value, String> {
    let g = algebra(notation)?;
    if g.dim() != 6 {
        return Err(format!("expected a 6-dimensional algebra, got {}", g.notation()));
    }
    if let Ok(j) = serde_json::from_str::<Su3Json<Q>>(structure) {
        return torsion_of(&g, &j);
    }
    let j: Su3Json<f64> = serde_json::from_str(structure).map_err(|e| format!("not an SU(3)-structure: {e}"))?;
    torsion_of(&g, &j)
}

/// Curvature of the explicit G₂ metric at `u`: sectional curvatures of the
/// coordinate planes, Ricci norm and holonomy span.
pub fn curvature_info(u: f64) -> Result<Value, String> {
    if !(u > 1.0 / 3f64.sqrt()) {
        return Err("u must exceed 1/sqrt(3)".into());
    }
    let c = explicit_curvature(u).map_err(|e| e.to_string())?;
    let sectional: Vec<Vec<f64>> = (0..7)
        .map(|i| (0..7).map(|j| if i == j { 0.0 } else { c.get(i, j, i, j) }).collect())
        .collect();
    let h = holonomy_span(&c.operators(), Some(&g2_model::<f64>()));
    Ok(json!({
        "u": u,
        "sectional": sectional,
        "ricciNorm": c.ricci().norm(),
        "scalarCurvature": c.scalar_curvature(),
        "holonomyDim": h.dim,
        "stabilizerResidual": h.stabilizer_residual,
    }))
}

fn wrap(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

#[wasm_bindgen(js_name = algebraInfo)]
pub fn algebra_info_js(notation: &str) -> String {
    wrap(algebra_info(notation))
}

#[wasm_bindgen(js_name = torsionInfo)]
pub fn torsion_info_js(notation: &str, structure: &str) -> String {
    wrap(torsion_info(notation, structure))
}

#[wasm_bindgen(js_name = curvatureInfo)]
pub fn curvature_info_js(u: f64) -> String {
    wrap(curvature_info(u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn betti_numbers_of_the_irreducible_algebra() {
        let v = algebra_info("irreducible6").unwrap();
        assert_eq!(v["betti"], json!([1, 3, 8, 12, 8, 3, 1]));
        assert_eq!(v["jacobi"]["passed"], json!(true));
        let bad = algebra_info("(0,0,0,12,34)").unwrap();
        assert_eq!(bad["jacobi"], json!({"passed": false, "generator": 5}));
    }

    #[test]
    fn torsion_of_the_u_one_pair() {
        let s = r#"{"omega":{"degree":2,"coeffs":{"16":"1","25":"-1","34":"-2"}},
                    "psiPlus":{"degree":3,"coeffs":{"123":"1","145":"2","246":"2","356":"-1"}}}"#;
        let v = torsion_info("(0,0,0,12,13,23)", s).unwrap();
        assert_eq!(v["nonzero"], json!(["W2-"]));
        assert_eq!(v["symplecticHalfFlat"], json!(true));
        assert!(torsion_info("(0,0,0,12,13)", s).is_err());
    }

    #[test]
    fn curvature_is_ricci_flat_with_g2_holonomy() {
        let v = curvature_info(1.0).unwrap();
        assert!(v["ricciNorm"].as_f64().unwrap() < 1e-8);
        assert_eq!(v["holonomyDim"], json!(14));
        assert!(curvature_info(0.5).is_err());
    }
}
