//! Browser bindings: an entropy heatmap of `phi`, the inner infimum at a
//! chosen `(t, alpha)`, and the maximal correlation of a binary pair.
//!
//! Each export is a thin wrapper over a plain Rust function returning JSON,
//! so the logic is testable without a JS host.

use serde_json::json;
use ucsb::maxcorr::binary_correlation_formula;
use ucsb::optimizer::SearchConfig;
use ucsb::scalar::{h2, phi};
use ucsb::{coupling_from_pq, inner_inf, maximal_correlation, Probability};
use wasm_bindgen::prelude::*;

const MAX_SURFACE: usize = 401;
const MAX_GRID: usize = 64;

fn prob(name: &'static str, v: f64) -> Result<Probability, String> {
    Probability::named(name, v).map_err(|e| e.to_string())
}

/// `h(phi(rho, p, q))` on an `n x n` grid over `[0, 1]^2`, row-major with
/// `p` along rows.
pub fn phi_entropy_surface(rho: f64, n: usize) -> Result<Vec<f64>, String> {
    let rho = prob("rho", rho)?;
    if !(2..=MAX_SURFACE).contains(&n) {
        return Err(format!("n = {n} must lie in 2..={MAX_SURFACE}"));
    }
    let step = 1.0 / (n - 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let p = Probability::saturating(i as f64 * step);
        for j in 0..n {
            let q = Probability::saturating(j as f64 * step);
            out.push(h2(phi(rho, p, q).get()));
        }
    }
    Ok(out)
}

/// Inner infimum of the ratio at `(t, alpha)` as a JSON report.
pub fn inner_inf_json(t: f64, alpha: f64, grid: usize) -> Result<String, String> {
    if !(t > 0.0 && t < 0.5) {
        return Err("t must lie in (0, 1/2)".into());
    }
    if !(8..=MAX_GRID).contains(&grid) {
        return Err(format!("grid = {grid} must lie in 8..={MAX_GRID}"));
    }
    let cfg = SearchConfig {
        grid_points_per_axis: grid,
        refine_rounds: 4,
        multistart_count: 8,
        ..SearchConfig::default()
    };
    let r = inner_inf(prob("alpha", alpha)?, prob("t", t)?, &cfg).map_err(|e| e.to_string())?;
    serde_json::to_string(&json!({
        "min_ratio": r.min_ratio,
        "certifies": r.min_ratio > 1.0,
        "a": r.argmin.a(),
        "argmin": r.argmin,
        "branch": r.branch,
        "evaluations": r.evaluations,
    }))
    .map_err(|e| e.to_string())
}

/// Maximal correlation of the binary pair with `P(X=1) = p`, `P(Y=1) = q`,
/// `P(X=1, Y=1) = r`, next to the closed form.
pub fn maxcorr_pq_json(p: f64, q: f64, r: f64) -> Result<String, String> {
    let joint =
        coupling_from_pq(prob("p", p)?, prob("q", q)?, prob("r", r)?).map_err(|e| e.to_string())?;
    let rho = maximal_correlation(&joint).map_err(|e| e.to_string())?;
    serde_json::to_string(&json!({
        "rho_m": rho,
        "formula": binary_correlation_formula(p, q, r),
        "matrix": joint.matrix(),
    }))
    .map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = phiEntropySurface)]
pub fn phi_entropy_surface_js(rho: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    phi_entropy_surface(rho, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = innerInf)]
pub fn inner_inf_js(t: f64, alpha: f64, grid: usize) -> Result<String, JsValue> {
    inner_inf_json(t, alpha, grid).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = maxcorrPq)]
pub fn maxcorr_pq_js(p: f64, q: f64, r: f64) -> Result<String, JsValue> {
    maxcorr_pq_json(p, q, r).map_err(|e| JsValue::from_str(&e))
}
