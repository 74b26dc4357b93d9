//! Browser bindings for the divkit explorers. Each export returns a JSON
//! string; the `*_report` functions behind them are plain Rust for testing.

use divkit::copulas::{
    checkerboard, fgm_divergence_quadrature, fgm_pearson_closed_form, grid_divergence, FgmCopula,
};
use divkit::csiszar::{csiszar_index, mutual_information};
use divkit::divergence::two_point_divergence;
use divkit::measures::JointDistribution;
use divkit::{builtin, BuiltinKind, ExtReal, Generator};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn number(x: ExtReal) -> Value {
    match x {
        ExtReal::Finite(v) => json!(v),
        ExtReal::PosInf => json!("inf"),
    }
}

fn generator(name: &str) -> Result<Generator, String> {
    name.parse::<BuiltinKind>().map(builtin).map_err(|e| e.to_string())
}

/// Checkerboard copula of the Bernoulli pair `P(X=1) = p`, `P(Y=1) = q`,
/// `P(X=1, Y=1) = r`, with its Csiszar index under every fixed generator.
pub fn bernoulli_report(p: f64, q: f64, r: f64) -> Result<Value, String> {
    let j = JointDistribution::bernoulli_pair(p, q, r).map_err(|e| e.to_string())?;
    let cb = checkerboard(&j);
    let (m, n) = cb.shape();
    let density: Vec<Vec<f64>> = (0..m).map(|i| (0..n).map(|k| cb.density(i, k)).collect()).collect();
    let table: Vec<Value> = BuiltinKind::FIXED
        .iter()
        .map(|&kind| {
            let g = builtin(kind);
            json!({
                "generator": kind.cli_name(),
                "value": number(csiszar_index(&j, &g).value),
                "grid": number(grid_divergence(&cb, &g)),
            })
        })
        .collect();
    Ok(json!({
        "u_breaks": cb.u_breaks(),
        "v_breaks": cb.v_breaks(),
        "density": density,
        "indices": table,
        "mutual_information": mutual_information(&j),
    }))
}

/// FGM density on a `k x k` grid of cell centres and `D_f(Pi || C_theta)`.
pub fn fgm_report(theta: f64, f: &str, k: usize, order: usize) -> Result<Value, String> {
    let c = FgmCopula::new(theta).map_err(|e| e.to_string())?;
    let g = generator(f)?;
    let k = k.clamp(2, 200);
    let centre = |i: usize| (i as f64 + 0.5) / k as f64;
    let density: Vec<Vec<f64>> = (0..k).map(|i| (0..k).map(|j| c.density(centre(i), centre(j))).collect()).collect();
    let value = fgm_divergence_quadrature(&c, &g, order).map_err(|e| e.to_string())?;
    let closed_form = (f == "pearson").then(|| fgm_pearson_closed_form(theta));
    Ok(json!({
        "theta": theta,
        "generator": f,
        "density": density,
        "value": value,
        "closed_form": closed_form,
    }))
}

/// `s -> D_f(P_s || P_t)` on `points` interior values of `s`.
pub fn two_point_report(t: f64, f: &str, points: usize) -> Result<Value, String> {
    let g = generator(f)?;
    let points = points.clamp(2, 2000);
    let mut s = Vec::with_capacity(points);
    let mut d = Vec::with_capacity(points);
    for i in 0..points {
        let x = (i as f64 + 0.5) / points as f64;
        s.push(x);
        d.push(number(two_point_divergence(x, t, &g).map_err(|e| e.to_string())?));
    }
    Ok(json!({ "t": t, "generator": f, "s": s, "divergence": d }))
}

fn export(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bernoulli(p: f64, q: f64, r: f64) -> Result<String, JsError> {
    export(bernoulli_report(p, q, r))
}

#[wasm_bindgen]
pub fn fgm(theta: f64, f: &str, k: usize, order: usize) -> Result<String, JsError> {
    export(fgm_report(theta, f, k, order))
}

#[wasm_bindgen]
pub fn two_point(t: f64, f: &str, points: usize) -> Result<String, JsError> {
    export(two_point_report(t, f, points))
}
