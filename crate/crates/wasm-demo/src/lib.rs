//! Browser bindings for three interactive plots: chain decay, the two-term
//! monogamy inequality and the squeezed-vacuum ratio negativity.

use qchain_core::gaussian::{cm_ratio_negativity, tmsvs_cm};
use qchain_core::measures::{MeasureKind, PtSpectrum};
use qchain_core::monogamy::{alpha_threshold, ineq_xy_excess};
use qchain_core::states::{tmsvs_truncated, TmsvsSpec};
use qchain_core::swapping::{chain_sweep, LinkResource};
use qchain_core::{Error, Result};
use wasm_bindgen::prelude::*;

/// Largest chain length and grid size the page may request.
const MAX_POINTS: usize = 400;

fn check_points(n: usize) -> Result<()> {
    if (2..=MAX_POINTS).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "point count must lie in [2, {MAX_POINTS}], got {n}"
        )))
    }
}

/// `E(l)` for `l = 1..=max_l` identical links, followed by `xi`.
pub fn decay_curve(kind: &str, param: f64, max_l: usize, alpha: f64) -> Result<Vec<f64>> {
    check_points(max_l)?;
    let (link, measure) = match kind {
        "tmsvs" => (LinkResource::tmsvs(param)?, MeasureKind::AlphaRatio),
        "qubit" => (LinkResource::qubit_from_concurrence(param)?, MeasureKind::Concurrence),
        other => return Err(Error::InvalidParameter(format!("unknown link kind {other:?}"))),
    };
    let alpha = (measure == MeasureKind::AlphaRatio).then_some(alpha);
    let rows = chain_sweep(&link, max_l, measure, alpha)?;
    let xi = rows[0].xi;
    let mut out: Vec<f64> = rows.into_iter().map(|r| r.value).collect();
    out.push(xi);
    Ok(out)
}

/// Row-major `n x n` excess `h(x)^a + h(y)^a - h(|(x, y)|)^a` over `[0, 1/2]^2`;
/// positive cells violate the inequality.
pub fn inequality_excess(alpha: f64, n: usize) -> Result<Vec<f64>> {
    check_points(n)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let step = 0.5 / (n - 1) as f64;
    Ok((0..n * n)
        .map(|k| ineq_xy_excess((k / n) as f64 * step, (k % n) as f64 * step, alpha))
        .collect())
}

/// Three curves over `r` in `(0, r_max]`, concatenated: `tanh r`, the Fock
/// value at `cutoff`, and the covariance-matrix value.
pub fn tmsvs_ratio_curves(r_max: f64, points: usize, cutoff: usize) -> Result<Vec<f64>> {
    check_points(points)?;
    if !(r_max > 0.0 && r_max <= 3.0) {
        return Err(Error::InvalidParameter(format!(
            "r_max must lie in (0, 3], got {r_max}"
        )));
    }
    let rs: Vec<f64> = (1..=points).map(|i| r_max * i as f64 / points as f64).collect();
    let mut analytic = Vec::with_capacity(points);
    let mut fock = Vec::with_capacity(points);
    let mut cm = Vec::with_capacity(points);
    for &r in &rs {
        analytic.push(r.tanh());
        // a coarse cutoff may drop too much weight; plot a gap instead
        let n = TmsvsSpec::with_cutoff(r, cutoff)
            .and_then(|s| tmsvs_truncated(&s))
            .and_then(|psi| PtSpectrum::of_pure(&psi))
            .map(|pt| pt.negativity());
        fock.push(n.map(|n| n / (n + 1.0)).unwrap_or(f64::NAN));
        cm.push(cm_ratio_negativity(&tmsvs_cm(r)?, &[0])?);
    }
    Ok([analytic, fock, cm].concat())
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = chainDecay)]
pub fn chain_decay(kind: &str, param: f64, max_l: usize, alpha: f64) -> Result<Vec<f64>, JsError> {
    decay_curve(kind, param, max_l, alpha).map_err(js)
}

#[wasm_bindgen(js_name = inequalityHeatmap)]
pub fn inequality_heatmap(alpha: f64, n: usize) -> Result<Vec<f64>, JsError> {
    inequality_excess(alpha, n).map_err(js)
}

#[wasm_bindgen(js_name = tmsvsCurves)]
pub fn tmsvs_curves(r_max: f64, points: usize, cutoff: usize) -> Result<Vec<f64>, JsError> {
    tmsvs_ratio_curves(r_max, points, cutoff).map_err(js)
}

#[wasm_bindgen(js_name = alphaThreshold)]
pub fn threshold() -> f64 {
    alpha_threshold()
}
