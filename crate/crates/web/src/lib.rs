//! wasm-bindgen exports for the static page in `www/`.

pub mod ops;

use wasm_bindgen::prelude::*;

fn js(e: String) -> JsError {
    JsError::new(&e)
}

/// `[Re ζ, Im ζ, |ζ|]` at `σ + it`.
#[wasm_bindgen]
pub fn zeta(sigma: f64, t: f64) -> Result<Vec<f64>, JsError> {
    ops::zeta_point(sigma, t).map(|v| v.to_vec()).map_err(js)
}

/// Samples of Hardy's `Z` on `[from, to]`.
#[wasm_bindgen(js_name = zCurve)]
pub fn z_curve(from: f64, to: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    ops::z_curve(from, to, samples).map_err(js)
}

/// Zero ordinates in `[from, to]`.
#[wasm_bindgen]
pub fn zeros(from: f64, to: f64) -> Result<Vec<f64>, JsError> {
    ops::zeros_between(from, to).map_err(js)
}

/// `[distance, phase bound, (2/π)∫|f|]` at one shift.
#[wasm_bindgen(js_name = shiftDistance)]
pub fn shift_distance(target: &str, h: f64, shift: f64) -> Result<Vec<f64>, JsError> {
    ops::shift_distance(target, h, shift).map(|v| v.to_vec()).map_err(js)
}
