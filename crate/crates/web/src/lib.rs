//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Each export returns a flat `Float64Array`; the plain functions in
//! [`ops`] do the work and are what the native tests call.

use wasm_bindgen::prelude::*;

pub mod ops;

fn js<T>(r: Result<T, String>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// Rows `[t, K0, K1, dK0, dK1]` for `n` times in `[0, t_max]`.
#[wasm_bindgen]
pub fn propagator_curves(lambda2: f64, t_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    js(ops::propagator_curves(lambda2, t_max, n))
}

/// Rows `[t, ||u||, ||grad u||, ||u_t||, ||grad u_t||]` for random data.
#[wasm_bindgen]
pub fn decay_series(group: &str, bandlimit: u32, seed: u32, t_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    js(ops::decay_series(group, bandlimit, seed as u64, t_max, n))
}

/// Row-major `res x res` samples of `u(t)` on the flat 2-torus.
#[wasm_bindgen]
pub fn torus_snapshot(bandlimit: u32, seed: u32, t: f64, res: usize) -> Result<Vec<f64>, JsError> {
    js(ops::torus_snapshot(bandlimit, seed as u64, t, res))
}

#[wasm_bindgen]
pub fn version() -> String {
    liewave_core::VERSION.to_string()
}
