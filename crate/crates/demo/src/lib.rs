//! WebAssembly bindings behind `www/index.html`. Every export returns a JSON
//! string that the page draws on a canvas.

pub mod api;

use wasm_bindgen::prelude::*;

fn js_err(e: qridge::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Per-term values of a 3-qubit circuit and a 4-block model, before and after
/// shifting the parameters that belong to term `term`.
#[wasm_bindgen]
pub fn locality(seed: u64, term: usize, shift: f64) -> Result<String, JsValue> {
    api::locality(seed, term, shift).map_err(js_err)
}

/// Least-squares fit of integer-frequency exponentials to a periodic target.
#[wasm_bindgen(js_name = fourierFit)]
pub fn fourier_fit(target: &str, max_frequency: usize, n_points: usize) -> Result<String, JsValue> {
    api::fourier_fit(target, max_frequency, n_points).map_err(js_err)
}

/// Direct measurement against the ridge sum for a random ansatz.
#[wasm_bindgen]
pub fn equivalence(n_qubits: usize, layers: usize, seed: u64) -> Result<String, JsValue> {
    api::equivalence(n_qubits, layers, seed).map_err(js_err)
}
