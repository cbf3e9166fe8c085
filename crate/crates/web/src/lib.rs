//! Browser bindings. Every export takes plain strings and returns a JSON
//! string; failures come back as a JS string error.

use serde_json::json;
use unirow::cert::{matrix_from_strings, Certificate};
use unirow::factor::{bound_table, factor_radical_perturbation, factor_sl2_triangular, min_triangular_length_2x2};
use unirow::parse::parse_ring;
use unirow::RingMatrix;
use wasm_bindgen::prelude::*;

fn matrix(ring: &str, text: &str) -> Result<RingMatrix, String> {
    let ring = parse_ring(ring).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<String>> = serde_json::from_str(text).map_err(|e| format!("matrix: {e}"))?;
    matrix_from_strings(&ring, &rows).map_err(|e| e.to_string())
}

/// SL2 factorization into at most four triangular factors, as a certificate.
pub fn sl2_json(ring: &str, text: &str) -> Result<String, String> {
    let m = matrix(ring, text)?;
    let w = factor_sl2_triangular(&m, None).map_err(|e| e.to_string())?;
    let min = min_triangular_length_2x2(&m).map_err(|e| e.to_string())?;
    let cert = Certificate::from_word(&w, Some(4));
    let verified = cert.recheck();
    Ok(json!({ "min_length": min, "certificate": cert, "verified": verified }).to_string())
}

/// Radical perturbation of the identity into elementaries and one scalar.
pub fn lemma23_json(ring: &str, text: &str) -> Result<String, String> {
    let a = matrix(ring, text)?;
    let m = a.rows();
    let w = factor_radical_perturbation(&a).map_err(|e| e.to_string())?;
    let cert = Certificate::from_word(&w, Some((m + 4) * (m - 1)));
    let verified = cert.recheck();
    Ok(json!({ "elementary_count": w.elementary_count(), "certificate": cert, "verified": verified }).to_string())
}

pub fn bounds_json(d: u32, v2d: u32) -> Result<String, String> {
    let r = bound_table(d.into(), v2d.into()).map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn factor_sl2(ring: &str, matrix: &str) -> Result<String, JsValue> {
    sl2_json(ring, matrix).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn factor_lemma23(ring: &str, matrix: &str) -> Result<String, JsValue> {
    lemma23_json(ring, matrix).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bounds(d: u32, v2d: u32) -> Result<String, JsValue> {
    bounds_json(d, v2d).map_err(|e| JsValue::from_str(&e))
}
