//! Browser demo. Each export returns a JSON string; the `*_json` functions
//! hold the logic so they run natively in tests.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use plc_core::arithmetic::{check_digits, format_rational};
use plc_core::repetitions::{find_fractional_squares, find_overlaps, Squares};
use plc_core::tm::extract_tm_prefix;
use plc_core::witness::{certify_prefix, quality_interval};
use plc_core::words::parse_morphism;
use plc_core::{BigRational, WordStream};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_WORD: usize = 4096;
const MAX_Q: u64 = 4096;
const MAX_CERTS: usize = 20;

fn approx(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Prefix of the fixed point with its overlaps, squares-plus and best
/// certificates.
pub fn generate_json(rules: &str, start: char, length: usize, p: u32) -> Result<Value, String> {
    if length > MAX_WORD {
        return Err(format!("length is capped at {MAX_WORD}"));
    }
    let m = parse_morphism(rules).map_err(|e| e.to_string())?;
    let start = u8::try_from(start).map_err(|_| "start letter must be ASCII".to_string())?;
    let word = WordStream::fixed_point(m, start)
        .and_then(|s| s.try_prefix(length))
        .map_err(|e| e.to_string())?;
    let squares = find_fractional_squares(&word, 1, Squares::Two).map_err(|e| e.to_string())?;
    let certificates = match check_digits(&word, p) {
        Ok(()) => {
            let mut certs = certify_prefix(&word, p, 1).map_err(|e| e.to_string())?;
            certs.truncate(MAX_CERTS);
            json!(certs)
        }
        Err(_) => Value::Null,
    };
    Ok(json!({
        "word": word,
        "overlaps": find_overlaps(&word, 200),
        "squares": squares,
        "certificates": certificates,
    }))
}

/// `q·‖q p^k x‖` enclosures for `q ≤ max_q` and the running minimum of the
/// upper ends.
pub fn quality_curve_json(digits: &str, p: u32, max_q: u64, k: usize) -> Result<Value, String> {
    if max_q == 0 || max_q > MAX_Q {
        return Err(format!("Q must lie in 1..={MAX_Q}"));
    }
    let digits: Vec<u8> = digits.bytes().filter(|c| !c.is_ascii_whitespace()).collect();
    check_digits(&digits, p).map_err(|e| e.to_string())?;
    let mut points = Vec::with_capacity(max_q as usize);
    let mut best: Option<(BigRational, u64)> = None;
    for q in 1..=max_q {
        let iv = quality_interval(&digits, p, &BigUint::from(q), k).map_err(|e| e.to_string())?;
        if best.as_ref().is_none_or(|(b, _)| iv.hi < *b) {
            best = Some((iv.hi.clone(), q));
        }
        points.push(json!({ "q": q, "lo": approx(&iv.lo), "hi": approx(&iv.hi) }));
    }
    let (hi, q) = best.expect("max_q ≥ 1");
    Ok(json!({
        "points": points,
        "best": { "q": q, "hi": format_rational(&hi), "hi_approx": approx(&hi) },
    }))
}

/// Decomposition chain of an overlap-free binary word, with the extracted
/// Thue–Morse block.
pub fn tm_chain_json(word: &str) -> Result<Value, String> {
    let w: Vec<u8> = word.bytes().filter(|c| !c.is_ascii_whitespace()).collect();
    if w.len() > MAX_WORD {
        return Err(format!("word is capped at {MAX_WORD} letters"));
    }
    let chain = extract_tm_prefix(&w).map_err(|e| e.to_string())?;
    let block = String::from_utf8_lossy(&w[chain.offset..chain.offset + chain.tm_prefix_len]).into_owned();
    Ok(json!({ "chain": chain, "block": block }))
}

fn export(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn generate(rules: &str, start: char, length: usize, p: u32) -> Result<String, JsError> {
    export(generate_json(rules, start, length, p))
}

#[wasm_bindgen]
pub fn quality_curve(digits: &str, p: u32, max_q: u32, k: usize) -> Result<String, JsError> {
    export(quality_curve_json(digits, p, max_q.into(), k))
}

#[wasm_bindgen]
pub fn tm_chain(word: &str) -> Result<String, JsError> {
    export(tm_chain_json(word))
}
