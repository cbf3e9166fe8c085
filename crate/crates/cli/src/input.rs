//! Payload parsing. Matrices and rows are JSON arrays of element strings;
//! the bracketed text form printed by the library is accepted as well.

use std::path::Path;

use unirow::cert::matrix_from_strings;
use unirow::parse::{parse_element, parse_ring};
use unirow::{Error, Result, Ring, RingElement, RingMatrix};

/// The argument itself, or the contents of the file it names.
pub fn load(arg: &str) -> Result<String> {
    let path = arg.strip_prefix('@').unwrap_or(arg);
    if arg.starts_with('@') || (!arg.contains(['[', '"', '{']) && Path::new(path).is_file()) {
        return std::fs::read_to_string(path).map_err(|e| Error::Json(format!("cannot read {path}: {e}")));
    }
    Ok(arg.to_string())
}

pub fn ring(spec: &str, trunc: Option<usize>) -> Result<Ring> {
    let r = parse_ring(spec)?;
    match trunc {
        Some(n) => r.with_truncation(n),
        None => Ok(r),
    }
}

fn split_top(body: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in body.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if ch == ',' && depth == 0 {
            parts.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() || !parts.is_empty() {
        parts.push(cur);
    }
    parts.into_iter().map(|s| s.trim().to_string()).collect()
}

fn unbracket(s: &str) -> Option<&str> {
    s.trim().strip_prefix('[')?.strip_suffix(']')
}

fn string_rows(text: &str) -> Result<Vec<Vec<String>>> {
    if let Ok(rows) = serde_json::from_str::<Vec<Vec<String>>>(text) {
        return Ok(rows);
    }
    let shape = || Error::Parse { line: 1, column: 1, message: "expected a matrix [[a, b], [c, d]]".into() };
    let body = unbracket(text).ok_or_else(shape)?;
    split_top(body).iter().map(|r| unbracket(r).map(split_top).ok_or_else(shape)).collect()
}

pub fn matrix(ring: &Ring, text: &str) -> Result<RingMatrix> {
    matrix_from_strings(ring, &string_rows(text)?)
}

pub fn strings(text: &str) -> Vec<String> {
    if let Ok(v) = serde_json::from_str::<Vec<String>>(text) {
        return v;
    }
    split_top(unbracket(text).unwrap_or(text))
}

pub fn row(ring: &Ring, text: &str) -> Result<Vec<RingElement>> {
    let items = strings(text);
    if items.is_empty() {
        return Err(Error::InvalidDimension("empty row".into()));
    }
    items.iter().map(|s| parse_element(ring, s)).collect()
}
