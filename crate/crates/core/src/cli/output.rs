//! Number rounding and rendering of result documents.

use serde_json::{Map, Value};

pub const LENGTH_DIGITS: usize = 9;
pub const RATIO_DIGITS: usize = 7;

/// `x` rounded to `digits` significant digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Fixed notation with `digits` significant digits, scientific outside `1e-4..1e9`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-4..9).contains(&exponent) {
        return format!("{:.*e}", digits - 1, x);
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    format!("{:.*}", decimals, x)
}

fn is_ratio_key(key: &str) -> bool {
    key == "sr" || key.starts_with("sr_") || key.ends_with("_sr")
}

/// Rounds every float in `value`: ratio fields to 7 significant digits, the rest to 9.
pub fn round_document(value: &mut Value, ratio: bool) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or_default();
            let digits = if ratio { RATIO_DIGITS } else { LENGTH_DIGITS };
            if let Some(rounded) = serde_json::Number::from_f64(round_significant(x, digits)) {
                *n = rounded;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| round_document(v, ratio)),
        Value::Object(map) => {
            for (key, v) in map.iter_mut() {
                round_document(v, ratio || is_ratio_key(key));
            }
        }
        _ => {}
    }
}

/// `path = value` lines for every leaf of `value`.
pub fn text_lines(value: &Value) -> Vec<String> {
    let mut out = Vec::new();
    flatten(value, String::new(), false, &mut out);
    out
}

fn flatten(value: &Value, path: String, ratio: bool, out: &mut Vec<String>) {
    match value {
        Value::Object(map) => flatten_map(map, &path, ratio, out),
        Value::Array(items) if items.iter().all(|v| v.is_number()) && !items.is_empty() => {
            let digits = if ratio { RATIO_DIGITS } else { LENGTH_DIGITS };
            let cells: Vec<String> = items.iter().map(|v| leaf(v, digits)).collect();
            out.push(format!("{path} = [{}]", cells.join(", ")));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, format!("{path}[{i}]"), ratio, out);
            }
        }
        _ => out.push(format!("{path} = {}", leaf(value, if ratio { RATIO_DIGITS } else { LENGTH_DIGITS }))),
    }
}

fn flatten_map(map: &Map<String, Value>, path: &str, ratio: bool, out: &mut Vec<String>) {
    for (key, v) in map {
        let child = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
        flatten(v, child, ratio || is_ratio_key(key), out);
    }
}

fn leaf(value: &Value, digits: usize) -> String {
    match value {
        Value::Number(n) if n.is_f64() => format_significant(n.as_f64().unwrap_or_default(), digits),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
