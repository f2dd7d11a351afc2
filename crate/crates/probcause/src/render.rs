//! Deterministic output rendering.
//!
//! Machine output (JSON) must be stable enough to diff: object keys in byte
//! order, every floating-point number at exactly six decimals, compact
//! separators. Under that discipline, parsing a rendered document and
//! rendering it again reproduces the original bytes. Human output is a plain aligned
//! two-column table with values at two decimals.

use std::fmt::Write as _;

use serde_json::Value;

/// Renders a JSON value compactly: object keys sorted by byte order, floats
/// at six decimals, integers plain, strings with standard JSON escaping.
///
/// Rendering, re-parsing, and rendering again yields identical bytes, since
/// six-decimal literals parse back to floats and integers stay integers.
pub fn render_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value);
    out
}

fn write_value(out: &mut String, value: &Value) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                let f = n.as_f64().expect("JSON numbers are i64, u64, or f64");
                let _ = write!(out, "{f:.6}");
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("strings always serialize"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, item);
            }
            out.push(']');
        }
        Value::Object(map) => {
            // Sorted explicitly rather than relying on the map's own order,
            // so the byte contract survives any change of backing map.
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, key) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("strings always serialize"));
                out.push(':');
                write_value(out, &map[key]);
            }
            out.push('}');
        }
    }
}

/// Formats a probability-scale value for human tables.
pub fn fixed2(value: f64) -> String {
    format!("{value:.2}")
}

/// Renders label/value rows as an aligned two-column table, one row per
/// line, labels padded to the widest.
pub fn two_column_table(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(label, _)| label.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (label, value) in rows {
        let _ = writeln!(out, "{label:<width$}  {value}");
    }
    out
}
