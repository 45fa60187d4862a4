//! Canonical JSON reading and writing shared by the file formats.
//!
//! Writers emit objects with keys in sorted order and floats in shortest
//! round-trip decimal, so identical inputs always produce byte-identical
//! files. Readers accept the strings "NaN", "Infinity" and "-Infinity" in
//! numeric positions so that non-finite entries fail the finiteness checks
//! with a targeted error instead of a generic parse error.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

/// Serialize with sorted object keys, two-space indentation and a trailing
/// newline. Key order is enforced here rather than left to the serializer so
/// output bytes never depend on struct field order or map implementation.
pub fn canonical_json_string<T: Serialize>(value: &T) -> Result<String> {
    let tree = serde_json::to_value(value).map_err(|e| Error::Format {
        path: None,
        msg: format!("serialization failed: {e}"),
    })?;
    let mut out = String::new();
    write_value(&tree, 0, &mut out);
    out.push('\n');
    Ok(out)
}

pub fn write_canonical_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = canonical_json_string(value)?;
    let mut file = std::fs::File::create(path).map_err(|e| Error::Io {
        path: Some(path.display().to_string()),
        source: e,
    })?;
    file.write_all(text.as_bytes()).map_err(|e| Error::Io {
        path: Some(path.display().to_string()),
        source: e,
    })
}

fn write_value(value: &Value, indent: usize, out: &mut String) {
    match value {
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, key) in keys.iter().enumerate() {
                push_indent(indent + 1, out);
                out.push_str(&serde_json::to_string(key).expect("string serializes"));
                out.push_str(": ");
                write_value(&map[key.as_str()], indent + 1, out);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            push_indent(indent, out);
            out.push('}');
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // Scalar-only arrays stay on one line; nested structures indent.
            if items.iter().all(|v| !v.is_object() && !v.is_array()) {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(item, indent, out);
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (i, item) in items.iter().enumerate() {
                    push_indent(indent + 1, out);
                    write_value(item, indent + 1, out);
                    if i + 1 < items.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                push_indent(indent, out);
                out.push(']');
            }
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalar serializes")),
    }
}

fn push_indent(depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// Read and parse a JSON file into a generic tree.
pub fn read_json_file(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: Some(path.display().to_string()),
        source: e,
    })?;
    serde_json::from_str(&text)
        .map_err(|e| Error::format(Some(path), format!("invalid JSON: {e}")))
}

/// Check the `format` discriminator of a parsed file.
pub fn expect_format(tree: &Value, expected: &str, path: &Path) -> Result<()> {
    match tree.get("format") {
        Some(Value::String(s)) if s == expected => Ok(()),
        Some(Value::String(s)) => Err(Error::format(
            Some(path),
            format!("key \"format\": expected {expected:?}, found {s:?}"),
        )),
        Some(_) => Err(Error::format(Some(path), "key \"format\" must be a string")),
        None => Err(Error::format(Some(path), "missing key \"format\"")),
    }
}

/// Extract a double from a numeric position, accepting the special strings
/// "NaN", "Infinity" and "-Infinity" (rejected later by finiteness checks).
pub fn lenient_f64(value: &Value, context: &str) -> Result<f64> {
    match value {
        Value::Number(num) => num.as_f64().ok_or_else(|| Error::Format {
            path: None,
            msg: format!("{context}: number out of double range"),
        }),
        Value::String(s) => match s.as_str() {
            "NaN" => Ok(f64::NAN),
            "Infinity" => Ok(f64::INFINITY),
            "-Infinity" => Ok(f64::NEG_INFINITY),
            other => Err(Error::Format {
                path: None,
                msg: format!("{context}: expected a number, found string {other:?}"),
            }),
        },
        other => Err(Error::Format {
            path: None,
            msg: format!("{context}: expected a number, found {other}"),
        }),
    }
}
