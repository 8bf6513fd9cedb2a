//! Reports: canonical JSON (sorted keys, exact rationals as strings) and a
//! stable text rendering derived from it.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    /// Flags that influenced the result, echoed back.
    pub options: Map<String, Value>,
    pub input_digest: String,
    pub result: Value,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("command".into(), Value::String(self.command.clone()));
        out.insert("options".into(), Value::Object(self.options.clone()));
        out.insert("input_digest".into(), Value::String(self.input_digest.clone()));
        out.insert("result".into(), self.result.clone());
        out.insert("tool_version".into(), Value::String(TOOL_VERSION.into()));
        Value::Object(out)
    }
}

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    let value = report.to_json();
    let mut out = match format {
        Format::Json => serde_json::to_string_pretty(&value).expect("reports serialize"),
        Format::Text => {
            let mut s = String::new();
            render_text(&value, 0, &mut s);
            s.pop();
            s
        }
    };
    out.push('\n');
    out.into_bytes()
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = items.iter().filter_map(scalar).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        Value::Array(items) if items.is_empty() => Some("[]".into()),
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}- #{i}\n"));
                        render_text(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

/// Checks the envelope of a parsed report and that no number in it is
/// fractional.
pub fn validate_report(value: &Value) -> Result<(), String> {
    let obj = value.as_object().ok_or("report is not an object")?;
    let expected = ["command", "input_digest", "options", "result", "tool_version"];
    let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    if keys != expected {
        return Err(format!("unexpected report keys {keys:?}"));
    }
    for key in ["command", "input_digest", "tool_version"] {
        if !obj[key].is_string() {
            return Err(format!("`{key}` is not a string"));
        }
    }
    let digest = obj["input_digest"].as_str().unwrap_or_default();
    if digest.len() != 64 || !digest.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err("`input_digest` is not a SHA-256 hex digest".into());
    }
    if !obj["options"].is_object() || !obj["result"].is_object() {
        return Err("`options` and `result` must be objects".into());
    }
    check_integers(value)
}

fn check_integers(v: &Value) -> Result<(), String> {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => Err(format!("floating-point value {n}")),
        Value::Array(items) => items.iter().try_for_each(check_integers),
        Value::Object(m) => m.values().try_for_each(check_integers),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample(result: Value) -> Report {
        Report { command: "stratify".into(), options: Map::new(), input_digest: digest(b"x"), result }
    }

    #[test]
    fn json_is_sorted_and_valid() {
        let r = sample(json!({"zeta": 1, "alpha": "1/2"}));
        let text = String::from_utf8(emit_report(&r, Format::Json)).unwrap();
        assert!(text.find("alpha").unwrap() < text.find("zeta").unwrap());
        let parsed: Value = serde_json::from_str(&text).unwrap();
        validate_report(&parsed).unwrap();
        assert!(validate_report(&sample(json!({"x": 0.5})).to_json()).is_err());
    }

    #[test]
    fn text_rendering() {
        let r = sample(json!({"strata": [{"eta": 3, "lambda": [-1]}], "semistable": "all"}));
        let text = String::from_utf8(emit_report(&r, Format::Text)).unwrap();
        assert!(text.contains("result:\n  semistable: all\n  strata:\n    - #0\n      eta: 3\n      lambda: [-1]\n"), "{text}");
    }
}
