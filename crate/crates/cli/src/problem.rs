//! Problem files: the torus action, its linearization and optional defaults.
//!
//! ```json
//! {"k": 1, "n": 3, "weights": [[1], [1], [1]], "linearization": [1],
//!  "inner_product": [[1]], "window": [0],
//!  "wall_crossing": {"wall_point": [0], "direction": [1]}}
//! ```
//!
//! Inner product entries may be integers or rational strings such as "1/2".

use std::path::Path;

use gitwin_core::polyhedra::InnerProduct;
use gitwin_core::rational::{parse_rational, IntVector, Rational};
use gitwin_core::gitcore::TorusActionProblem;
use serde::Deserialize;
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}:{line}: field `{field}`: {message}")]
    Invalid { path: String, line: usize, field: String, message: String },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    k: usize,
    n: usize,
    weights: Vec<Vec<i64>>,
    linearization: Vec<i64>,
    #[serde(default)]
    inner_product: Option<Vec<Vec<Value>>>,
    #[serde(default)]
    window: Option<Vec<i64>>,
    #[serde(default)]
    wall_crossing: Option<RawWallCrossing>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWallCrossing {
    wall_point: Vec<i64>,
    direction: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallCrossingBlock {
    pub wall_point: IntVector,
    pub direction: IntVector,
}

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub problem: TorusActionProblem,
    /// Per-stratum window integers; empty means all zero.
    pub window: Vec<i64>,
    pub wall_crossing: Option<WallCrossingBlock>,
    /// SHA-256 of the file contents, hex encoded.
    pub digest: String,
}

pub fn load_problem(path: &Path) -> Result<ProblemFile, LoadError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: name.clone(), source })?;
    parse_problem(&name, &text)
}

/// Line of the first occurrence of `"field"`, or 1.
fn line_of(text: &str, field: &str) -> usize {
    let key = format!("\"{field}\"");
    text.lines().position(|l| l.contains(&key)).map_or(1, |i| i + 1)
}

pub fn parse_problem(name: &str, text: &str) -> Result<ProblemFile, LoadError> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| LoadError::Parse {
        path: name.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let invalid = |field: &str, message: String| LoadError::Invalid {
        path: name.to_string(),
        line: line_of(text, field.split('.').next_back().unwrap_or(field)),
        field: field.to_string(),
        message,
    };
    let (k, n) = (raw.k, raw.n);
    if k == 0 {
        return Err(invalid("k", "rank must be positive".into()));
    }
    if n > 24 {
        return Err(invalid("n", format!("at most 24 coordinates are supported, found {n}")));
    }
    if raw.weights.len() != n {
        return Err(invalid("weights", format!("expected {n} rows, found {}", raw.weights.len())));
    }
    for (i, row) in raw.weights.iter().enumerate() {
        if row.len() != k {
            return Err(invalid("weights", format!("row {i} has length {}, expected {k}", row.len())));
        }
    }
    if raw.linearization.len() != k {
        return Err(invalid("linearization", format!("expected length {k}, found {}", raw.linearization.len())));
    }
    let inner = match raw.inner_product {
        None => InnerProduct::identity(k),
        Some(rows) => {
            if rows.len() != k || rows.iter().any(|r| r.len() != k) {
                return Err(invalid("inner_product", format!("expected a {k}x{k} matrix")));
            }
            let mut matrix: Vec<Vec<Rational>> = Vec::with_capacity(k);
            for (i, row) in rows.iter().enumerate() {
                let mut out = Vec::with_capacity(k);
                for (j, v) in row.iter().enumerate() {
                    let parsed = match v {
                        Value::Number(x) => x.as_i64().map(|x| Rational::from_integer(x.into())),
                        Value::String(s) => parse_rational(s),
                        _ => None,
                    };
                    let value = parsed.ok_or_else(|| {
                        invalid("inner_product", format!("entry ({i}, {j}) is not an integer or rational string"))
                    })?;
                    out.push(value);
                }
                matrix.push(out);
            }
            InnerProduct::new(matrix).map_err(|e| invalid("inner_product", e.to_string()))?
        }
    };
    let wall_crossing = match raw.wall_crossing {
        None => None,
        Some(block) => {
            if block.wall_point.len() != k {
                return Err(invalid("wall_crossing.wall_point", format!("expected length {k}")));
            }
            if block.direction.len() != k {
                return Err(invalid("wall_crossing.direction", format!("expected length {k}")));
            }
            Some(WallCrossingBlock { wall_point: block.wall_point, direction: block.direction })
        }
    };
    let problem = TorusActionProblem::new(k, raw.weights, raw.linearization, inner)
        .map_err(|e| invalid("weights", e.to_string()))?;
    Ok(ProblemFile {
        problem,
        window: raw.window.unwrap_or_default(),
        wall_crossing,
        digest: crate::report::digest(text.as_bytes()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_gets_defaults() {
        let p = parse_problem("p.json", r#"{"k": 1, "n": 3, "weights": [[1], [1], [1]], "linearization": [1]}"#).unwrap();
        assert!(p.problem.inner_product().is_identity());
        assert!(p.window.is_empty());
        assert_eq!(p.digest.len(), 64);
    }

    #[test]
    fn wrong_row_length_names_the_row() {
        let text = "{\"k\": 2, \"n\": 2,\n \"weights\": [[1, 0], [1]],\n \"linearization\": [1, 1]}";
        let err = parse_problem("p.json", text).unwrap_err().to_string();
        assert_eq!(err, "p.json:2: field `weights`: row 1 has length 1, expected 2");
    }

    #[test]
    fn degenerate_inner_product_is_rejected() {
        let text = r#"{"k": 1, "n": 1, "weights": [[1]], "linearization": [1], "inner_product": [[0]]}"#;
        let err = parse_problem("p.json", text).unwrap_err().to_string();
        assert!(err.contains("not positive definite"), "{err}");
        let text = r#"{"k": 1, "n": 1, "weights": [[1]], "linearization": [1], "inner_product": [["1/2"]]}"#;
        assert!(parse_problem("p.json", text).is_ok());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_problem("p.json", "{\"k\": 1,\n \"n\": }").unwrap_err();
        assert!(matches!(err, LoadError::Parse { line: 2, .. }), "{err}");
    }
}
