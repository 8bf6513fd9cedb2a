//! JSON form of a graded free complex.
//!
//! ```json
//! {"ring": {"n": 2, "weights": [1, 1]},
//!  "terms": {"-1": [1], "0": [0]},
//!  "differentials": {"-1": [[[["1", [1, 0]]]]]}}
//! ```
//!
//! `differentials[p]` is the matrix of `d^p` with one row per generator of
//! degree `p + 1`; each entry is a list of `[coefficient, exponents]` terms
//! with the coefficient written as an exact rational string.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::complex::GradedFreeComplex;
use super::poly::{Poly, PolyMatrix, WeightedRing};
use super::GradedError;
use crate::rational::{format_rational, parse_rational};

fn err(msg: impl Into<String>) -> GradedError {
    GradedError::Parse(msg.into())
}

pub fn parse_complex(text: &str) -> Result<GradedFreeComplex, GradedError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| err(format!("line {} column {}: {e}", e.line(), e.column())))?;
    complex_from_json(&value)
}

fn int_list(v: &Value, field: &str) -> Result<Vec<i64>, GradedError> {
    v.as_array()
        .ok_or_else(|| err(format!("{field}: expected an array of integers")))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| err(format!("{field}: expected an integer, found {x}"))))
        .collect()
}

fn degree_key(key: &str, field: &str) -> Result<i32, GradedError> {
    key.parse().map_err(|_| err(format!("{field}: degree key {key:?} is not an integer")))
}

pub fn complex_from_json(value: &Value) -> Result<GradedFreeComplex, GradedError> {
    let obj = value.as_object().ok_or_else(|| err("expected a JSON object"))?;
    let ring_v = obj.get("ring").ok_or_else(|| err("missing field \"ring\""))?;
    let weights = int_list(ring_v.get("weights").ok_or_else(|| err("ring: missing field \"weights\""))?, "ring.weights")?;
    if let Some(n) = ring_v.get("n") {
        let n = n.as_u64().ok_or_else(|| err("ring.n: expected a nonnegative integer"))?;
        if n as usize != weights.len() {
            return Err(err(format!("ring.n is {n} but {} weights are given", weights.len())));
        }
    }
    let ring = WeightedRing::new(weights)?;
    let n = ring.n();

    let mut terms = BTreeMap::new();
    let terms_v = obj.get("terms").ok_or_else(|| err("missing field \"terms\""))?;
    for (k, v) in terms_v.as_object().ok_or_else(|| err("terms: expected an object"))? {
        let p = degree_key(k, "terms")?;
        terms.insert(p, int_list(v, &format!("terms.{k}"))?);
    }

    let mut diffs = BTreeMap::new();
    if let Some(diffs_v) = obj.get("differentials") {
        for (k, v) in diffs_v.as_object().ok_or_else(|| err("differentials: expected an object"))? {
            let p = degree_key(k, "differentials")?;
            let field = format!("differentials.{k}");
            let rows_v = v.as_array().ok_or_else(|| err(format!("{field}: expected an array of rows")))?;
            let cols = terms.get(&p).map_or(0, Vec::len);
            let mut rows = Vec::with_capacity(rows_v.len());
            for (r, row_v) in rows_v.iter().enumerate() {
                let row_v = row_v.as_array().ok_or_else(|| err(format!("{field}[{r}]: expected a row")))?;
                if row_v.len() != cols {
                    return Err(err(format!("{field}[{r}]: expected {cols} entries, found {}", row_v.len())));
                }
                let row = row_v
                    .iter()
                    .enumerate()
                    .map(|(c, e)| parse_poly(e, n, &format!("{field}[{r}][{c}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                rows.push(row);
            }
            diffs.insert(p, PolyMatrix::from_rows(rows, cols));
        }
    }
    GradedFreeComplex::new(ring, terms, diffs)
}

fn parse_poly(v: &Value, n: usize, field: &str) -> Result<Poly, GradedError> {
    let terms = v.as_array().ok_or_else(|| err(format!("{field}: expected a list of terms")))?;
    let mut p = Poly::zero();
    for (i, t) in terms.iter().enumerate() {
        let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| err(format!("{field}[{i}]: expected [coefficient, exponents]")))?;
        let coef = pair[0]
            .as_str()
            .and_then(parse_rational)
            .ok_or_else(|| err(format!("{field}[{i}]: coefficient must be a rational string")))?;
        let exp = pair[1]
            .as_array()
            .filter(|a| a.len() == n)
            .and_then(|a| a.iter().map(|x| x.as_u64().and_then(|x| u32::try_from(x).ok())).collect::<Option<Vec<u32>>>())
            .ok_or_else(|| err(format!("{field}[{i}]: exponents must be {n} nonnegative integers")))?;
        p.add_term(exp, coef);
    }
    Ok(p)
}

fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.terms().map(|(e, c)| json!([format_rational(c), e])).collect())
}

pub fn complex_to_json(f: &GradedFreeComplex) -> Value {
    let terms: Map<String, Value> = f.terms().iter().map(|(p, w)| (p.to_string(), json!(w))).collect();
    let mut diffs = Map::new();
    for &p in f.terms().keys() {
        let Some(m) = f.differential(p) else { continue };
        let rows: Vec<Value> = (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| poly_to_json(m.get(r, c))).collect()))
            .collect();
        diffs.insert(p.to_string(), Value::Array(rows));
    }
    json!({
        "ring": {"n": f.ring().n(), "weights": f.ring().weights()},
        "terms": terms,
        "differentials": diffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedmod::koszul::koszul_complex;

    #[test]
    fn round_trip() {
        let k = koszul_complex(&WeightedRing::new(vec![1, 2]).unwrap(), 3);
        let text = complex_to_json(&k).to_string();
        assert_eq!(parse_complex(&text).unwrap(), k);
    }

    #[test]
    fn readable_example() {
        let text = r#"{"ring": {"n": 2, "weights": [1, 1]},
            "terms": {"-1": [1, 1], "0": [0]},
            "differentials": {"-1": [[[["1", [1, 0]]], [["-1", [0, 1]]]]]}}"#;
        let f = parse_complex(text).unwrap();
        assert_eq!(f.weights(-1), &[1, 1]);
        assert!(parse_complex(&text.replace("[0, 1]", "[0, 2]")).is_err());
        assert!(matches!(parse_complex("{"), Err(GradedError::Parse(_))));
        assert!(matches!(parse_complex(r#"{"ring": {"n": 3, "weights": [1]}, "terms": {}}"#), Err(GradedError::Parse(_))));
    }
}
