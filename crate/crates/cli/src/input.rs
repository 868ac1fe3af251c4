use std::path::Path;

use liouville_lab::scalar::{parse_rational, rational_from_json, Rational};
use liouville_lab::symplin::SkewForm;
use liouville_lab::{Error, Result};
use serde_json::Value;

/// Reads a matrix from a JSON file, inline JSON (`[[0,1],[-1,0]]`), or rows separated by `;`
/// (`0,1;-1,0`). Entries may be integers, decimals or `p/q` strings.
pub fn read_matrix(arg: &str) -> Result<Vec<Vec<Rational>>> {
    let text = arg.trim();
    if text.starts_with('[') || text.starts_with('{') {
        return matrix_from_json(&parse_json(text)?);
    }
    if Path::new(text).is_file() {
        let body = std::fs::read_to_string(text).map_err(|e| Error::Parse(format!("{text}: {e}")))?;
        return matrix_from_json(&parse_json(&body)?);
    }
    text.split(';')
        .map(|row| row.split(',').map(parse_rational).collect())
        .collect()
}

pub fn read_skew(arg: &str) -> Result<SkewForm<Rational>> {
    SkewForm::new(read_matrix(arg)?)
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

fn entry(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) if n.as_i64().is_none() => {
            let f = n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}")))?;
            Rational::from_float(f).ok_or_else(|| Error::Parse(format!("non-finite entry {n}")))
        }
        other => rational_from_json(other),
    }
}

/// Accepts a bare array of rows or an object with a `matrix` field (as written by `--json`).
fn matrix_from_json(v: &Value) -> Result<Vec<Vec<Rational>>> {
    let m = v.get("matrix").unwrap_or(v);
    m.as_array()
        .ok_or_else(|| Error::Parse("expected an array of rows".into()))?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Parse("expected a row array".into()))?
                .iter()
                .map(entry)
                .collect()
        })
        .collect()
}

/// `"4,6,8"` as a list of sizes.
pub fn read_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
        .collect()
}

/// `"a,b,c,d"` as a 2×2 integer matrix.
pub fn read_sl2(s: &str) -> Result<[[i64; 2]; 2]> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
        .collect::<Result<_>>()?;
    match v[..] {
        [a, b, c, d] => Ok([[a, b], [c, d]]),
        _ => Err(Error::Parse(format!("expected four entries, got {}", v.len()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use liouville_lab::scalar::rat;

    #[test]
    fn inline_formats_agree() {
        let a = read_matrix("[[0, \"1/2\"], [-0.5, 0]]").unwrap();
        let b = read_matrix("0,1/2;-1/2,0").unwrap();
        let c = read_matrix("{\"matrix\": [[0, {\"num\": 1, \"den\": 2}], [\"-1/2\", 0]]}").unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(a[0][1], rat(1, 2));
    }

    #[test]
    fn bad_inputs() {
        assert!(read_matrix("[[0, 1], 3]").is_err());
        assert!(read_matrix("0,x;1,0").is_err());
        assert!(read_sl2("1,2,3").is_err());
        assert!(read_list("4,a").is_err());
    }
}
