//! JSON file formats and canonical output.
//!
//! Canonical JSON has sorted object keys, no insignificant whitespace and every
//! float rounded to 10 significant digits, so equal inputs give equal bytes.

use std::path::Path;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::spin::{CMatrix, DeviationMatrix, SpinSystem};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    gamma: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    larmor_mhz: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    j_hz: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    offset_hz: Option<Vec<f64>>,
}

fn json_err(what: &str, e: serde_json::Error) -> Error {
    Error::Input(format!("invalid {what} JSON: {e}"))
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn system_from_json(text: &str) -> Result<SpinSystem<f64>> {
    let f: SystemFile = serde_json::from_str(text).map_err(|e| json_err("spin system", e))?;
    let mut sys = SpinSystem::new(f.gamma)?;
    if let Some(l) = f.labels {
        sys = sys.with_labels(l)?;
    }
    if let Some(l) = f.larmor_mhz {
        sys = sys.with_larmor_mhz(l)?;
    }
    if let Some(j) = f.j_hz {
        sys = sys.with_j_hz(j)?;
    }
    if let Some(o) = f.offset_hz {
        sys = sys.with_offset_hz(o)?;
    }
    Ok(sys)
}

pub fn system_to_value(sys: &SpinSystem<f64>) -> Value {
    let f = SystemFile {
        labels: Some(sys.labels().to_vec()),
        gamma: sys.gamma().to_vec(),
        larmor_mhz: sys.larmor_mhz().map(<[f64]>::to_vec),
        j_hz: sys.j_hz().map(<[Vec<f64>]>::to_vec),
        offset_hz: sys.offset_hz().map(<[f64]>::to_vec),
    };
    serde_json::to_value(f).expect("plain data serializes")
}

/// Nested rows of `[re, im]` pairs.
pub fn matrix_to_value(mat: &CMatrix<f64>) -> Value {
    Value::Array(
        (0..mat.nrows())
            .map(|r| {
                Value::Array(
                    (0..mat.ncols())
                        .map(|c| json!([mat[(r, c)].re, mat[(r, c)].im]))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn matrix_from_value(v: &Value) -> Result<CMatrix<f64>> {
    let bad = |msg: &str| Error::Input(format!("invalid matrix: {msg}"));
    let rows = v
        .as_array()
        .ok_or_else(|| bad("expected an array of rows"))?;
    let d = rows.len();
    let mut mat = CMatrix::zeros(d, d);
    for (r, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| bad("row is not an array"))?;
        if row.len() != d {
            return Err(bad(&format!(
                "row {r} has {} entries, expected {d}",
                row.len()
            )));
        }
        for (c, entry) in row.iter().enumerate() {
            let pair: [f64; 2] = serde_json::from_value(entry.clone())
                .map_err(|_| bad(&format!("entry ({r},{c}) is not a [re, im] pair")))?;
            mat[(r, c)] = Complex::new(pair[0], pair[1]);
        }
    }
    Ok(mat)
}

/// A state file is a bare matrix or an object with a `matrix` key.
pub fn state_from_json(text: &str) -> Result<DeviationMatrix<f64>> {
    let v: Value = serde_json::from_str(text).map_err(|e| json_err("state", e))?;
    let m = match &v {
        Value::Object(o) => o
            .get("matrix")
            .ok_or_else(|| Error::Input("state object has no `matrix` key".into()))?,
        other => other,
    };
    let mat = matrix_from_value(m)?;
    let d = mat.nrows();
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::Input(format!("state dimension {d} is not 2^n")));
    }
    DeviationMatrix::from_matrix(d.trailing_zeros() as usize, mat)
}

pub fn state_to_value(rho: &DeviationMatrix<f64>) -> Value {
    json!({ "matrix": matrix_to_value(rho.matrix()) })
}

/// Rounds to 10 significant digits; non-finite values become `null`.
pub fn round_sig(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = format!("{x:.9e}").parse().expect("formatted float parses");
    json!(if r == 0.0 { 0.0 } else { r })
}

fn canonicalize(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => round_sig(n.as_f64().expect("f64 number")),
        Value::Array(a) => Value::Array(a.iter().map(canonicalize).collect()),
        Value::Object(o) => Value::Object(
            o.iter()
                .map(|(k, v)| (k.clone(), canonicalize(v)))
                .collect::<Map<_, _>>(),
        ),
        other => other.clone(),
    }
}

/// Serializes `v` canonically (sorted keys, 10 significant digits, single line).
pub fn canonical_json(v: &Value) -> String {
    serde_json::to_string(&canonicalize(v)).expect("JSON values serialize")
}
