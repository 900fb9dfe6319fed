//! JSON kernel documents.
//!
//! ```json
//! { "labels": ["a", "b"], "value_kind": "complex",
//!   "entries": [[{"re": 1.0, "im": 0.0}, ...], ...] }
//! ```
//!
//! Matrix entries are `{"m": [[a, b], [c, d]]}`. Reals are JSON numbers; the
//! strings `"NaN"`, `"inf"`, `"-inf"`, `"Infinity"` and `"-Infinity"` are
//! recognised only so that they can be rejected as non-finite with a location.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::FiniteKernel;
use crate::error::{Error, Result};
use crate::value::{AlgebraValue, ValueKind};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelDocIn {
    labels: Vec<String>,
    value_kind: String,
    entries: Vec<Vec<Value>>,
}

#[derive(Serialize)]
struct KernelDocOut<'a> {
    labels: &'a [String],
    value_kind: &'static str,
    entries: Vec<Vec<EntryOut>>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum EntryOut {
    Complex { re: f64, im: f64 },
    Mat2 { m: [[f64; 2]; 2] },
}

pub fn load_kernel(bytes: &[u8]) -> Result<FiniteKernel> {
    let doc: KernelDocIn =
        serde_json::from_slice(bytes).map_err(|e| Error::Malformed(e.to_string()))?;
    let kind = match doc.value_kind.as_str() {
        "complex" => ValueKind::Complex,
        "mat2" => ValueKind::Mat2,
        other => return Err(Error::UnknownKind(other.to_string())),
    };
    let n = doc.labels.len();
    if n == 0 {
        return Err(Error::NonSquare("labels is empty".into()));
    }
    if doc.entries.len() != n {
        return Err(Error::NonSquare(format!(
            "entries has {} rows for {} labels",
            doc.entries.len(),
            n
        )));
    }
    let mut rows = Vec::with_capacity(n);
    for (i, row) in doc.entries.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NonSquare(format!(
                "entries[{}] has {} columns, expected {}",
                i,
                row.len(),
                n
            )));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, v)| parse_entry(v, kind, &format!("entries[{i}][{j}]")))
            .collect::<Result<Vec<_>>>()?;
        rows.push(parsed);
    }
    FiniteKernel::new(doc.labels, kind, rows)
}

/// Deterministic serialization: fixed key order and shortest round-trip
/// decimals, terminated by a newline.
pub fn save_kernel(k: &FiniteKernel) -> Vec<u8> {
    let n = k.len();
    let entries = (0..n)
        .map(|i| {
            k.row(i)
                .iter()
                .map(|v| match *v {
                    AlgebraValue::Complex(z) => EntryOut::Complex { re: z.re, im: z.im },
                    AlgebraValue::Mat2(m) => EntryOut::Mat2 { m },
                })
                .collect()
        })
        .collect();
    let doc = KernelDocOut { labels: k.labels(), value_kind: k.kind().as_str(), entries };
    let mut out = serde_json::to_vec_pretty(&doc).expect("kernel document serializes");
    out.push(b'\n');
    out
}

fn parse_entry(v: &Value, kind: ValueKind, location: &str) -> Result<AlgebraValue> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Malformed(format!("{location}: expected an object")))?;
    match kind {
        ValueKind::Complex => {
            if obj.len() != 2 || !obj.contains_key("re") || !obj.contains_key("im") {
                return Err(Error::Malformed(format!(
                    "{location}: complex entry must have exactly the keys \"re\" and \"im\""
                )));
            }
            let re = parse_real(&obj["re"], &format!("{location}.re"))?;
            let im = parse_real(&obj["im"], &format!("{location}.im"))?;
            Ok(AlgebraValue::complex(re, im))
        }
        ValueKind::Mat2 => {
            let m = match (obj.len(), obj.get("m")) {
                (1, Some(m)) => m,
                _ => {
                    return Err(Error::Malformed(format!(
                        "{location}: mat2 entry must have exactly the key \"m\""
                    )))
                }
            };
            let rows = m
                .as_array()
                .filter(|r| r.len() == 2)
                .ok_or_else(|| Error::Malformed(format!("{location}.m: expected 2 rows")))?;
            let mut out = [[0.0; 2]; 2];
            for (r, row) in rows.iter().enumerate() {
                let cols = row
                    .as_array()
                    .filter(|c| c.len() == 2)
                    .ok_or_else(|| Error::Malformed(format!("{location}.m[{r}]: expected 2 columns")))?;
                for (c, x) in cols.iter().enumerate() {
                    out[r][c] = parse_real(x, &format!("{location}.m[{r}][{c}]"))?;
                }
            }
            Ok(AlgebraValue::Mat2(out))
        }
    }
}

fn parse_real(v: &Value, location: &str) -> Result<f64> {
    let x = match v {
        Value::Number(num) => num
            .as_f64()
            .ok_or_else(|| Error::Malformed(format!("{location}: number out of range")))?,
        Value::String(s) => match s.as_str() {
            "NaN" | "nan" => f64::NAN,
            "inf" | "Infinity" | "+inf" => f64::INFINITY,
            "-inf" | "-Infinity" => f64::NEG_INFINITY,
            _ => return Err(Error::Malformed(format!("{location}: expected a number, got {s:?}"))),
        },
        _ => return Err(Error::Malformed(format!("{location}: expected a number"))),
    };
    if !x.is_finite() {
        return Err(Error::NonFinite { location: location.to_string() });
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{generate, GeneratorSpec};
    use num_complex::Complex64;

    #[test]
    fn constant_document_layout() {
        let k = generate(&GeneratorSpec::Constant { value: Complex64::new(-1.0, 0.0), size: 2 }).unwrap();
        let text = String::from_utf8(save_kernel(&k)).unwrap();
        let doc: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["value_kind"], "complex");
        let entries = doc["entries"].as_array().unwrap();
        assert_eq!(entries.len(), 2);
        for row in entries {
            for e in row.as_array().unwrap() {
                assert_eq!(e["re"].as_f64(), Some(-1.0));
                assert_eq!(e["im"].as_f64(), Some(0.0));
            }
        }
        assert!(text.find("\"labels\"").unwrap() < text.find("\"value_kind\"").unwrap());
        assert!(text.find("\"value_kind\"").unwrap() < text.find("\"entries\"").unwrap());
    }

    #[test]
    fn ratio_document_entries() {
        let k = generate(&GeneratorSpec::ratio_identity(&[1.0, 2.0])).unwrap();
        let doc: Value = serde_json::from_slice(&save_kernel(&k)).unwrap();
        let re: Vec<f64> = doc["entries"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|r| r.as_array().unwrap().iter().map(|e| e["re"].as_f64().unwrap()))
            .collect();
        assert_eq!(re, vec![1.0, 0.5, 2.0, 1.0]);
    }

    #[test]
    fn saving_twice_is_identical() {
        let spec = GeneratorSpec::PerturbedRatio {
            labels: vec!["a".into(), "b".into(), "c".into()],
            f: vec![Complex64::new(1.0, 0.5), Complex64::new(2.0, 0.0), Complex64::new(0.3, -1.0)],
            eps: 0.1,
            seed: 9,
        };
        let k = generate(&spec).unwrap();
        assert_eq!(save_kernel(&k), save_kernel(&k));
        assert_eq!(load_kernel(&save_kernel(&k)).unwrap(), k);
    }

    #[test]
    fn non_square_table() {
        let doc = r#"{"labels":["a","b"],"value_kind":"complex","entries":[
            [{"re":1,"im":0},{"re":1,"im":0},{"re":1,"im":0}],
            [{"re":1,"im":0},{"re":1,"im":0},{"re":1,"im":0}]]}"#;
        let err = load_kernel(doc.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::NonSquare(ref m) if m.contains("entries[0]")), "{err}");
    }

    #[test]
    fn nan_entry() {
        let doc = r#"{"labels":["a"],"value_kind":"complex","entries":[[{"re":"NaN","im":0}]]}"#;
        let err = load_kernel(doc.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::NonFinite { ref location } if location == "entries[0][0].re"));
    }

    #[test]
    fn duplicate_labels() {
        let doc = r#"{"labels":["a","a"],"value_kind":"complex","entries":[
            [{"re":1,"im":0},{"re":1,"im":0}],[{"re":1,"im":0},{"re":1,"im":0}]]}"#;
        assert!(matches!(load_kernel(doc.as_bytes()), Err(Error::DuplicateLabel { index: 1, .. })));
    }

    #[test]
    fn unknown_kind_and_keys() {
        let doc = r#"{"labels":["a"],"value_kind":"quaternion","entries":[[{"re":1,"im":0}]]}"#;
        assert!(matches!(load_kernel(doc.as_bytes()), Err(Error::UnknownKind(_))));
        let doc = r#"{"labels":["a"],"value_kind":"complex","entries":[[{"re":1,"im":0}]],"x":1}"#;
        assert!(matches!(load_kernel(doc.as_bytes()), Err(Error::Malformed(_))));
        let doc = r#"{"labels":["a"],"value_kind":"complex","entries":[[{"m":[[1,0],[0,1]]}]]}"#;
        assert!(matches!(load_kernel(doc.as_bytes()), Err(Error::Malformed(ref m)) if m.contains("entries[0][0]")));
        assert!(matches!(load_kernel(b"{not json"), Err(Error::Malformed(_))));
    }

    #[test]
    fn mat2_round_trip() {
        let k = generate(&GeneratorSpec::Mat2Ratio { c0: 2.0, samples: vec![1.0, 3.0, 7.0] }).unwrap();
        let bytes = save_kernel(&k);
        assert!(String::from_utf8_lossy(&bytes).contains("\"m\""));
        assert_eq!(load_kernel(&bytes).unwrap(), k);
    }
}
