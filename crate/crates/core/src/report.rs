//! JSON report helpers.

use num_complex::Complex64;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

/// Serializes a real, encoding non-finite values as `"inf"`, `"-inf"` or `"nan"`.
pub fn real<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// `{"re": .., "im": ..}`
pub struct ComplexJson(pub Complex64);

impl Serialize for ComplexJson {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Complex", 2)?;
        st.serialize_field("re", &self.0.re)?;
        st.serialize_field("im", &self.0.im)?;
        st.end()
    }
}

/// A label-keyed object that keeps kernel order.
pub struct LabelMap<'a> {
    pub labels: &'a [String],
    pub values: &'a [Complex64],
}

impl Serialize for LabelMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.labels.len()))?;
        for (l, v) in self.labels.iter().zip(self.values) {
            m.serialize_entry(l, &ComplexJson(*v))?;
        }
        m.end()
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json_bytes<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("report serializes");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Wrap(#[serde(serialize_with = "real")] f64);

    #[test]
    fn infinity_is_a_string() {
        assert_eq!(serde_json::to_string(&Wrap(f64::INFINITY)).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&Wrap(0.5)).unwrap(), "0.5");
    }

    #[test]
    fn label_map_keeps_order() {
        let labels = vec!["b".to_string(), "a".to_string()];
        let values = vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, -1.0)];
        let s = serde_json::to_string(&LabelMap { labels: &labels, values: &values }).unwrap();
        assert_eq!(s, r#"{"b":{"re":1.0,"im":0.0},"a":{"re":2.0,"im":-1.0}}"#);
    }
}
