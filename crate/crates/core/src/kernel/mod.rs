//! Finite kernels: a labeled point set together with the full table of
//! values `F(u, v)`.

mod generate;
mod io;

pub use generate::{generate, GeneratorSpec, MAX_POINTS};
pub use io::{load_kernel, save_kernel};

use std::collections::HashSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::value::{AlgebraValue, ValueKind};

/// `F` restricted to a finite set `X`, stored row-major:
/// `get(i, j) = F(labels[i], labels[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteKernel {
    labels: Vec<String>,
    kind: ValueKind,
    entries: Vec<AlgebraValue>,
}

impl FiniteKernel {
    /// Builds a kernel from a row-major table, validating shape, label
    /// uniqueness, kind homogeneity and finiteness.
    pub fn new(labels: Vec<String>, kind: ValueKind, rows: Vec<Vec<AlgebraValue>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::NonSquare("kernel needs at least one label".into()));
        }
        if rows.len() != n {
            return Err(Error::NonSquare(format!("{} labels but {} rows", n, rows.len())));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare(format!("row {} has {} entries, expected {}", i, row.len(), n)));
            }
        }
        Self::from_flat(labels, kind, rows.into_iter().flatten().collect())
    }

    /// Builds a kernel by evaluating `value(i, j)` on every index pair.
    pub fn from_fn<F>(labels: Vec<String>, kind: ValueKind, mut value: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> AlgebraValue,
    {
        let n = labels.len();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(value(i, j));
            }
        }
        Self::from_flat(labels, kind, entries)
    }

    fn from_flat(labels: Vec<String>, kind: ValueKind, entries: Vec<AlgebraValue>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::NonSquare("kernel needs at least one label".into()));
        }
        debug_assert_eq!(entries.len(), n * n);
        let mut seen = HashSet::with_capacity(n);
        for (index, label) in labels.iter().enumerate() {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel { label: label.clone(), index });
            }
        }
        for (idx, v) in entries.iter().enumerate() {
            let location = format!("entries[{}][{}]", idx / n, idx % n);
            if v.kind() != kind {
                return Err(Error::Malformed(format!(
                    "{location}: {} entry in a {kind} kernel",
                    v.kind()
                )));
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { location });
            }
        }
        Ok(FiniteKernel { labels, kind, entries })
    }

    /// Number of points, `|X|`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false: a valid kernel has at least one point.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &AlgebraValue {
        &self.entries[i * self.labels.len() + j]
    }

    pub fn entries(&self) -> &[AlgebraValue] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[AlgebraValue] {
        let n = self.labels.len();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Row-major complex entries, or `None` for a matrix-valued kernel.
    pub fn complex_entries(&self) -> Option<Vec<Complex64>> {
        self.entries.iter().map(AlgebraValue::as_complex).collect()
    }

    /// Complex value at `(i, j)`. Panics on a matrix kernel.
    #[inline]
    pub fn scalar(&self, i: usize, j: usize) -> Complex64 {
        match self.get(i, j) {
            AlgebraValue::Complex(z) => *z,
            AlgebraValue::Mat2(_) => panic!("scalar access on a mat2 kernel"),
        }
    }

    /// `sup |F|` over the table.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(AlgebraValue::abs).fold(0.0, f64::max)
    }

    pub(crate) fn require_complex(&self, operation: &'static str) -> Result<()> {
        match self.kind {
            ValueKind::Complex => Ok(()),
            kind => Err(Error::UnsupportedKind { operation, kind }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn rejects_non_square() {
        let rows = vec![vec![AlgebraValue::real(1.0); 3]; 2];
        assert!(matches!(
            FiniteKernel::new(labels(2), ValueKind::Complex, rows),
            Err(Error::NonSquare(_))
        ));
    }

    #[test]
    fn rejects_empty() {
        assert!(FiniteKernel::new(vec![], ValueKind::Complex, vec![]).is_err());
    }

    #[test]
    fn rejects_duplicate_labels() {
        let rows = vec![vec![AlgebraValue::real(1.0); 2]; 2];
        let err = FiniteKernel::new(vec!["a".into(), "a".into()], ValueKind::Complex, rows).unwrap_err();
        assert!(matches!(err, Error::DuplicateLabel { index: 1, .. }));
    }

    #[test]
    fn rejects_mixed_kinds_and_nan() {
        let rows = vec![
            vec![AlgebraValue::real(1.0), AlgebraValue::diag(1.0, 1.0)],
            vec![AlgebraValue::real(1.0), AlgebraValue::real(1.0)],
        ];
        assert!(FiniteKernel::new(labels(2), ValueKind::Complex, rows).is_err());
        let rows = vec![vec![AlgebraValue::complex(f64::NAN, 0.0)]];
        let err = FiniteKernel::new(labels(1), ValueKind::Complex, rows).unwrap_err();
        assert!(matches!(err, Error::NonFinite { ref location } if location == "entries[0][0]"));
    }

    #[test]
    fn row_major_indexing() {
        let k = FiniteKernel::from_fn(labels(3), ValueKind::Complex, |i, j| {
            AlgebraValue::real((10 * i + j) as f64)
        })
        .unwrap();
        assert_eq!(*k.get(2, 1), AlgebraValue::real(21.0));
        assert_eq!(k.row(1)[2], AlgebraValue::real(12.0));
        assert_eq!(k.index_of("2").unwrap(), 2);
        assert!(k.index_of("9").is_err());
        assert_eq!(k.max_abs(), 22.0);
    }
}
