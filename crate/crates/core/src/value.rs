//! Values of a kernel: complex scalars or real 2×2 matrices.
//!
//! Both kinds form a unital normed algebra. For matrices the norm is the
//! operator 2-norm (largest singular value), evaluated in closed form.

use std::fmt;
use std::ops::{Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which algebra a value (or a whole kernel) lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Complex,
    Mat2,
}

impl ValueKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ValueKind::Complex => "complex",
            ValueKind::Mat2 => "mat2",
        }
    }
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A 2×2 real matrix stored row-major.
pub type Mat2 = [[f64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgebraValue {
    Complex(Complex64),
    Mat2(Mat2),
}

impl AlgebraValue {
    pub fn real(re: f64) -> Self {
        AlgebraValue::Complex(Complex64::new(re, 0.0))
    }

    pub fn complex(re: f64, im: f64) -> Self {
        AlgebraValue::Complex(Complex64::new(re, im))
    }

    pub fn diag(d0: f64, d1: f64) -> Self {
        AlgebraValue::Mat2([[d0, 0.0], [0.0, d1]])
    }

    pub fn one(kind: ValueKind) -> Self {
        match kind {
            ValueKind::Complex => AlgebraValue::real(1.0),
            ValueKind::Mat2 => AlgebraValue::diag(1.0, 1.0),
        }
    }

    pub fn kind(&self) -> ValueKind {
        match self {
            AlgebraValue::Complex(_) => ValueKind::Complex,
            AlgebraValue::Mat2(_) => ValueKind::Mat2,
        }
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match *self {
            AlgebraValue::Complex(z) => Some(z),
            AlgebraValue::Mat2(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            AlgebraValue::Complex(z) => z.re.is_finite() && z.im.is_finite(),
            AlgebraValue::Mat2(m) => m.iter().flatten().all(|x| x.is_finite()),
        }
    }

    /// Modulus for complex values, spectral norm for matrices.
    pub fn abs(&self) -> f64 {
        match self {
            AlgebraValue::Complex(z) => z.norm(),
            AlgebraValue::Mat2(m) => spectral_norm(m),
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        match (self, rhs) {
            (AlgebraValue::Complex(a), AlgebraValue::Complex(b)) => Ok(AlgebraValue::Complex(a * b)),
            (AlgebraValue::Mat2(a), AlgebraValue::Mat2(b)) => Ok(AlgebraValue::Mat2(mat_mul(a, b))),
            _ => Err(Error::KindMismatch { left: self.kind(), right: rhs.kind() }),
        }
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        match (self, rhs) {
            (AlgebraValue::Complex(a), AlgebraValue::Complex(b)) => Ok(AlgebraValue::Complex(a - b)),
            (AlgebraValue::Mat2(a), AlgebraValue::Mat2(b)) => Ok(AlgebraValue::Mat2([
                [a[0][0] - b[0][0], a[0][1] - b[0][1]],
                [a[1][0] - b[1][0], a[1][1] - b[1][1]],
            ])),
            _ => Err(Error::KindMismatch { left: self.kind(), right: rhs.kind() }),
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.checked_sub(&rhs.scale(-1.0))
    }

    pub fn scale(&self, lambda: f64) -> Self {
        match *self {
            AlgebraValue::Complex(z) => AlgebraValue::Complex(z * lambda),
            AlgebraValue::Mat2(m) => AlgebraValue::Mat2([
                [lambda * m[0][0], lambda * m[0][1]],
                [lambda * m[1][0], lambda * m[1][1]],
            ]),
        }
    }
}

impl Mul for AlgebraValue {
    type Output = Result<AlgebraValue>;

    fn mul(self, rhs: Self) -> Self::Output {
        self.checked_mul(&rhs)
    }
}

impl Sub for AlgebraValue {
    type Output = Result<AlgebraValue>;

    fn sub(self, rhs: Self) -> Self::Output {
        self.checked_sub(&rhs)
    }
}

impl From<Complex64> for AlgebraValue {
    fn from(z: Complex64) -> Self {
        AlgebraValue::Complex(z)
    }
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

/// Largest singular value of a real 2×2 matrix.
///
/// Writing `M = [[a, b], [c, d]]`, the singular values are
/// `(p ± q) / 2` with `p = hypot(a + d, c - b)` and `q = hypot(a - d, b + c)`.
/// Diagonal matrices short-circuit to `max(|a|, |d|)` so that value is exact.
pub fn spectral_norm(m: &Mat2) -> f64 {
    let [[a, b], [c, d]] = *m;
    if b == 0.0 && c == 0.0 {
        return a.abs().max(d.abs());
    }
    let p = (a + d).hypot(c - b);
    let q = (a - d).hypot(b + c);
    0.5 * (p + q)
}

/// Both singular values, largest first.
pub fn singular_values(m: &Mat2) -> (f64, f64) {
    let [[a, b], [c, d]] = *m;
    let p = (a + d).hypot(c - b);
    let q = (a - d).hypot(b + c);
    (0.5 * (p + q), 0.5 * (p - q).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_has_unit_norm() {
        assert_eq!(AlgebraValue::one(ValueKind::Complex).abs(), 1.0);
        assert_eq!(AlgebraValue::one(ValueKind::Mat2).abs(), 1.0);
    }

    #[test]
    fn diagonal_norm_is_max_entry() {
        assert_eq!(AlgebraValue::diag(0.5, -2.0).abs(), 2.0);
        assert_eq!(AlgebraValue::diag(-3.0, 1e-300).abs(), 3.0);
    }

    #[test]
    fn rotation_has_unit_norm() {
        let t = 0.7f64;
        let r = [[t.cos(), -t.sin()], [t.sin(), t.cos()]];
        assert!((spectral_norm(&r) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_eigenvalues_of_gram() {
        // sigma_max^2 is the largest eigenvalue of M^T M.
        let m = [[1.0, 2.0], [3.0, 4.0]];
        let g00: f64 = 1.0 + 9.0;
        let g11 = 4.0 + 16.0;
        let g01 = 2.0 + 12.0;
        let tr = g00 + g11;
        let det = g00 * g11 - g01 * g01;
        let lmax = 0.5 * (tr + (tr * tr - 4.0 * det).sqrt());
        assert!((spectral_norm(&m) - lmax.sqrt()).abs() < 1e-12);
        let (s1, s2) = singular_values(&m);
        assert!((s1 * s2 - 2.0).abs() < 1e-12); // |det|
    }

    #[test]
    fn mixed_kinds_are_rejected() {
        let z = AlgebraValue::real(1.0);
        let m = AlgebraValue::diag(1.0, 1.0);
        assert!(matches!(z * m, Err(Error::KindMismatch { .. })));
        assert!(matches!(m - z, Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn nan_is_not_finite() {
        assert!(!AlgebraValue::complex(f64::NAN, 0.0).is_finite());
        assert!(!AlgebraValue::Mat2([[0.0, f64::INFINITY], [0.0, 0.0]]).is_finite());
    }
}
