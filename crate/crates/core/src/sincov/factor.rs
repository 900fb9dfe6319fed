//! Factorizations `F(u, v) ≈ f(u) / f(v)` of scalar kernels.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;
use crate::report::{real, LabelMap};

#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    /// Reference point `x0`; `None` for the log-domain factorization.
    pub reference: Option<String>,
    pub labels: Vec<String>,
    /// `f = F(·, x0)`.
    pub f: Vec<Complex64>,
    /// `g = F(x0, ·)`.
    pub g: Vec<Complex64>,
    /// `max_x |f(x)·g(x) − 1|`.
    pub gauge_error: f64,
    /// `max_{u,v} |F(u,v) − f(u)/f(v)|`, `+inf` when `f` has a zero entry.
    pub residual: f64,
}

impl Factorization {
    /// `f(u) / f(v)` by index.
    pub fn ratio(&self, u: usize, v: usize) -> Complex64 {
        self.f[u] / self.f[v]
    }
}

impl Serialize for Factorization {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Real(#[serde(serialize_with = "real")] f64);

        let mut st = s.serialize_struct("Factorization", 5)?;
        st.serialize_field("reference", &self.reference)?;
        st.serialize_field("f", &LabelMap { labels: &self.labels, values: &self.f })?;
        st.serialize_field("g", &LabelMap { labels: &self.labels, values: &self.g })?;
        st.serialize_field("gauge_error", &Real(self.gauge_error))?;
        st.serialize_field("residual", &Real(self.residual))?;
        st.end()
    }
}

/// Reference-point factorization: `f := F(·, x0)`, `g := F(x0, ·)`.
///
/// Scalar kernels only; for matrix values an unbounded approximate solution
/// need not have this form at all.
pub fn factorize(k: &FiniteKernel, x0: &str) -> Result<Factorization> {
    k.require_complex("factorize")?;
    let r = k.index_of(x0)?;
    let n = k.len();
    let f: Vec<Complex64> = (0..n).map(|u| k.scalar(u, r)).collect();
    let g: Vec<Complex64> = (0..n).map(|v| k.scalar(r, v)).collect();
    Ok(finish(k, Some(x0.to_string()), f, g))
}

/// Log-domain least-squares factorization of a positive real kernel.
///
/// Minimizes `Σ (ln F(u,v) − φ(u) + φ(v))²` subject to `Σ φ = 0`; the
/// minimizer is `φ(u) = ½ (mean_v ln F(u,v) − mean_v ln F(v,u))`, i.e. the
/// row geometric mean of the reciprocally symmetrized kernel. `f = exp(φ)`
/// and `g = 1/f`.
pub fn gm_factorize(k: &FiniteKernel) -> Result<Factorization> {
    k.require_complex("gm_factorize")?;
    let n = k.len();
    let mut logs = vec![0.0; n * n];
    for u in 0..n {
        for v in 0..n {
            let z = k.scalar(u, v);
            if z.im != 0.0 || z.re <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "gm_factorize needs positive real entries; entries[{u}][{v}] = {z}"
                )));
            }
            logs[u * n + v] = z.re.ln();
        }
    }
    let f: Vec<Complex64> = (0..n)
        .map(|u| {
            let row: f64 = (0..n).map(|v| logs[u * n + v]).sum::<f64>() / n as f64;
            let col: f64 = (0..n).map(|v| logs[v * n + u]).sum::<f64>() / n as f64;
            Complex64::new((0.5 * (row - col)).exp(), 0.0)
        })
        .collect();
    let g = f.iter().map(|z| z.inv()).collect();
    Ok(finish(k, None, f, g))
}

fn finish(k: &FiniteKernel, reference: Option<String>, f: Vec<Complex64>, g: Vec<Complex64>) -> Factorization {
    let n = k.len();
    let gauge_error = f
        .iter()
        .zip(&g)
        .map(|(a, b)| (a * b - 1.0).norm())
        .fold(0.0, f64::max);
    let residual = if f.iter().any(|z| z.norm() == 0.0) {
        f64::INFINITY
    } else {
        let mut worst = 0.0f64;
        for u in 0..n {
            for v in 0..n {
                let d = (k.scalar(u, v) - f[u] / f[v]).norm();
                worst = worst.max(if d.is_nan() { f64::INFINITY } else { d });
            }
        }
        worst
    };
    Factorization { reference, labels: k.labels().to_vec(), f, g, gauge_error, residual }
}
