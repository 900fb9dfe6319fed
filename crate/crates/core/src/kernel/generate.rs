//! Kernel generators for the standard examples and counterexamples of the
//! stability problem.

use num_complex::Complex64;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::FiniteKernel;
use crate::error::{Error, Result};
use crate::value::{AlgebraValue, ValueKind};

/// Upper bound on `|X|` for generated kernels.
pub const MAX_POINTS: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    /// `F ≡ value` on `size` points labeled `0..size`.
    Constant { value: Complex64, size: usize },
    /// `F(u, v) = f(u) / f(v)`; an exact solution whenever `f` never vanishes.
    Ratio { labels: Vec<String>, f: Vec<Complex64> },
    /// `X = {n, …, n²}`, `F(a, b) = a / (b + c)`: bounded, not exact, defect `< c`.
    E1 { n: u32, c: f64 },
    /// `F(x, y) = x / y` on samples from `[1, ∞)`.
    E0 { samples: Vec<f64> },
    /// `F(u, v) = diag(u / v, c0)` on samples from `(0, ∞)`.
    Mat2Ratio { c0: f64, samples: Vec<f64> },
    /// `F ≡ 1/n` on `size` points.
    Moszner { n: u32, size: usize },
    /// `F(u, v) = f(u) / f(v) · (1 + δ(u, v))`, `δ` uniform on `[-eps, eps]`,
    /// drawn row-major from a ChaCha8 stream seeded with `seed`.
    PerturbedRatio { labels: Vec<String>, f: Vec<Complex64>, eps: f64, seed: u64 },
}

impl GeneratorSpec {
    /// `ratio` with `f` the identity on the given real samples.
    pub fn ratio_identity(samples: &[f64]) -> Self {
        GeneratorSpec::Ratio {
            labels: samples.iter().map(|&x| render_real(x)).collect(),
            f: samples.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    /// `perturbed_ratio` with `f` the identity on the given real samples.
    pub fn perturbed_identity(samples: &[f64], eps: f64, seed: u64) -> Self {
        GeneratorSpec::PerturbedRatio {
            labels: samples.iter().map(|&x| render_real(x)).collect(),
            f: samples.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            eps,
            seed,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            GeneratorSpec::Constant { .. } => "constant",
            GeneratorSpec::Ratio { .. } => "ratio",
            GeneratorSpec::E1 { .. } => "e1",
            GeneratorSpec::E0 { .. } => "e0",
            GeneratorSpec::Mat2Ratio { .. } => "mat2_ratio",
            GeneratorSpec::Moszner { .. } => "moszner",
            GeneratorSpec::PerturbedRatio { .. } => "perturbed_ratio",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GeneratorSpec::Constant { value, size } => {
                check_size(*size)?;
                if !(value.re.is_finite() && value.im.is_finite()) {
                    return invalid("constant value must be finite");
                }
            }
            GeneratorSpec::Ratio { labels, f } => check_f(labels, f)?,
            GeneratorSpec::E1 { n, c } => {
                if *n < 2 {
                    return invalid("e1 requires integer n >= 2");
                }
                if !(c.is_finite() && *c > 0.0) {
                    return invalid("e1 requires c > 0");
                }
                let n = *n as usize;
                check_size(n * n - n + 1)?;
            }
            GeneratorSpec::E0 { samples } => {
                check_samples(samples)?;
                if let Some(x) = samples.iter().find(|&&x| x < 1.0) {
                    return invalid(format!("e0 samples must lie in [1, inf), got {x}"));
                }
            }
            GeneratorSpec::Mat2Ratio { c0, samples } => {
                if !(c0.is_finite() && *c0 > 0.0) {
                    return invalid("mat2_ratio requires c0 > 0");
                }
                check_samples(samples)?;
                if let Some(x) = samples.iter().find(|&&x| x <= 0.0) {
                    return invalid(format!("mat2_ratio samples must be positive, got {x}"));
                }
            }
            GeneratorSpec::Moszner { n, size } => {
                if *n <= 2 {
                    return invalid("moszner requires integer n > 2");
                }
                check_size(*size)?;
            }
            GeneratorSpec::PerturbedRatio { labels, f, eps, .. } => {
                check_f(labels, f)?;
                if !(eps.is_finite() && *eps >= 0.0) {
                    return invalid("perturbed_ratio requires eps >= 0");
                }
            }
        }
        Ok(())
    }
}

/// Shortest round-trip decimal, without a trailing `.0` for integers.
pub(crate) fn render_real(x: f64) -> String {
    format!("{x}")
}

pub fn generate(spec: &GeneratorSpec) -> Result<FiniteKernel> {
    spec.validate()?;
    match spec {
        GeneratorSpec::Constant { value, size } => constant(*value, *size),
        GeneratorSpec::Ratio { labels, f } => {
            FiniteKernel::from_fn(labels.clone(), ValueKind::Complex, |i, j| (f[i] / f[j]).into())
        }
        GeneratorSpec::E1 { n, c } => {
            let n = *n as u64;
            let points: Vec<f64> = (n..=n * n).map(|x| x as f64).collect();
            let labels = points.iter().map(|&x| render_real(x)).collect();
            FiniteKernel::from_fn(labels, ValueKind::Complex, |i, j| {
                AlgebraValue::real(points[i] / (points[j] + c))
            })
        }
        GeneratorSpec::E0 { samples } => {
            let labels = samples.iter().map(|&x| render_real(x)).collect();
            FiniteKernel::from_fn(labels, ValueKind::Complex, |i, j| {
                AlgebraValue::real(samples[i] / samples[j])
            })
        }
        GeneratorSpec::Mat2Ratio { c0, samples } => {
            let labels = samples.iter().map(|&x| render_real(x)).collect();
            FiniteKernel::from_fn(labels, ValueKind::Mat2, |i, j| {
                AlgebraValue::diag(samples[i] / samples[j], *c0)
            })
        }
        GeneratorSpec::Moszner { n, size } => constant(Complex64::new(1.0 / *n as f64, 0.0), *size),
        GeneratorSpec::PerturbedRatio { labels, f, eps, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let delta = Uniform::new_inclusive(-eps, *eps);
            FiniteKernel::from_fn(labels.clone(), ValueKind::Complex, |i, j| {
                let d = delta.sample(&mut rng);
                (f[i] / f[j] * (1.0 + d)).into()
            })
        }
    }
}

fn constant(value: Complex64, size: usize) -> Result<FiniteKernel> {
    let labels = (0..size).map(|i| i.to_string()).collect();
    FiniteKernel::from_fn(labels, ValueKind::Complex, |_, _| value.into())
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}

fn check_size(size: usize) -> Result<()> {
    if size == 0 {
        return invalid("kernel needs at least one point");
    }
    if size > MAX_POINTS {
        return invalid(format!("{size} points exceeds the limit of {MAX_POINTS}"));
    }
    Ok(())
}

fn check_samples(samples: &[f64]) -> Result<()> {
    check_size(samples.len())?;
    if let Some(x) = samples.iter().find(|x| !x.is_finite()) {
        return invalid(format!("sample {x} is not finite"));
    }
    Ok(())
}

fn check_f(labels: &[String], f: &[Complex64]) -> Result<()> {
    check_size(f.len())?;
    if labels.len() != f.len() {
        return invalid(format!("{} labels for {} f-values", labels.len(), f.len()));
    }
    for (label, z) in labels.iter().zip(f) {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return invalid(format!("f({label}) is not finite"));
        }
        if *z == Complex64::new(0.0, 0.0) {
            return invalid(format!("f({label}) is zero"));
        }
    }
    Ok(())
}
