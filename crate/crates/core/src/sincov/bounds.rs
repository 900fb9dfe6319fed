//! Checkers for the inequalities that follow from the stability inequality
//! with `c` equal to the kernel's defect.
//!
//! Every check is an algebraic consequence of the defect definition, so on
//! any kernel it must hold up to rounding. The tolerance is
//! `base · max(1, sup|F|)²`: the compared quantities are at most quadratic in
//! the entries.

use serde::Serialize;

use super::{defect_term, sincov_defect, DefectReport};
use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;
use crate::report::real;

pub const BASE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    #[serde(serialize_with = "real")]
    pub lhs: f64,
    #[serde(serialize_with = "real")]
    pub rhs: f64,
    pub holds: bool,
    pub witness: Vec<String>,
}

/// A kernel with its defect computed once, shared by all checkers.
#[derive(Debug, Clone)]
pub struct Analysis<'k> {
    kernel: &'k FiniteKernel,
    report: DefectReport,
    tol: f64,
}

impl<'k> Analysis<'k> {
    pub fn new(kernel: &'k FiniteKernel) -> Self {
        Self::with_tolerance(kernel, BASE_TOLERANCE)
    }

    pub fn with_tolerance(kernel: &'k FiniteKernel, base: f64) -> Self {
        Self::from_report(kernel, sincov_defect(kernel), base)
    }

    pub fn from_report(kernel: &'k FiniteKernel, report: DefectReport, base: f64) -> Self {
        let scale = kernel.max_abs().max(1.0);
        Analysis { kernel, report, tol: base * scale * scale }
    }

    pub fn kernel(&self) -> &'k FiniteKernel {
        self.kernel
    }

    pub fn report(&self) -> &DefectReport {
        &self.report
    }

    pub fn defect(&self) -> f64 {
        self.report.defect
    }

    /// Absolute tolerance applied by `holds`.
    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    fn check(&self, name: &str, lhs: f64, rhs: f64, witness: Vec<String>) -> BoundCheck {
        BoundCheck { name: name.to_string(), lhs, rhs, holds: lhs <= rhs + self.tol, witness }
    }

    fn labels(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.kernel.label(i).to_string()).collect()
    }

    /// `max_{a,b} |F(a,b) − F(a,x0)·F(x0,b)| ≤ c`: the `x = x0` slice of the
    /// defect maximum.
    pub fn slice_residual(&self, x0: &str) -> Result<BoundCheck> {
        let k = self.kernel;
        let r = k.index_of(x0)?;
        let n = k.len();
        let mut best = (f64::NEG_INFINITY, 0, 0);
        for a in 0..n {
            for b in 0..n {
                let t = defect_term(k.get(a, r), k.get(r, b), k.get(a, b))?;
                if t > best.0 {
                    best = (t, a, b);
                }
            }
        }
        Ok(self.check("slice_residual", best.0, self.defect(), self.labels(&[best.1, r, best.2])))
    }

    /// The diagonal estimates:
    ///
    /// * `prop1_ax`: `|F(a,x)·F(x,a) − F(a,a)| ≤ c`
    /// * `prop1_i`: `|F(a,a) − F(x,x)| ≤ 2c`
    /// * `prop1_ii`: `max_x |F(x,x)| ≤ min_a |F(a,a)| + 2c`
    ///
    /// The last two use `F(a,x)·F(x,a) = F(x,a)·F(a,x)` and so are guaranteed
    /// only when the kernel's values commute (always for scalars).
    pub fn diagonal_report(&self) -> Vec<BoundCheck> {
        let k = self.kernel;
        let n = k.len();
        let c = self.defect();

        let mut ax = (f64::NEG_INFINITY, 0, 0);
        let mut spread = (f64::NEG_INFINITY, 0, 0);
        for a in 0..n {
            for x in 0..n {
                let t = defect_term(k.get(a, x), k.get(x, a), k.get(a, a)).expect("homogeneous kernel");
                if t > ax.0 {
                    ax = (t, a, x);
                }
                let d = k.get(a, a).checked_sub(k.get(x, x)).expect("homogeneous kernel").abs();
                if d > spread.0 {
                    spread = (d, a, x);
                }
            }
        }

        let diag: Vec<f64> = (0..n).map(|i| k.get(i, i).abs()).collect();
        let (imax, dmax) = argext(&diag, |a, b| a > b);
        let (imin, dmin) = argext(&diag, |a, b| a < b);

        vec![
            self.check("prop1_i", spread.0, 2.0 * c, self.labels(&[spread.1, spread.2])),
            self.check("prop1_ax", ax.0, c, self.labels(&[ax.1, ax.2])),
            self.check("prop1_ii", dmax, dmin + 2.0 * c, self.labels(&[imax, imin])),
        ]
    }

    /// For every `x0`: `max_b |F(x0,b)|·|F(x0,x0) − 1| ≤ c` (`prop2_row`) and
    /// the column version with `F(b,x0)` (`prop2_col`).
    pub fn prop2_bound(&self) -> Result<Vec<BoundCheck>> {
        let k = self.kernel;
        k.require_complex("prop2_bound")?;
        let n = k.len();
        let c = self.defect();
        let mut out = Vec::with_capacity(2 * n);
        for x0 in 0..n {
            let gap = (k.scalar(x0, x0) - 1.0).norm();
            let row: Vec<f64> = (0..n).map(|b| k.scalar(x0, b).norm()).collect();
            let col: Vec<f64> = (0..n).map(|b| k.scalar(b, x0).norm()).collect();
            let (br, mr) = argext(&row, |a, b| a > b);
            let (bc, mc) = argext(&col, |a, b| a > b);
            out.push(self.check("prop2_row", mr * gap, c, self.labels(&[x0, br])));
            out.push(self.check("prop2_col", mc * gap, c, self.labels(&[bc, x0])));
        }
        Ok(out)
    }

    /// Column growth: for each `y`,
    /// `max_a |F(a,y0)| − c ≤ |F(y,y0)| · max_a |F(a,y)|`.
    ///
    /// Large values in the column of `y0` force large values in every
    /// column and forbid `F(y, y0) = 0`.
    pub fn growth_witness(&self, y0: &str) -> Result<Vec<BoundCheck>> {
        let k = self.kernel;
        let r = k.index_of(y0)?;
        let n = k.len();
        let col_max: Vec<(usize, f64)> = (0..n)
            .map(|y| argext(&(0..n).map(|a| k.get(a, y).abs()).collect::<Vec<_>>(), |a, b| a > b))
            .collect();
        let (a_star, top) = col_max[r];
        let lhs = top - self.defect();
        Ok((0..n)
            .map(|y| {
                let rhs = k.get(y, r).abs() * col_max[y].1;
                self.check("growth_col", lhs, rhs, self.labels(&[a_star, y, r]))
            })
            .collect())
    }

    /// Row growth, the transposed form: for each `x`,
    /// `max_b |F(x0,b)| − c ≤ |F(x0,x)| · max_b |F(x,b)|`.
    pub fn growth_witness_rows(&self, x0: &str) -> Result<Vec<BoundCheck>> {
        let k = self.kernel;
        let r = k.index_of(x0)?;
        let n = k.len();
        let row_max: Vec<(usize, f64)> = (0..n)
            .map(|x| argext(&k.row(x).iter().map(|v| v.abs()).collect::<Vec<_>>(), |a, b| a > b))
            .collect();
        let (b_star, top) = row_max[r];
        let lhs = top - self.defect();
        Ok((0..n)
            .map(|x| {
                let rhs = k.get(r, x).abs() * row_max[x].1;
                self.check("growth_row", lhs, rhs, self.labels(&[r, x, b_star]))
            })
            .collect())
    }

    /// `|g(x)·f(x) − 1| ≤ min_{a,b} [(c²+2c)/(|f(a)||g(b)|) + c|f(x)|/|f(a)| + c|g(x)|/|g(b)|]`
    /// with `f = F(·,x0)`, `g = F(x0,·)`.
    pub fn gauge_bound(&self, x0: &str, x: &str) -> Result<BoundCheck> {
        let k = self.kernel;
        let (fa, ga, r) = slice_moduli(k, x0)?;
        let xi = k.index_of(x)?;
        let lhs = (k.scalar(r, xi) * k.scalar(xi, r) - 1.0).norm();
        let (rhs, a, b) = rhs_min(&fa, &ga, xi, self.defect());
        Ok(self.check("gauge", lhs, rhs, self.labels(&[r, xi, a, b])))
    }

    /// `gauge_bound` for every `x`.
    pub fn gauge_bounds(&self, x0: &str) -> Result<Vec<BoundCheck>> {
        self.kernel.labels().iter().map(|x| self.gauge_bound(x0, x)).collect()
    }
}

/// Minimum over `(a, b)` of the gauge-bound right-hand side for an explicit
/// `c`, with the minimizing labels.
pub fn gauge_rhs_min(k: &FiniteKernel, x0: &str, x: &str, c: f64) -> Result<(f64, String, String)> {
    let (fa, ga, _) = slice_moduli(k, x0)?;
    let xi = k.index_of(x)?;
    let (v, a, b) = rhs_min(&fa, &ga, xi, c);
    Ok((v, k.label(a).to_string(), k.label(b).to_string()))
}

fn slice_moduli(k: &FiniteKernel, x0: &str) -> Result<(Vec<f64>, Vec<f64>, usize)> {
    k.require_complex("gauge_bound")?;
    let r = k.index_of(x0)?;
    let n = k.len();
    let f: Vec<f64> = (0..n).map(|u| k.scalar(u, r).norm()).collect();
    let g: Vec<f64> = (0..n).map(|v| k.scalar(r, v).norm()).collect();
    if let Some(u) = f.iter().position(|&m| m == 0.0) {
        return Err(Error::Vanishing(format!("f({}) = F({}, {}) = 0", k.label(u), k.label(u), x0)));
    }
    if let Some(v) = g.iter().position(|&m| m == 0.0) {
        return Err(Error::Vanishing(format!("g({}) = F({}, {}) = 0", k.label(v), x0, k.label(v))));
    }
    Ok((f, g, r))
}

fn rhs_min(f: &[f64], g: &[f64], x: usize, c: f64) -> (f64, usize, usize) {
    let quad = c * c + 2.0 * c;
    let mut best = (f64::INFINITY, 0, 0);
    for (a, fa) in f.iter().enumerate() {
        for (b, gb) in g.iter().enumerate() {
            let v = quad / (fa * gb) + c * f[x] / fa + c * g[x] / gb;
            if v < best.0 {
                best = (v, a, b);
            }
        }
    }
    best
}

/// First index attaining the extremum under `better`.
fn argext(xs: &[f64], better: impl Fn(f64, f64) -> bool) -> (usize, f64) {
    let mut best = (0, xs[0]);
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if better(x, best.1) {
            best = (i, x);
        }
    }
    best
}

pub fn slice_residual(k: &FiniteKernel, x0: &str) -> Result<BoundCheck> {
    Analysis::new(k).slice_residual(x0)
}

pub fn diagonal_report(k: &FiniteKernel) -> Vec<BoundCheck> {
    Analysis::new(k).diagonal_report()
}

pub fn prop2_bound(k: &FiniteKernel) -> Result<Vec<BoundCheck>> {
    Analysis::new(k).prop2_bound()
}

pub fn growth_witness(k: &FiniteKernel, y0: &str) -> Result<Vec<BoundCheck>> {
    Analysis::new(k).growth_witness(y0)
}

pub fn growth_witness_rows(k: &FiniteKernel, x0: &str) -> Result<Vec<BoundCheck>> {
    Analysis::new(k).growth_witness_rows(x0)
}

pub fn gauge_bound(k: &FiniteKernel, x0: &str, x: &str) -> Result<BoundCheck> {
    Analysis::new(k).gauge_bound(x0, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{generate, GeneratorSpec};
    use num_complex::Complex64;

    fn constant_m1() -> FiniteKernel {
        generate(&GeneratorSpec::Constant { value: Complex64::new(-1.0, 0.0), size: 3 }).unwrap()
    }

    fn ratio() -> FiniteKernel {
        generate(&GeneratorSpec::ratio_identity(&[1.0, 2.0, 4.0, 8.0, 3.0])).unwrap()
    }

    fn e1() -> FiniteKernel {
        generate(&GeneratorSpec::E1 { n: 2, c: 1.0 }).unwrap()
    }

    #[test]
    fn slice_examples() {
        for x0 in ["1", "4", "3"] {
            let c = slice_residual(&ratio(), x0).unwrap();
            assert_eq!((c.lhs, c.rhs, c.holds), (0.0, 0.0, true));
        }
        let c = slice_residual(&constant_m1(), "1").unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (2.0, 2.0, true));
        let m = generate(&GeneratorSpec::Mat2Ratio { c0: 2.0, samples: vec![1.0, 2.0, 4.0] }).unwrap();
        for x0 in ["1", "2", "4"] {
            let c = slice_residual(&m, x0).unwrap();
            assert_eq!((c.lhs, c.rhs, c.holds), (2.0, 2.0, true));
        }
        assert!(slice_residual(&m, "3").is_err());
    }

    #[test]
    fn gauge_examples() {
        let k = ratio();
        for x in k.labels() {
            let c = gauge_bound(&k, "2", x).unwrap();
            assert_eq!(c.rhs, 0.0);
            assert!(c.holds, "{c:?}");
        }
        let c = gauge_bound(&constant_m1(), "0", "2").unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (0.0, 12.0, true));
    }

    #[test]
    fn gauge_perturbed() {
        let samples: Vec<f64> = (1..=20).map(f64::from).collect();
        let k = generate(&GeneratorSpec::perturbed_identity(&samples, 0.01, 7)).unwrap();
        let c = gauge_bound(&k, "1", "5").unwrap();
        assert!(c.holds, "{c:?}");
        assert!(c.lhs > 0.0 && c.rhs > c.lhs);
    }

    #[test]
    fn gauge_rejects_vanishing_slices() {
        let k = generate(&GeneratorSpec::Constant { value: Complex64::new(0.0, 0.0), size: 2 }).unwrap();
        assert!(matches!(gauge_bound(&k, "0", "1"), Err(Error::Vanishing(_))));
    }

    #[test]
    fn diagonal_examples() {
        for c in diagonal_report(&ratio()) {
            assert!(c.holds);
        }
        let checks = diagonal_report(&ratio());
        assert_eq!((checks[0].lhs, checks[0].rhs), (0.0, 0.0));

        let checks = diagonal_report(&e1());
        assert!((checks[0].lhs - 2.0 / 15.0).abs() < 1e-15);
        assert!((checks[0].rhs - 8.0 / 9.0).abs() < 1e-15);
        assert!(checks.iter().all(|c| c.holds));

        let checks = diagonal_report(&constant_m1());
        assert_eq!((checks[0].lhs, checks[0].rhs), (0.0, 4.0));
        assert_eq!((checks[1].name.as_str(), checks[1].lhs, checks[1].rhs), ("prop1_ax", 2.0, 2.0));
        assert!(checks[1].holds);
    }

    #[test]
    fn prop2_examples() {
        for c in prop2_bound(&ratio()).unwrap() {
            assert_eq!(c.lhs, 0.0);
            assert!(c.holds);
        }
        for c in prop2_bound(&constant_m1()).unwrap() {
            assert_eq!((c.lhs, c.rhs, c.holds), (2.0, 2.0, true));
        }
        let checks = prop2_bound(&e1()).unwrap();
        let row = &checks[0];
        assert_eq!(row.witness[0], "2");
        assert!((row.lhs - 2.0 / 9.0).abs() < 1e-15);
        assert!(checks.iter().all(|c| c.holds));
        let m = generate(&GeneratorSpec::Mat2Ratio { c0: 2.0, samples: vec![1.0, 2.0] }).unwrap();
        assert!(prop2_bound(&m).is_err());
    }

    #[test]
    fn growth_examples() {
        let samples: Vec<f64> = (1..=10).map(f64::from).collect();
        let k = generate(&GeneratorSpec::ratio_identity(&samples)).unwrap();
        let checks = growth_witness(&k, "1").unwrap();
        let y2 = &checks[1];
        assert_eq!((y2.lhs, y2.rhs), (10.0, 10.0));
        assert!(checks.iter().all(|c| c.holds));

        for c in growth_witness(&constant_m1(), "0").unwrap() {
            assert_eq!((c.lhs, c.rhs, c.holds), (-1.0, 1.0, true));
        }

        let samples: Vec<f64> = (1..=20).map(f64::from).collect();
        let k = generate(&GeneratorSpec::perturbed_identity(&samples, 0.05, 3)).unwrap();
        assert!(growth_witness(&k, "1").unwrap().iter().all(|c| c.holds));
        assert!(growth_witness_rows(&k, "1").unwrap().iter().all(|c| c.holds));
    }

    #[test]
    fn rhs_min_with_explicit_c() {
        let samples: Vec<f64> = (1..=10).map(f64::from).collect();
        let k = generate(&GeneratorSpec::ratio_identity(&samples)).unwrap();
        // f(a) = a, g(b) = 1/b at x0 = 1; the minimum sits at a = 10, b = 1.
        let (v, a, b) = gauge_rhs_min(&k, "1", "1", 1.0).unwrap();
        assert_eq!((a.as_str(), b.as_str()), ("10", "1"));
        assert!((v - (3.0 / 10.0 + 1.0 / 10.0 + 1.0)).abs() < 1e-15);
    }
}
