//! The multiplicative Sincov equation `F(a,x)·F(x,b) = F(a,b)` on finite
//! kernels: defect computation, factorization and bound checks.

mod bounds;
mod factor;

pub use bounds::{
    diagonal_report, gauge_bound, gauge_rhs_min, growth_witness, growth_witness_rows, prop2_bound,
    slice_residual, Analysis, BoundCheck, BASE_TOLERANCE,
};
pub use factor::{factorize, gm_factorize, Factorization};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::kernel::FiniteKernel;
use crate::report::real;
use crate::value::AlgebraValue;

/// `|F(a,x)·F(x,b) − F(a,b)|` for a single triple.
///
/// Overflowing products give `+inf` rather than NaN.
pub fn defect_term(ax: &AlgebraValue, xb: &AlgebraValue, ab: &AlgebraValue) -> Result<f64> {
    let prod = ax.checked_mul(xb)?;
    Ok(nan_to_inf(prod.checked_sub(ab)?.abs()))
}

#[inline]
fn nan_to_inf(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

/// The smallest `c` for which the kernel satisfies the stability inequality,
/// with the triple attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectReport {
    #[serde(serialize_with = "real")]
    pub defect: f64,
    pub argmax_triple: [String; 3],
    pub triple_count: u64,
    #[serde(serialize_with = "real")]
    pub mean_defect: f64,
    #[serde(skip)]
    pub argmax_indices: [usize; 3],
}

#[derive(Clone, Copy)]
struct RowPartial {
    max: f64,
    x: usize,
    b: usize,
    sum: f64,
}

/// Exhaustive maximum of the defect term over all `|X|³` triples.
///
/// Rows `a` are reduced in parallel; within a row the scan is sequential and
/// the row partials are combined in index order, so the maximum, the
/// lexicographically smallest argmax and the floating-point mean are
/// identical for any thread count.
pub fn sincov_defect(k: &FiniteKernel) -> DefectReport {
    let n = k.len();
    let partials: Vec<RowPartial> = match k.complex_entries() {
        Some(z) => (0..n)
            .into_par_iter()
            .map(|a| {
                scan_row(n, |x, b| nan_to_inf((z[a * n + x] * z[x * n + b] - z[a * n + b]).norm()))
            })
            .collect(),
        None => (0..n)
            .into_par_iter()
            .map(|a| {
                scan_row(n, |x, b| {
                    defect_term(k.get(a, x), k.get(x, b), k.get(a, b)).expect("homogeneous kernel")
                })
            })
            .collect(),
    };

    let mut best = (f64::NEG_INFINITY, [0usize; 3]);
    let mut total = 0.0;
    for (a, p) in partials.iter().enumerate() {
        if p.max > best.0 {
            best = (p.max, [a, p.x, p.b]);
        }
        total += p.sum;
    }
    let count = (n as u64).pow(3);
    let [a, x, b] = best.1;
    DefectReport {
        defect: best.0,
        argmax_triple: [k.label(a).to_string(), k.label(x).to_string(), k.label(b).to_string()],
        triple_count: count,
        mean_defect: (total / count as f64).min(best.0),
        argmax_indices: best.1,
    }
}

fn scan_row(n: usize, term: impl Fn(usize, usize) -> f64) -> RowPartial {
    let mut p = RowPartial { max: f64::NEG_INFINITY, x: 0, b: 0, sum: 0.0 };
    for x in 0..n {
        for b in 0..n {
            let t = term(x, b);
            if t > p.max {
                p.max = t;
                p.x = x;
                p.b = b;
            }
            p.sum += t;
        }
    }
    p
}

/// True iff the kernel solves the equation up to `tol`.
pub fn is_exact(k: &FiniteKernel, tol: f64) -> bool {
    sincov_defect(k).defect <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{generate, GeneratorSpec};
    use num_complex::Complex64;

    fn constant(v: f64, size: usize) -> FiniteKernel {
        generate(&GeneratorSpec::Constant { value: Complex64::new(v, 0.0), size }).unwrap()
    }

    #[test]
    fn defect_term_examples() {
        let m1 = AlgebraValue::real(-1.0);
        assert_eq!(defect_term(&m1, &m1, &m1).unwrap(), 2.0);
        let one = AlgebraValue::real(1.0);
        assert_eq!(defect_term(&one, &one, &one).unwrap(), 0.0);
        let (a, x, b) = (3.0, 5.0, 7.0);
        let t = defect_term(
            &AlgebraValue::diag(a / x, 2.0),
            &AlgebraValue::diag(x / b, 2.0),
            &AlgebraValue::diag(a / b, 2.0),
        )
        .unwrap();
        assert_eq!(t, 2.0);
        assert!(defect_term(&one, &AlgebraValue::diag(1.0, 1.0), &one).is_err());
    }

    #[test]
    fn constant_minus_one() {
        let r = sincov_defect(&constant(-1.0, 3));
        assert_eq!(r.defect, 2.0);
        assert_eq!(r.triple_count, 27);
        assert_eq!(r.argmax_indices, [0, 0, 0]);
        assert_eq!(r.mean_defect, 2.0);
    }

    #[test]
    fn e1_small_brute_force() {
        // Brute force over the 27 triples of {2,3,4}: max a·c/((b+c)(x+c)) at (4,2,2).
        let k = generate(&GeneratorSpec::E1 { n: 2, c: 1.0 }).unwrap();
        let r = sincov_defect(&k);
        assert!((r.defect - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(r.argmax_triple, ["4".to_string(), "2".into(), "2".into()]);
    }

    #[test]
    fn ratio_is_exact() {
        let k = generate(&GeneratorSpec::ratio_identity(&[1.0, 2.0, 4.0])).unwrap();
        assert_eq!(sincov_defect(&k).defect, 0.0);
        assert!(is_exact(&k, 0.0));
        assert!(!is_exact(&constant(-1.0, 2), 1e-9));
    }

    #[test]
    fn e0_solves_with_every_c() {
        let k = generate(&GeneratorSpec::E0 { samples: vec![1.0, 2.0, 10.0, 100.0] }).unwrap();
        assert!(is_exact(&k, 1e-12));
    }

    #[test]
    fn single_point_degenerate() {
        let k = constant(3.0, 1);
        let r = sincov_defect(&k);
        assert_eq!(r.defect, 6.0); // |9 - 3|
        assert_eq!(r.triple_count, 1);
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let k = constant(-1.0, 4);
        assert_eq!(sincov_defect(&k).argmax_triple, ["0".to_string(), "0".into(), "0".into()]);
    }

    #[test]
    fn thread_count_does_not_change_report() {
        let k = generate(&GeneratorSpec::perturbed_identity(
            &(1..=40).map(f64::from).collect::<Vec<_>>(),
            0.3,
            17,
        ))
        .unwrap();
        let reference = sincov_defect(&k);
        for threads in [1, 2, 3, 8] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let r = pool.install(|| sincov_defect(&k));
            assert_eq!(r, reference);
            assert_eq!(r.mean_defect.to_bits(), reference.mean_defect.to_bits());
        }
        let [a, x, b] = reference.argmax_indices;
        assert_eq!(defect_term(k.get(a, x), k.get(x, b), k.get(a, b)).unwrap(), reference.defect);
    }
}
