//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Value};

use sincov::ipspace::{normalized_gram, sample_vectors, sweep, Field};
use sincov::sincov::gauge_rhs_min;
use sincov::{
    factorize, generate, gm_factorize, sincov_defect, Analysis, BoundCheck, Error, FiniteKernel,
    GeneratorSpec,
};

struct Outcome {
    pass: bool,
    detail: String,
    report: Value,
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

const CRITERIA: [Criterion; 9] = [
    ("AC1 inequality sweep", inequality_sweep, Some(Duration::from_secs(30))),
    ("AC2 normalized Gram defect", gram_defect, Some(Duration::from_secs(10))),
    ("AC3 constant kernel tightness", constant_tightness, None),
    ("AC4 bounded example a/(b+c)", bounded_example, Some(Duration::from_secs(5))),
    ("AC5 matrix-valued counterexample", matrix_counterexample, None),
    ("AC6 ratio kernel recovery", ratio_recovery, None),
    ("AC7 proof-chain bounds", proof_chain, None),
    ("AC8 shrinking gauge bound", shrinking_bound, None),
    ("AC9 log-domain vs reference factorization", gm_equivalence, None),
];

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut all = true;
    let mut runs: Vec<Vec<Vec<u8>>> = Vec::new();

    for run in 0..2 {
        let mut files = Vec::new();
        for (name, criterion, limit) in CRITERIA {
            let start = Instant::now();
            let out = criterion();
            let elapsed = start.elapsed();
            let in_time = limit.is_none_or(|l| elapsed <= l);
            let pass = out.pass && in_time;
            let path = dir.path().join(format!("run{run}-{}.json", &name[..3]));
            files.push(write_report(&path, &out.report));
            if run == 0 {
                let budget = limit.map(|l| format!(" (limit {}s)", l.as_secs())).unwrap_or_default();
                println!(
                    "[{}] {name}: {} [{:.2}s{budget}]",
                    if pass { "PASS" } else { "FAIL" },
                    out.detail,
                    elapsed.as_secs_f64()
                );
            }
            all &= pass;
        }
        runs.push(files);
    }

    let identical = runs[0] == runs[1];
    println!(
        "[{}] AC10 determinism: {} report files byte-identical across two runs",
        if identical { "PASS" } else { "FAIL" },
        runs[0].len()
    );
    all &= identical;

    if all {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}

fn write_report(path: &Path, report: &Value) -> Vec<u8> {
    let bytes = serde_json::to_vec_pretty(report).unwrap();
    std::fs::write(path, &bytes).unwrap();
    std::fs::read(path).unwrap()
}

fn inequality_sweep() -> Outcome {
    let mut reports = Vec::new();
    let mut pass = true;
    let mut worst = f64::INFINITY;
    for dim in [1usize, 2, 3, 8, 16] {
        for (fi, field) in [Field::Real, Field::Complex].into_iter().enumerate() {
            let seed = 1000 + 10 * dim as u64 + fi as u64;
            let r = sweep(dim, 100_000, field, seed).unwrap();
            for m in &r.margins[..3] {
                pass &= m.min_scaled_margin >= -1e-9;
                worst = worst.min(m.min_scaled_margin);
            }
            reports.push(serde_json::to_value(&r.margins).unwrap());
        }
    }
    Outcome {
        pass,
        detail: format!("10 configs x 1e5 triples, worst (rhs-lhs)/(1+rhs) = {worst:e} >= -1e-9"),
        report: json!(reports),
    }
}

fn gram_defect() -> Outcome {
    let mut worst = 0.0f64;
    let mut defects = Vec::new();
    for field in [Field::Real, Field::Complex] {
        for seed in 0..20u64 {
            let vs = sample_vectors(8, 64, field, 500 + seed).unwrap();
            let d = sincov_defect(&normalized_gram(&vs).unwrap()).defect;
            worst = worst.max(d);
            defects.push(d);
        }
    }
    Outcome {
        pass: worst <= 2.0 + 1e-9,
        detail: format!("40 families of 64 vectors, max defect {worst} <= 2 + 1e-9"),
        report: json!(defects),
    }
}

fn constant_tightness() -> Outcome {
    let mut pass = true;
    let mut rows = Vec::new();
    for c0 in [0.5, 1.0, 2.0] {
        let k = generate(&GeneratorSpec::Constant { value: Complex64::new(-c0, 0.0), size: 3 }).unwrap();
        let d = sincov_defect(&k).defect;
        let target = c0 * c0 + c0;
        pass &= (d - target).abs() <= 1e-12;
        rows.push(json!({"c0": c0, "defect": d, "expected": target}));
    }
    Outcome { pass, detail: "defect = c0^2 + c0 for c0 in {0.5, 1, 2}".into(), report: json!(rows) }
}

fn bounded_example() -> Outcome {
    let k = generate(&GeneratorSpec::E1 { n: 10, c: 1.0 }).unwrap();
    let sup = k.max_abs();
    let d = sincov_defect(&k).defect;
    let pass = sup == 100.0 / 11.0 && (d - 100.0 / 121.0).abs() <= 1e-12 && d < 1.0 && k.len() == 91;
    Outcome {
        pass,
        detail: format!("|X| = {}, sup|F| = {sup} (100/11), defect = {d} (100/121) < c = 1", k.len()),
        report: json!({"sup": sup, "defect": d}),
    }
}

fn matrix_counterexample() -> Outcome {
    let samples: Vec<f64> = (1..=10).map(f64::from).collect();
    let k = generate(&GeneratorSpec::Mat2Ratio { c0: 2.0, samples }).unwrap();
    let d = sincov_defect(&k).defect;
    let rejected = matches!(factorize(&k, k.label(0)), Err(Error::UnsupportedKind { .. }));
    Outcome {
        pass: (d - 2.0).abs() <= 1e-12 && rejected,
        detail: format!("defect = {d} (|c0^2 - c0| = 2), factorize rejected: {rejected}"),
        report: json!({"defect": d, "rejected": rejected}),
    }
}

fn random_nonzero_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        if z.norm() > 1e-6 {
            return z;
        }
    }
}

fn ratio_recovery() -> Outcome {
    let mut worst_residual = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(6000 + seed);
        let f: Vec<Complex64> = (0..50).map(|_| random_nonzero_complex(&mut rng)).collect();
        let labels = (0..50).map(|i| format!("u{i}")).collect();
        let k = generate(&GeneratorSpec::Ratio { labels, f: f.clone() }).unwrap();
        let fz = factorize(&k, k.label(0)).unwrap();
        worst_residual = worst_residual.max(fz.residual / k.max_abs());
        for u in 0..50 {
            for v in 0..50 {
                let truth = f[u] / f[v];
                worst_ratio = worst_ratio.max((fz.ratio(u, v) - truth).norm() / truth.norm());
            }
        }
    }
    Outcome {
        pass: worst_residual <= 1e-12 && worst_ratio <= 1e-12,
        detail: format!(
            "100 kernels on 50 points: residual/sup|F| <= {worst_residual:e}, ratio rel. error <= {worst_ratio:e}"
        ),
        report: json!({"residual": worst_residual, "ratio": worst_ratio}),
    }
}

fn proof_chain() -> Outcome {
    let mut failures: Vec<BoundCheck> = Vec::new();
    let mut count = 0usize;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(7000 + seed);
        let n = rng.gen_range(5..=30);
        let eps = rng.gen_range(0.0..=0.5);
        let f: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(rng.gen_range(0.2..5.0), rng.gen_range(-3.1..3.1)))
            .collect();
        let labels = (0..n).map(|i| format!("u{i}")).collect();
        let k = generate(&GeneratorSpec::PerturbedRatio { labels, f, eps, seed }).unwrap();
        let refs = [k.label(0).to_string(), k.label(n / 2).to_string()];
        let checks = run_all(&k, &refs);
        count += checks.len();
        failures.extend(checks.into_iter().filter(|c| !c.holds));
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("200 perturbed kernels, {count} checks, {} violations", failures.len()),
        report: json!({"checks": count, "failures": failures}),
    }
}

fn run_all(k: &FiniteKernel, refs: &[String]) -> Vec<BoundCheck> {
    let a = Analysis::new(k);
    let mut out = a.diagonal_report();
    out.extend(a.prop2_bound().unwrap());
    for r in refs {
        out.push(a.slice_residual(r).unwrap());
        out.extend(a.growth_witness(r).unwrap());
        out.extend(a.growth_witness_rows(r).unwrap());
        out.extend(a.gauge_bounds(r).unwrap());
    }
    out
}

fn shrinking_bound() -> Outcome {
    let mut values = Vec::new();
    for m in [10u32, 100, 1000] {
        let samples: Vec<f64> = (1..=m).map(f64::from).collect();
        let k = generate(&GeneratorSpec::ratio_identity(&samples)).unwrap();
        // Reference near sqrt(M) makes both f = F(., x0) and g = F(x0, .) grow with M.
        let x0 = (f64::from(m).sqrt().round() as u32).to_string();
        let (v, a, b) = gauge_rhs_min(&k, &x0, &x0, 1.0).unwrap();
        values.push(json!({"M": m, "x0": x0, "rhs_min": v, "a": a, "b": b}));
    }
    let v: Vec<f64> = values.iter().map(|r| r["rhs_min"].as_f64().unwrap()).collect();
    Outcome {
        pass: v[0] > v[1] && v[1] > v[2],
        detail: format!("min rhs at M = 10, 100, 1000: {:.4} > {:.4} > {:.4}", v[0], v[1], v[2]),
        report: json!(values),
    }
}

fn gm_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + seed);
        let n = rng.gen_range(2..=40);
        let f: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(10f64.powf(rng.gen_range(-1.0..1.0)), 0.0))
            .collect();
        let labels = (0..n).map(|i| format!("u{i}")).collect();
        let k = generate(&GeneratorSpec::Ratio { labels, f }).unwrap();
        let gm = gm_factorize(&k).unwrap();
        let rp = factorize(&k, k.label(0)).unwrap();
        for u in 0..n {
            for v in 0..n {
                let r = rp.ratio(u, v);
                worst = worst.max((gm.ratio(u, v) - r).norm() / r.norm());
            }
        }
    }
    Outcome {
        pass: worst <= 1e-12,
        detail: format!("20 positive ratio kernels, max relative ratio gap {worst:e} <= 1e-12"),
        report: json!({"worst": worst}),
    }
}
