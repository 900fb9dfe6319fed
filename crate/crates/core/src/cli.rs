//! The `sincov` command line.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage error, 3 invalid input.
//! Every error is a single line on stderr starting with `error[<kind>]:`.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::ipspace::{sweep, Field};
use crate::kernel::{generate, load_kernel, save_kernel, FiniteKernel, GeneratorSpec};
use crate::report::to_json_bytes;
use crate::sincov::{factorize, sincov_defect, Analysis, BoundCheck, DefectReport, BASE_TOLERANCE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Environment variable capping analysis threads; `0` or unset means automatic.
pub const THREADS_ENV: &str = "SINCOV_THREADS";

#[derive(Debug, Parser)]
#[command(name = "sincov", version, about = "Sincov-equation stability and inner-product inequality checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated kernel file.
    Gen(GenArgs),
    /// Compute the defect of a kernel.
    Defect {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Reference-point factorization of a scalar kernel.
    Factorize {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        /// Reference label (default: first label).
        #[arg(long = "ref")]
        reference: Option<String>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Run every bound check against the kernel's defect.
    Check {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long = "ref")]
        reference: Option<String>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Base tolerance, scaled by max(1, sup|F|)².
        #[arg(long, default_value_t = BASE_TOLERANCE)]
        tol: f64,
    },
    /// Sample random vectors and measure the inequality margins.
    Sweep {
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long, default_value_t = 100_000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FieldArg::Real)]
        field: FieldArg,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Example {
    Constant,
    Ratio,
    E1,
    E0,
    Mat2Ratio,
    Moszner,
    PerturbedRatio,
}

#[derive(Debug, clap::Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub example: Example,
    /// Constant value, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub value: Option<String>,
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c0: Option<f64>,
    /// Comma-separated sample points.
    #[arg(long, allow_hyphen_values = true)]
    pub samples: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let msg = e.render().to_string();
                    let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
                    let _ = writeln!(stderr, "error[usage]: {first}");
                    EXIT_USAGE
                }
            };
        }
    };

    let threads = match thread_setting() {
        Ok(t) => t,
        Err(msg) => {
            let _ = writeln!(stderr, "error[usage]: {msg}");
            return EXIT_USAGE;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error[input]: thread pool: {e}");
            return EXIT_INPUT;
        }
    };

    match pool.install(|| execute(cli.command, stdout, stderr)) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(stderr, "error[usage]: {m}");
            EXIT_USAGE
        }
        Err(Failure::Input(m)) => {
            let _ = writeln!(stderr, "error[input]: {m}");
            EXIT_INPUT
        }
        Err(Failure::Check(m)) => {
            let _ = writeln!(stderr, "error[check]: {m}");
            EXIT_CHECK_FAILED
        }
    }
}

fn thread_setting() -> Result<usize, String> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("{THREADS_ENV} must be a non-negative integer, got {s:?}")),
    }
}

fn execute(cmd: Command, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> Result<(), Failure> {
    match cmd {
        Command::Gen(args) => {
            let spec = generator_spec(&args)?;
            let k = generate(&spec)?;
            emit(args.output.as_deref(), &save_kernel(&k), stdout)?;
            let _ = writeln!(stderr, "sincov: generated {} kernel with {} points", spec.variant_name(), k.len());
            Ok(())
        }
        Command::Defect { input, output } => {
            let k = read_kernel(&input)?;
            let report = sincov_defect(&k);
            emit(output.as_deref(), &to_json_bytes(&report), stdout)?;
            let [a, x, b] = &report.argmax_triple;
            let _ = writeln!(stderr, "sincov: defect {} at (a={a}, x={x}, b={b})", report.defect);
            Ok(())
        }
        Command::Factorize { input, reference, output } => {
            let k = read_kernel(&input)?;
            let r = reference.unwrap_or_else(|| k.label(0).to_string());
            let fz = factorize(&k, &r)?;
            emit(output.as_deref(), &to_json_bytes(&fz), stdout)?;
            let _ = writeln!(
                stderr,
                "sincov: factorized at {r}: gauge_error {} residual {}",
                fz.gauge_error, fz.residual
            );
            Ok(())
        }
        Command::Check { input, reference, output, tol } => {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(Failure::Usage(format!("--tol must be a non-negative number, got {tol}")));
            }
            let k = read_kernel(&input)?;
            let r = reference.unwrap_or_else(|| k.label(0).to_string());
            k.index_of(&r)?;
            let report = run_checks(&k, &r, tol);
            emit(output.as_deref(), &to_json_bytes(&report), stdout)?;
            let failed: Vec<&BoundCheck> = report.checks.iter().filter(|c| !c.holds).collect();
            let _ = writeln!(
                stderr,
                "sincov: {} checks, {} failed, {} skipped (defect {})",
                report.checks.len(),
                failed.len(),
                report.skipped.len(),
                report.defect.defect
            );
            if let Some(first) = failed.first() {
                return Err(Failure::Check(format!(
                    "{} failed: lhs {} > rhs {} at {:?}",
                    first.name, first.lhs, first.rhs, first.witness
                )));
            }
            Ok(())
        }
        Command::Sweep { dim, count, seed, field, output } => {
            if dim == 0 || count == 0 {
                return Err(Failure::Usage("--dim and --count must be positive".into()));
            }
            let report = sweep(dim, count, field.into(), seed)?;
            emit(output.as_deref(), &to_json_bytes(&report), stdout)?;
            for m in &report.margins {
                let _ = writeln!(stderr, "sincov: {:<24} min margin {:e}", m.name, m.min_margin);
            }
            let _ = writeln!(
                stderr,
                "sincov: normalized gram ({} vectors) defect {} (bound 2)",
                report.gram.vectors, report.gram.defect
            );
            if !report.pass {
                return Err(Failure::Check("inequality sweep found a violation".into()));
            }
            Ok(())
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Skipped {
    pub check: &'static str,
    pub reason: String,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub defect: DefectReport,
    pub reference: String,
    pub tolerance: f64,
    pub checks: Vec<BoundCheck>,
    pub skipped: Vec<Skipped>,
    pub pass: bool,
}

/// All bound checks with a single defect computation. Checks that do not
/// apply to the kernel (matrix values, vanishing slices) are listed in
/// `skipped`.
pub fn run_checks(k: &FiniteKernel, reference: &str, base_tol: f64) -> CheckReport {
    let analysis = Analysis::with_tolerance(k, base_tol);
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    let mut take = |name: &'static str, r: crate::Result<Vec<BoundCheck>>| match r {
        Ok(mut c) => checks.append(&mut c),
        Err(e) => skipped.push(Skipped { check: name, reason: e.to_string() }),
    };
    take("slice_residual", analysis.slice_residual(reference).map(|c| vec![c]));
    take("diagonal_report", Ok(analysis.diagonal_report()));
    take("prop2_bound", analysis.prop2_bound());
    take("growth_witness", analysis.growth_witness(reference));
    take("growth_witness_rows", analysis.growth_witness_rows(reference));
    take("gauge_bound", analysis.gauge_bounds(reference));
    let pass = checks.iter().all(|c| c.holds);
    CheckReport {
        defect: analysis.report().clone(),
        reference: reference.to_string(),
        tolerance: analysis.tolerance(),
        checks,
        skipped,
        pass,
    }
}

fn require<T: Copy>(v: Option<T>, flag: &str, example: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--example {example} requires {flag}")))
}

fn parse_samples(s: Option<&String>, example: &str) -> Result<Vec<f64>, Failure> {
    let s = s.ok_or_else(|| Failure::Usage(format!("--example {example} requires --samples")))?;
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("--samples: cannot parse {t:?}")))
        })
        .collect()
}

fn parse_value(s: &str) -> Result<Complex64, Failure> {
    let bad = || Failure::Usage(format!("--value: expected `re` or `re,im`, got {s:?}"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(bad()),
    }
}

fn generator_spec(a: &GenArgs) -> Result<GeneratorSpec, Failure> {
    Ok(match a.example {
        Example::Constant => {
            let value = a.value.as_deref().ok_or_else(|| Failure::Usage("--example constant requires --value".into()))?;
            GeneratorSpec::Constant { value: parse_value(value)?, size: require(a.size, "--size", "constant")? }
        }
        Example::Ratio => GeneratorSpec::ratio_identity(&parse_samples(a.samples.as_ref(), "ratio")?),
        Example::E1 => GeneratorSpec::E1 { n: require(a.n, "--n", "e1")?, c: require(a.c, "--c", "e1")? },
        Example::E0 => GeneratorSpec::E0 { samples: parse_samples(a.samples.as_ref(), "e0")? },
        Example::Mat2Ratio => GeneratorSpec::Mat2Ratio {
            c0: require(a.c0, "--c0", "mat2_ratio")?,
            samples: parse_samples(a.samples.as_ref(), "mat2_ratio")?,
        },
        Example::Moszner => GeneratorSpec::Moszner {
            n: require(a.n, "--n", "moszner")?,
            size: require(a.size, "--size", "moszner")?,
        },
        Example::PerturbedRatio => GeneratorSpec::perturbed_identity(
            &parse_samples(a.samples.as_ref(), "perturbed_ratio")?,
            require(a.eps, "--eps", "perturbed_ratio")?,
            a.seed,
        ),
    })
}

fn read_kernel(path: &Path) -> Result<FiniteKernel, Failure> {
    let bytes = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        buf
    } else {
        fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
    };
    load_kernel(&bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, bytes: &[u8], stdout: &mut (dyn Write + Send)) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => stdout.write_all(bytes).map_err(|e| Failure::Input(format!("stdout: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("sincov").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = run_capture(&["frobnicate"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.starts_with("error[usage]:"), "{err}");
        let (code, _, err) = run_capture(&["gen", "--example", "e1", "--n", "2"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--c"), "{err}");
        let (code, _, _) = run_capture(&["gen", "--example", "e1", "--n", "1", "--c", "1"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn negative_constant_value() {
        let (code, out, _) = run_capture(&["gen", "--example", "constant", "--value", "-1", "--size", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("-1.0"));
        let (code, out, _) = run_capture(&["gen", "--example", "constant", "--value", "0.5,-2", "--size", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("-2.0"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("sweep"));
    }

    #[test]
    fn value_parsing() {
        assert_eq!(parse_value("-1").unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(parse_value("1, 2").unwrap(), Complex64::new(1.0, 2.0));
        assert!(parse_value("1,2,3").is_err());
        assert!(parse_value("x").is_err());
    }
}
