//! C ABI for the `sincov` library.
//!
//! Kernels live behind the opaque `SincovKernel` handle. Every fallible call
//! returns a `SincovStatus`; on failure `sincov_last_error` describes the
//! cause. Strings handed out by the library must be released with
//! `sincov_string_free`, kernels with `sincov_kernel_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use sincov::ipspace::{self, Field, IPVector, InequalityMargin};
use sincov::report::to_json_bytes;
use sincov::{Error, FiniteKernel, GeneratorSpec};

/// Opaque kernel handle.
pub struct SincovKernel(FiniteKernel);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SincovStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed document, bad table shape, non-finite value.
    InvalidInput = 3,
    /// Generator or vector parameters out of range.
    InvalidParameter = 4,
    /// The operation is not defined for the kernel's value kind.
    UnsupportedKind = 5,
    UnknownLabel = 6,
    /// A required entry or slice is zero.
    Vanishing = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SincovField {
    Real = 0,
    Complex = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SincovDefect {
    pub defect: f64,
    pub mean_defect: f64,
    pub triple_count: u64,
    /// Indices `(a, x, b)` of the first triple attaining the defect.
    pub argmax: [usize; 3],
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SincovMargin {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`
    pub margin: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(SincovStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidParameter(_) | Error::Vector(_) => SincovStatus::InvalidParameter,
            Error::UnsupportedKind { .. } | Error::KindMismatch { .. } => SincovStatus::UnsupportedKind,
            Error::UnknownLabel(_) => SincovStatus::UnknownLabel,
            Error::Vanishing(_) => SincovStatus::Vanishing,
            _ => SincovStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SincovStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, recording any failure or panic as the thread's last error.
fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> SincovStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            SincovStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SincovStatus::Panic
        }
    }
}

unsafe fn kernel<'a>(k: *const SincovKernel) -> Result<&'a FiniteKernel, Failure> {
    k.as_ref().map(|k| &k.0).ok_or_else(|| null("kernel"))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn string<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(SincovStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_kernel(out: *mut *mut SincovKernel, spec: &GeneratorSpec) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let k = sincov::generate(spec)?;
    out.write(Box::into_raw(Box::new(SincovKernel(k))));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, bytes: Vec<u8>) -> Result<(), Failure> {
    let s = CString::new(bytes).map_err(|_| Failure(SincovStatus::InvalidInput, "embedded NUL".into()))?;
    put(out, s.into_raw())
}

/// Reference label or, when `reference` is null, the first label.
unsafe fn reference(k: &FiniteKernel, reference: *const c_char) -> Result<String, Failure> {
    if reference.is_null() {
        Ok(k.label(0).to_string())
    } else {
        Ok(string(reference, "reference")?.to_string())
    }
}

/// Message for the most recent failure on this thread; empty after a
/// success. Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn sincov_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sincov_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Frees a kernel. Null is ignored.
///
/// # Safety
/// `k` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sincov_kernel_free(k: *mut SincovKernel) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Parses a kernel document (`labels`, `value_kind`, `entries`).
///
/// # Safety
/// `json` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sincov_kernel_load_json(
    json: *const u8,
    len: usize,
    out: *mut *mut SincovKernel,
) -> SincovStatus {
    guard(|| {
        let bytes = slice(json, len, "json")?;
        let k = sincov::load_kernel(bytes)?;
        put(out, Box::into_raw(Box::new(SincovKernel(k))))
    })
}

/// Serializes a kernel to its JSON document. Free with `sincov_string_free`.
///
/// # Safety
/// `k` must be a live kernel; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sincov_kernel_save_json(k: *const SincovKernel, out: *mut *mut c_char) -> SincovStatus {
    guard(|| put_string(out, sincov::save_kernel(kernel(k)?)))
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `k` must be null or a live kernel.
#[no_mangle]
pub unsafe extern "C" fn sincov_kernel_size(k: *const SincovKernel) -> usize {
    k.as_ref().map_or(0, |k| k.0.len())
}

/// Builds a complex kernel from a row-major `n × n` table of real and
/// imaginary parts, labeled `0 .. n-1`.
///
/// # Safety
/// `re` and `im` must each point to `n * n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sincov_kernel_from_complex(
    n: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut SincovKernel,
) -> SincovStatus {
    guard(|| {
        let cells = n
            .checked_mul(n)
            .ok_or_else(|| Failure(SincovStatus::InvalidParameter, "table too large".into()))?;
        let re = slice(re, cells, "re")?;
        let im = slice(im, cells, "im")?;
        let labels = (0..n).map(|i| i.to_string()).collect();
        let k = FiniteKernel::from_fn(labels, sincov::ValueKind::Complex, |i, j| {
            sincov::AlgebraValue::complex(re[i * n + j], im[i * n + j])
        })?;
        put(out, Box::into_raw(Box::new(SincovKernel(k))))
    })
}

/// `F ≡ re + i·im` on `size` points.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sincov_generate_constant(
    re: f64,
    im: f64,
    size: usize,
    out: *mut *mut SincovKernel,
) -> SincovStatus {
    guard(|| put_kernel(out, &GeneratorSpec::Constant { value: Complex64::new(re, im), size }))
}

/// `F(a, b) = a / (b + c)` on `{n, …, n²}`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sincov_generate_e1(n: u32, c: f64, out: *mut *mut SincovKernel) -> SincovStatus {
    guard(|| put_kernel(out, &GeneratorSpec::E1 { n, c }))
}

/// `F(u, v) = u / v` on the given nonzero samples.
///
/// # Safety
/// `samples` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sincov_generate_ratio(
    samples: *const f64,
    len: usize,
    out: *mut *mut SincovKernel,
) -> SincovStatus {
    guard(|| put_kernel(out, &GeneratorSpec::ratio_identity(slice(samples, len, "samples")?)))
}

/// `F(u, v) = u / v · (1 + δ(u, v))` with seeded `δ` uniform on `[-eps, eps]`.
///
/// # Safety
/// `samples` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sincov_generate_perturbed_ratio(
    samples: *const f64,
    len: usize,
    eps: f64,
    seed: u64,
    out: *mut *mut SincovKernel,
) -> SincovStatus {
    guard(|| put_kernel(out, &GeneratorSpec::perturbed_identity(slice(samples, len, "samples")?, eps, seed)))
}

/// `F(u, v) = diag(u / v, c0)`, a 2×2 matrix-valued kernel.
///
/// # Safety
/// `samples` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sincov_generate_mat2_ratio(
    c0: f64,
    samples: *const f64,
    len: usize,
    out: *mut *mut SincovKernel,
) -> SincovStatus {
    guard(|| put_kernel(out, &GeneratorSpec::Mat2Ratio { c0, samples: slice(samples, len, "samples")?.to_vec() }))
}

/// Multiplicative defect over all triples.
///
/// # Safety
/// `k` must be a live kernel; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sincov_defect(k: *const SincovKernel, out: *mut SincovDefect) -> SincovStatus {
    guard(|| {
        let r = sincov::sincov_defect(kernel(k)?);
        put(
            out,
            SincovDefect {
                defect: r.defect,
                mean_defect: r.mean_defect,
                triple_count: r.triple_count,
                argmax: r.argmax_indices,
            },
        )
    })
}

/// Factorization report as JSON. A null `reference` selects the first label.
///
/// # Safety
/// `k` must be a live kernel; `reference` null or a C string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sincov_factorize_json(
    k: *const SincovKernel,
    reference: *const c_char,
    out: *mut *mut c_char,
) -> SincovStatus {
    guard(|| {
        let k = kernel(k)?;
        let r = self::reference(k, reference)?;
        put_string(out, to_json_bytes(&sincov::factorize(k, &r)?))
    })
}

/// Runs every applicable bound check and writes the report as JSON.
/// `*pass` receives whether all checks hold. A null `reference` selects the
/// first label; `base_tol` is scaled by `max(1, sup|F|)²`.
///
/// # Safety
/// `k` must be a live kernel; `reference` null or a C string; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn sincov_check_json(
    k: *const SincovKernel,
    reference: *const c_char,
    base_tol: f64,
    pass: *mut bool,
    out: *mut *mut c_char,
) -> SincovStatus {
    guard(|| {
        let k = kernel(k)?;
        let r = self::reference(k, reference)?;
        k.index_of(&r)?;
        let report = sincov::cli::run_checks(k, &r, base_tol);
        put(pass, report.pass)?;
        put_string(out, to_json_bytes(&report))
    })
}

fn field(f: SincovField) -> Field {
    match f {
        SincovField::Real => Field::Real,
        SincovField::Complex => Field::Complex,
    }
}

/// Seeded random sweep of the inner product inequalities, as JSON.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sincov_sweep_json(
    dim: usize,
    count: u64,
    f: SincovField,
    seed: u64,
    out: *mut *mut c_char,
) -> SincovStatus {
    guard(|| put_string(out, to_json_bytes(&ipspace::sweep(dim, count, field(f), seed)?)))
}

/// Reads a vector of `dim` coordinates stored as interleaved `re, im` pairs.
unsafe fn vector(f: SincovField, dim: usize, p: *const f64, what: &str) -> Result<IPVector, Failure> {
    let len = dim
        .checked_mul(2)
        .ok_or_else(|| Failure(SincovStatus::InvalidParameter, "dimension too large".into()))?;
    let xs = slice(p, len, what)?;
    let coords = xs.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
    Ok(IPVector::new(field(f), coords)?)
}

fn margin(m: InequalityMargin) -> SincovMargin {
    SincovMargin { lhs: m.lhs, rhs: m.rhs, margin: m.margin }
}

/// `|⟨a|x⟩⟨x|b⟩ − ⟨a|b⟩‖x‖²/2| ≤ ‖a‖‖b‖‖x‖²/2`. Each vector holds `2 * dim`
/// doubles, interleaved real and imaginary parts.
///
/// # Safety
/// `a`, `b`, `x` must each point to `2 * dim` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sincov_richard_margin(
    f: SincovField,
    dim: usize,
    a: *const f64,
    b: *const f64,
    x: *const f64,
    out: *mut SincovMargin,
) -> SincovStatus {
    guard(|| {
        let (a, b, x) = (vector(f, dim, a, "a")?, vector(f, dim, b, "b")?, vector(f, dim, x, "x")?);
        put(out, margin(ipspace::richard_margin(&a, &b, &x)?))
    })
}

/// `|⟨a|x⟩⟨x|b⟩| ≤ ½(‖a‖‖b‖ + |⟨a|b⟩|)‖x‖²`, same layout as
/// `sincov_richard_margin`.
///
/// # Safety
/// `a`, `b`, `x` must each point to `2 * dim` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sincov_buzano_margin(
    f: SincovField,
    dim: usize,
    a: *const f64,
    b: *const f64,
    x: *const f64,
    out: *mut SincovMargin,
) -> SincovStatus {
    guard(|| {
        let (a, b, x) = (vector(f, dim, a, "a")?, vector(f, dim, b, "b")?, vector(f, dim, x, "x")?);
        put(out, margin(ipspace::buzano_margin(&a, &b, &x)?))
    })
}
