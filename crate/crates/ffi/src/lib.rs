//! C ABI over the `eigqr` solvers.
//!
//! Matrices and reports are opaque heap handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! an [`EqrStatus`]; on failure a message is kept per thread and can be read
//! with [`eqr_last_error_message`]. Panics never cross the boundary.
//!
//! Status codes line up with the `eigqr` command line exit codes.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use eigqr::bench::{read_matrix, write_matrix};
use eigqr::{
    enhanced_shifted_qr, oracle_eigenvalues, Complex64, ComplexMatrix, DeflationMode, EigenReport,
    Error, QRMethod, ShiftStrategy, SolverConfig, SolverKind,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqrStatus {
    Ok = 0,
    /// Null pointer, bad enum value, invalid configuration or too small a buffer.
    Usage = 1,
    /// Unreadable or malformed input, wrong shape, non-finite entries.
    Input = 2,
    /// Numerical breakdown or rank deficiency.
    Numerical = 3,
    /// The iteration budget ran out; the report is still produced.
    NotConverged = 4,
    Panic = 5,
}

#[repr(u32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqrShift {
    None = 0,
    Rayleigh = 1,
    Wilkinson = 2,
}

#[repr(u32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqrQrMethod {
    Householder = 0,
    Givens = 1,
    GramSchmidtClassical = 2,
    GramSchmidtModified = 3,
}

#[repr(u32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqrDeflationMode {
    Full = 0,
    TrailingOnly = 1,
}

#[repr(u32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqrSolver {
    Enhanced = 0,
    WilkinsonNoDeflate = 1,
    Rayleigh = 2,
    Plain = 3,
}

/// Solver settings. Enum-valued fields hold the `EqrShift`, `EqrQrMethod`
/// and `EqrDeflationMode` constants; out-of-range values are rejected.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqrConfig {
    pub k_max: usize,
    pub eps: f64,
    pub deflation_tol: f64,
    pub shift: u32,
    pub qr_method: u32,
    pub deflation_mode: u32,
    /// Nonzero to balance before iterating.
    pub balance: c_int,
}

/// Opaque dense complex matrix.
pub struct EqrMatrix(ComplexMatrix);

/// Opaque solver result.
pub struct EqrReport(EigenReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> EqrStatus {
    match e.exit_code() {
        1 => EqrStatus::Usage,
        3 => EqrStatus::Numerical,
        _ => EqrStatus::Input,
    }
}

struct Fail(EqrStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(EqrStatus::Usage, msg.into())
}

/// Runs `f`, records any failure and converts panics into [`EqrStatus::Panic`].
fn guard<F: FnOnce() -> Result<EqrStatus, Fail>>(f: F) -> EqrStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            EqrStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| usage(format!("{what} is null")))
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, Fail> {
    if p.is_null() {
        return Err(usage("path is null"));
    }
    let s = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| usage("path is not valid UTF-8"))?;
    Ok(PathBuf::from(s))
}

unsafe fn out_arg<'a, T>(out: *mut *mut T) -> Result<&'a mut *mut T, Fail> {
    let slot = out.as_mut().ok_or_else(|| usage("output pointer is null"))?;
    *slot = ptr::null_mut();
    Ok(slot)
}

fn to_config(c: &EqrConfig) -> Result<SolverConfig, Fail> {
    let shift = match c.shift {
        0 => ShiftStrategy::NoShift,
        1 => ShiftStrategy::Rayleigh,
        2 => ShiftStrategy::Wilkinson,
        v => return Err(usage(format!("unknown shift {v}"))),
    };
    let qr_method = match c.qr_method {
        0 => QRMethod::Householder,
        1 => QRMethod::Givens,
        2 => QRMethod::GramSchmidtClassical,
        3 => QRMethod::GramSchmidtModified,
        v => return Err(usage(format!("unknown QR method {v}"))),
    };
    let deflation_mode = match c.deflation_mode {
        0 => DeflationMode::Paper,
        1 => DeflationMode::TrailingOnly,
        v => return Err(usage(format!("unknown deflation mode {v}"))),
    };
    let cfg = SolverConfig {
        k_max: c.k_max,
        eps: c.eps,
        deflation_tol: c.deflation_tol,
        shift,
        qr_method,
        deflation_mode,
        do_balance: c.balance != 0,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn from_config(cfg: &SolverConfig) -> EqrConfig {
    EqrConfig {
        k_max: cfg.k_max,
        eps: cfg.eps,
        deflation_tol: cfg.deflation_tol,
        shift: match cfg.shift {
            ShiftStrategy::NoShift => EqrShift::None,
            ShiftStrategy::Rayleigh => EqrShift::Rayleigh,
            ShiftStrategy::Wilkinson => EqrShift::Wilkinson,
        } as u32,
        qr_method: match cfg.qr_method {
            QRMethod::Householder => EqrQrMethod::Householder,
            QRMethod::Givens => EqrQrMethod::Givens,
            QRMethod::GramSchmidtClassical => EqrQrMethod::GramSchmidtClassical,
            QRMethod::GramSchmidtModified => EqrQrMethod::GramSchmidtModified,
        } as u32,
        deflation_mode: match cfg.deflation_mode {
            DeflationMode::Paper => EqrDeflationMode::Full,
            DeflationMode::TrailingOnly => EqrDeflationMode::TrailingOnly,
        } as u32,
        balance: cfg.do_balance as c_int,
    }
}

unsafe fn config_arg(c: *const EqrConfig) -> Result<SolverConfig, Fail> {
    match c.as_ref() {
        Some(c) => to_config(c),
        None => Ok(SolverConfig::default()),
    }
}

fn finish(report: EigenReport, out: &mut *mut EqrReport) -> EqrStatus {
    let converged = report.converged;
    *out = Box::into_raw(Box::new(EqrReport(report)));
    if converged {
        EqrStatus::Ok
    } else {
        set_last_error("iteration budget exhausted before convergence".into());
        EqrStatus::NotConverged
    }
}

unsafe fn write_split(
    values: &[Complex64],
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
) -> Result<EqrStatus, Fail> {
    if re.is_null() || im.is_null() {
        return Err(usage("output buffer is null"));
    }
    if capacity < values.len() {
        return Err(usage(format!(
            "buffer holds {capacity} values, {} needed",
            values.len()
        )));
    }
    for (k, z) in values.iter().enumerate() {
        *re.add(k) = z.re;
        *im.add(k) = z.im;
    }
    Ok(EqrStatus::Ok)
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn eqr_status_string(status: c_int) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"usage error",
        2 => c"invalid input",
        3 => c"numerical breakdown",
        4 => c"not converged",
        5 => c"internal panic",
        _ => c"unknown status",
    };
    s.as_ptr()
}

/// Message for the last failed call on this thread, or null if it succeeded.
/// The pointer is valid until the next `eqr_*` call on the same thread.
#[no_mangle]
pub extern "C" fn eqr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn eqr_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(
        concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes(),
    ) {
        Ok(v) => v,
        Err(_) => c"unknown",
    };
    VERSION.as_ptr()
}

/// Builds a `rows x cols` matrix from row-major real and imaginary parts.
/// `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `rows * cols` doubles and
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eqr_matrix_new(
    rows: usize,
    cols: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut EqrMatrix,
) -> EqrStatus {
    guard(|| {
        let out = out_arg(out)?;
        if re.is_null() {
            return Err(usage("real part is null"));
        }
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| Fail(EqrStatus::Input, "dimensions overflow".into()))?;
        let re = std::slice::from_raw_parts(re, len);
        let data = if im.is_null() {
            re.iter().map(|&x| Complex64::new(x, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, len);
            re.iter().zip(im).map(|(&x, &y)| Complex64::new(x, y)).collect()
        };
        let m = ComplexMatrix::from_vec(rows, cols, data)?;
        *out = Box::into_raw(Box::new(EqrMatrix(m)));
        Ok(EqrStatus::Ok)
    })
}

/// Reads a `.mtx`/`.mm` (Matrix Market) or `.csv` file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eqr_matrix_read(path: *const c_char, out: *mut *mut EqrMatrix) -> EqrStatus {
    guard(|| {
        let out = out_arg(out)?;
        let m = read_matrix(path_arg(path)?)?;
        *out = Box::into_raw(Box::new(EqrMatrix(m)));
        Ok(EqrStatus::Ok)
    })
}

/// Writes a matrix; the format follows the file extension.
///
/// # Safety
/// `m` must come from this library and `path` be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn eqr_matrix_write(m: *const EqrMatrix, path: *const c_char) -> EqrStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        write_matrix(&m.0, path_arg(path)?)?;
        Ok(EqrStatus::Ok)
    })
}

/// Row count, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn eqr_matrix_rows(m: *const EqrMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// Column count, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn eqr_matrix_cols(m: *const EqrMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// # Safety
/// `m` must come from this library; `re` and `im` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn eqr_matrix_get(
    m: *const EqrMatrix,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> EqrStatus {
    guard(|| {
        let m = &deref(m, "matrix")?.0;
        if row >= m.rows() || col >= m.cols() {
            return Err(Fail(
                EqrStatus::Input,
                format!("index ({row}, {col}) outside {}x{}", m.rows(), m.cols()),
            ));
        }
        write_split(&[m[(row, col)]], re, im, 1)
    })
}

/// # Safety
/// `m` must be null or a handle from this library not already freed.
#[no_mangle]
pub unsafe extern "C" fn eqr_matrix_free(m: *mut EqrMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Default enhanced-solver settings.
#[no_mangle]
pub extern "C" fn eqr_config_default() -> EqrConfig {
    from_config(&SolverConfig::default())
}

/// Runs the deflating, balanced Wilkinson-shifted iteration with `config`
/// (null for defaults). On `Ok` or `NotConverged` `*out` receives a report.
///
/// # Safety
/// `m` must come from this library, `config` be null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn eqr_eig(
    m: *const EqrMatrix,
    config: *const EqrConfig,
    out: *mut *mut EqrReport,
) -> EqrStatus {
    guard(|| {
        let out = out_arg(out)?;
        let m = deref(m, "matrix")?;
        let cfg = config_arg(config)?;
        Ok(finish(enhanced_shifted_qr(&m.0, &cfg)?, out))
    })
}

/// Runs one of the named solvers. Only the tolerances and iteration budget
/// of `config` are used; each solver fixes its own shift and balancing.
///
/// # Safety
/// As for [`eqr_eig`].
#[no_mangle]
pub unsafe extern "C" fn eqr_solve(
    m: *const EqrMatrix,
    solver: u32,
    config: *const EqrConfig,
    out: *mut *mut EqrReport,
) -> EqrStatus {
    guard(|| {
        let out = out_arg(out)?;
        let m = deref(m, "matrix")?;
        let kind = match solver {
            0 => SolverKind::Enhanced,
            1 => SolverKind::WilkinsonNoDeflate,
            2 => SolverKind::Rayleigh,
            3 => SolverKind::Plain,
            v => return Err(usage(format!("unknown solver {v}"))),
        };
        let cfg = config_arg(config)?;
        Ok(finish(kind.run(&m.0, &cfg)?, out))
    })
}

/// Reference eigenvalues from the characteristic polynomial (n <= 12),
/// written to `re`/`im`, which must hold at least n values.
///
/// # Safety
/// `m` must come from this library; `re`/`im` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn eqr_oracle_eigenvalues(
    m: *const EqrMatrix,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
) -> EqrStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        let values = oracle_eigenvalues(&m.0)?;
        write_split(&values, re, im, capacity)
    })
}

/// # Safety
/// `r` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn eqr_report_eigenvalue_count(r: *const EqrReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.eigenvalues.len())
}

/// Copies the eigenvalues in extraction order.
///
/// # Safety
/// `r` must come from this library; `re`/`im` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn eqr_report_eigenvalues(
    r: *const EqrReport,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
) -> EqrStatus {
    guard(|| {
        let r = deref(r, "report")?;
        write_split(&r.0.eigenvalues, re, im, capacity)
    })
}

/// # Safety
/// `r` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn eqr_report_iterations(r: *const EqrReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.iterations)
}

/// # Safety
/// `r` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn eqr_report_qr_steps(r: *const EqrReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.qr_steps)
}

/// # Safety
/// `r` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn eqr_report_deflations(r: *const EqrReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.deflations)
}

/// 1 if converged, 0 otherwise (including a null handle).
///
/// # Safety
/// `r` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn eqr_report_converged(r: *const EqrReport) -> c_int {
    r.as_ref().is_some_and(|r| r.0.converged) as c_int
}

/// NaN for a null handle.
///
/// # Safety
/// `r` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn eqr_report_final_subdiag_norm(r: *const EqrReport) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.final_subdiag_norm)
}

/// Number of per-iteration trace records.
///
/// # Safety
/// `r` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn eqr_report_trace_len(r: *const EqrReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.trace.len())
}

/// Subdiagonal norm after each traced iteration, written to `norms`.
///
/// # Safety
/// `r` must come from this library; `norms` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn eqr_report_trace_norms(
    r: *const EqrReport,
    norms: *mut f64,
    capacity: usize,
) -> EqrStatus {
    guard(|| {
        let r = deref(r, "report")?;
        let recs = &r.0.trace.records;
        if norms.is_null() {
            return Err(usage("output buffer is null"));
        }
        if capacity < recs.len() {
            return Err(usage(format!("buffer holds {capacity} values, {} needed", recs.len())));
        }
        for (k, rec) in recs.iter().enumerate() {
            *norms.add(k) = rec.subdiag_norm;
        }
        Ok(EqrStatus::Ok)
    })
}

/// # Safety
/// `r` must be null or a handle from this library not already freed.
#[no_mangle]
pub unsafe extern "C" fn eqr_report_free(r: *mut EqrReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
