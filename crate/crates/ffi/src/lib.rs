//! C interface to `mhfem`.
//!
//! Problems and reports are opaque handles owned by the caller and released
//! with the matching `_free` function. Every entry point returns an
//! [`MhfemStatus`]; on failure [`mhfem_last_error_message`] describes the
//! error. Panics are caught at the boundary and reported as
//! `MHFEM_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mhfem::fourier::ProblemSpec;
use mhfem::majorant::MajorantReport;
use mhfem::report::render_csv;
use mhfem::{solve_level, Error, RunConfig, SolveOptions};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MhfemStatus {
    Ok = 0,
    NullPointer = 1,
    Config = 2,
    Solver = 3,
    InvalidArgument = 4,
    Io = 5,
    Panic = 6,
}

/// A problem together with its solver options.
pub struct MhfemProblem {
    problem: ProblemSpec,
    options: SolveOptions,
}

/// Estimates for one mesh level.
pub struct MhfemReport {
    inner: MajorantReport,
}

/// One harmonic of a report. Exact-error fields are NaN when the problem
/// has no exact solution.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MhfemModeRow {
    pub k: usize,
    pub r1: f64,
    pub r2: f64,
    pub majorant_semi: f64,
    pub majorant_norm: f64,
    pub exact_semi: f64,
    pub exact_norm: f64,
    pub eff_index: f64,
    pub iterations: usize,
}

/// Space-time totals of a report. Exact-error fields are NaN when unknown.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MhfemGlobalRow {
    pub level: usize,
    pub dofs: usize,
    pub r1: f64,
    pub r2: f64,
    pub e_n: f64,
    pub majorant_semi: f64,
    pub majorant_norm: f64,
    pub exact_semi: f64,
    pub exact_norm: f64,
    pub eff_index: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MhfemStatus {
    match e {
        Error::Config { .. } | Error::InvalidCoefficient(_) => MhfemStatus::Config,
        Error::Io(_) => MhfemStatus::Io,
        e if e.is_solver_failure() => MhfemStatus::Solver,
        _ => MhfemStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (MhfemStatus, String)>) -> MhfemStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MhfemStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("panic inside mhfem");
            MhfemStatus::Panic
        }
    }
}

fn lift(e: Error) -> (MhfemStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (MhfemStatus, String) {
    (MhfemStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (MhfemStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        (
            MhfemStatus::InvalidArgument,
            format!("`{what}` is not UTF-8"),
        )
    })
}

unsafe fn emit_problem(
    out: *mut *mut MhfemProblem,
    problem: MhfemProblem,
) -> Result<(), (MhfemStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(problem));
    Ok(())
}

/// Built-in time-harmonic example.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn mhfem_problem_example1(out: *mut *mut MhfemProblem) -> MhfemStatus {
    guard(|| {
        emit_problem(
            out,
            MhfemProblem {
                problem: ProblemSpec::example1(),
                options: SolveOptions::default(),
            },
        )
    })
}

/// Built-in multiharmonic example.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn mhfem_problem_example2(out: *mut *mut MhfemProblem) -> MhfemStatus {
    guard(|| {
        emit_problem(
            out,
            MhfemProblem {
                problem: ProblemSpec::example2(),
                options: SolveOptions::default(),
            },
        )
    })
}

/// Problem from the text of a `key = value` configuration file. Output
/// settings and levels in the text are ignored.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn mhfem_problem_from_config(
    text: *const c_char,
    out: *mut *mut MhfemProblem,
) -> MhfemStatus {
    guard(|| {
        let cfg: RunConfig = c_str(text, "text")?.parse().map_err(lift)?;
        cfg.validate().map_err(lift)?;
        emit_problem(
            out,
            MhfemProblem {
                problem: cfg.problem,
                options: cfg.options,
            },
        )
    })
}

/// Relative residual reduction of the iterative solvers, in (0, 1).
///
/// # Safety
/// `problem` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mhfem_problem_set_tolerance(
    problem: *mut MhfemProblem,
    tol: f64,
) -> MhfemStatus {
    guard(|| {
        let p = problem.as_mut().ok_or_else(|| null("problem"))?;
        if !(tol > 0.0 && tol < 1.0) {
            return Err((
                MhfemStatus::InvalidArgument,
                format!("tolerance {tol} not in (0, 1)"),
            ));
        }
        p.options.solver.rel_tol = tol;
        Ok(())
    })
}

/// # Safety
/// `problem` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mhfem_problem_free(problem: *mut MhfemProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Solves and estimates on the uniform mesh with `level` cells per side.
///
/// # Safety
/// `problem` must be a live handle and `out` valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn mhfem_solve(
    problem: *const MhfemProblem,
    level: usize,
    out: *mut *mut MhfemReport,
) -> MhfemStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = solve_level(&p.problem, level, &p.options).map_err(lift)?;
        *out = Box::into_raw(Box::new(MhfemReport { inner }));
        Ok(())
    })
}

/// Number of harmonics in the report, `N + 1`. Zero for a null handle.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mhfem_report_num_modes(report: *const MhfemReport) -> usize {
    report.as_ref().map_or(0, |r| r.inner.modes.len())
}

/// # Safety
/// `report` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn mhfem_report_mode(
    report: *const MhfemReport,
    index: usize,
    out: *mut MhfemModeRow,
) -> MhfemStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let m = r.inner.modes.get(index).ok_or_else(|| {
            (
                MhfemStatus::InvalidArgument,
                format!("mode index {index} out of range 0..{}", r.inner.modes.len()),
            )
        })?;
        *out = MhfemModeRow {
            k: m.k,
            r1: m.r1,
            r2: m.r2,
            majorant_semi: m.majorant_semi,
            majorant_norm: m.majorant_norm,
            exact_semi: m.exact.map_or(f64::NAN, |e| e.seminorm()),
            exact_norm: m.exact.map_or(f64::NAN, |e| e.norm()),
            eff_index: m.eff_index.unwrap_or(f64::NAN),
            iterations: m.iterations,
        };
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn mhfem_report_global(
    report: *const MhfemReport,
    out: *mut MhfemGlobalRow,
) -> MhfemStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let g = &r.inner.global;
        *out = MhfemGlobalRow {
            level: r.inner.level,
            dofs: r.inner.dofs,
            r1: g.r1,
            r2: g.r2,
            e_n: g.e_n,
            majorant_semi: g.majorant_semi,
            majorant_norm: g.majorant_norm,
            exact_semi: g.exact_semi.unwrap_or(f64::NAN),
            exact_norm: g.exact_norm.unwrap_or(f64::NAN),
            eff_index: g.eff_index.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// Writes the report as CSV, header included, replacing `path`.
///
/// # Safety
/// `report` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mhfem_report_write_csv(
    report: *const MhfemReport,
    path: *const c_char,
) -> MhfemStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let path = c_str(path, "path")?;
        let text = render_csv(std::slice::from_ref(&r.inner));
        std::fs::write(path, text).map_err(|e| (MhfemStatus::Io, format!("{path}: {e}")))
    })
}

/// # Safety
/// `report` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mhfem_report_free(report: *mut MhfemReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Message of the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn mhfem_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
