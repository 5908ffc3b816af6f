//! C ABI over `pdm-core`.
//!
//! Problems are opaque handles created by [`pdm_problem_new`] and released by
//! [`pdm_problem_free`]. Every fallible call returns a [`PdmStatus`]; on
//! failure [`pdm_last_error_message`] describes the error for the calling
//! thread. Output pointers documented as optional may be null.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pdm_core::eigen::{self, ConvergeOptions, Grid};
use pdm_core::{EffectiveMassProblem, MassProfile, PdmError, ReferencePotential, SpectrumReport};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdmStatus {
    Ok = 0,
    InvalidInput = 1,
    NumericFailure = 2,
    Unsupported = 3,
    DomainMismatch = 4,
    NotConverged = 5,
    Io = 6,
    NullPointer = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdmMassKind {
    Rational2 = 0,
    Rational4 = 1,
    Constant = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdmTargetKind {
    Harmonic = 0,
    Morse = 1,
    Soliton = 2,
    Sextic = 3,
}

/// `alpha` is used by the rational kinds, `value` by `Constant`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PdmMassSpec {
    pub kind: PdmMassKind,
    pub alpha: f64,
    pub value: f64,
}

/// `lambda` is used by Morse and soliton (NaN selects the default), `j` by
/// the sextic target.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PdmTargetSpec {
    pub kind: PdmTargetKind,
    pub lambda: f64,
    pub j: f64,
}

/// One solved level. `exact` and `abs_error` are NaN when no exact value is known.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PdmLevel {
    pub n: usize,
    pub numeric: f64,
    pub extrapolated: f64,
    pub exact: f64,
    pub abs_error: f64,
    pub bound: bool,
}

/// Opaque problem handle.
pub struct PdmProblem {
    inner: EffectiveMassProblem,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &PdmError) -> PdmStatus {
    match e {
        PdmError::InvalidInput(_) | PdmError::GridDomain { .. } => PdmStatus::InvalidInput,
        PdmError::QuadratureFailure { .. }
        | PdmError::NumericFailure(_)
        | PdmError::EigenvectorFailure { .. } => PdmStatus::NumericFailure,
        PdmError::UnsupportedAnalyticSpectrum(_) | PdmError::NoPrintedForm(_) => {
            PdmStatus::Unsupported
        }
        PdmError::DomainMismatch(_) => PdmStatus::DomainMismatch,
        PdmError::NotConverged { .. } => PdmStatus::NotConverged,
        PdmError::Io { .. } | PdmError::Csv { .. } => PdmStatus::Io,
    }
}

fn fail(e: PdmError) -> PdmStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn guard(f: impl FnOnce() -> PdmStatus) -> PdmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("panic inside pdm");
            PdmStatus::Panic
        }
    }
}

fn null_pointer(name: &str) -> PdmStatus {
    set_error(&format!("{name} is null"));
    PdmStatus::NullPointer
}

/// # Safety
/// `out` must be null or valid for a write.
unsafe fn write_opt<T>(out: *mut T, v: T) {
    if !out.is_null() {
        out.write(v);
    }
}

fn mass_from(spec: &PdmMassSpec) -> pdm_core::Result<MassProfile> {
    match spec.kind {
        PdmMassKind::Rational2 => MassProfile::rational(2, spec.alpha),
        PdmMassKind::Rational4 => MassProfile::rational(4, spec.alpha),
        PdmMassKind::Constant => MassProfile::constant(spec.value),
    }
}

fn target_from(spec: &PdmTargetSpec) -> pdm_core::Result<ReferencePotential> {
    use pdm_core::reference::{DEFAULT_MORSE_LAMBDA, DEFAULT_SOLITON_LAMBDA};
    let or = |d: f64| if spec.lambda.is_nan() { d } else { spec.lambda };
    match spec.kind {
        PdmTargetKind::Harmonic => Ok(ReferencePotential::Harmonic),
        PdmTargetKind::Morse => ReferencePotential::morse(or(DEFAULT_MORSE_LAMBDA)),
        PdmTargetKind::Soliton => ReferencePotential::soliton(or(DEFAULT_SOLITON_LAMBDA)),
        PdmTargetKind::Sextic => ReferencePotential::sextic(spec.j),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pdm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread. Valid until the next
/// failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn pdm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Evaluate `m`, `m'`, `m''` at `x`. All outputs optional.
///
/// # Safety
/// `spec` must point to a valid `PdmMassSpec`; outputs must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pdm_mass_evaluate(
    spec: *const PdmMassSpec,
    x: f64,
    out_m: *mut f64,
    out_dm: *mut f64,
    out_d2m: *mut f64,
) -> PdmStatus {
    guard(|| {
        let Some(spec) = spec.as_ref() else {
            return null_pointer("spec");
        };
        match mass_from(spec).and_then(|p| p.evaluate(x)) {
            Ok(v) => {
                write_opt(out_m, v.m);
                write_opt(out_dm, v.dm);
                write_opt(out_d2m, v.d2m);
                PdmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Gauge potential `V₁(x)` of a mass profile.
///
/// # Safety
/// `spec` must point to a valid `PdmMassSpec`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pdm_gauge_potential(
    spec: *const PdmMassSpec,
    x: f64,
    out: *mut f64,
) -> PdmStatus {
    guard(|| {
        let Some(spec) = spec.as_ref() else {
            return null_pointer("spec");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        match mass_from(spec).and_then(|p| p.gauge_potential(x)) {
            Ok(v) => {
                out.write(v);
                PdmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Build a problem. On success `*out` receives a handle owned by the caller.
///
/// # Safety
/// `mass` and `target` must point to valid specs; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pdm_problem_new(
    mass: *const PdmMassSpec,
    target: *const PdmTargetSpec,
    out: *mut *mut PdmProblem,
) -> PdmStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        out.write(ptr::null_mut());
        let (Some(mass), Some(target)) = (mass.as_ref(), target.as_ref()) else {
            return null_pointer("spec");
        };
        let built = mass_from(mass)
            .and_then(|m| target_from(target).map(|t| (m, t)))
            .and_then(|(m, t)| EffectiveMassProblem::build(m, t));
        match built {
            Ok(inner) => {
                out.write(Box::into_raw(Box::new(PdmProblem { inner })));
                PdmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `problem` must be null or a handle from `pdm_problem_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pdm_problem_free(problem: *mut PdmProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// `V(x)`, `V₁(x)`, `x̄(x)` and `V₂(x̄)`. All outputs optional.
///
/// # Safety
/// `problem` must be a live handle; outputs must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pdm_problem_components(
    problem: *const PdmProblem,
    x: f64,
    out_v: *mut f64,
    out_v1: *mut f64,
    out_xbar: *mut f64,
    out_v2: *mut f64,
) -> PdmStatus {
    guard(|| {
        let Some(p) = problem.as_ref() else {
            return null_pointer("problem");
        };
        match p.inner.components(x) {
            Ok(c) => {
                write_opt(out_v, c.v);
                write_opt(out_v1, c.v1);
                write_opt(out_xbar, c.xbar);
                write_opt(out_v2, c.v2);
                PdmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `x̄(x)`.
///
/// # Safety
/// `problem` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pdm_problem_forward(
    problem: *const PdmProblem,
    x: f64,
    out: *mut f64,
) -> PdmStatus {
    guard(|| {
        let Some(p) = problem.as_ref() else {
            return null_pointer("problem");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        match p.inner.map().forward(x) {
            Ok(v) => {
                out.write(v);
                PdmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `x` such that `x̄(x) = xbar`.
///
/// # Safety
/// `problem` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pdm_problem_inverse(
    problem: *const PdmProblem,
    xbar: f64,
    out: *mut f64,
) -> PdmStatus {
    guard(|| {
        let Some(p) = problem.as_ref() else {
            return null_pointer("problem");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        match p.inner.map().inverse(xbar) {
            Ok(v) => {
                out.write(v);
                PdmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Default Dirichlet domain in `x` for this problem.
///
/// # Safety
/// `problem` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn pdm_problem_default_domain(
    problem: *const PdmProblem,
    out_min: *mut f64,
    out_max: *mut f64,
) -> PdmStatus {
    guard(|| {
        let Some(p) = problem.as_ref() else {
            return null_pointer("problem");
        };
        if out_min.is_null() || out_max.is_null() {
            return null_pointer("out");
        }
        match p.inner.default_domain() {
            Ok((lo, hi)) => {
                out_min.write(lo);
                out_max.write(hi);
                PdmStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Converged lowest `levels` eigenvalues. Pass NaN for `x_min` and `x_max` to
/// use the default domain and 0 for `nodes` to use the default node count.
/// `out_levels` must hold `levels` entries. On `PDM_STATUS_NOT_CONVERGED` the
/// levels of the last attempt are still written.
///
/// # Safety
/// `problem` must be a live handle; `out_levels` must be writable for
/// `levels` elements; `out_converged` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pdm_problem_spectrum(
    problem: *const PdmProblem,
    x_min: f64,
    x_max: f64,
    nodes: usize,
    levels: usize,
    tol: f64,
    out_levels: *mut PdmLevel,
    out_converged: *mut bool,
) -> PdmStatus {
    guard(|| {
        let Some(p) = problem.as_ref() else {
            return null_pointer("problem");
        };
        if out_levels.is_null() {
            return null_pointer("out_levels");
        }
        let domain = if x_min.is_nan() && x_max.is_nan() {
            p.inner.default_domain()
        } else {
            Ok((x_min, x_max))
        };
        let nodes = if nodes == 0 {
            eigen::DEFAULT_NODES
        } else {
            nodes
        };
        let grid = domain.and_then(|(lo, hi)| Grid::new(lo, hi, nodes));
        let grid = match grid {
            Ok(g) => g,
            Err(e) => return fail(e),
        };
        let opts = ConvergeOptions {
            target_tol: tol,
            ..ConvergeOptions::default()
        };
        let write = |r: &SpectrumReport| {
            let out = std::slice::from_raw_parts_mut(out_levels, levels);
            for (slot, l) in out.iter_mut().zip(&r.levels) {
                *slot = PdmLevel {
                    n: l.n,
                    numeric: l.numeric,
                    extrapolated: l.extrapolated,
                    exact: l.exact.unwrap_or(f64::NAN),
                    abs_error: l.abs_error.unwrap_or(f64::NAN),
                    bound: l.bound,
                };
            }
            write_opt(out_converged, r.converged);
        };
        match eigen::converge(&p.inner, grid, levels, &opts) {
            Ok(r) => {
                write(&r);
                PdmStatus::Ok
            }
            Err(PdmError::NotConverged { report, .. }) => {
                write(&report);
                set_error("eigenvalues not converged");
                PdmStatus::NotConverged
            }
            Err(e) => fail(e),
        }
    })
}

/// Analytically known levels of a target, ascending. Writes at most
/// `capacity` energies and the total count to `out_len`.
///
/// # Safety
/// `target` must be valid; `out_energies` must be writable for `capacity`
/// elements; `out_len` must be writable; `out_partial` may be null.
#[no_mangle]
pub unsafe extern "C" fn pdm_exact_spectrum(
    target: *const PdmTargetSpec,
    max_levels: usize,
    out_energies: *mut f64,
    capacity: usize,
    out_len: *mut usize,
    out_partial: *mut bool,
) -> PdmStatus {
    guard(|| {
        let Some(target) = target.as_ref() else {
            return null_pointer("target");
        };
        if out_len.is_null() || (capacity > 0 && out_energies.is_null()) {
            return null_pointer("out");
        }
        let spectrum = match target_from(target).and_then(|t| t.exact_spectrum(max_levels)) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let energies = spectrum.energies();
        out_len.write(energies.len());
        write_opt(out_partial, spectrum.partial_spectrum);
        if energies.len() > capacity {
            set_error(&format!("need room for {} energies", energies.len()));
            return PdmStatus::BufferTooSmall;
        }
        if !energies.is_empty() {
            ptr::copy_nonoverlapping(energies.as_ptr(), out_energies, energies.len());
        }
        PdmStatus::Ok
    })
}
