//! C ABI for the asymloss library.
//!
//! Every entry point returns an [`AsymStatus`]; results come back through
//! out-pointers. The correction is handed out as an opaque handle with
//! accessor functions and an explicit destructor. All functions catch
//! panics at the boundary and report them as `ASYM_STATUS_PANIC` instead
//! of unwinding into foreign frames.
//!
//! The matching header is generated into `include/asymloss.h` at build
//! time.

use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use asymloss::error::Error;
use asymloss::fit::{fit_moments, summarize};
use asymloss::gnd::GndParams;
use asymloss::loss::{expected_loss, expected_loss_derivative, variance_loss, LossParams};
use asymloss::montecarlo::estimate_loss_stats;
use asymloss::optimizer::{optimal_correction, Correction};

/// Result of every API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymStatus {
    /// Success.
    Ok = 0,
    /// Input outside a function's domain (nonpositive shape, NaN, ...).
    Domain = 1,
    /// An iteration failed to converge.
    Convergence = 2,
    /// An intermediate quantity exceeds the floating-point range.
    Overflow = 3,
    /// Residual moments incompatible with the error-distribution family.
    OutOfFamily = 4,
    /// Malformed input.
    InvalidInput = 5,
    /// Internal consistency failure.
    Internal = 6,
    /// A required pointer was null.
    NullPointer = 7,
    /// A panic was caught at the language boundary.
    Panic = 8,
}

impl From<&Error> for AsymStatus {
    fn from(err: &Error) -> Self {
        match err {
            Error::Domain(_) => AsymStatus::Domain,
            Error::Convergence(_) => AsymStatus::Convergence,
            Error::Overflow(_) => AsymStatus::Overflow,
            Error::OutOfFamily(_) => AsymStatus::OutOfFamily,
            Error::InvalidInput(_) => AsymStatus::InvalidInput,
            Error::Internal(_) => AsymStatus::Internal,
        }
    }
}

/// Static name of a status code, e.g. for error messages.
#[no_mangle]
pub extern "C" fn asym_status_name(status: AsymStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        AsymStatus::Ok => b"ok\0",
        AsymStatus::Domain => b"domain error\0",
        AsymStatus::Convergence => b"convergence failure\0",
        AsymStatus::Overflow => b"overflow\0",
        AsymStatus::OutOfFamily => b"out of family\0",
        AsymStatus::InvalidInput => b"invalid input\0",
        AsymStatus::Internal => b"internal consistency\0",
        AsymStatus::NullPointer => b"null pointer\0",
        AsymStatus::Panic => b"panic at boundary\0",
    };
    name.as_ptr() as *const c_char
}

/// Opaque handle to a computed correction; read it through the
/// `asym_correction_*` accessors and release it with
/// [`asym_correction_free`].
pub struct AsymCorrection {
    inner: Correction,
}

/// Moment estimates from the Monte Carlo loss sampler.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymLossStats {
    pub n: u64,
    pub mean: f64,
    pub variance: f64,
    pub mean_stderr: f64,
    pub variance_stderr: f64,
    pub seed: u64,
}

fn guarded<F: FnOnce() -> AsymStatus>(body: F) -> AsymStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => AsymStatus::Panic,
    }
}

fn params(a: f64, b: f64) -> Result<GndParams, AsymStatus> {
    GndParams::new(a, b).map_err(|e| AsymStatus::from(&e))
}

fn slopes(k1: f64, k2: f64) -> Result<LossParams, AsymStatus> {
    LossParams::new(k1, k2).map_err(|e| AsymStatus::from(&e))
}

/// Solve for the optimal correction; on success `*out` owns a handle that
/// must be released with [`asym_correction_free`].
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn asym_correction_compute(
    a: f64,
    b: f64,
    k1: f64,
    k2: f64,
    out: *mut *mut AsymCorrection,
) -> AsymStatus {
    if out.is_null() {
        return AsymStatus::NullPointer;
    }
    guarded(|| {
        let p = match params(a, b) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let k = match slopes(k1, k2) {
            Ok(k) => k,
            Err(s) => return s,
        };
        match optimal_correction(&p, &k) {
            Ok(corr) => {
                let handle = Box::new(AsymCorrection { inner: corr });
                unsafe { *out = Box::into_raw(handle) };
                AsymStatus::Ok
            }
            Err(e) => AsymStatus::from(&e),
        }
    })
}

/// Release a correction handle; null is accepted and ignored.
///
/// # Safety
/// `handle` must come from [`asym_correction_compute`] and not be freed
/// twice.
#[no_mangle]
pub unsafe extern "C" fn asym_correction_free(handle: *mut AsymCorrection) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

// Accessors are written out one by one (no macro) so cbindgen, which
// parses the source syntactically, emits each into the header.

fn read_correction(handle: *const AsymCorrection, pick: fn(&Correction) -> f64) -> f64 {
    if handle.is_null() {
        return f64::NAN;
    }
    pick(unsafe { &(*handle).inner })
}

/// The optimal shift C; its sign follows sgn(k2 − k1). NaN on null.
///
/// # Safety
/// `handle` must be live (from [`asym_correction_compute`]) or null.
#[no_mangle]
pub unsafe extern "C" fn asym_correction_shift(handle: *const AsymCorrection) -> f64 {
    read_correction(handle, |c| c.shift)
}

/// The transformed root x* = |C/b|^(1/a). NaN on null.
///
/// # Safety
/// `handle` must be live (from [`asym_correction_compute`]) or null.
#[no_mangle]
pub unsafe extern "C" fn asym_correction_x_star(handle: *const AsymCorrection) -> f64 {
    read_correction(handle, |c| c.x_star)
}

/// E[L(Z)], the expected loss before correcting. NaN on null.
///
/// # Safety
/// `handle` must be live (from [`asym_correction_compute`]) or null.
#[no_mangle]
pub unsafe extern "C" fn asym_correction_expected_loss_at_zero(
    handle: *const AsymCorrection,
) -> f64 {
    read_correction(handle, |c| c.expected_loss_at_zero)
}

/// E[L(Z+C)], the minimized expected loss. NaN on null.
///
/// # Safety
/// `handle` must be live (from [`asym_correction_compute`]) or null.
#[no_mangle]
pub unsafe extern "C" fn asym_correction_expected_loss_at_shift(
    handle: *const AsymCorrection,
) -> f64 {
    read_correction(handle, |c| c.expected_loss_at_shift)
}

/// Var[L(Z)]. NaN on null.
///
/// # Safety
/// `handle` must be live (from [`asym_correction_compute`]) or null.
#[no_mangle]
pub unsafe extern "C" fn asym_correction_variance_at_zero(
    handle: *const AsymCorrection,
) -> f64 {
    read_correction(handle, |c| c.variance_at_zero)
}

/// Var[L(Z+C)]; never exceeds the uncorrected variance. NaN on null.
///
/// # Safety
/// `handle` must be live (from [`asym_correction_compute`]) or null.
#[no_mangle]
pub unsafe extern "C" fn asym_correction_variance_at_shift(
    handle: *const AsymCorrection,
) -> f64 {
    read_correction(handle, |c| c.variance_at_shift)
}

/// E[L(Z+C)]/E[L(Z)] in (0, 1]; 1 exactly for symmetric slopes. NaN on
/// null.
///
/// # Safety
/// `handle` must be live (from [`asym_correction_compute`]) or null.
#[no_mangle]
pub unsafe extern "C" fn asym_correction_reduction_ratio(
    handle: *const AsymCorrection,
) -> f64 {
    read_correction(handle, |c| c.reduction_ratio)
}

type ShiftedLossFn = fn(f64, &GndParams, &LossParams) -> asymloss::Result<f64>;

fn evaluate_shifted_loss(
    func: ShiftedLossFn,
    c: f64,
    a: f64,
    b: f64,
    k1: f64,
    k2: f64,
    out: *mut f64,
) -> AsymStatus {
    if out.is_null() {
        return AsymStatus::NullPointer;
    }
    guarded(|| {
        let p = match params(a, b) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let k = match slopes(k1, k2) {
            Ok(k) => k,
            Err(s) => return s,
        };
        match func(c, &p, &k) {
            Ok(value) => {
                unsafe { *out = value };
                AsymStatus::Ok
            }
            Err(e) => AsymStatus::from(&e),
        }
    })
}

/// E[L(Z + c)] in closed form.
///
/// # Safety
/// `out` must point to writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn asym_expected_loss(
    c: f64,
    a: f64,
    b: f64,
    k1: f64,
    k2: f64,
    out: *mut f64,
) -> AsymStatus {
    evaluate_shifted_loss(expected_loss, c, a, b, k1, k2, out)
}

/// Var[L(Z + c)] in closed form.
///
/// # Safety
/// `out` must point to writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn asym_variance_loss(
    c: f64,
    a: f64,
    b: f64,
    k1: f64,
    k2: f64,
    out: *mut f64,
) -> AsymStatus {
    evaluate_shifted_loss(variance_loss, c, a, b, k1, k2, out)
}

/// d/dc E[L(Z + c)]; negative below the optimum, positive above.
///
/// # Safety
/// `out` must point to writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn asym_expected_loss_derivative(
    c: f64,
    a: f64,
    b: f64,
    k1: f64,
    k2: f64,
    out: *mut f64,
) -> AsymStatus {
    evaluate_shifted_loss(expected_loss_derivative, c, a, b, k1, k2, out)
}

/// Density of the error law at z.
///
/// # Safety
/// `out` must point to writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn asym_gnd_pdf(z: f64, a: f64, b: f64, out: *mut f64) -> AsymStatus {
    if out.is_null() {
        return AsymStatus::NullPointer;
    }
    guarded(|| {
        let p = match params(a, b) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match p.pdf(z) {
            Ok(value) => {
                unsafe { *out = value };
                AsymStatus::Ok
            }
            Err(e) => AsymStatus::from(&e),
        }
    })
}

/// Distribution function of the error law at z.
///
/// # Safety
/// `out` must point to writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn asym_gnd_cdf(z: f64, a: f64, b: f64, out: *mut f64) -> AsymStatus {
    if out.is_null() {
        return AsymStatus::NullPointer;
    }
    guarded(|| {
        let p = match params(a, b) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match p.cdf(z) {
            Ok(value) => {
                unsafe { *out = value };
                AsymStatus::Ok
            }
            Err(e) => AsymStatus::from(&e),
        }
    })
}

/// Fill `out` with `n` seeded draws from the error law; deterministic in
/// (a, b, n, seed) and independent of thread count.
///
/// # Safety
/// `out` must point to writable storage for `n` doubles (it may be null
/// only when `n` is 0).
#[no_mangle]
pub unsafe extern "C" fn asym_gnd_sample(
    a: f64,
    b: f64,
    n: usize,
    seed: u64,
    out: *mut f64,
) -> AsymStatus {
    if n == 0 {
        return AsymStatus::Ok;
    }
    if out.is_null() {
        return AsymStatus::NullPointer;
    }
    guarded(|| {
        let p = match params(a, b) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let slice = unsafe { std::slice::from_raw_parts_mut(out, n) };
        p.sample_into(seed, slice);
        AsymStatus::Ok
    })
}

/// Fit the error-law parameters to residuals by moment matching.
///
/// # Safety
/// `residuals` must point to `len` readable doubles; `a_out` and `b_out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn asym_fit_moments(
    residuals: *const f64,
    len: usize,
    a_out: *mut f64,
    b_out: *mut f64,
) -> AsymStatus {
    if residuals.is_null() || a_out.is_null() || b_out.is_null() {
        return AsymStatus::NullPointer;
    }
    guarded(|| {
        let data = unsafe { std::slice::from_raw_parts(residuals, len) };
        let summary = match summarize(data) {
            Ok(s) => s,
            Err(e) => return AsymStatus::from(&e),
        };
        match fit_moments(&summary) {
            Ok(p) => {
                unsafe {
                    *a_out = p.shape();
                    *b_out = p.scale();
                }
                AsymStatus::Ok
            }
            Err(e) => AsymStatus::from(&e),
        }
    })
}

/// Monte Carlo estimate of the shifted-loss mean and variance;
/// deterministic in all inputs and independent of thread count.
///
/// # Safety
/// `out` must point to writable storage for one `AsymLossStats`.
#[no_mangle]
pub unsafe extern "C" fn asym_loss_stats(
    c: f64,
    a: f64,
    b: f64,
    k1: f64,
    k2: f64,
    n: usize,
    seed: u64,
    out: *mut AsymLossStats,
) -> AsymStatus {
    if out.is_null() {
        return AsymStatus::NullPointer;
    }
    guarded(|| {
        let p = match params(a, b) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let k = match slopes(k1, k2) {
            Ok(k) => k,
            Err(s) => return s,
        };
        match estimate_loss_stats(c, &p, &k, n, seed) {
            Ok(stats) => {
                unsafe {
                    *out = AsymLossStats {
                        n: stats.n,
                        mean: stats.mean,
                        variance: stats.variance,
                        mean_stderr: stats.mean_stderr,
                        variance_stderr: stats.variance_stderr,
                        seed: stats.seed,
                    };
                }
                AsymStatus::Ok
            }
            Err(e) => AsymStatus::from(&e),
        }
    })
}
