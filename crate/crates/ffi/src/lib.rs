//! C ABI for `bcn_hyper`.
//!
//! Every entry point returns a [`BcnStatus`]. On failure a message is kept
//! per thread and can be read with [`bcn_last_error_message`]. Multiplicities
//! live behind the opaque [`BcnModel`] handle, created by [`bcn_model_new`]
//! and released by [`bcn_model_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use bcn_hyper::hyper::{evaluate, EvalRequest, Target};
use bcn_hyper::roots::{constant_b, ChamberPoint, MultiplicityBC, SpectralParam};
use bcn_hyper::verify::{run_suite, Suite, SuiteOptions};
use bcn_hyper::Error;
use num_complex::Complex64;

/// Result codes. `BCN_STATUS_OK` is zero; every other value names a failure.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Pole = 3,
    Domain = 4,
    NonConvergence = 5,
    DegenerateLambda = 6,
    Chamber = 7,
    Parameter = 8,
    Size = 9,
    ZeroDenominator = 10,
    HalfPlane = 11,
    SmallDenominator = 12,
    TailTooLarge = 13,
    SingularityTooClose = 14,
    StencilBlowup = 15,
    NotFinite = 16,
    Panic = 17,
}

/// Which function [`bcn_evaluate`] computes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcnTarget {
    /// The hypergeometric function F(λ, k; a_t).
    F = 0,
    /// The Harish-Chandra series Φ(λ, k; a_t).
    Phi = 1,
    /// The Θ-spherical function for Θ of type A_{n−1}; needs Re λ_j > 0.
    FTheta = 2,
    /// The Bessel function of type BC_n.
    BesselBc = 3,
}

/// Output of [`bcn_evaluate`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BcnResult {
    pub value_re: f64,
    pub value_im: f64,
    pub condition_estimate: f64,
    pub degenerate_path: bool,
}

/// Opaque multiplicity data: rank n and (k_s, k_m, k_l).
pub struct BcnModel {
    k: MultiplicityBC,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BcnStatus {
    match e {
        Error::Pole(_) => BcnStatus::Pole,
        Error::Domain(_) => BcnStatus::Domain,
        Error::NonConvergence(_) => BcnStatus::NonConvergence,
        Error::DegenerateLambda(_) => BcnStatus::DegenerateLambda,
        Error::Chamber(_) => BcnStatus::Chamber,
        Error::Parameter(_) => BcnStatus::Parameter,
        Error::Size(_) => BcnStatus::Size,
        Error::ZeroDenominator(_) => BcnStatus::ZeroDenominator,
        Error::HalfPlane(_) => BcnStatus::HalfPlane,
        Error::SmallDenominator(_) => BcnStatus::SmallDenominator,
        Error::TailTooLarge(_) => BcnStatus::TailTooLarge,
        Error::SingularityTooClose(_) => BcnStatus::SingularityTooClose,
        Error::StencilBlowup(_) => BcnStatus::StencilBlowup,
        Error::NotFinite(_) => BcnStatus::NotFinite,
    }
}

enum Failure {
    Null(&'static str),
    Utf8(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, translating errors and panics into a status and a message.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> BcnStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => BcnStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            BcnStatus::NullPointer
        }
        Ok(Err(Failure::Utf8(what))) => {
            set_error(format!("{what} is not valid UTF-8"));
            BcnStatus::InvalidUtf8
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            BcnStatus::Panic
        }
    }
}

fn non_null<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    // SAFETY: callers pass pointers that are either null or valid for reads.
    unsafe { p.as_ref() }.ok_or(Failure::Null(what))
}

/// # Safety
/// `p` must be null or valid for reading `len` values of `T`.
unsafe fn array<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

/// Creates a model for rank `n` with multiplicities (k_s, k_m, k_l), where
/// k_m is 0 or 1. On success `*out` owns a handle for [`bcn_model_free`].
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn bcn_model_new(n: usize, k_s: f64, k_m: u8, k_l: f64, out: *mut *mut BcnModel) -> BcnStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let k = MultiplicityBC::new(n, k_s, k_m, k_l)?;
        *out = Box::into_raw(Box::new(BcnModel { k }));
        Ok(())
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle from [`bcn_model_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bcn_model_free(model: *mut BcnModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Rank of the model, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bcn_model_rank(model: *const BcnModel) -> usize {
    model.as_ref().map_or(0, |m| m.k.n())
}

/// Evaluates `target` at λ = `lambda_re` + i `lambda_im` and the chamber
/// point `t` (t_1 > … > t_n > 0). All three arrays hold `len` entries and
/// `len` must equal the model rank; `lambda_im` may be null for real λ.
///
/// # Safety
/// `model` must be a live handle; the arrays must be valid for `len` reads
/// (or null where permitted); `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn bcn_evaluate(
    model: *const BcnModel,
    target: BcnTarget,
    lambda_re: *const f64,
    lambda_im: *const f64,
    t: *const f64,
    len: usize,
    out: *mut BcnResult,
) -> BcnStatus {
    guard(|| {
        let model = non_null(model, "model")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let re = array(lambda_re, len, "lambda_re")?;
        let im = if lambda_im.is_null() {
            None
        } else {
            Some(array(lambda_im, len, "lambda_im")?)
        };
        let t = array(t, len, "t")?;
        let lambda: Vec<Complex64> = (0..len)
            .map(|j| Complex64::new(re[j], im.map_or(0.0, |v| v[j])))
            .collect();
        let req = EvalRequest {
            k: model.k,
            lambda: SpectralParam::new(lambda)?,
            t: ChamberPoint::new(t.to_vec())?,
            target: match target {
                BcnTarget::F => Target::F,
                BcnTarget::Phi => Target::PhiSeries,
                BcnTarget::FTheta => Target::FTheta,
                BcnTarget::BesselBc => Target::BesselBC,
            },
        };
        let r = evaluate(&req)?;
        *out = BcnResult {
            value_re: r.value.re,
            value_im: r.value.im,
            condition_estimate: r.condition_estimate,
            degenerate_path: r.degenerate_path,
        };
        Ok(())
    })
}

/// The normalizing constant B of the determinant formula (k_m = 1 only).
///
/// # Safety
/// `model` must be a live handle; `re` and `im` valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn bcn_constant_b(model: *const BcnModel, re: *mut f64, im: *mut f64) -> BcnStatus {
    guard(|| {
        let model = non_null(model, "model")?;
        if re.is_null() || im.is_null() {
            return Err(Failure::Null("re/im"));
        }
        let b = constant_b(&model.k)?;
        *re = b.re;
        *im = b.im;
        Ok(())
    })
}

/// Runs a named verification suite (for example "rank1-reduction") and
/// stores whether every check passed. `n` restricts rank-dependent suites;
/// pass 0 for the defaults.
///
/// # Safety
/// `name` must be a NUL-terminated string; `passed` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn bcn_run_suite(name: *const c_char, n: usize, passed: *mut bool) -> BcnStatus {
    guard(|| {
        if name.is_null() {
            return Err(Failure::Null("name"));
        }
        if passed.is_null() {
            return Err(Failure::Null("passed"));
        }
        let name = CStr::from_ptr(name).to_str().map_err(|_| Failure::Utf8("name"))?;
        let suite: Suite = name.parse()?;
        let opts = SuiteOptions {
            n: (n > 0).then_some(n),
        };
        *passed = run_suite(suite, &opts).passed();
        Ok(())
    })
}

/// Message for the most recent failure on the calling thread, or null if
/// none. Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bcn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code, such as "degenerate-lambda".
#[no_mangle]
pub extern "C" fn bcn_status_name(status: BcnStatus) -> *const c_char {
    let s: &'static CStr = match status {
        BcnStatus::Ok => c"ok",
        BcnStatus::NullPointer => c"null-pointer",
        BcnStatus::InvalidUtf8 => c"invalid-utf8",
        BcnStatus::Pole => c"pole",
        BcnStatus::Domain => c"domain",
        BcnStatus::NonConvergence => c"non-convergence",
        BcnStatus::DegenerateLambda => c"degenerate-lambda",
        BcnStatus::Chamber => c"chamber",
        BcnStatus::Parameter => c"parameter",
        BcnStatus::Size => c"size",
        BcnStatus::ZeroDenominator => c"zero-denominator",
        BcnStatus::HalfPlane => c"half-plane",
        BcnStatus::SmallDenominator => c"small-denominator",
        BcnStatus::TailTooLarge => c"tail-too-large",
        BcnStatus::SingularityTooClose => c"singularity-too-close",
        BcnStatus::StencilBlowup => c"stencil-blowup",
        BcnStatus::NotFinite => c"not-finite",
        BcnStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Library version as a NUL-terminated string.
#[no_mangle]
pub extern "C" fn bcn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_error() -> String {
        let p = bcn_last_error_message();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }

    fn model(n: usize, ks: f64, km: u8, kl: f64) -> *mut BcnModel {
        let mut m = ptr::null_mut();
        assert_eq!(unsafe { bcn_model_new(n, ks, km, kl, &mut m) }, BcnStatus::Ok);
        m
    }

    #[test]
    fn evaluates_like_the_library() {
        let m = model(2, 1.0, 1, 0.5);
        let mut r = BcnResult::default();
        let status = unsafe {
            bcn_evaluate(
                m,
                BcnTarget::F,
                [3.0, 1.0].as_ptr(),
                ptr::null(),
                [1.0, 0.4].as_ptr(),
                2,
                &mut r,
            )
        };
        assert_eq!(status, BcnStatus::Ok);
        let direct = evaluate(&EvalRequest {
            k: MultiplicityBC::new(2, 1.0, 1, 0.5).unwrap(),
            lambda: SpectralParam::from_real(&[3.0, 1.0]).unwrap(),
            t: ChamberPoint::new(vec![1.0, 0.4]).unwrap(),
            target: Target::F,
        })
        .unwrap();
        assert_eq!(r.value_re, direct.value.re);
        assert_eq!(r.value_im, 0.0);
        assert_eq!(unsafe { bcn_model_rank(m) }, 2);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(unsafe { bcn_constant_b(m, &mut re, &mut im) }, BcnStatus::Ok);
        assert_eq!((re, im), (32.0, 0.0));
        unsafe { bcn_model_free(m) };
    }

    #[test]
    fn error_codes_and_messages() {
        let mut m = ptr::null_mut();
        assert_eq!(unsafe { bcn_model_new(9, 1.0, 1, 0.5, &mut m) }, BcnStatus::Size);
        assert!(m.is_null());
        assert!(last_error().contains("size"));
        assert_eq!(unsafe { bcn_model_new(2, 1.0, 2, 0.5, &mut m) }, BcnStatus::Parameter);
        assert_eq!(
            unsafe { bcn_model_new(2, 1.0, 1, 0.5, ptr::null_mut()) },
            BcnStatus::NullPointer
        );

        let m = model(2, 1.0, 1, 0.5);
        let mut r = BcnResult::default();
        let t_bad = [0.4, 1.0];
        let status = unsafe {
            bcn_evaluate(
                m,
                BcnTarget::F,
                [3.0, 1.0].as_ptr(),
                ptr::null(),
                t_bad.as_ptr(),
                2,
                &mut r,
            )
        };
        assert_eq!(status, BcnStatus::Chamber);
        let status = unsafe {
            bcn_evaluate(
                m,
                BcnTarget::FTheta,
                [-3.0, 1.0].as_ptr(),
                ptr::null(),
                [1.0, 0.4].as_ptr(),
                2,
                &mut r,
            )
        };
        assert_eq!(status, BcnStatus::HalfPlane);
        assert!(last_error().contains("half-plane"));
        let status = unsafe {
            bcn_evaluate(
                m,
                BcnTarget::F,
                ptr::null(),
                ptr::null(),
                [1.0, 0.4].as_ptr(),
                2,
                &mut r,
            )
        };
        assert_eq!(status, BcnStatus::NullPointer);
        let status = unsafe { bcn_evaluate(m, BcnTarget::F, [3.0].as_ptr(), ptr::null(), [1.0].as_ptr(), 1, &mut r) };
        assert_ne!(status, BcnStatus::Ok);
        unsafe { bcn_model_free(m) };
        unsafe { bcn_model_free(ptr::null_mut()) };
    }

    #[test]
    fn suites_and_names() {
        let mut passed = false;
        assert_eq!(
            unsafe { bcn_run_suite(c"B-constant".as_ptr(), 2, &mut passed) },
            BcnStatus::Ok
        );
        assert!(passed);
        assert_eq!(
            unsafe { bcn_run_suite(c"nope".as_ptr(), 0, &mut passed) },
            BcnStatus::Parameter
        );
        let name = unsafe { CStr::from_ptr(bcn_status_name(BcnStatus::DegenerateLambda)) };
        assert_eq!(name.to_str().unwrap(), "degenerate-lambda");
        let v = unsafe { CStr::from_ptr(bcn_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
