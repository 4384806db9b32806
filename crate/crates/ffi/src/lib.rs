//! C ABI over `aes-lab`.
//!
//! States are returned as opaque `AesLabState` handles that the caller frees
//! with `aes_state_free`. Every fallible call returns an `AesStatus`; the
//! message of the most recent failure on the calling thread is available
//! through `aes_last_error`.

use aes_lab::coupled::{aes_state, c_mean_lambda1, general_squeezed_xp, scs_lambda1, xp_dispersions, AlgebraElement, SuperXPSpec};
use aes_lab::mus::dispersions_from_c;
use aes_lab::oscillator::{ho_state_recurrence, HoStateSpec};
use aes_lab::special::jacobi_p;
use aes_lab::su2::angular_mus;
use aes_lab::sweep::{run_sweep, SweepConfig};
use aes_lab::{Error, JointState, MusParam, Truncation, C64};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AesStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NoSolution = 3,
    TruncationCap = 4,
    ShapeMismatch = 5,
    NonHermitian = 6,
    Overflow = 7,
    Numerical = 8,
    InvalidUtf8 = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AesComplex {
    pub re: f64,
    pub im: f64,
}

impl From<AesComplex> for C64 {
    fn from(z: AesComplex) -> C64 {
        C64::new(z.re, z.im)
    }
}

impl From<C64> for AesComplex {
    fn from(z: C64) -> AesComplex {
        AesComplex { re: z.re, im: z.im }
    }
}

/// Coefficients of `α₋a + α₊a† + α₃I + β₋J₊ + β₊J₋ + β₃J₃`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AesElement {
    pub alpha_minus: AesComplex,
    pub alpha_plus: AesComplex,
    pub alpha_3: AesComplex,
    pub beta_minus: AesComplex,
    pub beta_plus: AesComplex,
    pub beta_3: AesComplex,
}

impl From<AesElement> for AlgebraElement {
    fn from(e: AesElement) -> AlgebraElement {
        AlgebraElement::new(
            e.alpha_minus.into(),
            e.alpha_plus.into(),
            e.alpha_3.into(),
            e.beta_minus.into(),
            e.beta_plus.into(),
            e.beta_3.into(),
        )
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AesDispersions {
    pub var_a: f64,
    pub var_b: f64,
    pub delta: f64,
    pub mean_f: f64,
    pub mean_c: f64,
}

/// Opaque state handle.
pub struct AesLabState {
    state: JointState,
    eigenvalue: C64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> AesStatus {
    match e {
        Error::InvalidInput(_) => AesStatus::InvalidInput,
        Error::NoSolution(_) => AesStatus::NoSolution,
        Error::TruncationCap { .. } => AesStatus::TruncationCap,
        Error::ShapeMismatch { .. } => AesStatus::ShapeMismatch,
        Error::NonHermitian(_) => AesStatus::NonHermitian,
        Error::Overflow { .. } => AesStatus::Overflow,
        Error::Numerical(_) => AesStatus::Numerical,
    }
}

fn fail(status: AesStatus, msg: impl Into<String>) -> AesStatus {
    set_error(msg.into());
    status
}

fn guard(f: impl FnOnce() -> Result<(), AesStatus>) -> AesStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AesStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(AesStatus::Panic, "panic inside aes-lab"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, AesStatus>;
}

impl<T> OrStatus<T> for aes_lab::Result<T> {
    fn or_status(self) -> Result<T, AesStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), AesStatus> {
    if p.is_null() {
        Err(fail(AesStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn handle<'a>(h: *const AesLabState) -> Result<&'a AesLabState, AesStatus> {
    non_null(h, "state handle")?;
    Ok(&*h)
}

unsafe fn emit(out: *mut *mut AesLabState, state: JointState, eigenvalue: C64) -> Result<(), AesStatus> {
    *out = Box::into_raw(Box::new(AesLabState { state, eigenvalue }));
    Ok(())
}

fn tight() -> Truncation {
    Truncation::auto().with_tol(1e-24)
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// cut to `cap`). Returns the full message length plus one, or 0 when no
/// error has been recorded.
///
/// # Safety
/// `buf` must be null or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn aes_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| match &*e.borrow() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes_with_nul();
            if !buf.is_null() && cap > 0 {
                let n = bytes.len().min(cap);
                ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
                *buf.add(n - 1) = 0;
            }
            bytes.len()
        }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn aes_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// `P_n^{(α,β)}(x)` by the finite hypergeometric sum.
///
/// # Safety
/// `out` must point to a writable `AesComplex`.
#[no_mangle]
pub unsafe extern "C" fn aes_jacobi_p(n: i64, alpha: f64, beta: f64, x: AesComplex, out: *mut AesComplex) -> AesStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = jacobi_p(n, alpha, beta, x.into()).or_status()?.into();
        Ok(())
    })
}

/// Eigenstate of `x + iλp` with eigenvalue `beta`, `λ` given by `(δ, φ)`.
///
/// # Safety
/// `out` must point to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn aes_state_oscillator(delta: f64, phi: f64, beta: AesComplex, out: *mut *mut AesLabState) -> AesStatus {
    guard(|| {
        non_null(out, "out")?;
        let p = MusParam::from_delta_phi(delta, phi).or_status()?;
        let s = ho_state_recurrence(&HoStateSpec::new(p, beta.into()).or_status()?, Truncation::auto()).or_status()?;
        emit(out, s, beta.into())
    })
}

/// Spin eigenstate of `J₁ + iλJ₂` with label `m = two_m/2`.
///
/// # Safety
/// `out` must point to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn aes_state_angular(delta: f64, phi: f64, two_j: u32, two_m: i32, out: *mut *mut AesLabState) -> AesStatus {
    guard(|| {
        non_null(out, "out")?;
        let p = MusParam::from_delta_phi(delta, phi).or_status()?;
        let (s, ev) = angular_mus(&p, two_j, two_m).or_status()?;
        emit(out, s, ev)
    })
}

/// Eigenstate of a general element; the eigenvalue is `rho + m·b`.
///
/// # Safety
/// `elem` must point to a readable `AesElement`, `out` to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn aes_state_element(
    elem: *const AesElement,
    two_j: u32,
    two_m: i32,
    rho: AesComplex,
    out: *mut *mut AesLabState,
) -> AesStatus {
    guard(|| {
        non_null(elem, "elem")?;
        non_null(out, "out")?;
        let s = aes_state(&(*elem).into(), two_j, two_m, rho.into(), Truncation::auto()).or_status()?;
        emit(out, s.state, s.eigenvalue)
    })
}

/// Eigenstate of `X + iλP` for the supersymmetric quadratures built from `mu, tau`.
///
/// # Safety
/// `out` must point to a writable handle slot.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn aes_state_super_xp(
    mu: AesComplex,
    tau: AesComplex,
    delta: f64,
    phi: f64,
    z: AesComplex,
    two_j: u32,
    two_m: i32,
    out: *mut *mut AesLabState,
) -> AesStatus {
    guard(|| {
        non_null(out, "out")?;
        let p = MusParam::from_delta_phi(delta, phi).or_status()?;
        let spec = SuperXPSpec::new(mu.into(), tau.into(), p, z.into()).or_status()?;
        let s = if delta == 0.0 {
            scs_lambda1(&spec, two_j, two_m, tight()).or_status()?
        } else {
            general_squeezed_xp(&spec, two_j, two_m, tight()).or_status()?.state
        };
        emit(out, s, z.into())
    })
}

/// Closed-form dispersions of `X, P` in the state of `aes_state_super_xp`.
///
/// # Safety
/// `out` must point to a writable `AesDispersions`.
#[no_mangle]
pub unsafe extern "C" fn aes_super_xp_dispersions(
    mu: AesComplex,
    tau: AesComplex,
    delta: f64,
    phi: f64,
    two_j: u32,
    two_m: i32,
    out: *mut AesDispersions,
) -> AesStatus {
    guard(|| {
        non_null(out, "out")?;
        let p = MusParam::from_delta_phi(delta, phi).or_status()?;
        let (d, c) = if delta == 0.0 {
            let c = c_mean_lambda1(two_j, two_m, mu.into(), tau.into()).or_status()?;
            (dispersions_from_c(&p, c, None).or_status()?, c)
        } else {
            let spec = SuperXPSpec::new(mu.into(), tau.into(), p, C64::default()).or_status()?;
            xp_dispersions(&spec, two_j, two_m).or_status()?
        };
        *out = AesDispersions { var_a: d.var_a, var_b: d.var_b, delta: d.delta, mean_f: d.mean_f, mean_c: c };
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aes_state_free(h: *mut AesLabState) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of Fock levels kept; 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn aes_state_fock_dim(h: *const AesLabState) -> usize {
    h.as_ref().map_or(0, |s| s.state.spec.fock_dim)
}

/// Doubled spin `2j`; 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn aes_state_two_j(h: *const AesLabState) -> u32 {
    h.as_ref().map_or(0, |s| s.state.spec.two_j)
}

/// Total number of coefficients, `fock_dim·(2j+1)`.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn aes_state_len(h: *const AesLabState) -> usize {
    h.as_ref().map_or(0, |s| s.state.coeffs.len())
}

/// Probability mass estimated beyond the kept levels.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn aes_state_tail_mass(h: *const AesLabState) -> f64 {
    h.as_ref().map_or(f64::NAN, |s| s.state.norm_tail)
}

/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn aes_state_eigenvalue(h: *const AesLabState, out: *mut AesComplex) -> AesStatus {
    guard(|| {
        let s = handle(h)?;
        non_null(out, "out")?;
        *out = s.eigenvalue.into();
        Ok(())
    })
}

/// Copies the coefficients, index `n·(2j+1) + (m+j)`, into `out`.
///
/// # Safety
/// `h` must be a live handle and `out` must hold `cap` entries.
#[no_mangle]
pub unsafe extern "C" fn aes_state_coeffs(h: *const AesLabState, out: *mut AesComplex, cap: usize) -> AesStatus {
    guard(|| {
        let s = handle(h)?;
        non_null(out, "out")?;
        let n = s.state.coeffs.len();
        if cap < n {
            return Err(fail(AesStatus::ShapeMismatch, format!("buffer holds {cap} entries, state has {n}")));
        }
        for (k, z) in s.state.coeffs.iter().enumerate() {
            *out.add(k) = (*z).into();
        }
        Ok(())
    })
}

/// `‖(A − z)ψ‖` over the levels below the top one.
///
/// # Safety
/// `h` must be a live handle, `elem` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn aes_state_residual(
    h: *const AesLabState,
    elem: *const AesElement,
    z: AesComplex,
    out: *mut f64,
) -> AesStatus {
    guard(|| {
        let s = handle(h)?;
        non_null(elem, "elem")?;
        non_null(out, "out")?;
        *out = AlgebraElement::from(*elem).residual(&s.state, z.into());
        Ok(())
    })
}

/// Runs a figure sweep from a JSON config and returns the CSV text, to be
/// released with `aes_string_free`.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn aes_sweep_csv(config_json: *const c_char, verify: bool, out: *mut *mut c_char) -> AesStatus {
    guard(|| {
        non_null(config_json, "config_json")?;
        non_null(out, "out")?;
        let text = CStr::from_ptr(config_json)
            .to_str()
            .map_err(|e| fail(AesStatus::InvalidUtf8, e.to_string()))?;
        let cfg: SweepConfig =
            serde_json::from_str(text).map_err(|e| fail(AesStatus::InvalidInput, format!("bad sweep config: {e}")))?;
        let csv = run_sweep(&cfg, verify).or_status()?.to_csv();
        *out = CString::new(csv).expect("csv has no NULs").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn aes_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
