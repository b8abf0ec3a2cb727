//! C ABI for the permspec toolkit. Results cross the boundary as JSON or
//! rational strings allocated by the library (release with
//! [`ps_string_free`]); engines and polynomials are opaque handles. Every
//! entry point returns a status code and records a thread-local message
//! retrievable with [`ps_last_error`]. The committed header lives at
//! `include/permspec.h`.

use libc::{c_char, c_double, c_int, size_t};
use permspec::asymptotics::taylor_nu;
use permspec::error::Error;
use permspec::exact_expectations::ExpectationEngine;
use permspec::free_group::Word;
use permspec::nc_poly::{parse_nc_polynomial, NcPolynomial, ScalarPolynomial};
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Status codes mirroring the CLI exit codes.
pub const PS_OK: c_int = 0;
pub const PS_ERR_PRECONDITION: c_int = 2;
pub const PS_ERR_BUDGET: c_int = 3;
pub const PS_ERR_NONCONVERGENCE: c_int = 4;
pub const PS_ERR_INTERNAL: c_int = 5;
pub const PS_ERR_NULL_ARGUMENT: c_int = 7;
pub const PS_ERR_PANIC: c_int = 9;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> c_int {
    match err {
        Error::Precondition(_) => PS_ERR_PRECONDITION,
        Error::Budget(_) => PS_ERR_BUDGET,
        Error::NonConvergence(_) => PS_ERR_NONCONVERGENCE,
        _ => PS_ERR_INTERNAL,
    }
}

/// Message of the most recent error on this thread, or NULL. Owned by the
/// library; valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ps_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Free a string previously returned through an out-parameter.
///
/// # Safety
/// `s` must be a pointer produced by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn write_out(out: *mut *mut c_char, text: String) -> c_int {
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            PS_OK
        }
        Err(_) => {
            set_error("output contained a NUL byte".into());
            PS_ERR_INTERNAL
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, c_int> {
    if p.is_null() {
        set_error("NULL string argument".into());
        return Err(PS_ERR_NULL_ARGUMENT);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        PS_ERR_PRECONDITION
    })
}

fn guarded(f: impl FnOnce() -> c_int) -> c_int {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic crossed the FFI boundary".into());
            PS_ERR_PANIC
        }
    }
}

/// Opaque expectation engine; caches canonical word classes across calls.
pub struct PsEngine {
    inner: ExpectationEngine,
}

/// Create an engine. `word_cap` bounds the quotient-enumeration word length;
/// pass 0 for the default.
#[no_mangle]
pub extern "C" fn ps_engine_new(word_cap: size_t) -> *mut PsEngine {
    let cap = if word_cap == 0 {
        permspec::exact_expectations::DEFAULT_WORD_CAP
    } else {
        word_cap
    };
    Box::into_raw(Box::new(PsEngine { inner: ExpectationEngine::with_cap(cap) }))
}

/// # Safety
/// `engine` must come from [`ps_engine_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ps_engine_free(engine: *mut PsEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Opaque noncommutative polynomial.
pub struct PsPolynomial {
    inner: NcPolynomial,
}

/// Parse a polynomial from the CLI text form; `d` = 0 infers the rank.
///
/// # Safety
/// `text` must be a valid NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_polynomial_parse(
    text: *const c_char,
    d: u32,
    out: *mut *mut PsPolynomial,
) -> c_int {
    guarded(|| {
        if out.is_null() {
            set_error("NULL out pointer".into());
            return PS_ERR_NULL_ARGUMENT;
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let d = if d == 0 { None } else { Some(d as usize) };
        match parse_nc_polynomial(text, d) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(PsPolynomial { inner: p }));
                PS_OK
            }
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// The adjacency polynomial Σᵢ(sᵢ + sᵢ*) of the 2d-regular model.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ps_polynomial_adjacency(d: u32, out: *mut *mut PsPolynomial) -> c_int {
    guarded(|| {
        if out.is_null() || d == 0 {
            set_error("need d ≥ 1 and a non-NULL out pointer".into());
            return PS_ERR_NULL_ARGUMENT;
        }
        *out = Box::into_raw(Box::new(PsPolynomial { inner: NcPolynomial::adjacency(d as usize) }));
        PS_OK
    })
}

/// # Safety
/// `poly` must come from a ps_polynomial_* constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ps_polynomial_free(poly: *mut PsPolynomial) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Symbolic E[tr_N w(S^N)] as JSON: numerator/denominator coefficient strings
/// and the denominator's (1−jx) factors. `d` = 0 infers the rank.
///
/// # Safety
/// Pointers must be valid; `out_json` receives a library-owned string.
#[no_mangle]
pub unsafe extern "C" fn ps_word_expectation_json(
    engine: *mut PsEngine,
    word: *const c_char,
    d: u32,
    out_json: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        if engine.is_null() || out_json.is_null() {
            set_error("NULL engine or out pointer".into());
            return PS_ERR_NULL_ARGUMENT;
        }
        let text = match read_str(word) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let d = if d == 0 { None } else { Some(d as usize) };
        let result = (|| -> permspec::Result<String> {
            let w = Word::parse(text, d)?;
            let we = (*engine).inner.word_expectation(&w)?;
            let doc = serde_json::json!({
                "word": text,
                "reduced": we.reduced.to_string(),
                "q": we.q,
                "d": we.d,
                "numerator": we.psi.numerator().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "denominator": we.psi.denominator().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "denominator_factors": we.den_factors.factors.iter()
                    .map(|(j, m)| serde_json::json!({"root_j": j, "multiplicity": m}))
                    .collect::<Vec<_>>(),
                "valid_from_n": we.q.max(1),
            });
            Ok(doc.to_string())
        })();
        match result {
            Ok(text) => write_out(out_json, text),
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Exact E[tr_N w(S^N)] at a concrete N, as a "p/q" string. Valid for every
/// N ≥ 1 (unrealizable coincidence patterns are dropped exactly).
///
/// # Safety
/// Pointers must be valid; `out_rational` receives a library-owned string.
#[no_mangle]
pub unsafe extern "C" fn ps_word_expectation_at(
    engine: *mut PsEngine,
    word: *const c_char,
    d: u32,
    n: u64,
    out_rational: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        if engine.is_null() || out_rational.is_null() {
            set_error("NULL engine or out pointer".into());
            return PS_ERR_NULL_ARGUMENT;
        }
        let text = match read_str(word) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let d = if d == 0 { None } else { Some(d as usize) };
        let result = (|| -> permspec::Result<String> {
            let w = Word::parse(text, d)?;
            Ok((*engine).inner.expectation_at(&w, n)?.to_string())
        })();
        match result {
            Ok(text) => write_out(out_rational, text),
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Taylor functionals ν₀..ν_order of Ψ_{x^power} for a self-adjoint
/// polynomial, as a JSON array of "p/q" strings.
///
/// # Safety
/// Pointers must be valid; `out_json` receives a library-owned string.
#[no_mangle]
pub unsafe extern "C" fn ps_nu_values_json(
    engine: *mut PsEngine,
    poly: *const PsPolynomial,
    power: u32,
    order: u32,
    out_json: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        if engine.is_null() || poly.is_null() || out_json.is_null() {
            set_error("NULL argument".into());
            return PS_ERR_NULL_ARGUMENT;
        }
        let result = (|| -> permspec::Result<String> {
            let psi = (*engine).inner.polynomial_trace_expectation(
                &(*poly).inner,
                &ScalarPolynomial::monomial(power as usize),
                permspec::exact_expectations::DEFAULT_EXPANSION_BUDGET,
            )?;
            let nus = taylor_nu(&psi, order as usize)?;
            Ok(serde_json::json!(nus.iter().map(|v| v.to_string()).collect::<Vec<_>>())
                .to_string())
        })();
        match result {
            Ok(text) => write_out(out_json, text),
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// The Kesten norm 2√(2d−1); NaN for d = 0.
#[no_mangle]
pub extern "C" fn ps_kesten_norm(d: u32) -> c_double {
    if d == 0 {
        f64::NAN
    } else {
        permspec::limit_model::kesten_norm(d as usize)
    }
}

/// ρ_m = 2m−1 + (2d−1)/(2m−1) in the outlier regime, else 2√(2d−1);
/// NaN for d = 0 or m = 0.
#[no_mangle]
pub extern "C" fn ps_rho_m(d: u32, m: u32) -> c_double {
    if d == 0 || m == 0 {
        f64::NAN
    } else {
        permspec::simulation::rho_m(d as usize, m as usize)
    }
}

/// Friedman-shaped tail certificate as JSON.
///
/// # Safety
/// `out_json` must be valid; receives a library-owned string.
#[no_mangle]
pub unsafe extern "C" fn ps_friedman_certificate_json(
    d: u32,
    eps: c_double,
    n: u64,
    universal_constant: c_double,
    out_json: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        if out_json.is_null() {
            set_error("NULL out pointer".into());
            return PS_ERR_NULL_ARGUMENT;
        }
        match permspec::approximation::friedman_certificate(
            d as usize,
            eps,
            n,
            universal_constant,
        ) {
            Ok(cert) => write_out(out_json, serde_json::to_string(&cert).unwrap()),
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Sample `trials` random 2d-regular graphs on `n` vertices and return the
/// λ₂ tail statistics as JSON (per-trial rows included).
///
/// # Safety
/// `out_json` must be valid; receives a library-owned string.
#[no_mangle]
pub unsafe extern "C" fn ps_tail_experiment_json(
    d: u32,
    n: size_t,
    eps: c_double,
    trials: u64,
    seed: u64,
    out_json: *mut *mut c_char,
) -> c_int {
    guarded(|| {
        if out_json.is_null() {
            set_error("NULL out pointer".into());
            return PS_ERR_NULL_ARGUMENT;
        }
        match permspec::simulation::tail_experiment(d as usize, n, eps, trials, seed) {
            Ok(exp) => write_out(out_json, serde_json::to_string(&exp).unwrap()),
            Err(e) => {
                set_error(e.to_string());
                status_of(&e)
            }
        }
    })
}
