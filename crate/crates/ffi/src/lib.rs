//! C ABI for the tracecodes library.
//!
//! Fields and codes are opaque heap handles released with their `_free`
//! functions. Every fallible call returns a `TcStatus`; the message for the
//! most recent failure on the calling thread is available through
//! `tc_last_error_message`.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use tracecodes::code::{LinearCode, Variant};
use tracecodes::gf2m::FieldCtx;
use tracecodes::weil::{weil_sum_closed, weil_sum_direct, WeilSumQuery, WeilSumValue};
use tracecodes::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidSubfield = 3,
    BudgetExceeded = 4,
    BufferTooSmall = 5,
    Internal = 6,
    Panic = 7,
}

/// Code families selectable through `tc_code_new`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcVariant {
    D0 = 0,
    D1 = 1,
    Full = 2,
    Punctured = 3,
}

impl From<TcVariant> for Variant {
    fn from(v: TcVariant) -> Self {
        match v {
            TcVariant::D0 => Variant::D0,
            TcVariant::D1 => Variant::D1,
            TcVariant::Full => Variant::Full,
            TcVariant::Punctured => Variant::Punctured,
        }
    }
}

/// Opaque finite field GF(2^m).
pub struct TcField {
    ctx: Arc<FieldCtx>,
}

/// Opaque binary linear code.
pub struct TcCode {
    code: LinearCode,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> TcStatus {
    match err {
        Error::InvalidSubfield { .. } | Error::OddQuotient { .. } => TcStatus::InvalidSubfield,
        Error::BudgetExceeded { .. } => TcStatus::BudgetExceeded,
        Error::Inconsistent(_) | Error::Io(_) => TcStatus::Internal,
        _ => TcStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and converting panics into `TcStatus::Panic`.
fn guard<F: FnOnce() -> Result<(), (TcStatus, String)>>(f: F) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside tracecodes".to_string());
            TcStatus::Panic
        }
    }
}

fn lib<T>(r: tracecodes::Result<T>) -> Result<T, (TcStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (TcStatus, String) {
    (TcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (TcStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (TcStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Copies the last error message on this thread into `buf` as a NUL-terminated
/// string, truncating if needed. Returns the full message length in bytes
/// (excluding the terminator). `buf` may be null when `len` is 0.
///
/// # Safety
/// `buf` must point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn tc_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Creates GF(2^m). `modulus` 0 selects the default irreducible polynomial.
///
/// # Safety
/// `out_field` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_field_new(
    m: u32,
    modulus: u64,
    out_field: *mut *mut TcField,
) -> TcStatus {
    guard(|| {
        let slot = out(out_field, "out_field")?;
        let ctx = lib(FieldCtx::new(m, (modulus != 0).then_some(modulus)))?;
        *slot = Box::into_raw(Box::new(TcField { ctx: Arc::new(ctx) }));
        Ok(())
    })
}

/// Releases a field. Null is ignored. Codes built from it stay valid.
///
/// # Safety
/// `field` must come from `tc_field_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tc_field_free(field: *mut TcField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Extension degree m, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_field_degree(field: *const TcField) -> u32 {
    field.as_ref().map_or(0, |f| f.ctx.degree())
}

/// Modulus polynomial (bit i = coefficient of x^i), or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_field_modulus(field: *const TcField) -> u64 {
    field.as_ref().map_or(0, |f| f.ctx.modulus())
}

/// Product of two elements given by their coordinates.
///
/// # Safety
/// `field` must be a live handle and `out_product` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_field_mul(
    field: *const TcField,
    a: u64,
    b: u64,
    out_product: *mut u64,
) -> TcStatus {
    guard(|| {
        let f = deref(field, "field")?;
        let slot = out(out_product, "out_product")?;
        let (a, b) = (lib(f.ctx.element(a))?, lib(f.ctx.element(b))?);
        *slot = u64::from(f.ctx.mul(a, b).coords());
        Ok(())
    })
}

/// Absolute trace of an element, 0 or 1.
///
/// # Safety
/// `field` must be a live handle and `out_trace` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_field_trace(
    field: *const TcField,
    a: u64,
    out_trace: *mut u8,
) -> TcStatus {
    guard(|| {
        let f = deref(field, "field")?;
        let slot = out(out_trace, "out_trace")?;
        *slot = f.ctx.trace(lib(f.ctx.element(a))?);
        Ok(())
    })
}

/// S_h(a, b) by summing over the whole field.
///
/// # Safety
/// `field` must be a live handle and `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_weil_direct(
    field: *const TcField,
    h: u32,
    a: u64,
    b: u64,
    out_value: *mut i64,
) -> TcStatus {
    guard(|| {
        let f = deref(field, "field")?;
        let slot = out(out_value, "out_value")?;
        let q = lib(WeilSumQuery::new(
            &f.ctx,
            h,
            lib(f.ctx.element(a))?,
            lib(f.ctx.element(b))?,
        ))?;
        *slot = weil_sum_direct(&q);
        Ok(())
    })
}

/// S_h(a, b) in closed form. When only the magnitude is determined,
/// `out_exact` is 0 and `out_value` holds the magnitude.
///
/// # Safety
/// `field` must be a live handle; `out_value` and `out_exact` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tc_weil_closed(
    field: *const TcField,
    h: u32,
    a: u64,
    b: u64,
    out_value: *mut i64,
    out_exact: *mut u8,
) -> TcStatus {
    guard(|| {
        let f = deref(field, "field")?;
        let value = out(out_value, "out_value")?;
        let exact = out(out_exact, "out_exact")?;
        let q = lib(WeilSumQuery::new(
            &f.ctx,
            h,
            lib(f.ctx.element(a))?,
            lib(f.ctx.element(b))?,
        ))?;
        match lib(weil_sum_closed(&q))? {
            WeilSumValue::Exact(v) => {
                *value = v;
                *exact = 1;
            }
            WeilSumValue::MagnitudeOnly(v) => {
                *value = v as i64;
                *exact = 0;
            }
        }
        Ok(())
    })
}

/// Builds a code over `field`.
///
/// # Safety
/// `field` must be a live handle and `out_code` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_code_new(
    field: *const TcField,
    variant: TcVariant,
    h: u32,
    out_code: *mut *mut TcCode,
) -> TcStatus {
    guard(|| {
        let f = deref(field, "field")?;
        let slot = out(out_code, "out_code")?;
        let code = lib(Variant::from(variant).build(&f.ctx, h))?;
        *slot = Box::into_raw(Box::new(TcCode { code }));
        Ok(())
    })
}

/// Releases a code. Null is ignored.
///
/// # Safety
/// `code` must come from `tc_code_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tc_code_free(code: *mut TcCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Code length n, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_code_length(code: *const TcCode) -> usize {
    code.as_ref().map_or(0, |c| c.code.len())
}

/// Code dimension k, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_code_dimension(code: *const TcCode) -> usize {
    code.as_ref().map_or(0, |c| c.code.dimension())
}

/// Writes A_0..A_n into `counts` (needs n + 1 slots). `budget` 0 selects the
/// default enumeration budget. On `TcStatus::BufferTooSmall` the required
/// length is still stored in `out_len`.
///
/// # Safety
/// `code` must be a live handle, `counts` must hold `len` writable values and
/// `out_len` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_code_weight_distribution(
    code: *const TcCode,
    budget: u64,
    counts: *mut u64,
    len: usize,
    out_len: *mut usize,
) -> TcStatus {
    guard(|| {
        let c = deref(code, "code")?;
        let needed = out(out_len, "out_len")?;
        *needed = c.code.len() + 1;
        if len < *needed {
            return Err((
                TcStatus::BufferTooSmall,
                format!("weight buffer needs {} slots, got {len}", *needed),
            ));
        }
        if counts.is_null() {
            return Err(null("counts"));
        }
        let budget = if budget == 0 {
            tracecodes::code::DEFAULT_BUDGET
        } else {
            budget as u128
        };
        let dist = lib(c.code.weight_distribution_with_budget(budget))?;
        let slice = std::slice::from_raw_parts_mut(counts, *needed);
        slice.fill(0);
        for (&w, &a) in dist.counts() {
            slice[w] = a;
        }
        Ok(())
    })
}

/// Writes the k x n generator matrix row-major as bytes 0/1 into `bits`
/// (needs k * n bytes). On `TcStatus::BufferTooSmall` the required length
/// is still stored in `out_len`.
///
/// # Safety
/// `code` must be a live handle, `bits` must hold `len` writable bytes and
/// `out_len` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_code_generator_matrix(
    code: *const TcCode,
    bits: *mut u8,
    len: usize,
    out_len: *mut usize,
) -> TcStatus {
    guard(|| {
        let c = deref(code, "code")?;
        let needed = out(out_len, "out_len")?;
        let g = c.code.generator_matrix();
        *needed = g.rows() * g.cols();
        if len < *needed {
            return Err((
                TcStatus::BufferTooSmall,
                format!("matrix buffer needs {} bytes, got {len}", *needed),
            ));
        }
        if bits.is_null() && *needed > 0 {
            return Err(null("bits"));
        }
        for r in 0..g.rows() {
            for (j, b) in g.row_bits(r).enumerate() {
                *bits.add(r * g.cols() + j) = b as u8;
            }
        }
        Ok(())
    })
}
