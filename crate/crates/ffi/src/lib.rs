//! C interface to `bs_shift`.
//!
//! Every function returns a [`BsStatus`]. On failure a message is kept per
//! thread and can be read with [`bs_last_error_message`]. Strings handed out
//! by the library must be released with [`bs_string_free`], elements with
//! [`bs_element_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use bs_shift::cayley::{boundary_edge_count, gamma_closed_form, Limits, Window};
use bs_shift::coloring_engine::{count_colorings, Method, MethodChoice};
use bs_shift::frozen::{frozen_config, frozen_test_windows, verify_frozen_window, verify_proper};
use bs_shift::group::{self, Element, GroupParams};
use bs_shift::subshift::gcs;
use bs_shift::{Error, GroupError};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    /// A vertex, node or state budget ran out, or a number grew too large.
    Resource = 4,
    /// A check ran and its answer was negative or a construction failed.
    Mathematical = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

/// Counting method for [`bs_count_colorings`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsMethod {
    Auto = 0,
    Backtracking = 1,
    Frontier = 2,
    Tree = 3,
}

/// Opaque group element of BS(1,N) in normal form.
pub struct BsElement {
    params: GroupParams,
    inner: Element,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: BsStatus, msg: impl Into<String>) -> BsStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> BsStatus {
    let status = match &e {
        Error::Resource(_)
        | Error::Group(GroupError::Overflow { .. } | GroupError::LevelOverflow) => {
            BsStatus::Resource
        }
        Error::Group(GroupError::Parse { .. }) | Error::Format(_) => BsStatus::Parse,
        Error::Group(_) | Error::Parameter(_) => BsStatus::InvalidArgument,
        Error::Precondition(_) | Error::Construction(_) => BsStatus::Mathematical,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics into [`BsStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), BsStatus>) -> BsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(BsStatus::Panic, "internal panic"),
    }
}

fn params(n: u32) -> Result<GroupParams, BsStatus> {
    GroupParams::new(n).map_err(|e| from_error(e.into()))
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), BsStatus> {
    let c = CString::new(s).map_err(|_| fail(BsStatus::Panic, "string with interior NUL"))?;
    // SAFETY: callers check `out` for null before calling.
    unsafe { *out = c.into_raw() };
    Ok(())
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return Err(fail(BsStatus::NullPointer, concat!(stringify!($p), " is null")));
        })+
    };
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn bs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a word over `a b A B` (with optional `^exp`) and reduces it in BS(1,n).
///
/// # Safety
/// `word` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bs_element_parse(
    n: u32,
    word: *const c_char,
    out: *mut *mut BsElement,
) -> BsStatus {
    guard(|| {
        non_null!(word, out);
        let p = params(n)?;
        let text = CStr::from_ptr(word)
            .to_str()
            .map_err(|_| fail(BsStatus::InvalidUtf8, "word is not UTF-8"))?;
        let g = group::eval_str(text, &p).map_err(|e| from_error(e.into()))?;
        *out = Box::into_raw(Box::new(BsElement {
            params: p,
            inner: g,
        }));
        Ok(())
    })
}

/// `g * h`. Both elements must belong to the same group.
///
/// # Safety
/// `g` and `h` must be live elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bs_element_multiply(
    g: *const BsElement,
    h: *const BsElement,
    out: *mut *mut BsElement,
) -> BsStatus {
    guard(|| {
        non_null!(g, h, out);
        let (g, h) = (&*g, &*h);
        if g.params != h.params {
            return Err(fail(
                BsStatus::InvalidArgument,
                "elements of different groups",
            ));
        }
        let r = group::multiply(&g.inner, &h.inner, &g.params).map_err(|e| from_error(e.into()))?;
        *out = Box::into_raw(Box::new(BsElement {
            params: g.params,
            inner: r,
        }));
        Ok(())
    })
}

/// # Safety
/// `g` must be a live element; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bs_element_invert(
    g: *const BsElement,
    out: *mut *mut BsElement,
) -> BsStatus {
    guard(|| {
        non_null!(g, out);
        let g = &*g;
        *out = Box::into_raw(Box::new(BsElement {
            params: g.params,
            inner: group::invert(&g.inner),
        }));
        Ok(())
    })
}

/// Normal form `b^-j a^k b^i`. `k` is returned as a decimal string since it
/// can exceed 64 bits.
///
/// # Safety
/// `g` must be a live element; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bs_element_coords(
    g: *const BsElement,
    j: *mut u64,
    k: *mut *mut c_char,
    i: *mut u64,
) -> BsStatus {
    guard(|| {
        non_null!(g, j, k, i);
        let g = &(*g).inner;
        *j = g.j();
        *i = g.i();
        out_string(g.k().to_string(), k)
    })
}

/// Canonical word of `g`, e.g. `B a^3 b^2`; the identity is `e`.
///
/// # Safety
/// `g` must be a live element; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bs_element_to_string(
    g: *const BsElement,
    out: *mut *mut c_char,
) -> BsStatus {
    guard(|| {
        non_null!(g, out);
        out_string((*g).inner.to_string(), out)
    })
}

/// # Safety
/// `a` and `b` must be live elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bs_element_equal(
    a: *const BsElement,
    b: *const BsElement,
    out: *mut bool,
) -> BsStatus {
    guard(|| {
        non_null!(a, b, out);
        *out = (*a).params == (*b).params && (*a).inner == (*b).inner;
        Ok(())
    })
}

/// Releases an element. Null is ignored.
///
/// # Safety
/// `g` must come from this library and must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bs_element_free(g: *mut BsElement) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of proper `colors`-colorings of the rectangle `R_m` in BS(1,n),
/// as a decimal string. Default budgets apply.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bs_count_colorings(
    n: u32,
    colors: u32,
    m: u32,
    method: BsMethod,
    out: *mut *mut c_char,
) -> BsStatus {
    guard(|| {
        non_null!(out);
        let l = Limits::default();
        let w = Window::rectangle(params(n)?, m, &l).map_err(from_error)?;
        let x = gcs(colors).map_err(from_error)?;
        let choice = match method {
            BsMethod::Auto => MethodChoice::Auto,
            BsMethod::Backtracking => MethodChoice::Only(Method::Backtracking),
            BsMethod::Frontier => MethodChoice::Only(Method::FrontierDp),
            BsMethod::Tree => MethodChoice::Only(Method::SheetTreeDp),
        };
        let r = count_colorings(&w, &x, choice, &l).map_err(from_error)?;
        out_string(r.count.to_string(), out)
    })
}

/// Boundary edge count of `R_m`, by enumeration and by the closed form.
/// Returns [`BsStatus::Mathematical`] if they differ.
///
/// # Safety
/// The out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bs_gamma(n: u32, m: u32, brute: *mut u64, closed: *mut u64) -> BsStatus {
    guard(|| {
        non_null!(brute, closed);
        let p = params(n)?;
        let w = Window::rectangle(p, m, &Limits::default()).map_err(from_error)?;
        let b = boundary_edge_count(&w).map_err(from_error)?;
        let c = u64::try_from(gamma_closed_form(p, m))
            .map_err(|_| fail(BsStatus::Resource, "closed form exceeds 64 bits"))?;
        *brute = b;
        *closed = c;
        if b != c {
            return Err(fail(
                BsStatus::Mathematical,
                format!("brute {b} != closed {c}"),
            ));
        }
        Ok(())
    })
}

/// Checks the frozen 3-coloring for BS(1,n): properness on the ball of
/// `radius`, and unique refilling of every cell and edge of `R_3` and of
/// `R_2`. Returns [`BsStatus::Mathematical`] if any check fails; the flags
/// are written in both cases.
///
/// # Safety
/// The out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bs_frozen_check(
    n: u32,
    radius: u32,
    proper: *mut bool,
    all_unique: *mut bool,
) -> BsStatus {
    guard(|| {
        non_null!(proper, all_unique);
        let p = params(n)?;
        let l = Limits::default();
        let x = frozen_config(p);
        let x3 = gcs(3).map_err(from_error)?;
        let ball = Arc::new(Window::ball(p, radius, &l).map_err(from_error)?);
        let violation = verify_proper(&x, &ball, &x3).map_err(from_error)?;
        let mut unique = true;
        for (name, f) in frozen_test_windows(p, &l).map_err(from_error)? {
            if !verify_frozen_window(&x, &f, &x3, &l)
                .map_err(from_error)?
                .unique
            {
                unique = false;
                set_error(format!("window {name} has another filling"));
            }
        }
        *proper = violation.is_none();
        *all_unique = unique;
        match violation {
            Some(v) => Err(fail(BsStatus::Mathematical, v.to_string())),
            None if !unique => Err(BsStatus::Mathematical),
            None => Ok(()),
        }
    })
}
