//! C ABI over `virtbraid`.
//!
//! Objects are opaque handles created by constructors such as
//! `vb_presentation_catalog` and released with the matching `vb_*_free`. Every fallible call
//! returns a [`VbStatus`]; on failure `vb_last_error()` describes the cause
//! until the next call on the same thread. Strings handed out by the library
//! are released with `vb_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use virtbraid::catalog::{build_presentation, named_hom, Family};
use virtbraid::crystal::{element_order, eval_affine, solve_assignment, CrystModel, Order};
use virtbraid::homsearch::{classify_presentation, HomFilter, Homomorphism};
use virtbraid::intlin::IntMatrix;
use virtbraid::kernelab::kernel_abelianization;
use virtbraid::perms::Permutation;
use virtbraid::twisted::reidemeister_lattice;
use virtbraid::words::{parse_presentation, Presentation};
use virtbraid::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Limit = 5,
    NoSolution = 6,
    Math = 7,
    Panic = 8,
}

/// A finite presentation.
pub struct VbPresentation(Presentation);

/// A homomorphism to a symmetric group, tied to the presentation it was
/// checked against.
pub struct VbHom(Homomorphism);

/// A crystallographic quotient model.
pub struct VbModel(CrystModel);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> VbStatus {
    match e {
        Error::Syntax { .. } | Error::UnknownGenerator(_) | Error::DuplicateGenerator(_) | Error::InvalidPermutation(_) => VbStatus::Parse,
        Error::DegreeCap { .. } | Error::TableCap { .. } => VbStatus::Limit,
        Error::NoSolution => VbStatus::NoSolution,
        Error::MissingImage(_)
        | Error::DegreeMismatch(..)
        | Error::Unsupported(_)
        | Error::RelatorViolation { .. }
        | Error::Dimension(_)
        | Error::Unassigned(_)
        | Error::UnknownName(_)
        | Error::NotHomomorphism(_)
        | Error::DoesNotDescend(_) => VbStatus::InvalidArgument,
        _ => VbStatus::Math,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (VbStatus, String)>) -> VbStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VbStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            VbStatus::Panic
        }
    }
}

fn lib<T>(r: virtbraid::Result<T>) -> Result<T, (VbStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, (VbStatus, String)> {
    if s.is_null() {
        return Err((VbStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (VbStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, (VbStatus, String)> {
    p.as_ref().ok_or((VbStatus::NullPointer, "null handle".into()))
}

unsafe fn out<T>(o: *mut T, value: T) -> Result<(), (VbStatus, String)> {
    if o.is_null() {
        return Err((VbStatus::NullPointer, "null output pointer".into()));
    }
    o.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failed call on this thread, empty after success.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn vb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn vb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Catalog presentation, e.g. family "VB" with `n = 3`.
///
/// # Safety
/// `family` is a NUL-terminated string; `result` is writable.
#[no_mangle]
pub unsafe extern "C" fn vb_presentation_catalog(family: *const c_char, n: u32, result: *mut *mut VbPresentation) -> VbStatus {
    guard(|| {
        let f: Family = lib(text(family)?.parse())?;
        let p = lib(build_presentation(f, n as usize))?;
        out(result, Box::into_raw(Box::new(VbPresentation(p))))
    })
}

/// Presentation from DSL text.
///
/// # Safety
/// `dsl` is a NUL-terminated string; `result` is writable.
#[no_mangle]
pub unsafe extern "C" fn vb_presentation_parse(dsl: *const c_char, result: *mut *mut VbPresentation) -> VbStatus {
    guard(|| {
        let p = lib(parse_presentation(text(dsl)?))?;
        out(result, Box::into_raw(Box::new(VbPresentation(p))))
    })
}

/// # Safety
/// `p` is null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn vb_presentation_free(p: *mut VbPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` is a live handle; `result` is writable.
#[no_mangle]
pub unsafe extern "C" fn vb_presentation_generator_count(p: *const VbPresentation, result: *mut usize) -> VbStatus {
    guard(|| out(result, handle(p)?.0.generator_count()))
}

/// Number of conjugacy classes of homomorphisms to `S_degree` kept by
/// `filter` ("all", "nonabelian" or "surjective").
///
/// # Safety
/// `p` is a live handle; `filter` is a NUL-terminated string; `result` is writable.
#[no_mangle]
pub unsafe extern "C" fn vb_hom_class_count(p: *const VbPresentation, degree: u32, filter: *const c_char, result: *mut usize) -> VbStatus {
    guard(|| {
        let p = handle(p)?;
        let filter: HomFilter = lib(text(filter)?.parse())?;
        let (classes, _) = lib(classify_presentation(&p.0, degree as usize, &[]))?;
        out(result, classes.iter().filter(|c| filter.keeps(c)).count())
    })
}

/// Homomorphism from generator images in cycle notation separated by `;`,
/// e.g. "(1,2);(2,3);(1,2);(2,3)". Every relator is checked.
///
/// # Safety
/// `p` is a live handle; `images` is a NUL-terminated string; `result` is writable.
#[no_mangle]
pub unsafe extern "C" fn vb_hom_from_images(
    p: *const VbPresentation,
    degree: u32,
    images: *const c_char,
    result: *mut *mut VbHom,
) -> VbStatus {
    guard(|| {
        let p = handle(p)?;
        let perms = lib(text(images)?
            .split(';')
            .map(|c| Permutation::parse_cycles(degree as usize, c.trim()))
            .collect())?;
        let h = lib(Homomorphism::new(&p.0, perms))?;
        out(result, Box::into_raw(Box::new(VbHom(h))))
    })
}

/// Named catalog homomorphism such as "psi_2" on VB with `n = 3`.
///
/// # Safety
/// `family` and `name` are NUL-terminated strings; `result` is writable.
#[no_mangle]
pub unsafe extern "C" fn vb_hom_named(family: *const c_char, n: u32, name: *const c_char, result: *mut *mut VbHom) -> VbStatus {
    guard(|| {
        let f: Family = lib(text(family)?.parse())?;
        let h = lib(named_hom(f, n as usize, text(name)?))?;
        out(result, Box::into_raw(Box::new(VbHom(h.hom))))
    })
}

/// # Safety
/// `h` is null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn vb_hom_free(h: *mut VbHom) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Abelian invariants of the kernel, GAP style (e.g. "[ 0, 0, 2, 2 ]").
/// The string is released with `vb_string_free`.
///
/// # Safety
/// `p` and `h` are live handles, `h` built for `p`; `result` is writable.
#[no_mangle]
pub unsafe extern "C" fn vb_kernel_abelianization(p: *const VbPresentation, h: *const VbHom, result: *mut *mut c_char) -> VbStatus {
    guard(|| {
        let (p, h) = (handle(p)?, handle(h)?);
        if h.0.images.len() != p.0.generator_count() || h.0.violated_relator(&p.0).is_some() {
            return Err((VbStatus::InvalidArgument, "homomorphism belongs to another presentation".into()));
        }
        let inv = lib(kernel_abelianization(&p.0, &h.0))?;
        out(result, owned_string(inv.gap_format()))
    })
}

/// Solves for a crystallographic model of a braid-like presentation on
/// `n` strands.
///
/// # Safety
/// `p` is a live handle; `result` is writable.
#[no_mangle]
pub unsafe extern "C" fn vb_model_solve(p: *const VbPresentation, n: u32, result: *mut *mut VbModel) -> VbStatus {
    guard(|| {
        let m = lib(solve_assignment(&handle(p)?.0, n as usize))?;
        out(result, Box::into_raw(Box::new(VbModel(m))))
    })
}

/// # Safety
/// `m` is null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn vb_model_free(m: *mut VbModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Order of the image of `word`; 0 means infinite order.
///
/// # Safety
/// `m` is a live handle; `word` is a NUL-terminated string; `result` is writable.
#[no_mangle]
pub unsafe extern "C" fn vb_model_element_order(m: *const VbModel, word: *const c_char, result: *mut u64) -> VbStatus {
    guard(|| {
        let m = &handle(m)?.0;
        let e = lib(eval_affine(&lib(m.parse(text(word)?))?, m))?;
        out(
            result,
            match element_order(&e, m) {
                Order::Finite(k) => k as u64,
                Order::Infinite => 0,
            },
        )
    })
}

/// Reidemeister number of the lattice endomorphism given by the row-major
/// `dim x dim` matrix: "INFINITE" or a decimal count.
///
/// # Safety
/// `entries` points to `dim * dim` readable values; `result` is writable.
#[no_mangle]
pub unsafe extern "C" fn vb_reidemeister_lattice(entries: *const i64, dim: usize, result: *mut *mut c_char) -> VbStatus {
    guard(|| {
        if entries.is_null() && dim > 0 {
            return Err((VbStatus::NullPointer, "null matrix".into()));
        }
        let flat = if dim == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(entries, dim * dim)
        };
        let rows: Vec<Vec<i64>> = flat.chunks(dim.max(1)).map(<[i64]>::to_vec).collect();
        let r = lib(reidemeister_lattice(&lib(IntMatrix::from_i64(dim, &rows))?))?;
        out(result, owned_string(r.to_string()))
    })
}
