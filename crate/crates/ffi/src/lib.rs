//! C ABI over `leavitt`.
//!
//! Every fallible call returns an [`LvStatus`] and writes its result through
//! an out-pointer. On failure the message is kept per thread and can be read
//! with [`lv_last_error`]. Handles are opaque and owned by the caller, who
//! releases them with the matching `*_free`. Strings returned by the library
//! are released with [`lv_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use leavitt::cli::parse_element;
use leavitt::lpa::{LeavittAlgebra, LpaElement};
use leavitt::quiver::samples;
use leavitt::reps::{RepKind, Representation};
use leavitt::spatial::NormOptions;
use leavitt::{Error, Quiver};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LvStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidGraph = 3,
    UnknownName = 4,
    Precondition = 5,
    Parse = 6,
    Degenerate = 7,
    NotInvertible = 8,
    Json = 9,
    Io = 10,
    Internal = 11,
    Panic = 12,
}

/// A finite directed graph.
pub struct LvGraph(Quiver);

/// The Leavitt path algebra of a graph.
pub struct LvAlgebra(LeavittAlgebra);

/// An element in normal form. Only meaningful with the algebra it came from.
pub struct LvElement(LpaElement);

/// A representation on a finite measure space.
pub struct LvRep(Representation);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LvStatus {
    match e {
        Error::InvalidGraph(_) => LvStatus::InvalidGraph,
        Error::UnknownName(_) => LvStatus::UnknownName,
        Error::Precondition(_) => LvStatus::Precondition,
        Error::Parse { .. } => LvStatus::Parse,
        Error::Degenerate(_) => LvStatus::Degenerate,
        Error::NotInvertible(_) => LvStatus::NotInvertible,
        Error::Internal(_) => LvStatus::Internal,
        Error::Json(_) => LvStatus::Json,
        Error::Io(_) => LvStatus::Io,
    }
}

struct Fail(LvStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LvStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside leavitt".into());
            LvStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail(LvStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail(LvStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(LvStatus::NullArgument, format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(LvStatus::NullArgument, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

unsafe fn free_box<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// The message of the last failed call on this thread, or null. The caller
/// owns the returned string.
#[no_mangle]
pub extern "C" fn lv_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a graph from JSON `{"vertices": [...], "edges": [{"name", "src", "dst"}]}`.
///
/// # Safety
/// `json` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lv_graph_from_json(json: *const c_char, out: *mut *mut LvGraph) -> LvStatus {
    guard(|| {
        let q = Quiver::from_json_str(str_arg(json, "json")?)?;
        write_out(out, Box::into_raw(Box::new(LvGraph(q))))
    })
}

/// One of the built-in graphs `E1 A2 A3 R1 R2 T2`.
///
/// # Safety
/// `name` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lv_graph_sample(name: *const c_char, out: *mut *mut LvGraph) -> LvStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let q = samples::by_name(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
        write_out(out, Box::into_raw(Box::new(LvGraph(q))))
    })
}

/// # Safety
/// `g` is null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn lv_graph_free(g: *mut LvGraph) {
    free_box(g)
}

/// # Safety
/// `g` is a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn lv_graph_vertex_count(g: *const LvGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// # Safety
/// `g` is a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn lv_graph_edge_count(g: *const LvGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Whether the Leavitt path algebra is simple, and whether it is purely
/// infinite simple. Either out-pointer may be null.
///
/// # Safety
/// `g` is a live graph handle; non-null out-pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn lv_graph_simplicity(
    g: *const LvGraph,
    simple: *mut bool,
    purely_infinite: *mut bool,
) -> LvStatus {
    guard(|| {
        let q = &ref_arg(g, "graph")?.0;
        if !simple.is_null() {
            simple.write(q.is_simple().simple);
        }
        if !purely_infinite.is_null() {
            purely_infinite.write(q.is_purely_infinite_simple());
        }
        Ok(())
    })
}

/// Graphviz source for the graph.
///
/// # Safety
/// `g` is a live graph handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lv_graph_to_dot(g: *const LvGraph, out: *mut *mut c_char) -> LvStatus {
    guard(|| {
        let q = &ref_arg(g, "graph")?.0;
        write_out(out, owned_string(q.export_dot()))
    })
}

/// The Leavitt path algebra of `g`, or its Cohn algebra when `cohn` is set.
/// The algebra keeps its own copy of the graph.
///
/// # Safety
/// `g` is a live graph handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lv_algebra_new(g: *const LvGraph, cohn: bool, out: *mut *mut LvAlgebra) -> LvStatus {
    guard(|| {
        let q = ref_arg(g, "graph")?.0.clone();
        let alg = if cohn { LeavittAlgebra::cohn(q) } else { LeavittAlgebra::new(q) };
        write_out(out, Box::into_raw(Box::new(LvAlgebra(alg))))
    })
}

/// # Safety
/// `a` is null or a live algebra handle.
#[no_mangle]
pub unsafe extern "C" fn lv_algebra_free(a: *mut LvAlgebra) {
    free_box(a)
}

/// Parses an element such as `"2*e.f* - v"` and reduces it to normal form.
///
/// # Safety
/// `a` is a live algebra handle; `text` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lv_element_parse(
    a: *const LvAlgebra,
    text: *const c_char,
    out: *mut *mut LvElement,
) -> LvStatus {
    guard(|| {
        let alg = &ref_arg(a, "algebra")?.0;
        let x = parse_element(str_arg(text, "text")?, alg)?;
        write_out(out, Box::into_raw(Box::new(LvElement(x))))
    })
}

/// # Safety
/// `x` is null or a live element handle.
#[no_mangle]
pub unsafe extern "C" fn lv_element_free(x: *mut LvElement) {
    free_box(x)
}

/// # Safety
/// `a` is a live algebra handle; `x` an element of it; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lv_element_to_string(
    a: *const LvAlgebra,
    x: *const LvElement,
    out: *mut *mut c_char,
) -> LvStatus {
    guard(|| {
        let alg = &ref_arg(a, "algebra")?.0;
        let x = &ref_arg(x, "element")?.0;
        write_out(out, owned_string(alg.format(x)))
    })
}

/// # Safety
/// `a` is a live algebra handle; `x`, `y` are elements of it; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lv_element_mul(
    a: *const LvAlgebra,
    x: *const LvElement,
    y: *const LvElement,
    out: *mut *mut LvElement,
) -> LvStatus {
    guard(|| {
        let alg = &ref_arg(a, "algebra")?.0;
        let z = alg.mul(&ref_arg(x, "left factor")?.0, &ref_arg(y, "right factor")?.0);
        write_out(out, Box::into_raw(Box::new(LvElement(z))))
    })
}

/// # Safety
/// `x` is a live element handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lv_element_star(x: *const LvElement, out: *mut *mut LvElement) -> LvStatus {
    guard(|| {
        let z = ref_arg(x, "element")?.0.star();
        write_out(out, Box::into_raw(Box::new(LvElement(z))))
    })
}

/// # Safety
/// `x` is a live element handle.
#[no_mangle]
pub unsafe extern "C" fn lv_element_is_zero(x: *const LvElement) -> bool {
    x.as_ref().is_some_and(|x| x.0.is_zero())
}

/// Builds a representation of `g` on `ℓ^p`. `kind` is `boundary`, `germ`,
/// `shift:N` or `germ-shift:N`; `depth` bounds the truncation.
///
/// # Safety
/// `g` is a live graph handle; `kind` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lv_rep_build(
    g: *const LvGraph,
    kind: *const c_char,
    p: f64,
    depth: usize,
    out: *mut *mut LvRep,
) -> LvStatus {
    guard(|| {
        let q = &ref_arg(g, "graph")?.0;
        let kind: RepKind = str_arg(kind, "kind")?.parse()?;
        let rep = kind.build(q, p, depth)?;
        write_out(out, Box::into_raw(Box::new(LvRep(rep))))
    })
}

/// # Safety
/// `r` is null or a live representation handle.
#[no_mangle]
pub unsafe extern "C" fn lv_rep_free(r: *mut LvRep) {
    free_box(r)
}

/// Number of atoms of the underlying measure space.
///
/// # Safety
/// `r` is a live representation handle.
#[no_mangle]
pub unsafe extern "C" fn lv_rep_dim(r: *const LvRep) -> usize {
    r.as_ref().map_or(0, |r| r.0.dim())
}

/// Whether every generator image is a spatial partial isometry and the
/// defining relations hold exactly.
///
/// # Safety
/// `r` is a live representation handle; `spatial` and `max_residual` are writable.
#[no_mangle]
pub unsafe extern "C" fn lv_rep_check(r: *const LvRep, spatial: *mut bool, max_residual: *mut f64) -> LvStatus {
    guard(|| {
        let rep = &ref_arg(r, "representation")?.0;
        write_out(spatial, rep.is_spatial())?;
        write_out(max_residual, rep.residual().max)
    })
}

/// The representation as a JSON bundle.
///
/// # Safety
/// `r` is a live representation handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lv_rep_to_json(r: *const LvRep, out: *mut *mut c_char) -> LvStatus {
    guard(|| {
        let rep = &ref_arg(r, "representation")?.0;
        let s = serde_json::to_string(&rep.to_json()).map_err(Error::from)?;
        write_out(out, owned_string(s))
    })
}

/// Certified bounds `lower ≤ ‖ρ(x)‖_p ≤ upper` on the exactly represented
/// part of the truncated space. `certified` reports whether the interval
/// meets the default relative tolerance.
///
/// # Safety
/// `r` is a live representation handle of the graph `x` belongs to; the
/// out-pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn lv_rep_norm(
    r: *const LvRep,
    x: *const LvElement,
    lower: *mut f64,
    upper: *mut f64,
    certified: *mut bool,
) -> LvStatus {
    guard(|| {
        let rep = &ref_arg(r, "representation")?.0;
        let b = rep.interior_norm(&ref_arg(x, "element")?.0, &NormOptions::default())?;
        write_out(lower, b.lower)?;
        write_out(upper, b.upper)?;
        write_out(certified, b.certified)
    })
}
