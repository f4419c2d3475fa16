//! C ABI over the `subcone` library.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `_free` function. Every fallible call returns a
//! [`SubconeStatus`] whose numeric values match the command-line exit codes,
//! and records a message readable through [`subcone_last_error`] on the
//! calling thread. Coordinates cross the boundary as `int64_t`; the library
//! computes with checked 128-bit integers internally.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use subcone::dd::run_dd;
use subcone::neighbor;
use subcone::symmetry::SymmetryGroup;
use subcone::{ConeSpec, DdOptions, Error, InsertionOrder, OrderKind, Ray, RunStatus};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubconeStatus {
    Ok = 0,
    Failure = 1,
    BudgetExhausted = 2,
    Malformed = 3,
    Overflow = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubconeOrder {
    LexMin = 0,
    TOpt = 1,
    Recursive = 2,
    MaxCut = 3,
    MinCut = 4,
}

impl From<SubconeOrder> for OrderKind {
    fn from(o: SubconeOrder) -> Self {
        match o {
            SubconeOrder::LexMin => OrderKind::LexMin,
            SubconeOrder::TOpt => OrderKind::TOpt,
            SubconeOrder::Recursive => OrderKind::Recursive,
            SubconeOrder::MaxCut => OrderKind::MaxCut,
            SubconeOrder::MinCut => OrderKind::MinCut,
        }
    }
}

/// The inequality description of the cone for one base-set size.
pub struct SubconeSpec {
    spec: ConeSpec,
    group: Option<SymmetryGroup>,
}

impl SubconeSpec {
    fn parts(&mut self) -> (&ConeSpec, &SymmetryGroup) {
        let SubconeSpec { spec, group } = self;
        (spec, group.get_or_insert_with(|| SymmetryGroup::new(spec)))
    }
}

/// A list of rays of equal dimension.
pub struct SubconeRays {
    dim: usize,
    rays: Vec<Ray<i128>>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SubconeStatus {
    match e {
        Error::Overflow => SubconeStatus::Overflow,
        Error::Malformed { .. }
        | Error::Dimension { .. }
        | Error::BaseSetSize(_)
        | Error::InvalidTriplet { .. }
        | Error::SubsetTooSmall { .. }
        | Error::BadOrder(_)
        | Error::ZeroVector
        | Error::NotExtremal
        | Error::Infeasible { .. }
        | Error::SupportRow { .. } => SubconeStatus::Malformed,
        _ => SubconeStatus::Failure,
    }
}

enum Fail {
    Lib(Error),
    Arg(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, turning errors and panics into a status and a message.
fn guard<F>(f: F) -> SubconeStatus
where
    F: FnOnce() -> Result<SubconeStatus, Fail>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => {
            if s == SubconeStatus::Ok {
                set_error("");
            }
            s
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Arg(msg))) => {
            set_error(msg);
            SubconeStatus::Malformed
        }
        Err(_) => {
            set_error("internal panic");
            SubconeStatus::Failure
        }
    }
}

unsafe fn coords<'a>(p: *const i64, len: usize, dim: usize) -> Result<&'a [i64], Fail> {
    if p.is_null() {
        return Err(Fail::Arg("null coordinate pointer"));
    }
    if len != dim {
        return Err(Error::Dimension {
            expected: dim,
            found: len,
        }
        .into());
    }
    Ok(slice::from_raw_parts(p, len))
}

fn write_i64(src: &[i128], out: &mut [i64]) -> Result<(), Fail> {
    for (o, x) in out.iter_mut().zip(src) {
        *o = i64::try_from(*x).map_err(|_| Error::Overflow)?;
    }
    Ok(())
}

unsafe fn spec_ref<'a>(p: *const SubconeSpec) -> Result<&'a SubconeSpec, Fail> {
    p.as_ref().ok_or(Fail::Arg("null spec handle"))
}

unsafe fn spec_mut<'a>(p: *mut SubconeSpec) -> Result<&'a mut SubconeSpec, Fail> {
    p.as_mut().ok_or(Fail::Arg("null spec handle"))
}

unsafe fn rays_ref<'a>(p: *const SubconeRays) -> Result<&'a SubconeRays, Fail> {
    p.as_ref().ok_or(Fail::Arg("null rays handle"))
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn subcone_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn subcone_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version has no interior nul"),
    };
    VERSION.as_ptr()
}

/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn subcone_spec_new(n: usize, out: *mut *mut SubconeSpec) -> SubconeStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Arg("null output pointer"));
        }
        let spec = ConeSpec::new(n)?;
        *out = Box::into_raw(Box::new(SubconeSpec { spec, group: None }));
        Ok(SubconeStatus::Ok)
    })
}

/// # Safety
/// `spec` must come from [`subcone_spec_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn subcone_spec_free(spec: *mut SubconeSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Number of coordinates; 0 for a null handle.
///
/// # Safety
/// `spec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn subcone_spec_dim(spec: *const SubconeSpec) -> usize {
    spec.as_ref().map_or(0, |s| s.spec.dim())
}

/// Number of inequalities; 0 for a null handle.
///
/// # Safety
/// `spec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn subcone_spec_rows(spec: *const SubconeSpec) -> usize {
    spec.as_ref().map_or(0, |s| s.spec.num_rows())
}

/// Copies row `row` of the inequality matrix into `out[0..len]`.
///
/// # Safety
/// `out` must point to `len` writable integers.
#[no_mangle]
pub unsafe extern "C" fn subcone_spec_matrix_row(spec: *const SubconeSpec, row: usize, out: *mut i64, len: usize) -> SubconeStatus {
    guard(|| {
        let s = spec_ref(spec)?;
        if row >= s.spec.num_rows() {
            return Err(Fail::Arg("row index out of range"));
        }
        if out.is_null() || len != s.spec.dim() {
            return Err(Fail::Arg("output buffer must hold exactly dim integers"));
        }
        slice::from_raw_parts_mut(out, len).copy_from_slice(s.spec.row(row));
        Ok(SubconeStatus::Ok)
    })
}

/// Enumerates all extremal rays. `max_rays == 0` means no budget. On
/// `SUBCONE_STATUS_BUDGET_EXHAUSTED` `*out` still receives the partial
/// ray list of the last intermediate cone.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn subcone_enumerate(
    spec: *const SubconeSpec,
    order: SubconeOrder,
    seed: u64,
    max_rays: usize,
    out: *mut *mut SubconeRays,
) -> SubconeStatus {
    guard(|| {
        let s = spec_ref(spec)?;
        if out.is_null() {
            return Err(Fail::Arg("null output pointer"));
        }
        let kind = OrderKind::from(order);
        let ord = if kind.is_dynamic() {
            InsertionOrder::dynamic(kind)
        } else {
            InsertionOrder::new(kind, &s.spec, Some(seed))
        };
        let opts = DdOptions {
            max_rays: (max_rays > 0).then_some(max_rays),
            ..DdOptions::default()
        };
        let run = run_dd(&s.spec.cone::<i128>(), &ord, &opts)?;
        let status = match run.status {
            RunStatus::BudgetExhausted => {
                set_error("ray budget exceeded");
                SubconeStatus::BudgetExhausted
            }
            _ => SubconeStatus::Ok,
        };
        *out = Box::into_raw(Box::new(SubconeRays {
            dim: s.spec.dim(),
            rays: run.state.into_rays(),
        }));
        Ok(status)
    })
}

/// Orbit representatives of `rays`, sorted.
///
/// # Safety
/// Both handles must be live and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn subcone_rays_orbits(
    spec: *mut SubconeSpec,
    rays: *const SubconeRays,
    out: *mut *mut SubconeRays,
) -> SubconeStatus {
    guard(|| {
        let s = spec_mut(spec)?;
        let r = rays_ref(rays)?;
        if out.is_null() {
            return Err(Fail::Arg("null output pointer"));
        }
        if r.dim != s.spec.dim() {
            return Err(Error::Dimension {
                expected: s.spec.dim(),
                found: r.dim,
            }
            .into());
        }
        let (spec, group) = s.parts();
        let records = group.orbits_of(&r.rays, spec)?;
        *out = Box::into_raw(Box::new(SubconeRays {
            dim: r.dim,
            rays: records.into_iter().map(|o| o.canonical).collect(),
        }));
        Ok(SubconeStatus::Ok)
    })
}

/// # Safety
/// `rays` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn subcone_rays_len(rays: *const SubconeRays) -> usize {
    rays.as_ref().map_or(0, |r| r.rays.len())
}

/// # Safety
/// `rays` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn subcone_rays_dim(rays: *const SubconeRays) -> usize {
    rays.as_ref().map_or(0, |r| r.dim)
}

/// Copies ray `index` into `out[0..len]`.
///
/// # Safety
/// `out` must point to `len` writable integers.
#[no_mangle]
pub unsafe extern "C" fn subcone_rays_get(rays: *const SubconeRays, index: usize, out: *mut i64, len: usize) -> SubconeStatus {
    guard(|| {
        let r = rays_ref(rays)?;
        let ray = r.rays.get(index).ok_or(Fail::Arg("ray index out of range"))?;
        if out.is_null() || len != r.dim {
            return Err(Fail::Arg("output buffer must hold exactly dim integers"));
        }
        write_i64(ray.coords(), slice::from_raw_parts_mut(out, len))?;
        Ok(SubconeStatus::Ok)
    })
}

/// # Safety
/// `rays` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn subcone_rays_free(rays: *mut SubconeRays) {
    if !rays.is_null() {
        drop(Box::from_raw(rays));
    }
}

/// Sets `*extremal` to whether `x` spans an extremal ray of the cone.
///
/// # Safety
/// `x` must point to `len` integers and `extremal` be writable.
#[no_mangle]
pub unsafe extern "C" fn subcone_verify_extremal(
    spec: *const SubconeSpec,
    x: *const i64,
    len: usize,
    extremal: *mut bool,
) -> SubconeStatus {
    guard(|| {
        let s = spec_ref(spec)?;
        let v = coords(x, len, s.spec.dim())?;
        if extremal.is_null() {
            return Err(Fail::Arg("null output pointer"));
        }
        let ray = Ray::<i128>::from_i64(v)?;
        *extremal = neighbor::verify_extremal(&s.spec.cone(), &ray)?;
        Ok(SubconeStatus::Ok)
    })
}

/// Number of inequalities tight at `x`.
///
/// # Safety
/// `x` must point to `len` integers and `weight` be writable.
#[no_mangle]
pub unsafe extern "C" fn subcone_weight(spec: *const SubconeSpec, x: *const i64, len: usize, weight: *mut usize) -> SubconeStatus {
    guard(|| {
        let s = spec_ref(spec)?;
        let v = coords(x, len, s.spec.dim())?;
        if weight.is_null() {
            return Err(Fail::Arg("null output pointer"));
        }
        let v: Vec<i128> = v.iter().map(|&c| c as i128).collect();
        *weight = s.spec.cone::<i128>().weight(&v)?;
        Ok(SubconeStatus::Ok)
    })
}

/// Writes the orbit representative of `x` to `out` and the orbit size to
/// `*orbit_size` (which may be null).
///
/// # Safety
/// `x` and `out` must each point to `len` integers.
#[no_mangle]
pub unsafe extern "C" fn subcone_canonical_form(
    spec: *mut SubconeSpec,
    x: *const i64,
    len: usize,
    out: *mut i64,
    orbit_size: *mut usize,
) -> SubconeStatus {
    guard(|| {
        let s = spec_mut(spec)?;
        let v = coords(x, len, s.spec.dim())?;
        if out.is_null() {
            return Err(Fail::Arg("null output pointer"));
        }
        let ray = Ray::<i128>::from_i64(v)?;
        let (spec, group) = s.parts();
        let rec = group.canonical_form(&ray, spec)?;
        write_i64(rec.canonical.coords(), slice::from_raw_parts_mut(out, len))?;
        if let Some(size) = orbit_size.as_mut() {
            *size = rec.size;
        }
        Ok(SubconeStatus::Ok)
    })
}
