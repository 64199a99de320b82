//! C ABI for the distance-space kernel.
//!
//! Spaces are opaque handles created by the `qdom_space_*` constructors and
//! released with [`qdom_space_free`]. Every returned string is UTF-8,
//! NUL-terminated, allocated by this library, and must be released with
//! [`qdom_string_free`]. Fallible calls return a [`QdomStatus`]; on any
//! status other than `Ok` the out-parameters are left untouched and
//! [`qdom_last_error_message`] carries a human-readable description (kept
//! per thread).
//!
//! The generated header lives at `include/qdom.h`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::fmt::Display;
use std::panic::{catch_unwind, AssertUnwindSafe};

use libc::c_char;

use qdom::catalog::{self, Profile};
use qdom::formalballs::smyth_completion;
use qdom::harness;
use qdom::hyperspace::ideal_completion_space;
use qdom::space::SpaceError;
use qdom::spacefile::{FileError, SpaceFile};
use qdom::DistanceSpace;

/// Result of a fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdomStatus {
    /// The call succeeded.
    Ok = 0,
    /// A null pointer, bad index, or otherwise unusable argument.
    InvalidArgument = 1,
    /// The input text failed to parse or validate.
    ParseError = 2,
    /// The space does not satisfy the operation's hypothesis.
    Unsupported = 3,
    /// The space exceeds an enumeration cap.
    SizeBound = 4,
    /// An internal invariant failed; please report.
    Internal = 5,
}

/// An immutable distance space (opaque).
pub struct QdomSpace {
    name: String,
    space: DistanceSpace,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Display) {
    let text = message.to_string();
    let c = CString::new(text.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &SpaceError) -> QdomStatus {
    match e {
        SpaceError::ShapeMismatch { .. }
        | SpaceError::DuplicateLabel(_)
        | SpaceError::TriangleViolation { .. } => QdomStatus::ParseError,
        SpaceError::TooLarge { .. } => QdomStatus::SizeBound,
        SpaceError::NotContinuous => QdomStatus::Unsupported,
        SpaceError::Hypothesis(_) | SpaceError::UnknownName(_) => QdomStatus::InvalidArgument,
    }
}

fn status_of_file(e: &FileError) -> QdomStatus {
    match e {
        FileError::Json(_) | FileError::Entry { .. } | FileError::Line { .. } => {
            QdomStatus::ParseError
        }
        FileError::Space(e) => status_of(e),
    }
}

fn report(status: QdomStatus, e: impl Display) -> QdomStatus {
    set_error(e);
    status
}

/// Runs a body with panics fenced off at the ABI boundary.
fn guarded(f: impl FnOnce() -> QdomStatus) -> QdomStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => report(QdomStatus::Internal, "internal panic"),
    }
}

/// # Safety
/// `ptr` must be valid for reads of a NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, QdomStatus> {
    if ptr.is_null() {
        return Err(report(
            QdomStatus::InvalidArgument,
            format!("{what} must not be null"),
        ));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        report(
            QdomStatus::InvalidArgument,
            format!("{what} must be valid UTF-8"),
        )
    })
}

fn alloc_str(text: &str) -> *mut c_char {
    CString::new(text.replace('\0', " "))
        .map_or(std::ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `out` must be valid for a write, or null (reported as an error).
unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> QdomStatus {
    if out.is_null() {
        return report(
            QdomStatus::InvalidArgument,
            format!("{what} must not be null"),
        );
    }
    out.write(value);
    QdomStatus::Ok
}

/// # Safety
/// `space` must be a live handle from a `qdom_space_*` constructor, or null.
unsafe fn read_space<'a>(
    space: *const QdomSpace,
) -> Result<&'a QdomSpace, QdomStatus> {
    space.as_ref().ok_or_else(|| {
        report(QdomStatus::InvalidArgument, "space must not be null")
    })
}

fn new_handle(name: &str, space: DistanceSpace) -> *mut QdomSpace {
    Box::into_raw(Box::new(QdomSpace {
        name: name.to_string(),
        space,
    }))
}

/// The library version as an allocated string; release with
/// [`qdom_string_free`].
#[no_mangle]
pub extern "C" fn qdom_version() -> *mut c_char {
    alloc_str(env!("CARGO_PKG_VERSION"))
}

/// The last error message on this thread, or null if the last call
/// succeeded. The caller owns the returned string.
#[no_mangle]
pub extern "C" fn qdom_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null_mut(), |c| alloc_str(&c.to_string_lossy()))
    })
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must have been returned by a `qdom_*` call and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qdom_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a space handle. Null is a no-op.
///
/// # Safety
/// `space` must have been returned by a `qdom_space_*` constructor and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn qdom_space_free(space: *mut QdomSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Parses a space file (JSON or the `dist p q 1/2` line format), validating
/// the triangle inequality, and writes a new handle to `out`.
///
/// # Safety
/// `text` must point to a NUL-terminated string and `out` to a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn qdom_space_parse(
    text: *const c_char,
    out: *mut *mut QdomSpace,
) -> QdomStatus {
    guarded(|| {
        let text = match read_str(text, "text") {
            Ok(t) => t,
            Err(status) => return status,
        };
        match qdom::spacefile::load(text) {
            Ok((file, space)) => write_out(out, new_handle(&file.name, space), "out"),
            Err(e) => report(status_of_file(&e), e),
        }
    })
}

/// Builds a named catalog space (formula entries yield their default finite
/// slice) and writes a new handle to `out`.
///
/// # Safety
/// `name` must point to a NUL-terminated string and `out` to a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn qdom_space_from_catalog(
    name: *const c_char,
    out: *mut *mut QdomSpace,
) -> QdomStatus {
    guarded(|| {
        let name = match read_str(name, "name") {
            Ok(n) => n,
            Err(status) => return status,
        };
        let entry = match catalog::get(name) {
            Ok(e) => e,
            Err(e) => return report(status_of(&e), e),
        };
        let space = match (entry.finite(), entry.formula()) {
            (Some(s), _) => s.clone(),
            (None, Some(f)) => match f.default_slice() {
                Ok(s) => s,
                Err(e) => return report(status_of(&e), e),
            },
            (None, None) => unreachable!("catalog entries are finite or formula"),
        };
        write_out(out, new_handle(name, space), "out")
    })
}

/// Draws a seeded random triangle-closed space. `profile` is one of
/// "generic", "hemimetric", "quasimetric", "characteristic-relation".
///
/// # Safety
/// `profile` must point to a NUL-terminated string and `out` to a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn qdom_space_random(
    points: usize,
    seed: u64,
    profile: *const c_char,
    out: *mut *mut QdomSpace,
) -> QdomStatus {
    guarded(|| {
        let profile = match read_str(profile, "profile") {
            Ok(p) => p,
            Err(status) => return status,
        };
        let profile: Profile = match profile.parse() {
            Ok(p) => p,
            Err(e) => return report(QdomStatus::InvalidArgument, e),
        };
        match catalog::random_space(points, seed, profile) {
            Ok(space) => write_out(out, new_handle("random", space), "out"),
            Err(e) => report(status_of(&e), e),
        }
    })
}

/// The number of points, or 0 when `space` is null.
///
/// # Safety
/// `space` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qdom_space_point_count(space: *const QdomSpace) -> usize {
    space.as_ref().map_or(0, |h| h.space.n())
}

/// Writes the label of point `index` to `out`.
///
/// # Safety
/// `space` must be a live handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn qdom_space_label(
    space: *const QdomSpace,
    index: usize,
    out: *mut *mut c_char,
) -> QdomStatus {
    guarded(|| {
        let handle = match read_space(space) {
            Ok(h) => h,
            Err(status) => return status,
        };
        if index >= handle.space.n() {
            return report(
                QdomStatus::InvalidArgument,
                format!(
                    "point index {index} out of range for {} points",
                    handle.space.n()
                ),
            );
        }
        write_out(out, alloc_str(&handle.space.labels()[index]), "out")
    })
}

/// Writes the exact distance `d(x, y)` to `out` as a value string
/// ("a/b", "a", or "inf").
///
/// # Safety
/// `space` must be a live handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn qdom_space_distance(
    space: *const QdomSpace,
    x: usize,
    y: usize,
    out: *mut *mut c_char,
) -> QdomStatus {
    guarded(|| {
        let handle = match read_space(space) {
            Ok(h) => h,
            Err(status) => return status,
        };
        let n = handle.space.n();
        if x >= n || y >= n {
            return report(
                QdomStatus::InvalidArgument,
                format!("pair ({x}, {y}) out of range for {n} points"),
            );
        }
        write_out(
            out,
            alloc_str(&handle.space.dist(x, y).to_string()),
            "out",
        )
    })
}

/// Writes the space as a JSON space file to `out`.
///
/// # Safety
/// `space` must be a live handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn qdom_space_to_json(
    space: *const QdomSpace,
    out: *mut *mut c_char,
) -> QdomStatus {
    guarded(|| {
        let handle = match read_space(space) {
            Ok(h) => h,
            Err(status) => return status,
        };
        let file = SpaceFile::from_space(&handle.name, &handle.space);
        write_out(out, alloc_str(&file.to_json()), "out")
    })
}

unsafe fn derived_space(
    space: *const QdomSpace,
    out: *mut *mut QdomSpace,
    suffix: &str,
    build: impl FnOnce(&DistanceSpace) -> Result<DistanceSpace, SpaceError>,
) -> QdomStatus {
    let handle = match read_space(space) {
        Ok(h) => h,
        Err(status) => return status,
    };
    match build(&handle.space) {
        Ok(derived) => write_out(
            out,
            new_handle(&format!("{}-{suffix}", handle.name), derived),
            "out",
        ),
        Err(e) => report(status_of(&e), e),
    }
}

/// Writes the upper-hemimetric space of `space` to `out`.
///
/// # Safety
/// `space` must be a live handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn qdom_space_upper_hemimetric(
    space: *const QdomSpace,
    out: *mut *mut QdomSpace,
) -> QdomStatus {
    guarded(|| {
        derived_space(space, out, "upper", |s| s.with_matrix(s.upper_hemimetric()))
    })
}

/// Writes the lower-hemimetric space of `space` to `out`.
///
/// # Safety
/// `space` must be a live handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn qdom_space_lower_hemimetric(
    space: *const QdomSpace,
    out: *mut *mut QdomSpace,
) -> QdomStatus {
    guarded(|| {
        derived_space(space, out, "lower", |s| s.with_matrix(s.lower_hemimetric()))
    })
}

/// Writes the relational (ideal) completion of `space` to `out`: one point
/// per ideal under the reverse Hausdorff distance. Fails with `Unsupported`
/// when the space is not max-continuous.
///
/// # Safety
/// `space` must be a live handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn qdom_space_relational_completion(
    space: *const QdomSpace,
    out: *mut *mut QdomSpace,
) -> QdomStatus {
    guarded(|| derived_space(space, out, "completion", ideal_completion_space))
}

/// Writes the Smyth completion of `space` to `out`: zero-aperture ideals
/// under the reverse ideal-Hausdorff distance. Fails with `Unsupported`
/// when the space is not Smyth-continuous.
///
/// # Safety
/// `space` must be a live handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn qdom_space_smyth_completion(
    space: *const QdomSpace,
    out: *mut *mut QdomSpace,
) -> QdomStatus {
    guarded(|| {
        derived_space(space, out, "smyth", |s| {
            Ok(smyth_completion(s)?.space().clone())
        })
    })
}

/// Runs the full check battery on `space`, writing the JSON report to
/// `out_report` and (when non-null) whether any check failed to
/// `out_failed`.
///
/// # Safety
/// `space` must be a live handle, `out_report` a writable pointer slot, and
/// `out_failed` writable or null.
#[no_mangle]
pub unsafe extern "C" fn qdom_space_check(
    space: *const QdomSpace,
    out_report: *mut *mut c_char,
    out_failed: *mut bool,
) -> QdomStatus {
    guarded(|| {
        let handle = match read_space(space) {
            Ok(h) => h,
            Err(status) => return status,
        };
        let results = harness::run_space(&handle.space);
        if !out_failed.is_null() {
            out_failed.write(harness::has_failures(&results));
        }
        write_out(out_report, alloc_str(&harness::to_json(&results)), "out_report")
    })
}

/// Runs the named catalog suite, writing the JSON report to `out_report`
/// and (when non-null) whether any check failed to `out_failed`.
///
/// # Safety
/// `out_report` must be a writable pointer slot and `out_failed` writable
/// or null.
#[no_mangle]
pub unsafe extern "C" fn qdom_named_suite(
    out_report: *mut *mut c_char,
    out_failed: *mut bool,
) -> QdomStatus {
    guarded(|| {
        let results = match harness::run_suite(&harness::Scope::Named) {
            Ok(r) => r,
            Err(e) => return report(status_of(&e), e),
        };
        if !out_failed.is_null() {
            out_failed.write(harness::has_failures(&results));
        }
        write_out(out_report, alloc_str(&harness::to_json(&results)), "out_report")
    })
}

/// Runs a seeded random suite over all profiles with point counts in
/// `[size_lo, size_hi]`, writing the JSON report to `out_report` and (when
/// non-null) whether any check failed to `out_failed`.
///
/// # Safety
/// `out_report` must be a writable pointer slot and `out_failed` writable
/// or null.
#[no_mangle]
pub unsafe extern "C" fn qdom_random_suite(
    n_spaces: usize,
    size_lo: usize,
    size_hi: usize,
    seed: u64,
    out_report: *mut *mut c_char,
    out_failed: *mut bool,
) -> QdomStatus {
    guarded(|| {
        let scope = harness::Scope::Random {
            n_spaces,
            sizes: (size_lo, size_hi),
            profiles: Profile::ALL.to_vec(),
            seed,
        };
        let results = match harness::run_suite(&scope) {
            Ok(r) => r,
            Err(e) => return report(status_of(&e), e),
        };
        if !out_failed.is_null() {
            out_failed.write(harness::has_failures(&results));
        }
        write_out(out_report, alloc_str(&harness::to_json(&results)), "out_report")
    })
}
