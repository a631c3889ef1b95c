//! C ABI for the dbcscan library.
//!
//! Handles are opaque; every function returns a `DbcStatus` and reports
//! details through `dbc_last_error`. Strings returned by the library are
//! heap-allocated and released with `dbc_string_free`. The generated header
//! lands in `include/dbcscan.h`.

use dbcscan::catalog::{Catalog, Category};
use dbcscan::report::SnapshotReport;
use dbcscan::snapshot::{build_snapshot, scan_dir};
use dbcscan::source_model::parse_file;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DbcStatus {
    Ok = 0,
    InvalidArgument = 1,
    IoError = 2,
    CatalogError = 3,
    /// Some files were skipped or parsed partially; results are still valid.
    Partial = 4,
    InternalError = 5,
}

/// Construct categories, mirroring the catalog.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DbcCategory {
    Cre = 0,
    Api = 1,
    Assertion = 2,
    Annotation = 3,
    Other = 4,
}

impl From<DbcCategory> for Category {
    fn from(c: DbcCategory) -> Category {
        match c {
            DbcCategory::Cre => Category::Cre,
            DbcCategory::Api => Category::Api,
            DbcCategory::Assertion => Category::Assertion,
            DbcCategory::Annotation => Category::Annotation,
            DbcCategory::Other => Category::Other,
        }
    }
}

/// Opaque catalog handle.
pub struct DbcCatalog {
    inner: Catalog,
}

/// Opaque scan-result handle holding one snapshot report.
pub struct DbcScanResult {
    report: SnapshotReport,
    partial: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dbc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

unsafe fn cstr_arg<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

fn guarded<F: FnOnce() -> DbcStatus>(f: F) -> DbcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".to_string());
            DbcStatus::InternalError
        }
    }
}

/// Load the shipped default catalog into `*out`.
///
/// # Safety
/// `out` must be a valid, writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dbc_catalog_load_default(out: *mut *mut DbcCatalog) -> DbcStatus {
    guarded(|| {
        if out.is_null() {
            set_error("out pointer is null".into());
            return DbcStatus::InvalidArgument;
        }
        clear_error();
        match Catalog::load_default() {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(DbcCatalog { inner }));
                DbcStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                DbcStatus::CatalogError
            }
        }
    })
}

/// Load the default catalog extended with user TSV files.
///
/// # Safety
/// `paths` must point to `n` valid C strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dbc_catalog_load_extended(
    paths: *const *const c_char,
    n: usize,
    out: *mut *mut DbcCatalog,
) -> DbcStatus {
    guarded(|| {
        if out.is_null() || (n > 0 && paths.is_null()) {
            set_error("null pointer argument".into());
            return DbcStatus::InvalidArgument;
        }
        clear_error();
        let mut owned: Vec<PathBuf> = Vec::with_capacity(n);
        for i in 0..n {
            let ptr = *paths.add(i);
            match cstr_arg(ptr) {
                Some(s) => owned.push(PathBuf::from(s)),
                None => {
                    set_error(format!("path {i} is null or not UTF-8"));
                    return DbcStatus::InvalidArgument;
                }
            }
        }
        match Catalog::load_extended(&owned) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(DbcCatalog { inner }));
                DbcStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                DbcStatus::CatalogError
            }
        }
    })
}

/// Number of constructs in a category.
///
/// # Safety
/// `catalog` must be a live handle from a `dbc_catalog_load_*` call.
#[no_mangle]
pub unsafe extern "C" fn dbc_catalog_count(
    catalog: *const DbcCatalog,
    category: DbcCategory,
) -> u64 {
    if catalog.is_null() {
        return 0;
    }
    (*catalog).inner.count_by(category.into()) as u64
}

/// Release a catalog handle.
///
/// # Safety
/// `catalog` must come from a `dbc_catalog_load_*` call; it is consumed.
#[no_mangle]
pub unsafe extern "C" fn dbc_catalog_free(catalog: *mut DbcCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}

/// Scan one in-memory source buffer. `path_hint` selects the language by
/// extension and becomes the record file path.
///
/// # Safety
/// `catalog` must be live; `path_hint` a C string; `bytes` readable for
/// `len` bytes; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dbc_scan_source(
    catalog: *const DbcCatalog,
    path_hint: *const c_char,
    bytes: *const u8,
    len: usize,
    out: *mut *mut DbcScanResult,
) -> DbcStatus {
    guarded(|| {
        if catalog.is_null() || out.is_null() || (len > 0 && bytes.is_null()) {
            set_error("null pointer argument".into());
            return DbcStatus::InvalidArgument;
        }
        let Some(path) = cstr_arg(path_hint) else {
            set_error("path_hint is null or not UTF-8".into());
            return DbcStatus::InvalidArgument;
        };
        clear_error();
        let slice = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(bytes, len)
        };
        let cat = &(*catalog).inner;
        let unit = parse_file(path, slice);
        let snapshot = build_snapshot(vec![unit], cat, "buffer", "v1", Vec::new());
        let partial = snapshot.has_partial_failures();
        let report = SnapshotReport::from_snapshot(&snapshot, cat);
        *out = Box::into_raw(Box::new(DbcScanResult { report, partial }));
        if partial {
            DbcStatus::Partial
        } else {
            DbcStatus::Ok
        }
    })
}

/// Scan a directory tree of Java/Kotlin sources.
///
/// # Safety
/// `catalog` must be live; `root`, `project_id`, and `snapshot_id` must be
/// C strings (ids may be null for defaults); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dbc_scan_dir(
    catalog: *const DbcCatalog,
    root: *const c_char,
    project_id: *const c_char,
    snapshot_id: *const c_char,
    out: *mut *mut DbcScanResult,
) -> DbcStatus {
    guarded(|| {
        if catalog.is_null() || out.is_null() {
            set_error("null pointer argument".into());
            return DbcStatus::InvalidArgument;
        }
        let Some(root) = cstr_arg(root) else {
            set_error("root is null or not UTF-8".into());
            return DbcStatus::InvalidArgument;
        };
        let project = cstr_arg(project_id).unwrap_or("project");
        let snapshot_name = cstr_arg(snapshot_id).unwrap_or("v1");
        clear_error();
        let cat = &(*catalog).inner;
        match scan_dir(Path::new(root), cat, project, snapshot_name, None) {
            Ok(snapshot) => {
                let partial = snapshot.has_partial_failures();
                let report = SnapshotReport::from_snapshot(&snapshot, cat);
                *out = Box::into_raw(Box::new(DbcScanResult { report, partial }));
                if partial {
                    DbcStatus::Partial
                } else {
                    DbcStatus::Ok
                }
            }
            Err(e) => {
                set_error(e.to_string());
                DbcStatus::IoError
            }
        }
    })
}

/// Number of contract records in a result.
///
/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dbc_result_record_count(result: *const DbcScanResult) -> u64 {
    if result.is_null() {
        return 0;
    }
    (*result).report.records.len() as u64
}

/// Whether the scan skipped or only partially parsed some files.
///
/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dbc_result_is_partial(result: *const DbcScanResult) -> bool {
    !result.is_null() && (*result).partial
}

/// Serialize a result to the record-file JSON schema. The returned string is
/// owned by the caller and released with `dbc_string_free`.
///
/// # Safety
/// `result` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dbc_result_to_json(
    result: *const DbcScanResult,
    out: *mut *mut c_char,
) -> DbcStatus {
    guarded(|| {
        if result.is_null() || out.is_null() {
            set_error("null pointer argument".into());
            return DbcStatus::InvalidArgument;
        }
        clear_error();
        let json = (*result).report.to_json();
        match CString::new(json) {
            Ok(c) => {
                *out = c.into_raw();
                DbcStatus::Ok
            }
            Err(_) => {
                set_error("serialized report contained an interior NUL".into());
                DbcStatus::InternalError
            }
        }
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and is consumed.
#[no_mangle]
pub unsafe extern "C" fn dbc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Release a scan result.
///
/// # Safety
/// `result` must come from a `dbc_scan_*` call; it is consumed.
#[no_mangle]
pub unsafe extern "C" fn dbc_result_free(result: *mut DbcScanResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
