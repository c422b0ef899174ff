// SPDX-License-Identifier: Apache-2.0
//! C interface to the cdgl library.
//!
//! Every call returns a [`CdglStatus`]; on failure [`cdgl_last_error`] describes it.
//! Strings handed out by the library are released with [`cdgl_string_free`],
//! handles with their own `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cdgl::dgl::{bch, builtins, gauge_act, Dgl};
use cdgl::freelie::{parse_expr, LieElement};
use cdgl::workbench::{elaborate, parse_model, parse_model_ref, Command, Options, Status, Task};
use cdgl::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CdglStatus {
    Ok = 0,
    /// Bad input: parse or elaboration diagnostics, unknown names, degree errors.
    Diagnostics = 1,
    /// `CDGL_RESOURCE_LIMIT` was exceeded.
    ResourceLimit = 2,
    /// The computation ran and the verdict is negative.
    Fail = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    /// A mathematical precondition failed (not MC, not nilpotent, ...).
    Math = 6,
    Panic = 7,
}

/// A dgl presentation.
pub struct CdglModel {
    dgl: Dgl,
}

/// A task under construction.
pub struct CdglTask {
    task: Task,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CdglFormat {
    Canonical = 0,
    Table = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn lib_error(e: &Error) -> CdglStatus {
    set_error(&e.to_string());
    match e {
        Error::Resource(_) => CdglStatus::ResourceLimit,
        Error::Usage(_) | Error::Degree(_) | Error::Shape(_) | Error::IllFormedDifferential { .. } => CdglStatus::Diagnostics,
        _ => CdglStatus::Math,
    }
}

fn guard(f: impl FnOnce() -> CdglStatus) -> CdglStatus {
    set_error("");
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        CdglStatus::Panic
    })
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, CdglStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(CdglStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not UTF-8");
        CdglStatus::InvalidUtf8
    })
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> CdglStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            CdglStatus::Ok
        }
        Err(_) => {
            set_error("result contains a nul byte");
            CdglStatus::Math
        }
    }
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cdgl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cdgl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Built-in model by name (`L0`, `L1`, `S1`, `sphere`, `wedge`) and integer parameters.
///
/// # Safety
/// `name` is a C string, `params` points to `n_params` integers (or is null when
/// `n_params` is 0), and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cdgl_model_builtin(name: *const c_char, params: *const i64, n_params: usize, cap: usize, out: *mut *mut CdglModel) -> CdglStatus {
    guard(|| {
        let name = tri!(text(name));
        if out.is_null() || (params.is_null() && n_params > 0) {
            set_error("null pointer argument");
            return CdglStatus::NullPointer;
        }
        let ps = if n_params == 0 { &[][..] } else { std::slice::from_raw_parts(params, n_params) };
        match builtins::builtin(name, ps, cap) {
            Ok(dgl) => {
                *out = Box::into_raw(Box::new(CdglModel { dgl }));
                CdglStatus::Ok
            }
            Err(e) => lib_error(&e),
        }
    })
}

/// Model `name` of a model file, or a built-in reference when `source` is null.
/// `cap` 0 keeps the truncations declared in the file.
///
/// # Safety
/// `source` is null or a C string, `name` is a C string, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cdgl_model_parse(source: *const c_char, name: *const c_char, cap: usize, out: *mut *mut CdglModel) -> CdglStatus {
    guard(|| {
        let name = tri!(text(name));
        if out.is_null() {
            set_error("null output pointer");
            return CdglStatus::NullPointer;
        }
        let src = if source.is_null() { "" } else { tri!(text(source)) };
        let doc = match parse_model(src) {
            Ok(d) => d,
            Err(ds) => {
                set_error(&ds.iter().map(|d| d.render(src)).collect::<Vec<_>>().join("\n"));
                return CdglStatus::Diagnostics;
            }
        };
        let ws = match elaborate(&doc, &Options { cap: (cap > 0).then_some(cap), ..Options::default() }) {
            Ok(ws) => ws,
            Err(ds) => {
                set_error(&ds.iter().map(|d| d.render(src)).collect::<Vec<_>>().join("\n"));
                return CdglStatus::Diagnostics;
            }
        };
        let r = match parse_model_ref(name) {
            Ok(r) => r,
            Err(_) => {
                set_error(&format!("bad model reference `{name}`"));
                return CdglStatus::Diagnostics;
            }
        };
        match ws.resolve(&r) {
            Ok(dgl) => {
                *out = Box::into_raw(Box::new(CdglModel { dgl }));
                CdglStatus::Ok
            }
            Err(d) => {
                set_error(&d.message);
                CdglStatus::Diagnostics
            }
        }
    })
}

/// # Safety
/// `m` is null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cdgl_model_free(m: *mut CdglModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn cdgl_model_generator_count(m: *const CdglModel) -> usize {
    m.as_ref().map_or(0, |m| m.dgl.lie().rank())
}

/// # Safety
/// `m` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn cdgl_model_cap(m: *const CdglModel) -> usize {
    m.as_ref().map_or(0, |m| m.dgl.cap())
}

unsafe fn model<'a>(m: *const CdglModel) -> Result<&'a Dgl, CdglStatus> {
    m.as_ref().map(|m| &m.dgl).ok_or_else(|| {
        set_error("null model handle");
        CdglStatus::NullPointer
    })
}

fn element(dgl: &Dgl, s: &str) -> Result<LieElement, CdglStatus> {
    let e = parse_expr(s).map_err(|ds| {
        set_error(&ds.iter().map(|d| d.render(s)).collect::<Vec<_>>().join("\n"));
        CdglStatus::Diagnostics
    })?;
    e.eval_lie(dgl.lie()).map_err(|d| {
        set_error(&d.render(s));
        CdglStatus::Diagnostics
    })
}

/// Homology dimensions in degrees `lo..=hi`, written to `dims[0..=hi-lo]`.
///
/// # Safety
/// `m` is a live handle and `dims` has room for `hi - lo + 1` entries.
#[no_mangle]
pub unsafe extern "C" fn cdgl_homology_dims(m: *const CdglModel, lo: i64, hi: i64, dims: *mut usize) -> CdglStatus {
    guard(|| {
        let dgl = tri!(model(m));
        if dims.is_null() {
            set_error("null output pointer");
            return CdglStatus::NullPointer;
        }
        if lo > hi {
            set_error(&format!("empty degree window {lo}..{hi}"));
            return CdglStatus::Diagnostics;
        }
        let found = dgl.chain_complex(lo, hi).and_then(|c| c.homology_dims(lo, hi));
        match found {
            Ok(ds) => {
                for (i, (_, d)) in ds.into_iter().enumerate() {
                    *dims.add(i) = d;
                }
                CdglStatus::Ok
            }
            Err(e) => lib_error(&e),
        }
    })
}

/// `log(e^x e^y)` of two degree-0 bracket expressions.
///
/// # Safety
/// `m` is a live handle, `x` and `y` are C strings, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cdgl_bch(m: *const CdglModel, x: *const c_char, y: *const c_char, out: *mut *mut c_char) -> CdglStatus {
    guard(|| {
        let dgl = tri!(model(m));
        let (x, y) = (tri!(element(dgl, tri!(text(x)))), tri!(element(dgl, tri!(text(y)))));
        if out.is_null() {
            set_error("null output pointer");
            return CdglStatus::NullPointer;
        }
        match bch(&x, &y) {
            Ok(z) => give_string(out, z.to_expr_string()),
            Err(e) => lib_error(&e),
        }
    })
}

/// Gauge action `x𝒢a` on an MC element.
///
/// # Safety
/// `m` is a live handle, `x` and `a` are C strings, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cdgl_gauge(m: *const CdglModel, x: *const c_char, a: *const c_char, out: *mut *mut c_char) -> CdglStatus {
    guard(|| {
        let dgl = tri!(model(m));
        let (x, a) = (tri!(element(dgl, tri!(text(x)))), tri!(element(dgl, tri!(text(a)))));
        if out.is_null() {
            set_error("null output pointer");
            return CdglStatus::NullPointer;
        }
        match gauge_act(dgl, &x, &a) {
            Ok(z) => give_string(out, z.to_expr_string()),
            Err(e) => lib_error(&e),
        }
    })
}

/// A task for a CLI command name such as `baut`; null if the name is unknown.
///
/// # Safety
/// `command` is a C string.
#[no_mangle]
pub unsafe extern "C" fn cdgl_task_new(command: *const c_char) -> *mut CdglTask {
    let Ok(name) = text(command) else { return ptr::null_mut() };
    match name.parse::<Command>() {
        Ok(c) => Box::into_raw(Box::new(CdglTask { task: Task::new(c) })),
        Err(e) => {
            set_error(&e);
            ptr::null_mut()
        }
    }
}

/// Sets a parameter by flag name (`model`, `range`, `truncate`, `gspec`, `expr`, `source`, ...).
///
/// # Safety
/// `t` is a live task, `key` and `value` are C strings.
#[no_mangle]
pub unsafe extern "C" fn cdgl_task_set(t: *mut CdglTask, key: *const c_char, value: *const c_char) -> CdglStatus {
    guard(|| {
        let Some(t) = t.as_mut() else {
            set_error("null task handle");
            return CdglStatus::NullPointer;
        };
        match t.task.set(tri!(text(key)), tri!(text(value))) {
            Ok(()) => CdglStatus::Ok,
            Err(e) => {
                set_error(&e);
                CdglStatus::Diagnostics
            }
        }
    })
}

/// Runs the task and writes its report; the report is produced for every status but `NullPointer`.
///
/// # Safety
/// `t` is a live task and `report` is writable.
#[no_mangle]
pub unsafe extern "C" fn cdgl_task_run(t: *const CdglTask, format: CdglFormat, report: *mut *mut c_char) -> CdglStatus {
    guard(|| {
        let (Some(t), false) = (t.as_ref(), report.is_null()) else {
            set_error("null pointer argument");
            return CdglStatus::NullPointer;
        };
        let r = cdgl::workbench::run_task(&t.task);
        let text = match format {
            CdglFormat::Canonical => r.canonical(),
            CdglFormat::Table => r.table(),
        };
        if give_string(report, text) != CdglStatus::Ok {
            return CdglStatus::Math;
        }
        set_error(&r.diagnostics.join("\n"));
        match r.status {
            Status::Ok => CdglStatus::Ok,
            Status::Fail => CdglStatus::Fail,
            Status::Diagnostics => CdglStatus::Diagnostics,
            Status::ResourceLimit => CdglStatus::ResourceLimit,
        }
    })
}

/// # Safety
/// `t` is null or a live task.
#[no_mangle]
pub unsafe extern "C" fn cdgl_task_free(t: *mut CdglTask) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}
