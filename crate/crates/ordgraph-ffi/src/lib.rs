//! C ABI for the ordgraph toolkit: opaque presentation handles, status
//! codes, and string results written into caller buffers. The matching
//! header lives at `include/ordgraph.h` (regenerate with cbindgen via the
//! checked-in `cbindgen.toml` when editing this file).
//!
//! Conventions: UTF-8 NUL-terminated strings in and out; every function is
//! panic-safe; on any status other than `Ok` the message from
//! [`og_last_error`] describes what happened. Output is truncated (still
//! NUL-terminated) when the buffer is too small, and the status reports it.

use libc::{c_char, c_int, size_t};
use ordgraph::boundary;
use ordgraph::conditions::{self, ConditionS};
use ordgraph::ordinal;
use ordgraph::patheng;
use ordgraph::shift::{self, Cancellativity};
use ordgraph::starops::{self, Representation};
use ordgraph::Presentation;
use std::cell::RefCell;
use std::ffi::CStr;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OgStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    ValidationError = 3,
    /// The requested check ran and found a violation or witness.
    CheckFailed = 4,
    BufferTooSmall = 5,
}

/// Opaque handle to a validated presentation.
pub struct OgPresentation {
    inner: Presentation,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, OgStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(OgStatus::InvalidArgument);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        OgStatus::InvalidArgument
    })
}

/// Write `s` into the caller buffer, always NUL-terminating.
fn write_out(buf: *mut c_char, cap: size_t, s: &str) -> OgStatus {
    if buf.is_null() || cap == 0 {
        set_error("null or empty output buffer");
        return OgStatus::InvalidArgument;
    }
    let bytes = s.as_bytes();
    let n = bytes.len().min(cap - 1);
    unsafe {
        std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast(), n);
        *buf.add(n) = 0;
    }
    if n < bytes.len() {
        set_error(format!("output needs {} bytes", bytes.len() + 1));
        OgStatus::BufferTooSmall
    } else {
        OgStatus::Ok
    }
}

fn guarded(f: impl FnOnce() -> OgStatus) -> OgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            OgStatus::InvalidArgument
        }
    }
}

/// Copy the last error message for this thread; returns its full length.
#[no_mangle]
pub extern "C" fn og_last_error(buf: *mut c_char, cap: size_t) -> size_t {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let _ = write_out(buf, cap, &msg);
        }
        msg.len()
    })
}

/// Copy the library version string; returns its full length.
#[no_mangle]
pub extern "C" fn og_version(buf: *mut c_char, cap: size_t) -> size_t {
    let v = env!("CARGO_PKG_VERSION");
    if !buf.is_null() && cap > 0 {
        let _ = write_out(buf, cap, v);
    }
    v.len()
}

/// Parse and validate a presentation document. On success `*out` owns the
/// handle; release it with [`og_presentation_free`].
#[no_mangle]
pub extern "C" fn og_presentation_load(
    json: *const c_char,
    out: *mut *mut OgPresentation,
) -> OgStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output handle");
            return OgStatus::InvalidArgument;
        }
        let json = match read_str(json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match Presentation::load(json) {
            Ok(p) => {
                let handle = Box::new(OgPresentation { inner: p });
                unsafe { *out = Box::into_raw(handle) };
                OgStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                match e {
                    ordgraph::presentation::LoadError::Validation(_) => {
                        OgStatus::ValidationError
                    }
                    _ => OgStatus::ParseError,
                }
            }
        }
    })
}

/// Release a presentation handle. Null is a no-op.
#[no_mangle]
pub extern "C" fn og_presentation_free(p: *mut OgPresentation) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

fn with_presentation<'a>(p: *const OgPresentation) -> Result<&'a Presentation, OgStatus> {
    if p.is_null() {
        set_error("null presentation handle");
        return Err(OgStatus::InvalidArgument);
    }
    Ok(unsafe { &(*p).inner })
}

/// Ordinal arithmetic on expressions. `op` is one of "add", "mul", "sub",
/// "cmp"; the canonical result (or "less"/"equal"/"greater") is written to
/// `buf`.
#[no_mangle]
pub extern "C" fn og_ordinal_eval(
    op: *const c_char,
    a: *const c_char,
    b: *const c_char,
    buf: *mut c_char,
    cap: size_t,
) -> OgStatus {
    guarded(|| {
        let (op, a, b) = match (read_str(op), read_str(a), read_str(b)) {
            (Ok(op), Ok(a), Ok(b)) => (op, a, b),
            (Err(st), _, _) | (_, Err(st), _) | (_, _, Err(st)) => return st,
        };
        let parse = |s: &str| {
            ordinal::parse(s).map_err(|e| {
                set_error(e.to_string());
                OgStatus::ParseError
            })
        };
        let oa = match parse(a) {
            Ok(o) => o,
            Err(st) => return st,
        };
        let ob = match parse(b) {
            Ok(o) => o,
            Err(st) => return st,
        };
        let text = match op {
            "add" => oa.add(&ob).to_string(),
            "mul" => oa.mul(&ob).to_string(),
            "sub" => match oa.left_sub(&ob) {
                Ok(o) => o.to_string(),
                Err(e) => {
                    set_error(e.to_string());
                    return OgStatus::ParseError;
                }
            },
            "cmp" => match oa.cmp(&ob) {
                std::cmp::Ordering::Less => "less".to_string(),
                std::cmp::Ordering::Equal => "equal".to_string(),
                std::cmp::Ordering::Greater => "greater".to_string(),
            },
            other => {
                set_error(format!("unknown ordinal op `{other}`"));
                return OgStatus::InvalidArgument;
            }
        };
        write_out(buf, cap, &text)
    })
}

/// Path operations. `op` is one of "normalize", "compose", "head", "tail",
/// "divides"; `a` is a path literal, `b` the second literal or ordinal
/// position (ignored for "normalize", may be null there).
#[no_mangle]
pub extern "C" fn og_path_eval(
    p: *const OgPresentation,
    op: *const c_char,
    a: *const c_char,
    b: *const c_char,
    buf: *mut c_char,
    cap: size_t,
) -> OgStatus {
    guarded(|| {
        let pres = match with_presentation(p) {
            Ok(p) => p,
            Err(st) => return st,
        };
        let (op, a) = match (read_str(op), read_str(a)) {
            (Ok(op), Ok(a)) => (op, a),
            (Err(st), _) | (_, Err(st)) => return st,
        };
        let path = |s: &str| {
            patheng::parse_path(pres, s).map_err(|e| {
                set_error(e.to_string());
                OgStatus::ParseError
            })
        };
        let pa = match path(a) {
            Ok(x) => x,
            Err(st) => return st,
        };
        let text = match op {
            "normalize" => pa.display(pres),
            "compose" | "divides" => {
                let b = match read_str(b) {
                    Ok(s) => s,
                    Err(st) => return st,
                };
                let pb = match path(b) {
                    Ok(x) => x,
                    Err(st) => return st,
                };
                if op == "divides" {
                    patheng::divides(pres, &pa, &pb).to_string()
                } else {
                    match patheng::compose(pres, &pa, &pb) {
                        Ok(c) => c.display(pres),
                        Err(e) => {
                            set_error(e.to_string());
                            return OgStatus::ParseError;
                        }
                    }
                }
            }
            "head" | "tail" => {
                let b = match read_str(b) {
                    Ok(s) => s,
                    Err(st) => return st,
                };
                let beta = match ordinal::parse(b) {
                    Ok(o) => o,
                    Err(e) => {
                        set_error(e.to_string());
                        return OgStatus::ParseError;
                    }
                };
                let r = if op == "head" {
                    patheng::head(pres, &pa, &beta)
                } else {
                    patheng::tail(pres, &pa, &beta)
                };
                match r {
                    Ok(x) => x.display(pres),
                    Err(e) => {
                        set_error(e.to_string());
                        return OgStatus::ParseError;
                    }
                }
            }
            other => {
                set_error(format!("unknown path op `{other}`"));
                return OgStatus::InvalidArgument;
            }
        };
        write_out(buf, cap, &text)
    })
}

/// Condition (C). `Ok` means the condition holds; `CheckFailed` means a
/// witness was found and written as "level <k> atom <a> word <w>".
#[no_mangle]
pub extern "C" fn og_check_condition_c(
    p: *const OgPresentation,
    buf: *mut c_char,
    cap: size_t,
) -> OgStatus {
    guarded(|| {
        let pres = match with_presentation(p) {
            Ok(p) => p,
            Err(st) => return st,
        };
        match conditions::condition_c(pres) {
            Ok(()) => write_out(buf, cap, "ok"),
            Err(w) => {
                let word = w
                    .word
                    .iter()
                    .map(|&g| pres.gen_name(g))
                    .collect::<Vec<_>>()
                    .join(".");
                let text = format!(
                    "level {} atom {} word {word}",
                    w.level,
                    pres.gen_name(w.atom)
                );
                match write_out(buf, cap, &text) {
                    OgStatus::Ok => OgStatus::CheckFailed,
                    other => other,
                }
            }
        }
    })
}

/// Bounded condition (S) search. `Ok` writes "verified_up_to(n)";
/// `CheckFailed` writes the violating level/component/n triple.
#[no_mangle]
pub extern "C" fn og_check_condition_s(
    p: *const OgPresentation,
    max_n: c_int,
    buf: *mut c_char,
    cap: size_t,
) -> OgStatus {
    guarded(|| {
        let pres = match with_presentation(p) {
            Ok(p) => p,
            Err(st) => return st,
        };
        if max_n < 1 {
            set_error("max_n must be ≥ 1");
            return OgStatus::InvalidArgument;
        }
        match conditions::condition_s(pres, max_n as usize) {
            ConditionS::VerifiedUpTo(n) => write_out(buf, cap, &format!("verified_up_to({n})")),
            ConditionS::Violation {
                level,
                component,
                n,
            } => {
                let comp = component
                    .iter()
                    .map(|&v| pres.vertex_name(v))
                    .collect::<Vec<_>>()
                    .join(",");
                let text = format!("level {level} component {{{comp}}} n={n}");
                match write_out(buf, cap, &text) {
                    OgStatus::Ok => OgStatus::CheckFailed,
                    other => other,
                }
            }
        }
    })
}

/// Enumerate boundary star paths from a vertex, newline-joined.
#[no_mangle]
pub extern "C" fn og_boundary(
    p: *const OgPresentation,
    vertex: *const c_char,
    prefix: c_int,
    cycle: c_int,
    buf: *mut c_char,
    cap: size_t,
) -> OgStatus {
    guarded(|| {
        let pres = match with_presentation(p) {
            Ok(p) => p,
            Err(st) => return st,
        };
        let name = match read_str(vertex) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let Some(v) = pres.vertex(name) else {
            set_error(format!("unknown vertex `{name}`"));
            return OgStatus::InvalidArgument;
        };
        if prefix < 0 || cycle < 0 {
            set_error("bounds must be ≥ 0");
            return OgStatus::InvalidArgument;
        }
        let listing = boundary::enumerate_boundary(pres, v, prefix as usize, cycle as usize)
            .iter()
            .map(|f| f.display(pres))
            .collect::<Vec<_>>()
            .join("\n");
        write_out(buf, cap, &listing)
    })
}

/// Cancellativity and shift value at a level. `Ok` sets `*value`;
/// `CheckFailed` means non-cancellative, with the witness written.
#[no_mangle]
pub extern "C" fn og_shift(
    p: *const OgPresentation,
    star: *const c_char,
    level: c_int,
    value: *mut i64,
    buf: *mut c_char,
    cap: size_t,
) -> OgStatus {
    guarded(|| {
        let pres = match with_presentation(p) {
            Ok(p) => p,
            Err(st) => return st,
        };
        let text = match read_str(star) {
            Ok(s) => s,
            Err(st) => return st,
        };
        if level < 0 || value.is_null() {
            set_error("level must be ≥ 0 and value non-null");
            return OgStatus::InvalidArgument;
        }
        let f = match boundary::parse_star(pres, text) {
            Ok(f) => f,
            Err(e) => {
                set_error(e.to_string());
                return OgStatus::ParseError;
            }
        };
        match shift::is_cancellative(pres, &f, level as usize) {
            Cancellativity::Cancellative => match shift::shift_v(pres, &f, level as usize) {
                Ok(v) => {
                    unsafe { *value = v };
                    write_out(buf, cap, "cancellative")
                }
                Err(e) => {
                    set_error(e.to_string());
                    OgStatus::InvalidArgument
                }
            },
            Cancellativity::Witness { epsilon, beta } => {
                let text = format!("witness e={epsilon} b={beta}");
                match write_out(buf, cap, &text) {
                    OgStatus::Ok => OgStatus::CheckFailed,
                    other => other,
                }
            }
        }
    })
}

/// Verify the Cuntz-Krieger relations of a representation document.
/// `Ok` means every relation instance holds exactly; `CheckFailed` writes
/// the newline-joined failure list.
#[no_mangle]
pub extern "C" fn og_rep_verify(
    p: *const OgPresentation,
    rep_json: *const c_char,
    buf: *mut c_char,
    cap: size_t,
) -> OgStatus {
    guarded(|| {
        let pres = match with_presentation(p) {
            Ok(p) => p,
            Err(st) => return st,
        };
        let json = match read_str(rep_json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let rep = match Representation::load(json) {
            Ok(r) => r,
            Err(e) => {
                set_error(e.to_string());
                return OgStatus::ParseError;
            }
        };
        match starops::verify_ck(pres, &rep, None) {
            Ok(report) if report.is_ok() => write_out(buf, cap, "pass"),
            Ok(report) => {
                let text = report
                    .failures
                    .iter()
                    .map(|f| format!("({}) {}", f.relation, f.subject))
                    .collect::<Vec<_>>()
                    .join("\n");
                match write_out(buf, cap, &text) {
                    OgStatus::Ok => OgStatus::CheckFailed,
                    other => other,
                }
            }
            Err(e) => {
                set_error(e.to_string());
                OgStatus::ParseError
            }
        }
    })
}
