//! Exercise the C entry points from Rust, then compile and run a real C
//! program against the header and the static library.

use libc::c_char;
use ordgraph_ffi::*;
use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn buf_to_string(buf: &[c_char]) -> String {
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

const E1: &str = include_str!("../../ordgraph/fixtures/e1.json");
const E1_FULL_REP: &str = include_str!("../../ordgraph/fixtures/e1-full.rep.json");

#[test]
fn ordinal_eval_round_trips() {
    let mut buf = [0 as c_char; 128];
    let st = og_ordinal_eval(
        cstr("add").as_ptr(),
        cstr("w^w*2+w*3+2").as_ptr(),
        cstr("w^w+w^3").as_ptr(),
        buf.as_mut_ptr(),
        buf.len(),
    );
    assert_eq!(st, OgStatus::Ok);
    assert_eq!(buf_to_string(&buf), "w^w*3+w^3");

    let st = og_ordinal_eval(
        cstr("add").as_ptr(),
        cstr("w^").as_ptr(),
        cstr("w").as_ptr(),
        buf.as_mut_ptr(),
        buf.len(),
    );
    assert_eq!(st, OgStatus::ParseError);
    let n = og_last_error(buf.as_mut_ptr(), buf.len());
    assert!(n > 0);
    assert!(buf_to_string(&buf).contains("syntax error"));
}

#[test]
fn presentation_lifecycle_and_checks() {
    let mut handle: *mut OgPresentation = ptr::null_mut();
    let st = og_presentation_load(cstr(E1).as_ptr(), &mut handle);
    assert_eq!(st, OgStatus::Ok);
    assert!(!handle.is_null());

    let mut buf = [0 as c_char; 256];
    let st = og_path_eval(
        handle,
        cstr("head").as_ptr(),
        cstr("g").as_ptr(),
        cstr("2").as_ptr(),
        buf.as_mut_ptr(),
        buf.len(),
    );
    assert_eq!(st, OgStatus::Ok);
    assert_eq!(buf_to_string(&buf), "e.f");

    let st = og_check_condition_c(handle, buf.as_mut_ptr(), buf.len());
    assert_eq!(st, OgStatus::CheckFailed);
    assert_eq!(buf_to_string(&buf), "level 1 atom g word e.f");

    let st = og_boundary(handle, cstr("v").as_ptr(), 0, 1, buf.as_mut_ptr(), buf.len());
    assert_eq!(st, OgStatus::Ok);
    assert_eq!(buf_to_string(&buf), "(g)^w");

    let mut value: i64 = -1;
    let st = og_shift(
        handle,
        cstr("g.e").as_ptr(),
        1,
        &mut value,
        buf.as_mut_ptr(),
        buf.len(),
    );
    assert_eq!(st, OgStatus::Ok);
    assert_eq!(value, 1);
    let st = og_shift(
        handle,
        cstr("g").as_ptr(),
        0,
        &mut value,
        buf.as_mut_ptr(),
        buf.len(),
    );
    assert_eq!(st, OgStatus::CheckFailed);
    assert_eq!(buf_to_string(&buf), "witness e=0 b=2");

    let st = og_rep_verify(handle, cstr(E1_FULL_REP).as_ptr(), buf.as_mut_ptr(), buf.len());
    assert_eq!(st, OgStatus::Ok);

    og_presentation_free(handle);
    og_presentation_free(ptr::null_mut());
}

#[test]
fn invalid_documents_report_errors() {
    let mut handle: *mut OgPresentation = ptr::null_mut();
    let st = og_presentation_load(cstr("{}").as_ptr(), &mut handle);
    assert_eq!(st, OgStatus::ParseError);
    assert!(handle.is_null());

    let broken = E1.replace(r#"{ "left": "e", "atom": "fg", "result": "g" },"#, "");
    let st = og_presentation_load(cstr(&broken).as_ptr(), &mut handle);
    assert_eq!(st, OgStatus::ValidationError);
    let mut buf = [0 as c_char; 512];
    og_last_error(buf.as_mut_ptr(), buf.len());
    assert!(buf_to_string(&buf).contains("prepend totality"));

    let st = og_presentation_load(ptr::null(), &mut handle);
    assert_eq!(st, OgStatus::InvalidArgument);
}

#[test]
fn truncation_is_reported() {
    let mut buf = [0 as c_char; 4];
    let st = og_ordinal_eval(
        cstr("add").as_ptr(),
        cstr("w^w*2").as_ptr(),
        cstr("w").as_ptr(),
        buf.as_mut_ptr(),
        buf.len(),
    );
    assert_eq!(st, OgStatus::BufferTooSmall);
    assert_eq!(buf_to_string(&buf), "w^w");
}

#[test]
fn c_program_links_against_the_header() {
    let manifest = env!("CARGO_MANIFEST_DIR");
    let target_dir = format!("{manifest}/../../target/debug");
    let staticlib = format!("{target_dir}/libordgraph_ffi.a");
    assert!(
        std::path::Path::new(&staticlib).exists(),
        "static library is built before integration tests run"
    );
    let work = std::env::temp_dir().join("ordgraph-ffi-smoke");
    std::fs::create_dir_all(&work).unwrap();
    let c_src = work.join("main.c");
    let fixture = format!("{manifest}/../ordgraph/fixtures/e1.json");
    std::fs::write(
        &c_src,
        r#"
#include "ordgraph.h"
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static char *slurp(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    fseek(f, 0, SEEK_SET);
    char *buf = malloc(n + 1);
    fread(buf, 1, n, f);
    buf[n] = 0;
    fclose(f);
    return buf;
}

int main(int argc, char **argv) {
    char out[256];
    if (og_ordinal_eval("add", "w^w*2+w*3+2", "w^w+w^3", out, sizeof out) != OG_STATUS_OK)
        return 1;
    if (strcmp(out, "w^w*3+w^3") != 0) return 2;

    char *json = slurp(argv[1]);
    if (!json) return 3;
    OgPresentation *p = NULL;
    if (og_presentation_load(json, &p) != OG_STATUS_OK) return 4;
    free(json);

    if (og_path_eval(p, "head", "g", "2", out, sizeof out) != OG_STATUS_OK) return 5;
    if (strcmp(out, "e.f") != 0) return 6;
    if (og_check_condition_c(p, out, sizeof out) != OG_STATUS_CHECK_FAILED) return 7;

    og_presentation_free(p);
    printf("ok\n");
    return 0;
}
"#,
    )
    .unwrap();
    let exe = work.join("smoke");
    let compile = Command::new("cc")
        .arg(&c_src)
        .arg("-I")
        .arg(format!("{manifest}/include"))
        .arg(&staticlib)
        .arg("-lpthread")
        .arg("-ldl")
        .arg("-lm")
        .arg("-o")
        .arg(&exe)
        .output()
        .expect("cc is available");
    assert!(
        compile.status.success(),
        "compile failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );
    let run = Command::new(&exe).arg(&fixture).output().unwrap();
    assert!(
        run.status.success(),
        "smoke binary exited {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
