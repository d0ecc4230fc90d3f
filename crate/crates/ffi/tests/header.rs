//! Compiles and runs a small C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "weylforge.h"

int main(void) {
    WfValue *q = NULL, *p = NULL, *mb = NULL;
    char *text = NULL;
    if (wf_eval("q", 1, NULL, &q) != WF_STATUS_OK) return 1;
    if (wf_eval("p", 1, NULL, &p) != WF_STATUS_OK) return 2;
    if (wf_moyal(q, p, NULL, &mb) != WF_STATUS_OK) return 3;
    if (wf_value_render(mb, WF_FORMAT_TEXT, &text) != WF_STATUS_OK) return 4;
    int ok = strcmp(text, "-i*hbar") == 0;
    printf("%s\n", text);
    wf_string_free(text);
    wf_value_free(q);
    wf_value_free(p);
    wf_value_free(mb);
    if (wf_eval("(", 1, NULL, &q) != WF_STATUS_EXPRESSION) return 5;
    if (strlen(wf_last_error()) == 0) return 6;
    return ok ? 0 : 7;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    // test binaries live in target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap().to_path_buf();
    // cargo test does not produce the staticlib, so build it here
    let mut build = Command::new(env!("CARGO"));
    build.args(["build", "--quiet", "-p", "weylforge-ffi"]).current_dir(&manifest);
    if lib_dir.file_name().is_some_and(|n| n == "release") {
        build.arg("--release");
    }
    assert!(build.status().expect("cargo runs").success(), "building the static library failed");
    assert!(lib_dir.join("libweylforge_ffi.a").exists(), "static library not found in {}", lib_dir.display());
    let work = std::env::temp_dir().join(format!("weylforge-capi-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("main.c");
    let bin = work.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(lib_dir.join("libweylforge_ffi.a"))
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler runs");
    assert!(status.success(), "C build failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "-i*hbar");
    std::fs::remove_dir_all(&work).ok();
}
