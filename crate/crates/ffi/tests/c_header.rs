//! Compiles and runs a small C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include "aes_lab.h"
#include <math.h>
#include <stdio.h>

int main(void) {
    AesLabState *h = NULL;
    AesComplex beta = {1.0, 0.5};
    if (aes_state_oscillator(0.4, 0.2, beta, &h) != AES_STATUS_OK) return 10;
    size_t n = aes_state_len(h);
    AesComplex *buf = malloc(n * sizeof *buf);
    if (aes_state_coeffs(h, buf, n) != AES_STATUS_OK) return 11;
    double norm = 0.0;
    for (size_t k = 0; k < n; k++) norm += buf[k].re * buf[k].re + buf[k].im * buf[k].im;
    free(buf);
    aes_state_free(h);
    if (fabs(norm - 1.0) > 1e-12) return 12;
    if (aes_state_angular(0.5, 0.0, 2, 1, &h) != AES_STATUS_INVALID_INPUT) return 13;
    char msg[256];
    if (aes_last_error(msg, sizeof msg) == 0) return 14;
    printf("ok %s\n", aes_version());
    return 0;
}
"#;

// Test binaries live in `target/<profile>/deps`, next to the freshly built library.
fn deps_dir() -> PathBuf {
    std::env::current_exe().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_staticlib() {
    let lib = deps_dir().join("libaes_lab_ffi.a");
    if !lib.exists() {
        panic!("static library missing at {}", lib.display());
    }
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("c_header");
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let bin = dir.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .args(["-std=c11", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .expect("C compiler available");
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
