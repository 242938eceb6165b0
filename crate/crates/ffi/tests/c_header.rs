//! Compiles and runs a C program against the generated header and the
//! static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include "lifting.h"
#include <math.h>
#include <stdio.h>

int main(void) {
    LiftingScenario *h = NULL;
    if (lifting_scenario_new(LIFTING_PULSE_KIND_SECH, 1, 1.0, 0.0, -20.0, 20.0, &h) != LIFTING_STATUS_OK) return 1;
    LiftingOperator u;
    if (lifting_propagate(h, -20.0, 20.0, 1e-11, &u) != LIFTING_STATUS_OK) return 2;
    lifting_scenario_free(h);
    double p = u.u12.re * u.u12.re + u.u12.im * u.u12.im;
    LiftingAmplitudes rz;
    lifting_rosen_zener(1.0, 0.0, &rz);
    double q = rz.plus.re * rz.plus.re + rz.plus.im * rz.plus.im;
    if (fabs(p - q) > 1e-8) return 3;
    LiftingComplex g;
    if (lifting_log_gamma((LiftingComplex){0.0, 0.0}, &g) != LIFTING_STATUS_POLE) return 4;
    if (lifting_last_error() == NULL) return 5;
    printf("%.12f\n", p);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<test binary>
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("liblifting_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = std::env::temp_dir().join(format!("lifting-ffi-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let exe = dir.join("main");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("C compiler");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    // resonant sech pi pulse: complete transfer
    let p: f64 = String::from_utf8_lossy(&run.stdout).trim().parse().unwrap();
    assert!((p - 1.0).abs() < 1e-8, "{p}");
}
