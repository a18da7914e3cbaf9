//! Compiles and runs a small C program against the built shared library,
//! exercising the header end to end. Skipped when no C compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <stdlib.h>
#include <math.h>
#include "qig.h"

int main(void) {
    QigPetz *f = NULL;
    double v = 0.0;
    if (qig_petz_new("tsallis:0.5", &f) != QIG_OK) return 1;
    if (qig_petz_eval(f, 4.0, &v) != QIG_OK) return 2;
    if (fabs(v - 2.25) > 1e-13) return 3;

    QigMetric *g = NULL;
    double g_w = 0.0, g_perp = 0.0;
    if (qig_metric_new("vn", &g) != QIG_OK) return 4;
    if (qig_metric_coeffs(g, 0.5, &g_w, &g_perp) != QIG_OK) return 5;
    if (fabs(g_w - 1.0 / 0.75) > 1e-13) return 6;

    char *json = NULL;
    if (qig_loewner_scan_json(f, -10.0, 10.0, 0.0, 2.0, 60, 30, 1e-10, &json) != QIG_OK)
        return 7;
    if (!json) return 8;
    qig_string_free(json);

    /* an invalid spec must fail and leave a message */
    QigPetz *bad = NULL;
    if (qig_petz_new("tsallis:9", &bad) == QIG_OK) return 9;
    char msg[256];
    if (qig_last_error(msg, sizeof msg) == 0) return 10;

    qig_metric_free(g);
    qig_petz_free(f);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // integration tests run from the crate root; artifacts live two up
    let mut dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    dir.pop();
    dir.pop();
    dir.join("target").join("debug")
}

#[test]
fn c_program_links_and_runs() {
    let cc = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok());
    let Some(cc) = cc else {
        eprintln!("no C compiler on PATH; skipping the C link test");
        return;
    };

    let lib_dir = target_dir();
    assert!(
        lib_dir.join("libqig.so").exists() || lib_dir.join("libqig.dylib").exists(),
        "shared library not built at {}",
        lib_dir.display()
    );
    let include = format!("{}/include", env!("CARGO_MANIFEST_DIR"));
    let work = std::env::temp_dir().join("qig_c_smoke");
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("smoke.c");
    let bin = work.join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();

    let compile = Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lqig")
        .arg("-lm")
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .arg("-o")
        .arg(&bin)
        .output()
        .expect("compiler invocation");
    assert!(
        compile.status.success(),
        "compile failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&bin).output().expect("smoke binary runs");
    assert!(
        run.status.success(),
        "smoke binary exited with {:?}",
        run.status.code()
    );
}
