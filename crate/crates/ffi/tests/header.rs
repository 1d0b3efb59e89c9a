use std::path::{Path, PathBuf};
use std::process::Command;

fn root() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn exported() -> Vec<String> {
    let src = std::fs::read_to_string(root().join("src/lib.rs")).unwrap();
    src.lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap().to_string())
        .collect()
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(root().join("include/thetacat.h")).unwrap();
    let names = exported();
    assert!(names.len() >= 10, "{names:?}");
    for name in names {
        assert!(header.contains(&format!("{name}(")), "{name} missing from the header");
    }
    for code in ["TC_STATUS_OK = 0", "TC_STATUS_INVALID = 3", "TC_STATUS_INTERNAL = 6"] {
        assert!(header.contains(code), "{code}");
    }
}

/// Compiles and runs the C smoke program against the static library when a C
/// compiler and the archive are both present.
#[test]
fn c_smoke_program() {
    // the archive lands next to the test binary (deps/) or one level up
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let lib = [deps, deps.parent().unwrap()]
        .iter()
        .map(|d| d.join("libthetacat_ffi.a"))
        .find(|p| p.is_file())
        .unwrap_or_default();
    if !lib.is_file() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or no {}", lib.display());
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("thetacat-smoke");
    let status = Command::new("cc")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(root().join("include"))
        .arg(root().join("c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("classes=3"));
}
