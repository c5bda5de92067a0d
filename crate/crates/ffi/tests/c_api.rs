use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use mhfem_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(mhfem_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn solve_example1_through_handles() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(mhfem_problem_example1(&mut p), MhfemStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(mhfem_solve(p, 9, &mut r), MhfemStatus::Ok);
        assert_eq!(mhfem_report_num_modes(r), 2);

        let direct = mhfem::solve_level(
            &mhfem::fourier::ProblemSpec::example1(),
            9,
            &mhfem::SolveOptions::default(),
        )
        .unwrap();
        let mut row = MhfemModeRow::default();
        assert_eq!(mhfem_report_mode(r, 1, &mut row), MhfemStatus::Ok);
        assert_eq!(row.k, 1);
        assert_eq!(row.majorant_semi, direct.modes[1].majorant_semi);
        assert_eq!(row.eff_index, direct.modes[1].eff_index.unwrap());
        assert!(row.majorant_semi >= row.exact_semi);

        let mut g = MhfemGlobalRow::default();
        assert_eq!(mhfem_report_global(r, &mut g), MhfemStatus::Ok);
        assert_eq!((g.level, g.dofs), (9, 64));
        assert_eq!(g.majorant_semi, direct.global.majorant_semi);

        assert_eq!(
            mhfem_report_mode(r, 2, &mut row),
            MhfemStatus::InvalidArgument
        );
        assert!(last_error().contains("out of range"));

        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("r.csv").to_str().unwrap()).unwrap();
        assert_eq!(mhfem_report_write_csv(r, path.as_ptr()), MhfemStatus::Ok);
        assert!(last_error().is_empty());
        let text = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
        assert_eq!(text, mhfem::report::render_csv(&[direct]));

        mhfem_report_free(r);
        mhfem_problem_free(p);
    }
}

#[test]
fn error_codes() {
    unsafe {
        assert_eq!(
            mhfem_problem_example1(ptr::null_mut()),
            MhfemStatus::NullPointer
        );
        let mut r = ptr::null_mut();
        assert_eq!(
            mhfem_solve(ptr::null(), 9, &mut r),
            MhfemStatus::NullPointer
        );
        assert!(last_error().contains("problem"));

        let mut p = ptr::null_mut();
        let bad = CString::new("omega = 1\ntruncation = 1\nnu = -1\n").unwrap();
        assert_eq!(
            mhfem_problem_from_config(bad.as_ptr(), &mut p),
            MhfemStatus::Config
        );
        assert!(p.is_null());
        assert!(last_error().contains("nu"));

        let cfg = CString::new("omega = 1\ntruncation = 1\nexact.0.space = bubble\nexact.0.time = sin(1)\nsource = derive\nmax_iter = 1\n").unwrap();
        assert_eq!(
            mhfem_problem_from_config(cfg.as_ptr(), &mut p),
            MhfemStatus::Ok
        );
        assert_eq!(
            mhfem_problem_set_tolerance(p, 0.0),
            MhfemStatus::InvalidArgument
        );
        assert_eq!(mhfem_solve(p, 9, &mut r), MhfemStatus::Solver);
        assert!(r.is_null());
        assert_eq!(mhfem_solve(p, 0, &mut r), MhfemStatus::InvalidArgument);
        mhfem_problem_free(p);

        mhfem_problem_free(ptr::null_mut());
        mhfem_report_free(ptr::null_mut());
        assert_eq!(mhfem_report_num_modes(ptr::null()), 0);
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "mhfem.h"

int main(void) {
    MhfemProblem *p = NULL;
    MhfemReport *r = NULL;
    MhfemGlobalRow g;
    if (mhfem_problem_example2(&p) != MHFEM_STATUS_OK) return 10;
    if (mhfem_solve(p, 3, &r) != MHFEM_STATUS_OK) return 11;
    if (mhfem_report_num_modes(r) != 9) return 12;
    if (mhfem_report_global(r, &g) != MHFEM_STATUS_OK) return 13;
    if (!(g.majorant_semi >= g.exact_semi)) return 14;
    if (mhfem_solve(NULL, 3, &r) != MHFEM_STATUS_NULL_POINTER) return 15;
    printf("%s\n", mhfem_last_error_message());
    mhfem_report_free(r);
    mhfem_problem_free(p);
    return 0;
}
"#;

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test exe>
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libmhfem_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler runs");
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&run.stdout).contains("problem"));
}
