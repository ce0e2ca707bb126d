use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use topocryst_ffi::*;

fn builtin(name: &str) -> *mut TcBlock {
    let name = CString::new(name).unwrap();
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { tc_block_builtin(name.as_ptr(), &mut b) }, TcStatus::Ok);
    b
}

#[test]
fn block_queries() {
    let b = builtin("diamond");
    unsafe {
        assert_eq!(tc_block_dim(b), 3);
        assert_eq!(tc_block_vertex_count(b), 2);
        assert_eq!(tc_block_betti(b), 3);
        let mut harmonic = false;
        assert_eq!(tc_block_is_harmonic(b, &mut harmonic), TcStatus::Ok);
        assert!(harmonic);
        let mut e = 0.0;
        assert_eq!(tc_block_energy(b, &mut e), TcStatus::Ok);
        assert_eq!(e, 12.0);
        let mut basis = [0.0; 9];
        assert_eq!(tc_block_period_basis(b, basis.as_mut_ptr(), 9), TcStatus::Ok);
        assert!(basis.iter().all(|x| x.abs() == 2.0 || *x == 0.0));
        assert_eq!(tc_block_period_basis(b, basis.as_mut_ptr(), 4), TcStatus::InvalidArgument);
        tc_block_free(b);
    }
}

#[test]
fn qg_roundtrip_through_c_strings() {
    let b = builtin("laves");
    unsafe {
        let mut text = ptr::null_mut();
        assert_eq!(tc_block_to_qg(b, &mut text), TcStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(tc_block_parse(text, &mut back), TcStatus::Ok);
        let mut girth = 0;
        assert_eq!(tc_rings_girth(back, 20, &mut girth), TcStatus::Ok);
        assert_eq!(girth, 10);
        tc_string_free(text);
        tc_block_free(back);
        tc_block_free(b);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut b = ptr::null_mut();
        let bad = CString::new("vertex A\nedge e1 A\n").unwrap();
        assert_eq!(tc_block_parse(bad.as_ptr(), &mut b), TcStatus::Parse);
        assert!(b.is_null());
        let msg = CStr::from_ptr(tc_last_error()).to_str().unwrap();
        assert!(msg.contains("line 2"), "{msg}");
        assert_eq!(tc_block_is_harmonic(ptr::null(), &mut false), TcStatus::NullPointer);
        assert_eq!(tc_block_dim(ptr::null()), 0);
        let laves = builtin("laves");
        assert!(tc_last_error().is_null());
        let mut n = 0;
        assert_eq!(tc_rings_count(laves, 9, 10, &mut n), TcStatus::InvalidArgument);
        tc_block_free(laves);
    }
}

#[test]
fn lattice_summary() {
    let mut s = TcLatticeSummary { alpha_sq: 0.0, k_count: 0, group_order: 0, is_os: false, class: TcLatticeClass::NotOs };
    let bcc = [-1.0, 1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0];
    assert_eq!(unsafe { tc_lattice_analyze(bcc.as_ptr(), 3, &mut s) }, TcStatus::Ok);
    assert_eq!((s.alpha_sq, s.k_count, s.group_order, s.is_os, s.class), (3.0, 8, 48, true, TcLatticeClass::Bcc));
    let hex = [1.0, 0.0, 0.5, 3f64.sqrt() / 2.0];
    assert_eq!(unsafe { tc_lattice_analyze(hex.as_ptr(), 2, &mut s) }, TcStatus::Ok);
    assert_eq!(s.class, TcLatticeClass::Triangular);
    assert_eq!(unsafe { tc_lattice_analyze(hex.as_ptr(), 0, &mut s) }, TcStatus::InvalidArgument);
}

#[test]
fn nets_and_symmetry() {
    let b = builtin("cubic");
    unsafe {
        let mut net = ptr::null_mut();
        assert_eq!(tc_net_build(b, 1, &mut net), TcStatus::Ok);
        assert_eq!(tc_net_vertex_count(net), 27);
        assert_eq!(tc_net_bond_count(net), 54);
        let mut json = ptr::null_mut();
        assert_eq!(tc_net_export(net, TcFormat::Json, &mut json), TcStatus::Ok);
        assert!(CStr::from_ptr(json).to_str().unwrap().contains("schema_version"));
        tc_string_free(json);
        tc_net_free(net);
        let mut sym = TcSymmetry { point_group_order: 0, proper: 0, improper: 0, strongly_isotropic: true, chiral: true };
        assert_eq!(tc_symmetry(b, &mut sym), TcStatus::Ok);
        assert_eq!(sym, TcSymmetry { point_group_order: 48, proper: 24, improper: 24, strongly_isotropic: false, chiral: false });
        tc_block_free(b);
    }
}

#[test]
fn standardize_honeycomb_graph() {
    let b = builtin("honeycomb");
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(tc_standardize(b, 1e-10, 100_000, 0, &mut out), TcStatus::Ok);
        let mut harmonic = false;
        assert_eq!(tc_block_is_harmonic(out, &mut harmonic), TcStatus::Ok);
        assert!(harmonic);
        assert_eq!(tc_block_dim(out), 2);
        tc_block_free(out);
        assert_eq!(tc_standardize(b, 1e-10, 0, 0, &mut out), TcStatus::NotConverged);
        tc_block_free(b);
    }
}

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

/// Directory holding `libtopocryst_ffi.a` (the test binary lives in `deps/`).
fn artifact_dir() -> PathBuf {
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_is_valid_c() {
    let header = crate_dir().join("include/topocryst.h");
    let status = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
        .expect("a C compiler named cc");
    assert!(status.success());
}

#[test]
fn c_program_links_and_runs() {
    let lib = artifact_dir().join("libtopocryst_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let dir = tempfile_dir();
    let exe = dir.join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir().join("tests/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler named cc");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("topocryst-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
