use std::ffi::{CStr, CString};
use std::ptr;

use gfldpc_ffi::*;

const REPETITION: &str = "2 1\n1 2\n1 1\n2\n1\n1\n1 2\n";
const SMALL: &str = "6 3\n2 3\n1 1 2 2 1 1\n3 2 3\n1\n1\n1 2\n2 3\n3\n3\n1 2 3\n3 4\n4 5 6\n";

fn load(text: &str) -> *mut GfCode {
    let c = CString::new(text).unwrap();
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { gfldpc_code_from_alist(c.as_ptr(), &mut code) }, GfStatus::Ok);
    assert!(!code.is_null());
    code
}

fn last_error() -> String {
    let p = gfldpc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn code_handle_lifecycle() {
    let code = load(SMALL);
    unsafe {
        assert_eq!(gfldpc_code_n(code), 6);
        assert_eq!(gfldpc_code_m(code), 3);
        gfldpc_code_free(code);
        gfldpc_code_free(ptr::null_mut());
        assert_eq!(gfldpc_code_n(ptr::null()), 0);
    }
}

#[test]
fn parse_errors_are_reported() {
    let bad = CString::new("2 1\n1 2\n1 1\n2\n1\n1\n1 7\n").unwrap();
    let mut code = ptr::null_mut();
    let st = unsafe { gfldpc_code_from_alist(bad.as_ptr(), &mut code) };
    assert_eq!(st, GfStatus::Parse);
    assert!(code.is_null());
    assert!(last_error().contains("line 7"), "{}", last_error());

    let st = unsafe { gfldpc_code_from_alist(ptr::null(), &mut code) };
    assert_eq!(st, GfStatus::NullPointer);
}

#[test]
fn gf_decode_repetition_example() {
    let code = load(REPETITION);
    let mut params = gfldpc_flow_params_default();
    params.alpha = 1.0;
    params.beta = 1.0;
    params.steps = 10_000;
    let y = [0.6027, 0.8244];
    let mut bits = [9u8; 2];
    let mut state = [0.0; 2];
    let mut info = GfDecodeInfo::default();
    let st = unsafe {
        gfldpc_gf_decode(code, &params, y.as_ptr(), 2, bits.as_mut_ptr(), state.as_mut_ptr(), &mut info)
    };
    assert_eq!(st, GfStatus::Ok);
    assert_eq!(bits, [0, 0]);
    assert!((state[0] - 0.9642).abs() < 1e-2 && (state[1] - 0.9901).abs() < 1e-2);
    assert!(info.syndrome_ok && !info.diverged);
    assert_eq!(info.iterations, 10_000);

    let st = unsafe {
        gfldpc_gf_decode(code, &params, y.as_ptr(), 3, bits.as_mut_ptr(), ptr::null_mut(), ptr::null_mut())
    };
    assert_eq!(st, GfStatus::LengthMismatch);

    params.steps = 0;
    let st = unsafe {
        gfldpc_gf_decode(code, &params, y.as_ptr(), 2, ptr::null_mut(), ptr::null_mut(), ptr::null_mut())
    };
    assert_eq!(st, GfStatus::InvalidArgument);
    unsafe { gfldpc_code_free(code) };
}

#[test]
fn baselines_and_energy() {
    let code = load(SMALL);
    let s = [-1.0, -1.0, 1.0, 1.0, 1.0, 1.0];
    let mut bits = [0u8; 6];
    let mut info = GfDecodeInfo::default();
    unsafe {
        assert_eq!(
            gfldpc_bp_decode(code, s.as_ptr(), 6, 0.8, 100, bits.as_mut_ptr(), ptr::null_mut(), &mut info),
            GfStatus::Ok
        );
        assert_eq!(bits, [1, 1, 0, 0, 0, 0]);
        assert!(info.syndrome_ok);
        bits = [0; 6];
        assert_eq!(
            gfldpc_gdbf_decode(code, s.as_ptr(), 6, 100, -0.6, bits.as_mut_ptr(), ptr::null_mut(), &mut info),
            GfStatus::Ok
        );
        assert_eq!(bits, [1, 1, 0, 0, 0, 0]);
        assert_eq!(
            gfldpc_bp_decode(code, s.as_ptr(), 6, 0.0, 100, bits.as_mut_ptr(), ptr::null_mut(), &mut info),
            GfStatus::InvalidArgument
        );

        let params = gfldpc_flow_params_default();
        let mut e = -1.0;
        assert_eq!(gfldpc_total_energy(code, &params, s.as_ptr(), s.as_ptr(), 6, &mut e), GfStatus::Ok);
        assert_eq!(e, 0.0);
        let bad = [f64::NAN, 1.0, 1.0, 1.0, 1.0, 1.0];
        assert_eq!(
            gfldpc_total_energy(code, &params, bad.as_ptr(), s.as_ptr(), 6, &mut e),
            GfStatus::NonFinite
        );
        gfldpc_code_free(code);
    }
}

#[test]
fn sigma_and_dot() {
    let mut sigma = 0.0;
    assert_eq!(unsafe { gfldpc_sigma_from_snr(0.0, 0.5, &mut sigma) }, GfStatus::Ok);
    assert!((sigma - 1.0).abs() < 1e-15);
    assert_eq!(unsafe { gfldpc_sigma_from_snr(0.0, 2.0, &mut sigma) }, GfStatus::InvalidArgument);

    let code = load(REPETITION);
    let mut dot = ptr::null_mut();
    unsafe {
        assert_eq!(gfldpc_circuit_dot(code, 1.0, 1.0, 0.01, &mut dot), GfStatus::Ok);
        let text = CStr::from_ptr(dot).to_str().unwrap().to_owned();
        gfldpc_string_free(dot);
        assert!(text.starts_with("digraph"));
        assert!(text.contains("INT_1 -> z_0;"));
        assert_eq!(gfldpc_circuit_dot(code, 1.0, 1.0, 0.0, &mut dot), GfStatus::InvalidArgument);
        gfldpc_code_free(code);
    }
}

#[test]
fn header_declares_every_export_and_compiles() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = std::fs::read_to_string(format!("{dir}/include/gfldpc.h")).unwrap();
    for f in [
        "gfldpc_last_error",
        "gfldpc_flow_params_default",
        "gfldpc_code_from_alist",
        "gfldpc_code_free",
        "gfldpc_code_n",
        "gfldpc_code_m",
        "gfldpc_sigma_from_snr",
        "gfldpc_total_energy",
        "gfldpc_gf_decode",
        "gfldpc_bp_decode",
        "gfldpc_gdbf_decode",
        "gfldpc_circuit_dot",
        "gfldpc_string_free",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    // Syntax-check the header with the system C compiler when there is one.
    if let Ok(out) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", &format!("{dir}/include/gfldpc.h")])
        .output()
    {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
