use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use echogate_ffi::*;

fn defaults() -> EgGateParams {
    let mut p = unsafe { std::mem::zeroed() };
    assert_eq!(unsafe { eg_gate_params_default(&mut p) }, EgStatus::Ok);
    p
}

fn last_error() -> String {
    let p = eg_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn derive_through_c_abi() {
    let p = defaults();
    assert_eq!(p.spacing_um, 8.0);
    let mut d = EgDerived::default();
    assert_eq!(unsafe { eg_derive(&p, &mut d) }, EgStatus::Ok);
    assert!((d.v0_mhz - 214.4).abs() < 0.05);
    assert!((d.t_wait_us * 1e3 - 5.12).abs() < 1e-9);
    assert!((d.eps1 - 2.3136549697e-3).abs() < 1e-12);
}

#[test]
fn invalid_params_report_field() {
    let mut p = defaults();
    p.eta = -2.0;
    let mut d = EgDerived::default();
    assert_eq!(unsafe { eg_derive(&p, &mut d) }, EgStatus::InvalidArgument);
    assert!(last_error().contains("eta"));
    let mut gate = ptr::null_mut();
    assert_eq!(
        unsafe { eg_gate_new(&p, EgProtocol::SpinEcho, &mut gate) },
        EgStatus::InvalidArgument
    );
    assert!(gate.is_null());
}

#[test]
fn null_pointers_are_rejected() {
    let p = defaults();
    assert_eq!(unsafe { eg_derive(ptr::null(), ptr::null_mut()) }, EgStatus::NullPointer);
    assert_eq!(unsafe { eg_derive(&p, ptr::null_mut()) }, EgStatus::NullPointer);
    assert!(last_error().contains("out"));
    let mut r = EgGateResult::default();
    assert_eq!(unsafe { eg_gate_simulate(ptr::null(), 0.0, &mut r) }, EgStatus::NullPointer);
    unsafe {
        eg_gate_free(ptr::null_mut());
        eg_budget_free(ptr::null_mut());
    }
}

#[test]
fn gate_handle_lifecycle() {
    let p = defaults();
    let mut gate = ptr::null_mut();
    assert_eq!(unsafe { eg_gate_new(&p, EgProtocol::SpinEcho, &mut gate) }, EgStatus::Ok);
    let mut r = EgGateResult::default();
    assert_eq!(unsafe { eg_gate_simulate(gate, 0.0, &mut r) }, EgStatus::Ok);
    assert!(r.fidelity >= 1.0 - 2e-5);
    assert!(r.frobenius_distance <= 1e-2);
    // |11⟩ → +|11⟩
    assert!((r.re[15] - 1.0).abs() < 1e-10 && r.im[15].abs() < 1e-10);
    assert_eq!(unsafe { eg_gate_simulate(gate, -1.0, &mut r) }, EgStatus::Ok);
    unsafe { eg_gate_free(gate) };

    let mut trad = ptr::null_mut();
    assert_eq!(unsafe { eg_gate_new(&p, EgProtocol::Traditional, &mut trad) }, EgStatus::Ok);
    assert_eq!(unsafe { eg_gate_simulate(trad, 0.0, &mut r) }, EgStatus::Ok);
    assert!(r.channel_errors[0] > 1e-3);
    unsafe { eg_gate_free(trad) };
}

#[test]
fn budget_handle_is_deterministic() {
    let p = defaults();
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { eg_budget_new(&p, EgProtocol::SpinEcho, 50, 3, &mut b) }, EgStatus::Ok);
    let mut r1 = EgErrorReport::default();
    let mut r2 = EgErrorReport::default();
    assert_eq!(unsafe { eg_budget_evaluate(b, 20e-6, &mut r1) }, EgStatus::Ok);
    assert_eq!(unsafe { eg_budget_evaluate(b, 20e-6, &mut r2) }, EgStatus::Ok);
    assert_eq!(r1, r2);
    assert!(r1.e_de > 5e-5 && r1.e_de < 1e-4);
    assert!(r1.harmonic_ok);
    assert_eq!(unsafe { eg_budget_evaluate(b, -1.0, &mut r1) }, EgStatus::InvalidArgument);
    unsafe { eg_budget_free(b) };
    let mut none = ptr::null_mut();
    assert_eq!(
        unsafe { eg_budget_new(&p, EgProtocol::SpinEcho, 0, 3, &mut none) },
        EgStatus::InvalidArgument
    );
}

#[test]
fn manybody_echo_returns() {
    let mut s = EgEchoSummary::default();
    assert_eq!(unsafe { eg_manybody_echo(EgRegime::Dressing, &mut s) }, EgStatus::Ok);
    assert!((s.final_time_us - 0.827).abs() < 1e-3);
    assert!((s.magnetization_final - s.magnetization_initial).abs() < 1e-3);
    assert!(s.residual < 1e-10);
}

#[test]
fn header_declares_api_and_compiles() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/echogate.h");
    let text = std::fs::read_to_string(&header).expect("generated header");
    for name in [
        "eg_last_error_message",
        "eg_gate_params_default",
        "eg_derive",
        "eg_gate_new",
        "eg_gate_free",
        "eg_gate_simulate",
        "eg_budget_new",
        "eg_budget_free",
        "eg_budget_evaluate",
        "eg_manybody_echo",
        "EG_STATUS_NULL_POINTER",
        "typedef struct EgGate EgGate;",
    ] {
        assert!(text.contains(name), "{name}");
    }
    // a C compiler is part of every supported toolchain
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = Command::new(cc)
        .args(["-std=c11", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(&header)
        .output()
        .expect("running the C compiler");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
