use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use cipc_ffi::*;

fn params(phi: f64) -> CipcSystemParams {
    CipcSystemParams {
        lambda_ab: 1.0,
        lambda_aw: 1.0,
        lambda_bw: 1.0,
        lambda_bb: 1.0,
        sigma2_b: 1.0,
        sigma2_w: 1.0,
        phi,
    }
}

fn config(scheme: CipcScheme) -> CipcSchemeConfig {
    CipcSchemeConfig { scheme, p_a_max: 1.0, q: 1.0, p_b_max: 1.0, rate: 0.5, epsilon: 0.1 }
}

/// Owns a model handle for the duration of a test.
struct Model(*mut CipcModel);

impl Model {
    fn new(p: CipcSystemParams, c: CipcSchemeConfig) -> Result<Self, CipcStatus> {
        let mut handle = ptr::null_mut();
        match unsafe { cipc_model_new(&p, &c, &mut handle) } {
            CipcStatus::Ok => Ok(Model(handle)),
            status => Err(status),
        }
    }
}

impl Drop for Model {
    fn drop(&mut self) {
        unsafe { cipc_model_free(self.0) }
    }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cipc_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn detection_values_through_the_abi() {
    let m = Model::new(params(0.0), config(CipcScheme::Conventional)).unwrap();
    let mut v = f64::NAN;
    unsafe {
        assert_eq!(cipc_false_alarm(m.0, 1.0, 1.5, &mut v), CipcStatus::Ok);
        assert!((v - 0.5).abs() < 1e-15);
        assert_eq!(cipc_miss_detection(m.0, 1.0, 2.0, &mut v), CipcStatus::Ok);
        assert!((v - (1.0 - std::f64::consts::LN_2)).abs() < 1e-12);
        assert_eq!(cipc_xi_star(m.0, 1.0, &mut v), CipcStatus::Ok);
        assert!((v - (1.0 - std::f64::consts::LN_2)).abs() < 1e-12);
        assert_eq!(cipc_xi_bar(m.0, 1.0, &mut v), CipcStatus::Ok);
        assert!((v - 0.2548040436139033).abs() < 1e-10);
    }
    assert_eq!(last_error(), "");
}

#[test]
fn truncated_model() {
    let m = Model::new(params(0.1), config(CipcScheme::Truncated)).unwrap();
    let mut v = f64::NAN;
    unsafe {
        assert_eq!(cipc_xi_star(m.0, 1.0, &mut v), CipcStatus::Ok);
        assert!((v - 0.536578007336895).abs() < 1e-12);
        let mut r = std::mem::zeroed::<CipcEctResult>();
        assert_eq!(cipc_optimize(m.0, true, &mut r), CipcStatus::Ok);
        assert!(r.decodable && r.ect > 0.0 && r.constraint_slack >= -1e-9);
        assert!(r.asymptotic_bound.is_nan());
        assert_eq!(cipc_ect(m.0, r.q_star, r.rate, &mut v), CipcStatus::Ok);
        assert!((v - r.ect).abs() < 1e-12);
    }
}

#[test]
fn conventional_optimum_and_bound() {
    let m = Model::new(params(0.1), config(CipcScheme::Conventional)).unwrap();
    let mut q = f64::NAN;
    let mut bound = f64::NAN;
    let mut xi = f64::NAN;
    unsafe {
        assert_eq!(cipc_solve_q_epsilon(m.0, &mut q), CipcStatus::Ok);
        assert_eq!(cipc_xi_bar(m.0, q, &mut xi), CipcStatus::Ok);
        assert!((xi - 0.8).abs() < 1e-8);
        assert_eq!(cipc_asymptotic_bound(m.0, &mut bound), CipcStatus::Ok);
        let mut r = std::mem::zeroed::<CipcEctResult>();
        assert_eq!(cipc_optimize(m.0, false, &mut r), CipcStatus::Ok);
        assert!((r.q_star - q).abs() <= 1e-12 * q);
        assert!(r.ect <= r.asymptotic_bound);
    }
}

#[test]
fn simulation_is_reproducible() {
    let m = Model::new(params(0.3), config(CipcScheme::Truncated)).unwrap();
    let mut a = CipcMcEstimate { mean: 0.0, std_error: 0.0, n: 0 };
    let mut b = a;
    let mut analytic = 0.0;
    unsafe {
        assert_eq!(cipc_simulate_detection(m.0, 1.0, 1.5, CipcHypothesis::H1, 7, 0, 200_000, &mut a), CipcStatus::Ok);
        assert_eq!(cipc_simulate_detection(m.0, 1.0, 1.5, CipcHypothesis::H1, 7, 0, 200_000, &mut b), CipcStatus::Ok);
        assert_eq!(cipc_miss_detection(m.0, 1.0, 1.5, &mut analytic), CipcStatus::Ok);
    }
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert_eq!(a.n, 200_000);
    assert!((a.mean - analytic).abs() <= 4.0 * a.std_error);

    let mut o = a;
    let mut delta = 0.0;
    unsafe {
        assert_eq!(cipc_simulate_outage(m.0, 7, 1, 200_000, &mut o), CipcStatus::Ok);
        assert_eq!(cipc_outage_probability(m.0, &mut delta), CipcStatus::Ok);
    }
    assert!((o.mean - delta).abs() <= 4.0 * o.std_error);
}

#[test]
fn errors_are_reported() {
    let mut bad = config(CipcScheme::Conventional);
    bad.rate = 5.0;
    assert_eq!(Model::new(params(0.1), bad).err(), Some(CipcStatus::InvalidParameter));
    assert!(last_error().contains("rate"));

    let mut bad_params = params(0.1);
    bad_params.phi = 2.0;
    assert_eq!(Model::new(bad_params, config(CipcScheme::Truncated)).err(), Some(CipcStatus::InvalidParameter));

    let mut v = 0.0;
    unsafe {
        assert_eq!(cipc_ei(0.0, &mut v), CipcStatus::Domain);
        assert_eq!(cipc_ei(800.0, &mut v), CipcStatus::Overflow);
        assert_eq!(cipc_ei(1.0, ptr::null_mut()), CipcStatus::NullPointer);
        assert_eq!(cipc_xi_star(ptr::null(), 1.0, &mut v), CipcStatus::NullPointer);
        assert_eq!(cipc_model_new(ptr::null(), ptr::null(), ptr::null_mut()), CipcStatus::NullPointer);
        cipc_model_free(ptr::null_mut());
    }
    assert!(!last_error().is_empty());
    unsafe {
        assert_eq!(cipc_ei(1.0, &mut v), CipcStatus::Ok);
    }
    assert_eq!(last_error(), "");
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/cipc.h")).unwrap();
    for name in [
        "cipc_model_new",
        "cipc_model_free",
        "cipc_last_error_message",
        "cipc_false_alarm",
        "cipc_miss_detection",
        "cipc_optimal_threshold",
        "cipc_xi_star",
        "cipc_xi_bar",
        "cipc_outage_probability",
        "cipc_ect",
        "cipc_solve_q_epsilon",
        "cipc_asymptotic_bound",
        "cipc_optimize",
        "cipc_simulate_detection",
        "cipc_simulate_outage",
        "cipc_ei",
        "typedef struct CipcModel CipcModel;",
        "CIPC_STATUS_EMPTY_FEASIBLE_SET = 8",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

/// Directory holding the library artifacts of this build.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = artifact_dir().join("libcipc_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "c smoke test passed\n");
}
