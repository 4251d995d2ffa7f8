use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use qcliff::dirac::CliffordPolynomial;
use qcliff::witt::{primitive_idempotent, spinor_monomial};
use qcliff::Multivector;
use qcliff_ffi::*;

fn last_error() -> String {
    let p = qc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn take_string(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    qc_string_free(s);
    out
}

unsafe fn mv_handle(m: &Multivector) -> *mut QcMultivector {
    let json = CString::new(serde_json::to_string(m).unwrap()).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(qc_multivector_from_json(json.as_ptr(), &mut h), QcStatus::Ok);
    h
}

unsafe fn mv_value(h: *const QcMultivector) -> Multivector {
    let mut s = ptr::null_mut();
    assert_eq!(qc_multivector_to_json(h, &mut s), QcStatus::Ok);
    serde_json::from_str(&take_string(s)).unwrap()
}

unsafe fn poly_handle(f: &CliffordPolynomial) -> *mut QcPolynomial {
    let json = CString::new(serde_json::to_string(f).unwrap()).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(qc_polynomial_from_json(json.as_ptr(), &mut h), QcStatus::Ok);
    h
}

fn binom(n: usize, k: isize) -> usize {
    if k < 0 || k as usize > n {
        return 0;
    }
    (0..k as usize).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(qc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn multivector_roundtrip_and_product() {
    unsafe {
        let a = spinor_monomial(2, 0b01).unwrap();
        let b = spinor_monomial(2, 0b10).unwrap();
        let ha = mv_handle(&a);
        let hb = mv_handle(&b);
        assert_eq!(mv_value(ha), a);
        let mut hc = ptr::null_mut();
        assert_eq!(qc_multivector_product(ha, hb, &mut hc), QcStatus::Ok);
        assert_eq!(mv_value(hc), a.product(&b).unwrap());
        let mut eq = true;
        assert_eq!(qc_multivector_equal(ha, hb, &mut eq), QcStatus::Ok);
        assert!(!eq);
        assert_eq!(qc_multivector_equal(ha, ha, &mut eq), QcStatus::Ok);
        assert!(eq);
        for h in [ha, hb, hc] {
            qc_multivector_free(h);
        }
    }
}

#[test]
fn spinor_monomial_matches_library() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(qc_spinor_monomial(2, 0b11, &mut h), QcStatus::Ok);
        assert_eq!(mv_value(h), spinor_monomial(2, 0b11).unwrap());
        qc_multivector_free(h);
    }
}

#[test]
fn projectors_split_a_spinor() {
    let p = 2;
    unsafe {
        let x = &spinor_monomial(p, 0b0011).unwrap() + &spinor_monomial(p, 0b1100).unwrap();
        let hx = mv_handle(&x);
        let mut total = Multivector::zero(4 * p);
        for s in [0, 2] {
            let mut hy = ptr::null_mut();
            assert_eq!(qc_project(p, 2, s, hx, &mut hy), QcStatus::Ok);
            let y = mv_value(hy);
            let mut again = ptr::null_mut();
            assert_eq!(qc_project(p, 2, s, hy, &mut again), QcStatus::Ok);
            assert_eq!(mv_value(again), y);
            total = &total + &y;
            qc_multivector_free(hy);
            qc_multivector_free(again);
        }
        assert_eq!(total, x);
        qc_multivector_free(hx);
    }
}

#[test]
fn cell_dims_follow_binomials() {
    for p in 1..=3usize {
        for r in 0..=2 * p {
            for s in (r % 2..=r.min(2 * p - r)).step_by(2) {
                let mut d = 0usize;
                assert_eq!(unsafe { qc_cell_dim(p, r, s, &mut d) }, QcStatus::Ok);
                assert_eq!(d, binom(2 * p, s as isize) - binom(2 * p, s as isize - 2), "p={p} r={r} s={s}");
            }
        }
    }
}

#[test]
fn weyl_dims() {
    let mut d = 0usize;
    assert_eq!(unsafe { qc_weyl_dim(2, 2, &mut d) }, QcStatus::Ok);
    assert_eq!(d, 5);
    assert_eq!(unsafe { qc_weyl_dim(3, 3, &mut d) }, QcStatus::Ok);
    assert_eq!(d, 14);
}

#[test]
fn monogenic_verdicts_cross_the_boundary() {
    let p = 2;
    unsafe {
        let f = CliffordPolynomial::zbar(p, 1).unwrap().right_mul(&primitive_idempotent(p).unwrap()).unwrap();
        let hf = poly_handle(&f);

        let mut image = ptr::null_mut();
        assert_eq!(qc_apply_dirac(QcDiracKind::DzDag, hf, &mut image), QcStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(qc_polynomial_to_json(image, &mut s), QcStatus::Ok);
        let g: CliffordPolynomial = serde_json::from_str(&take_string(s)).unwrap();
        assert!(g.is_zero());
        qc_polynomial_free(image);

        let mut mono = false;
        let mut kind = QcDiracKind::D;
        let mut witness = ptr::null_mut();
        assert_eq!(qc_is_monogenic(hf, QcSystem::Hermitian, &mut mono, &mut kind, &mut witness), QcStatus::Ok);
        assert!(mono);
        assert!(witness.is_null());

        assert_eq!(qc_is_monogenic(hf, QcSystem::Quaternionic, &mut mono, &mut kind, &mut witness), QcStatus::Ok);
        assert!(!mono);
        assert!(!witness.is_null());
        assert!(matches!(kind, QcDiracKind::DJ | QcDiracKind::DK));
        qc_polynomial_free(witness);

        assert_eq!(qc_is_monogenic(hf, QcSystem::Euclidean, &mut mono, ptr::null_mut(), ptr::null_mut()), QcStatus::Ok);
        assert!(mono);
        qc_polynomial_free(hf);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(qc_multivector_from_json(ptr::null(), &mut h), QcStatus::NullPointer);
        assert!(last_error().contains("null"));

        let bad = CString::new("{\"dim\":").unwrap();
        assert_eq!(qc_multivector_from_json(bad.as_ptr(), &mut h), QcStatus::Parse);
        assert!(!last_error().is_empty());

        let mut d = 0usize;
        let st = qc_cell_dim(2, 2, 1, &mut d);
        assert_ne!(st, QcStatus::Ok);
        assert!(!last_error().is_empty());

        assert_eq!(qc_weyl_dim(2, 1, ptr::null_mut()), QcStatus::NullPointer);

        let a = mv_handle(&spinor_monomial(1, 0).unwrap());
        let b = mv_handle(&spinor_monomial(2, 0).unwrap());
        let mut c = ptr::null_mut();
        assert_eq!(qc_multivector_product(a, b, &mut c), QcStatus::DimensionMismatch);
        assert!(c.is_null());
        qc_multivector_free(a);
        qc_multivector_free(b);

        let mut w = ptr::null_mut();
        assert_eq!(qc_project(2, 2, 0, ptr::null(), &mut w), QcStatus::NullPointer);
    }
}

#[test]
fn suite_and_tables() {
    unsafe {
        let filter = CString::new("cells.*").unwrap();
        let mut ok = false;
        let mut report = ptr::null_mut();
        assert_eq!(qc_run_suite(1, false, 7, filter.as_ptr(), &mut ok, &mut report), QcStatus::Ok);
        assert!(ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        let checks = v["checks"].as_array().unwrap();
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c["id"].as_str().unwrap().starts_with("cells.")));

        assert_eq!(qc_run_suite(4, false, 7, ptr::null(), &mut ok, ptr::null_mut()), QcStatus::InvalidArgument);

        let mut s = ptr::null_mut();
        assert_eq!(qc_emit_table(2, QcTable::Dims, QcFormat::Text, &mut s), QcStatus::Ok);
        let text = take_string(s);
        assert!(text.contains("𝕊²: 6 = 1 + 5"), "{text}");

        assert_eq!(qc_emit_table(1, QcTable::Cells, QcFormat::Json, &mut s), QcStatus::Ok);
        let _: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    }
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libqcliff_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let bin = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("qcliff_smoke");
    let status = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("cell 2 2 5"), "{stdout}");
    assert!(stdout.contains("error 3"), "{stdout}");
}
