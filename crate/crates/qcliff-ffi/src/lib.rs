//! C ABI over `qcliff`.
//!
//! Every function returns a [`QcStatus`]; on failure the message is available from
//! [`qc_last_error`] on the same thread. Objects cross the boundary as opaque handles or
//! JSON strings. Strings returned by the library are freed with [`qc_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qcliff::cells::{cell_basis, projector, CellLabel};
use qcliff::dirac::{self, CliffordPolynomial, DiracKind, MonogenicSystem};
use qcliff::verify::{self, Format, SuiteOptions, TableKind};
use qcliff::{lie, witt, Error, Multivector};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    DimensionMismatch = 4,
    IndexOutOfRange = 5,
    NotInSpan = 6,
    NotSpin = 7,
    Arithmetic = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcDiracKind {
    D = 0,
    DI = 1,
    DJ = 2,
    DK = 3,
    Dz = 4,
    DzDag = 5,
    DzJ = 6,
    DzJDag = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcSystem {
    Euclidean = 0,
    Hermitian = 1,
    Quaternionic = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcTable {
    Cells = 0,
    Dims = 1,
    LiealgLedger = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcFormat {
    Text = 0,
    Json = 1,
    Latex = 2,
}

/// Opaque multivector in `C_{4p}`.
pub struct QcMultivector(Multivector);

/// Opaque Clifford-valued polynomial.
pub struct QcPolynomial(CliffordPolynomial);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QcStatus {
    match e {
        Error::DivisionByZero | Error::NonScalarAction(_) | Error::NotEigenvector(_) => QcStatus::Arithmetic,
        Error::DimensionMismatch { .. } => QcStatus::DimensionMismatch,
        Error::IndexOutOfRange(_) => QcStatus::IndexOutOfRange,
        Error::NotInSpan(_) => QcStatus::NotInSpan,
        Error::InvalidArgument(_) => QcStatus::InvalidArgument,
        Error::NotSpin(_) => QcStatus::NotSpin,
        Error::Parse(_) => QcStatus::Parse,
    }
}

struct Failure(QcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QcStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(QcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(QcStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(QcStatus::InvalidArgument, "string contains nul".into()))?;
    write_out(out, c.into_raw())
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn parse_json<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, Failure> {
    serde_json::from_str(s).map_err(|e| Failure(QcStatus::Parse, e.to_string()))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn kind(k: QcDiracKind) -> DiracKind {
    match k {
        QcDiracKind::D => DiracKind::D,
        QcDiracKind::DI => DiracKind::DI,
        QcDiracKind::DJ => DiracKind::DJ,
        QcDiracKind::DK => DiracKind::DK,
        QcDiracKind::Dz => DiracKind::Dz,
        QcDiracKind::DzDag => DiracKind::DzDag,
        QcDiracKind::DzJ => DiracKind::DzJ,
        QcDiracKind::DzJDag => DiracKind::DzJDag,
    }
}

fn system(s: QcSystem) -> MonogenicSystem {
    match s {
        QcSystem::Euclidean => MonogenicSystem::Euclidean,
        QcSystem::Hermitian => MonogenicSystem::Hermitian,
        QcSystem::Quaternionic => MonogenicSystem::Quaternionic,
    }
}

/// Message of the last failed call on this thread, or NULL. Owned by the library and
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub unsafe extern "C" fn qc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub unsafe extern "C" fn qc_multivector_from_json(json: *const c_char, out: *mut *mut QcMultivector) -> QcStatus {
    guard(|| {
        let m: Multivector = parse_json(read_str(json, "json")?)?;
        write_out(out, Box::into_raw(Box::new(QcMultivector(m))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_multivector_to_json(m: *const QcMultivector, out: *mut *mut c_char) -> QcStatus {
    guard(|| write_string(out, to_json(&deref(m, "multivector")?.0)))
}

#[no_mangle]
pub unsafe extern "C" fn qc_multivector_free(m: *mut QcMultivector) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Clifford product `a b`.
#[no_mangle]
pub unsafe extern "C" fn qc_multivector_product(
    a: *const QcMultivector,
    b: *const QcMultivector,
    out: *mut *mut QcMultivector,
) -> QcStatus {
    guard(|| {
        let c = deref(a, "a")?.0.product(&deref(b, "b")?.0)?;
        write_out(out, Box::into_raw(Box::new(QcMultivector(c))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_multivector_equal(
    a: *const QcMultivector,
    b: *const QcMultivector,
    out: *mut bool,
) -> QcStatus {
    guard(|| write_out(out, deref(a, "a")?.0 == deref(b, "b")?.0))
}

/// `f†_{a1} ... f†_{ar} I` for the subset with bit `k-1` set for each index `k`.
#[no_mangle]
pub unsafe extern "C" fn qc_spinor_monomial(p: usize, set: u32, out: *mut *mut QcMultivector) -> QcStatus {
    guard(|| write_out(out, Box::into_raw(Box::new(QcMultivector(witt::spinor_monomial(p, set)?)))))
}

/// Projection of a degree-`r` spinor onto the cell with index `s`.
#[no_mangle]
pub unsafe extern "C" fn qc_project(
    p: usize,
    r: usize,
    s: usize,
    x: *const QcMultivector,
    out: *mut *mut QcMultivector,
) -> QcStatus {
    guard(|| {
        let y = projector(p, r, s)?.apply(&deref(x, "x")?.0)?;
        write_out(out, Box::into_raw(Box::new(QcMultivector(y))))
    })
}

/// Dimension of the cell in degree `r` with index `s`, from an exact basis.
#[no_mangle]
pub unsafe extern "C" fn qc_cell_dim(p: usize, r: usize, s: usize, out: *mut usize) -> QcStatus {
    guard(|| write_out(out, cell_basis(p, CellLabel::new(r, s))?.basis.len()))
}

#[no_mangle]
pub unsafe extern "C" fn qc_weyl_dim(p: usize, r: usize, out: *mut usize) -> QcStatus {
    guard(|| write_out(out, lie::weyl_dim_sp(p, r)?))
}

#[no_mangle]
pub unsafe extern "C" fn qc_polynomial_from_json(json: *const c_char, out: *mut *mut QcPolynomial) -> QcStatus {
    guard(|| {
        let f: CliffordPolynomial = parse_json(read_str(json, "json")?)?;
        write_out(out, Box::into_raw(Box::new(QcPolynomial(f))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_polynomial_to_json(f: *const QcPolynomial, out: *mut *mut c_char) -> QcStatus {
    guard(|| write_string(out, to_json(&deref(f, "polynomial")?.0)))
}

#[no_mangle]
pub unsafe extern "C" fn qc_polynomial_free(f: *mut QcPolynomial) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

#[no_mangle]
pub unsafe extern "C" fn qc_apply_dirac(
    op: QcDiracKind,
    f: *const QcPolynomial,
    out: *mut *mut QcPolynomial,
) -> QcStatus {
    guard(|| {
        let g = dirac::apply_dirac(kind(op), &deref(f, "polynomial")?.0)?;
        write_out(out, Box::into_raw(Box::new(QcPolynomial(g))))
    })
}

/// Monogenicity verdict. When `witness` is non-NULL it receives the first nonzero image
/// (or NULL when monogenic) and `witness_kind` the operator that produced it.
#[no_mangle]
pub unsafe extern "C" fn qc_is_monogenic(
    f: *const QcPolynomial,
    sys: QcSystem,
    monogenic: *mut bool,
    witness_kind: *mut QcDiracKind,
    witness: *mut *mut QcPolynomial,
) -> QcStatus {
    guard(|| {
        let v = dirac::is_monogenic(&deref(f, "polynomial")?.0, system(sys))?;
        write_out(monogenic, v.monogenic)?;
        if !witness.is_null() {
            let w = match v.witness {
                Some((k, g)) => {
                    if !witness_kind.is_null() {
                        let tag = [
                            QcDiracKind::D,
                            QcDiracKind::DI,
                            QcDiracKind::DJ,
                            QcDiracKind::DK,
                            QcDiracKind::Dz,
                            QcDiracKind::DzDag,
                            QcDiracKind::DzJ,
                            QcDiracKind::DzJDag,
                        ]
                        .into_iter()
                        .find(|&t| kind(t) == k)
                        .expect("every kind has a tag");
                        witness_kind.write(tag);
                    }
                    Box::into_raw(Box::new(QcPolynomial(g)))
                }
                None => ptr::null_mut(),
            };
            witness.write(w);
        }
        Ok(())
    })
}

/// Runs the verification suite; `filter` may be NULL. The report is written as JSON.
#[no_mangle]
pub unsafe extern "C" fn qc_run_suite(
    p_max: usize,
    deep: bool,
    seed: u64,
    filter: *const c_char,
    all_passed: *mut bool,
    report_json: *mut *mut c_char,
) -> QcStatus {
    guard(|| {
        let filter = if filter.is_null() { None } else { Some(read_str(filter, "filter")?.to_string()) };
        let report = verify::run_suite(&SuiteOptions { p_max, deep, seed, filter })?;
        write_out(all_passed, report.all_passed())?;
        if !report_json.is_null() {
            write_string(report_json, to_json(&report))?;
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_emit_table(p: usize, what: QcTable, format: QcFormat, out: *mut *mut c_char) -> QcStatus {
    guard(|| {
        let what = match what {
            QcTable::Cells => TableKind::Cells,
            QcTable::Dims => TableKind::Dims,
            QcTable::LiealgLedger => TableKind::LiealgLedger,
        };
        let format = match format {
            QcFormat::Text => Format::Text,
            QcFormat::Json => Format::Json,
            QcFormat::Latex => Format::Latex,
        };
        write_string(out, verify::emit_table(p, what, format)?)
    })
}
