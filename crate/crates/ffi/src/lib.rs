//! C ABI for `nnvc`.
//!
//! Objects are opaque handles created by `nnvc_*_new`-style functions and
//! released with the matching `*_free`. Every fallible call returns an
//! [`NnvcStatus`]; on failure [`nnvc_last_error_message`] describes the
//! error for the calling thread. Output pointers are written only on
//! success. Coordinates are passed as flat row-major `double` arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nnvc::bounds::{bounds_report, lambert_wm1};
use nnvc::classifier::signed_min_margin;
use nnvc::cli::CertificateFile;
use nnvc::constructions::{
    odd_polygon_arrangement, odd_polygon_shatter, takacs_arrangement, takacs_shatter, Arrangement, ArrangementKind,
};
use nnvc::verification::{verify_shattering, ShatterCertificate};
use nnvc::{classify, Error, Label, LabeledPrototypeSet, Labeling, Point};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NnvcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    Numerical = 4,
    Construction = 5,
    Serialization = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Point set with its construction kind.
pub struct NnvcArrangement(Arrangement);

/// Labeled prototypes of one 1NN classifier.
pub struct NnvcPrototypeSet(LabeledPrototypeSet);

/// Shattering certificate: one witness per labeling.
pub struct NnvcCertificate {
    cert: ShatterCertificate,
    generator: String,
}

/// All bounds at one (d, m).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NnvcBounds {
    pub lower: u64,
    pub q: f64,
    pub upper_tight_real: f64,
    pub upper_tight: u64,
    pub upper_loose: f64,
    pub solver_residual: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NnvcStatus {
    match e {
        Error::InvalidInput(_) | Error::Domain(_) => NnvcStatus::InvalidArgument,
        Error::Unsupported(_) => NnvcStatus::Unsupported,
        Error::Numerical(_) => NnvcStatus::Numerical,
        Error::Construction { .. } | Error::InvalidWitness(_) => NnvcStatus::Construction,
        Error::Serialization(_) => NnvcStatus::Serialization,
    }
}

struct Fail(NnvcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(NnvcStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> NnvcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NnvcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            NnvcStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn points_from(coords: *const f64, n: usize, dim: usize) -> Result<Vec<Point>, Fail> {
    if n == 0 || dim == 0 {
        return Err(Fail(NnvcStatus::InvalidArgument, "empty point array".into()));
    }
    let len = n.checked_mul(dim).ok_or_else(|| Fail(NnvcStatus::InvalidArgument, "size overflow".into()))?;
    if coords.is_null() {
        return Err(null("coords"));
    }
    let flat = std::slice::from_raw_parts(coords, len);
    Ok(flat.chunks(dim).map(|c| Point::new(c.to_vec())).collect::<nnvc::Result<_>>()?)
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nnvc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn nnvc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnvc_bounds(d: u32, m: u64, out: *mut NnvcBounds) -> NnvcStatus {
    guard(|| {
        let o = self::out(out, "out")?;
        let r = bounds_report(d, m)?;
        *o = NnvcBounds {
            lower: r.lower,
            q: r.q,
            upper_tight_real: r.upper_tight_real,
            upper_tight: r.upper_tight,
            upper_loose: r.upper_loose,
            solver_residual: r.solver_residual,
        };
        Ok(())
    })
}

/// Lower branch of the Lambert W function on `[-1/e, 0)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnvc_lambert_wm1(y: f64, out: *mut f64) -> NnvcStatus {
    guard(|| {
        let o = self::out(out, "out")?;
        *o = lambert_wm1(y)?;
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnvc_takacs_arrangement(
    facets: usize,
    radius: f64,
    out: *mut *mut NnvcArrangement,
) -> NnvcStatus {
    guard(|| {
        let o = self::out(out, "out")?;
        *o = boxed(NnvcArrangement(takacs_arrangement(facets, radius)?));
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnvc_odd_polygon_arrangement(
    m: usize,
    radius: f64,
    out: *mut *mut NnvcArrangement,
) -> NnvcStatus {
    guard(|| {
        let o = self::out(out, "out")?;
        *o = boxed(NnvcArrangement(odd_polygon_arrangement(m, radius)?));
        Ok(())
    })
}

/// Arrangement of `n` arbitrary points of dimension `dim`.
///
/// # Safety
/// `coords` must point to `n * dim` doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnvc_arrangement_from_points(
    coords: *const f64,
    n: usize,
    dim: usize,
    out: *mut *mut NnvcArrangement,
) -> NnvcStatus {
    guard(|| {
        let o = self::out(out, "out")?;
        let points = points_from(coords, n, dim)?;
        let radius = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
        *o = boxed(NnvcArrangement(Arrangement { kind: ArrangementKind::Random, radius, points }));
        Ok(())
    })
}

/// Number of points; 0 for a null handle.
///
/// # Safety
/// `arr` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnvc_arrangement_len(arr: *const NnvcArrangement) -> usize {
    arr.as_ref().map_or(0, |a| a.0.len())
}

/// Point dimension; 0 for a null handle.
///
/// # Safety
/// `arr` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnvc_arrangement_dim(arr: *const NnvcArrangement) -> usize {
    arr.as_ref().map_or(0, |a| a.0.dim())
}

/// Copies point `i` into `coords`, which holds `cap` doubles.
///
/// # Safety
/// `arr` must be a live handle; `coords` must be valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn nnvc_arrangement_point(
    arr: *const NnvcArrangement,
    i: usize,
    coords: *mut f64,
    cap: usize,
) -> NnvcStatus {
    guard(|| {
        let a = &deref(arr, "arrangement")?.0;
        let p = a.points.get(i).ok_or_else(|| Fail(NnvcStatus::InvalidArgument, format!("index {i} out of range")))?;
        copy_coords(p, coords, cap)
    })
}

unsafe fn copy_coords(p: &Point, coords: *mut f64, cap: usize) -> Result<(), Fail> {
    if coords.is_null() {
        return Err(null("coords"));
    }
    if cap < p.dim() {
        return Err(Fail(NnvcStatus::BufferTooSmall, format!("need {} doubles", p.dim())));
    }
    ptr::copy_nonoverlapping(p.coords().as_ptr(), coords, p.dim());
    Ok(())
}

/// # Safety
/// `arr` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nnvc_arrangement_free(arr: *mut NnvcArrangement) {
    if !arr.is_null() {
        drop(Box::from_raw(arr));
    }
}

/// Prototype set from `m` points and labels (each +1 or -1).
///
/// # Safety
/// `coords` must point to `m * dim` doubles, `labels` to `m` bytes; `out`
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnvc_prototype_set_new(
    coords: *const f64,
    labels: *const i8,
    m: usize,
    dim: usize,
    out: *mut *mut NnvcPrototypeSet,
) -> NnvcStatus {
    guard(|| {
        let o = self::out(out, "out")?;
        let points = points_from(coords, m, dim)?;
        if labels.is_null() {
            return Err(null("labels"));
        }
        let labels = std::slice::from_raw_parts(labels, m)
            .iter()
            .map(|&l| Label::try_from(l))
            .collect::<nnvc::Result<Vec<_>>>()?;
        *o = boxed(NnvcPrototypeSet(LabeledPrototypeSet::new(points, labels)?));
        Ok(())
    })
}

/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnvc_prototype_set_len(set: *const NnvcPrototypeSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnvc_prototype_set_dim(set: *const NnvcPrototypeSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.dim())
}

/// Copies prototype `i` into `coords` (capacity `cap`) and its label into
/// `label`.
///
/// # Safety
/// `set` must be a live handle; `coords` valid for `cap` writes; `label`
/// valid for one write.
#[no_mangle]
pub unsafe extern "C" fn nnvc_prototype_set_get(
    set: *const NnvcPrototypeSet,
    i: usize,
    coords: *mut f64,
    cap: usize,
    label: *mut i8,
) -> NnvcStatus {
    guard(|| {
        let s = &deref(set, "prototype set")?.0;
        let l = out(label, "label")?;
        let p = s
            .prototypes()
            .get(i)
            .ok_or_else(|| Fail(NnvcStatus::InvalidArgument, format!("index {i} out of range")))?;
        copy_coords(p, coords, cap)?;
        *l = s.labels()[i].sign();
        Ok(())
    })
}

/// # Safety
/// `set` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nnvc_prototype_set_free(set: *mut NnvcPrototypeSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Label (+1 or -1) of the nearest prototype to `x`, and its margin.
///
/// # Safety
/// `set` must be a live handle; `x` must point to `dim` doubles; outputs
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnvc_classify(
    set: *const NnvcPrototypeSet,
    x: *const f64,
    dim: usize,
    label: *mut i8,
    margin: *mut f64,
) -> NnvcStatus {
    guard(|| {
        let s = &deref(set, "prototype set")?.0;
        let (l, mg) = (out(label, "label")?, out(margin, "margin")?);
        let p = points_from(x, 1, dim)?.remove(0);
        let c = classify(s, &p)?;
        *l = c.label.sign();
        *mg = c.margin;
        Ok(())
    })
}

/// Smallest signed margin of `set` on the points of `arr` under the
/// labeling `bits` (bit i set = point i labeled +1). Positive iff every
/// point is classified as labeled.
///
/// # Safety
/// Handles must be live; `margin` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn nnvc_labeling_margin(
    set: *const NnvcPrototypeSet,
    arr: *const NnvcArrangement,
    bits: u64,
    margin: *mut f64,
) -> NnvcStatus {
    guard(|| {
        let s = &deref(set, "prototype set")?.0;
        let a = &deref(arr, "arrangement")?.0;
        let o = out(margin, "margin")?;
        let labeling = Labeling::new(bits, a.len())?;
        if s.dim() != a.dim() {
            return Err(Fail(NnvcStatus::InvalidArgument, "dimension mismatch".into()));
        }
        *o = signed_min_margin(s, &a.points, labeling);
        Ok(())
    })
}

fn construct(arr: &Arrangement, bits: u64) -> Result<LabeledPrototypeSet, Fail> {
    let labeling = Labeling::new(bits, arr.len())?;
    Ok(match arr.kind {
        ArrangementKind::Takacs { .. } => takacs_shatter(arr, labeling)?,
        ArrangementKind::OddPolygon { .. } => odd_polygon_shatter(arr, labeling)?,
        _ => {
            return Err(Fail(NnvcStatus::Unsupported, "no explicit construction for this arrangement".into()));
        }
    })
}

/// Explicit witness for labeling `bits` of a Takacs or odd-polygon arrangement.
///
/// # Safety
/// `arr` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnvc_shatter(
    arr: *const NnvcArrangement,
    bits: u64,
    out: *mut *mut NnvcPrototypeSet,
) -> NnvcStatus {
    guard(|| {
        let a = &deref(arr, "arrangement")?.0;
        let o = self::out(out, "out")?;
        *o = boxed(NnvcPrototypeSet(construct(a, bits)?));
        Ok(())
    })
}

/// Runs the explicit construction on every labeling of a Takacs or odd-polygon
/// arrangement. A certificate is produced even when some labeling fails;
/// check [`nnvc_certificate_verified`].
///
/// # Safety
/// `arr` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnvc_certify(
    arr: *const NnvcArrangement,
    mu: f64,
    out: *mut *mut NnvcCertificate,
) -> NnvcStatus {
    guard(|| {
        let a = &deref(arr, "arrangement")?.0;
        let o = self::out(out, "out")?;
        let generator = match a.kind {
            ArrangementKind::Takacs { .. } => "takacs_shatter",
            ArrangementKind::OddPolygon { .. } => "odd_polygon_shatter",
            _ => return Err(Fail(NnvcStatus::Unsupported, "no explicit construction for this arrangement".into())),
        };
        let cert = verify_shattering(a, |l| construct(a, l.bits()).map_err(|f| Error::InvalidWitness(f.1)), mu)?;
        *o = boxed(NnvcCertificate { cert, generator: generator.into() });
        Ok(())
    })
}

/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnvc_certificate_verified(cert: *const NnvcCertificate) -> bool {
    cert.as_ref().is_some_and(|c| c.cert.verified)
}

/// Recorded minimum margin; NaN for a null handle.
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnvc_certificate_min_margin(cert: *const NnvcCertificate) -> f64 {
    cert.as_ref().map_or(f64::NAN, |c| c.cert.min_margin)
}

/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nnvc_certificate_witness_count(cert: *const NnvcCertificate) -> usize {
    cert.as_ref().map_or(0, |c| c.cert.witnesses.len())
}

/// Copy of the witness for labeling `bits`.
///
/// # Safety
/// `cert` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnvc_certificate_witness(
    cert: *const NnvcCertificate,
    bits: u64,
    out: *mut *mut NnvcPrototypeSet,
) -> NnvcStatus {
    guard(|| {
        let c = deref(cert, "certificate")?;
        let o = self::out(out, "out")?;
        let set = c
            .cert
            .witnesses
            .get(&bits)
            .ok_or_else(|| Fail(NnvcStatus::InvalidArgument, format!("no witness for {bits:#x}")))?;
        *o = boxed(NnvcPrototypeSet(set.clone()));
        Ok(())
    })
}

/// Re-checks the stored witnesses at margin `mu` (pass `0` or a negative
/// value for the recorded one). `first_failure` receives the first failing
/// bitmask when `verified` is false.
///
/// # Safety
/// `cert` must be a live handle; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnvc_certificate_reverify(
    cert: *const NnvcCertificate,
    mu: f64,
    verified: *mut bool,
    first_failure: *mut u64,
) -> NnvcStatus {
    guard(|| {
        let c = deref(cert, "certificate")?;
        let (v, f) = (out(verified, "verified")?, out(first_failure, "first_failure")?);
        let mu = if mu > 0.0 { mu } else { c.cert.mu };
        let r = c.cert.reverify_at(mu)?;
        *v = r.verified;
        *f = r.first_failure.map_or(0, |x| x.labeling);
        Ok(())
    })
}

/// Writes the certificate JSON plus a NUL into `buf` (capacity `cap`).
/// `len` always receives the required size including the NUL; pass a null
/// `buf` to query it.
///
/// # Safety
/// `cert` must be a live handle; `buf` null or valid for `cap` writes;
/// `len` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn nnvc_certificate_to_json(
    cert: *const NnvcCertificate,
    buf: *mut c_char,
    cap: usize,
    len: *mut usize,
) -> NnvcStatus {
    guard(|| {
        let c = deref(cert, "certificate")?;
        let l = out(len, "len")?;
        let json = CertificateFile::from_certificate(&c.cert, &c.generator, None).to_json()?;
        *l = json.len() + 1;
        if buf.is_null() {
            return Ok(());
        }
        if cap < json.len() + 1 {
            return Err(Fail(NnvcStatus::BufferTooSmall, format!("need {} bytes", json.len() + 1)));
        }
        ptr::copy_nonoverlapping(json.as_ptr().cast(), buf, json.len());
        *buf.add(json.len()) = 0;
        Ok(())
    })
}

/// Parses certificate JSON. The recorded verdict is kept as is; call
/// [`nnvc_certificate_reverify`] to check it.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnvc_certificate_from_json(json: *const c_char, out: *mut *mut NnvcCertificate) -> NnvcStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let o = self::out(out, "out")?;
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| Fail(NnvcStatus::Serialization, "certificate is not UTF-8".into()))?;
        let file = CertificateFile::from_json(text)?;
        let cert = file.to_certificate()?;
        *o = boxed(NnvcCertificate { cert, generator: file.generator });
        Ok(())
    })
}

/// # Safety
/// `cert` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nnvc_certificate_free(cert: *mut NnvcCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}
