//! C ABI for the htype library.
//!
//! Conventions, uniform across the surface: handles are opaque pointers
//! created by a `*_new` function and released by the matching `*_free`;
//! fallible calls return [`HtStatus`] and write results through out
//! pointers; numeric buffers are caller-allocated with lengths fixed by
//! the algebra dimensions `n` and `m`. Null pointers are rejected with
//! [`HtStatus::NullPointer`], never dereferenced. The generated header
//! lives in `include/htype.h`.

use std::ffi::{c_char, CStr};

use nalgebra::{DMatrix, DVector};

use htype::clifford::{build_generators, octonion_generators, GeneratorSet};
use htype::spectral::{classify, SpectralData};
use htype::{solve_geodesic, CausalType, Error, GeodesicSolution, HTypeAlgebra, Signature};

/// Result code for every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HtStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was malformed: bad family name, non-finite time,
    /// index out of range, or an overflowing buffer size.
    InvalidArgument = 2,
    /// A vector or matrix argument has the wrong dimension.
    DimensionMismatch = 3,
    /// The requested center dimension exceeds the Hurwitz-Radon bound.
    Admissibility = 4,
    /// The metric signature is not usable: p + q must equal n with p <= q.
    InvalidSignature = 5,
    /// The generator matrices failed the algebraic validation.
    InvalidGenerators = 6,
    /// Spectral classification requires a nonzero center velocity.
    ZeroCenterVelocity = 7,
}

/// Causal character of the initial horizontal velocity.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HtCausal {
    Timelike = 0,
    Spacelike = 1,
    Lightlike = 2,
}

/// Opaque handle to an H-type algebra.
pub struct HtAlgebra(HTypeAlgebra);

/// Opaque handle to the spectral classification of eta j(u).
pub struct HtSpectrum(SpectralData);

/// Opaque handle to a closed-form geodesic through the identity.
pub struct HtGeodesic(GeodesicSolution);

fn status_from(e: &Error) -> HtStatus {
    match e {
        Error::Admissibility { .. } => HtStatus::Admissibility,
        Error::DimensionMismatch { .. } => HtStatus::DimensionMismatch,
        Error::InvalidSignature { .. } => HtStatus::InvalidSignature,
        Error::InvalidGenerators(_) => HtStatus::InvalidGenerators,
        Error::ZeroCenterVelocity => HtStatus::ZeroCenterVelocity,
        _ => HtStatus::InvalidArgument,
    }
}

/// Static description of a status code, as a NUL-terminated UTF-8 string.
/// Never null; unknown codes map to a placeholder message.
#[no_mangle]
pub extern "C" fn ht_status_message(status: HtStatus) -> *const c_char {
    let text = match status {
        HtStatus::Ok => c"ok",
        HtStatus::NullPointer => c"a required pointer argument was null",
        HtStatus::InvalidArgument => c"malformed argument",
        HtStatus::DimensionMismatch => c"vector or matrix has the wrong dimension",
        HtStatus::Admissibility => c"center dimension exceeds the Hurwitz-Radon bound",
        HtStatus::InvalidSignature => c"metric signature is not usable",
        HtStatus::InvalidGenerators => c"generator matrices failed validation",
        HtStatus::ZeroCenterVelocity => c"center velocity must be nonzero",
    };
    text.as_ptr()
}

fn finish_algebra(set: GeneratorSet, p: usize, out: *mut *mut HtAlgebra) -> HtStatus {
    let n = set.n();
    if p > n {
        return HtStatus::InvalidSignature;
    }
    let sig = match Signature::new(p, n - p) {
        Ok(sig) => sig,
        Err(e) => return status_from(&e),
    };
    match HTypeAlgebra::new(set, sig) {
        Ok(alg) => {
            unsafe { *out = Box::into_raw(Box::new(HtAlgebra(alg))) };
            HtStatus::Ok
        }
        Err(e) => status_from(&e),
    }
}

/// Creates an algebra from a builtin generator family.
///
/// Accepted names are `"heisenberg"` and `"octonion"`, with or without a
/// `"builtin:"` prefix. `p` is the metric index. On success writes a new
/// handle to `out`; the caller releases it with [`ht_algebra_free`].
///
/// # Safety
///
/// `name` must point to a NUL-terminated string and `out` to a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn ht_algebra_new_builtin(
    name: *const c_char,
    p: usize,
    out: *mut *mut HtAlgebra,
) -> HtStatus {
    if name.is_null() || out.is_null() {
        return HtStatus::NullPointer;
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else {
        return HtStatus::InvalidArgument;
    };
    let set = match name.strip_prefix("builtin:").unwrap_or(name) {
        "heisenberg" => build_generators(2, 1).expect("the Heisenberg pair is admissible"),
        "octonion" => octonion_generators(),
        _ => return HtStatus::InvalidArgument,
    };
    finish_algebra(set, p, out)
}

/// Creates an algebra from `m` generator matrices in one row-major buffer.
///
/// `entries` holds `m * n * n` doubles: matrix 0 row by row, then matrix 1,
/// and so on. The matrices are validated; rejection yields
/// [`HtStatus::InvalidGenerators`]. On success writes a new handle to
/// `out`; the caller releases it with [`ht_algebra_free`].
///
/// # Safety
///
/// `entries` must point to `m * n * n` readable doubles and `out` to a
/// writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn ht_algebra_new(
    n: usize,
    m: usize,
    p: usize,
    entries: *const f64,
    out: *mut *mut HtAlgebra,
) -> HtStatus {
    if entries.is_null() || out.is_null() {
        return HtStatus::NullPointer;
    }
    let Some(len) = n.checked_mul(n).and_then(|nn| nn.checked_mul(m)) else {
        return HtStatus::InvalidArgument;
    };
    let all = std::slice::from_raw_parts(entries, len);
    let mats = all
        .chunks_exact(n * n)
        .map(|chunk| DMatrix::from_row_slice(n, n, chunk))
        .collect();
    let set = match GeneratorSet::new(n, mats) {
        Ok(set) => set,
        Err(e) => return status_from(&e),
    };
    finish_algebra(set, p, out)
}

/// Releases an algebra handle. Null is a no-op.
///
/// # Safety
///
/// `alg` must be null or a handle from `ht_algebra_new_builtin` or
/// `ht_algebra_new` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ht_algebra_free(alg: *mut HtAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Horizontal dimension `n`; 0 for a null handle.
///
/// # Safety
///
/// `alg` must be null or a live algebra handle.
#[no_mangle]
pub unsafe extern "C" fn ht_algebra_n(alg: *const HtAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.0.n())
}

/// Center dimension `m`; 0 for a null handle.
///
/// # Safety
///
/// `alg` must be null or a live algebra handle.
#[no_mangle]
pub unsafe extern "C" fn ht_algebra_m(alg: *const HtAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.0.m())
}

/// Metric index `p`; 0 for a null handle.
///
/// # Safety
///
/// `alg` must be null or a live algebra handle.
#[no_mangle]
pub unsafe extern "C" fn ht_algebra_p(alg: *const HtAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.0.signature().p())
}

/// Classifies the operator eta j(u) for a center direction `u`.
///
/// `u` holds `u_len` doubles and must match the center dimension; a zero
/// direction yields [`HtStatus::ZeroCenterVelocity`]. On success writes a
/// new handle to `out`; the caller releases it with [`ht_spectrum_free`].
///
/// # Safety
///
/// `alg` must be a live algebra handle, `u` must point to `u_len`
/// readable doubles, and `out` to a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn ht_spectrum_new(
    alg: *const HtAlgebra,
    u: *const f64,
    u_len: usize,
    out: *mut *mut HtSpectrum,
) -> HtStatus {
    let Some(alg) = alg.as_ref() else {
        return HtStatus::NullPointer;
    };
    if u.is_null() || out.is_null() {
        return HtStatus::NullPointer;
    }
    let u = DVector::from_column_slice(std::slice::from_raw_parts(u, u_len));
    match classify(&alg.0, &u) {
        Ok(data) => {
            *out = Box::into_raw(Box::new(HtSpectrum(data)));
            HtStatus::Ok
        }
        Err(e) => status_from(&e),
    }
}

/// Releases a spectrum handle. Null is a no-op.
///
/// # Safety
///
/// `spectrum` must be null or a handle from `ht_spectrum_new` that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn ht_spectrum_free(spectrum: *mut HtSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Block counts of the classification: `s` degenerate directions, `r`
/// paired rotation or hyperbolic blocks, `quartets` four-dimensional
/// spiral groups.
///
/// # Safety
///
/// `spectrum` must be a live spectrum handle; `s`, `r`, and `quartets`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ht_spectrum_counts(
    spectrum: *const HtSpectrum,
    s: *mut usize,
    r: *mut usize,
    quartets: *mut usize,
) -> HtStatus {
    let Some(spectrum) = spectrum.as_ref() else {
        return HtStatus::NullPointer;
    };
    if s.is_null() || r.is_null() || quartets.is_null() {
        return HtStatus::NullPointer;
    }
    *s = spectrum.0.s();
    *r = spectrum.0.r();
    *quartets = spectrum.0.quartets().len();
    HtStatus::Ok
}

/// Number of eigenvalues, equal to the horizontal dimension; 0 for a
/// null handle.
///
/// # Safety
///
/// `spectrum` must be null or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn ht_spectrum_eigenvalue_count(spectrum: *const HtSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.eigenvalues().len())
}

/// Eigenvalue `index` of eta j(u), ordered as classified; writes the real
/// and imaginary parts.
///
/// # Safety
///
/// `spectrum` must be a live spectrum handle; `re` and `im` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ht_spectrum_eigenvalue(
    spectrum: *const HtSpectrum,
    index: usize,
    re: *mut f64,
    im: *mut f64,
) -> HtStatus {
    let Some(spectrum) = spectrum.as_ref() else {
        return HtStatus::NullPointer;
    };
    if re.is_null() || im.is_null() {
        return HtStatus::NullPointer;
    }
    let Some(lambda) = spectrum.0.eigenvalues().get(index) else {
        return HtStatus::InvalidArgument;
    };
    *re = lambda.re;
    *im = lambda.im;
    HtStatus::Ok
}

/// Parameters of spiral quartet `index`: eigenvalues are
/// `+-alpha +- i beta`.
///
/// # Safety
///
/// `spectrum` must be a live spectrum handle; `alpha` and `beta` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ht_spectrum_quartet(
    spectrum: *const HtSpectrum,
    index: usize,
    alpha: *mut f64,
    beta: *mut f64,
) -> HtStatus {
    let Some(spectrum) = spectrum.as_ref() else {
        return HtStatus::NullPointer;
    };
    if alpha.is_null() || beta.is_null() {
        return HtStatus::NullPointer;
    }
    let Some(quartet) = spectrum.0.quartets().get(index) else {
        return HtStatus::InvalidArgument;
    };
    *alpha = quartet.alpha;
    *beta = quartet.beta;
    HtStatus::Ok
}

/// Solves the geodesic through the identity, with initial horizontal
/// velocity `v0` (`v0_len` doubles, length `n`) and center velocity `u0`
/// (`u0_len` doubles, length `m`). On success writes a new handle to
/// `out`; the caller releases it with [`ht_geodesic_free`].
///
/// # Safety
///
/// `alg` must be a live algebra handle; `v0` and `u0` must point to the
/// stated number of readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ht_geodesic_new(
    alg: *const HtAlgebra,
    v0: *const f64,
    v0_len: usize,
    u0: *const f64,
    u0_len: usize,
    out: *mut *mut HtGeodesic,
) -> HtStatus {
    let Some(alg) = alg.as_ref() else {
        return HtStatus::NullPointer;
    };
    if v0.is_null() || u0.is_null() || out.is_null() {
        return HtStatus::NullPointer;
    }
    let v0 = DVector::from_column_slice(std::slice::from_raw_parts(v0, v0_len));
    let u0 = DVector::from_column_slice(std::slice::from_raw_parts(u0, u0_len));
    match solve_geodesic(&alg.0, &v0, &u0) {
        Ok(sol) => {
            *out = Box::into_raw(Box::new(HtGeodesic(sol)));
            HtStatus::Ok
        }
        Err(e) => status_from(&e),
    }
}

/// Releases a geodesic handle. Null is a no-op.
///
/// # Safety
///
/// `geodesic` must be null or a handle from `ht_geodesic_new` that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn ht_geodesic_free(geodesic: *mut HtGeodesic) {
    if !geodesic.is_null() {
        drop(Box::from_raw(geodesic));
    }
}

/// Causal character of the geodesic's initial horizontal velocity.
///
/// # Safety
///
/// `geodesic` must be a live geodesic handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ht_geodesic_causal_type(
    geodesic: *const HtGeodesic,
    out: *mut HtCausal,
) -> HtStatus {
    let Some(geodesic) = geodesic.as_ref() else {
        return HtStatus::NullPointer;
    };
    if out.is_null() {
        return HtStatus::NullPointer;
    }
    *out = match geodesic.0.causal_type() {
        CausalType::Timelike => HtCausal::Timelike,
        CausalType::Spacelike => HtCausal::Spacelike,
        CausalType::Lightlike => HtCausal::Lightlike,
    };
    HtStatus::Ok
}

/// Evaluates the geodesic at time `t`, filling caller-allocated buffers:
/// `v` and `dv` with `n` doubles each, `u` and `du` with `m` each.
/// Position and velocity are exact closed forms; `t` may be negative.
///
/// # Safety
///
/// `geodesic` must be a live geodesic handle; `v`, `u`, `dv`, and `du`
/// must point to writable buffers of the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn ht_geodesic_eval(
    geodesic: *const HtGeodesic,
    t: f64,
    v: *mut f64,
    u: *mut f64,
    dv: *mut f64,
    du: *mut f64,
) -> HtStatus {
    let Some(geodesic) = geodesic.as_ref() else {
        return HtStatus::NullPointer;
    };
    if v.is_null() || u.is_null() || dv.is_null() || du.is_null() {
        return HtStatus::NullPointer;
    }
    if !t.is_finite() {
        return HtStatus::InvalidArgument;
    }
    let n = geodesic.0.algebra().n();
    let m = geodesic.0.algebra().m();
    let (state, velocity) = geodesic.0.evaluate(t);
    std::slice::from_raw_parts_mut(v, n).copy_from_slice(state.v.as_slice());
    std::slice::from_raw_parts_mut(u, m).copy_from_slice(state.u.as_slice());
    std::slice::from_raw_parts_mut(dv, n).copy_from_slice(velocity.dv.as_slice());
    std::slice::from_raw_parts_mut(du, m).copy_from_slice(velocity.du.as_slice());
    HtStatus::Ok
}
