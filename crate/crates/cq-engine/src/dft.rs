//! Discrete Fourier transforms and discrete convolutions.
//!
//! Conventions used throughout the crate, with `M + 1` the transform length
//! and `zeta = exp(2*pi*i/(M+1))` the principal root of unity:
//!
//! * forward transform (unnormalised):  `xh[l] = sum_n x[n] * zeta^(-l*n)`
//! * inverse transform:                 `x[n]  = (sum_l xh[l] * zeta^(l*n)) / (M+1)`
//!
//! so `idft(dft(x)) == x`.  The forward sign matches the usual FFT-library
//! convention; the inverse is realised as `conj -> forward -> conj -> scale`
//! so that both directions share one set of cached plans.
//!
//! [`causal_conv`] evaluates the first `n + 1` entries of the discrete causal
//! convolution `(x * y)[k] = sum_{m<=k} x[m] * y[k-m]` by zero-padding both
//! inputs to length `2n + 2`, which is enough padding to suppress wrap-around.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Process-wide cache of forward FFT plans, keyed by transform length.
///
/// `rustfft`'s planner already memoises plans internally, but it is not
/// `Sync`; wrapping it (plus a by-length map so repeated lookups skip the
/// planner lock contention pattern entirely) gives cheap shared access from
/// parallel sections.
fn plan_forward(len: usize) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<Mutex<(FftPlanner<f64>, HashMap<usize, Arc<dyn Fft<f64>>>)>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cache.lock().expect("FFT plan cache poisoned");
    let (planner, map) = &mut *guard;
    map.entry(len)
        .or_insert_with(|| planner.plan_fft_forward(len))
        .clone()
}

/// Forward transform `xh[l] = sum_n x[n] * zeta^(-l*n)`, unnormalised.
pub fn dft(x: &[Complex64]) -> Vec<Complex64> {
    assert!(!x.is_empty(), "dft of an empty sequence");
    let mut buf = x.to_vec();
    plan_forward(buf.len()).process(&mut buf);
    buf
}

/// Inverse transform `x[n] = (sum_l xh[l] * zeta^(l*n)) / (M+1)`.
pub fn idft(xh: &[Complex64]) -> Vec<Complex64> {
    assert!(!xh.is_empty(), "idft of an empty sequence");
    let scale = 1.0 / xh.len() as f64;
    let mut buf: Vec<Complex64> = xh.iter().map(|v| v.conj()).collect();
    plan_forward(buf.len()).process(&mut buf);
    for v in buf.iter_mut() {
        *v = v.conj() * scale;
    }
    buf
}

/// Cyclic convolution of two equal-length sequences:
/// `z[k] = sum_m x[m] * y[(k - m) mod len]`.
pub fn periodic_conv(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(
        x.len(),
        y.len(),
        "periodic_conv requires equal lengths, got {} and {}",
        x.len(),
        y.len()
    );
    let xh = dft(x);
    let yh = dft(y);
    let prod: Vec<Complex64> = xh.iter().zip(&yh).map(|(a, b)| a * b).collect();
    idft(&prod)
}

/// First `n + 1` entries of the causal convolution
/// `z[k] = sum_{m=0}^{k} x[m] * y[k-m]` for sequences of length `n + 1`.
///
/// Both inputs are zero-padded to length `2n + 2` so the cyclic product
/// carries no wrap-around contamination in the retained entries.
pub fn causal_conv(x: &[Complex64], y: &[Complex64], n: usize) -> Vec<Complex64> {
    assert!(x.len() >= n + 1, "causal_conv: x must have at least n + 1 entries");
    assert!(y.len() >= n + 1, "causal_conv: y must have at least n + 1 entries");
    let padded = 2 * n + 2;
    let mut xp = vec![Complex64::ZERO; padded];
    let mut yp = vec![Complex64::ZERO; padded];
    xp[..=n].copy_from_slice(&x[..=n]);
    yp[..=n].copy_from_slice(&y[..=n]);
    let mut z = periodic_conv(&xp, &yp);
    z.truncate(n + 1);
    z
}

/// Completes a conjugate-symmetric spectrum of length `m + 1` from its first
/// `floor((m+1)/2) + 1` entries: `xh[m + 1 - l] = conj(xh[l])` for
/// `l = 1..=floor(m/2)`.
///
/// When the underlying time sequence is real its spectrum has exactly this
/// symmetry, so only half of the (typically expensive) spectrum evaluations
/// are needed.  For even length the middle entry is its own reflection and
/// must be supplied by the caller, which is why the half slice extends to
/// index `floor((m+1)/2)` inclusive.
pub fn symmetrize_half_spectrum(half: &[Complex64], m: usize) -> Vec<Complex64> {
    let keep = (m + 1) / 2 + 1;
    let keep = keep.min(m + 1);
    assert!(
        half.len() >= keep,
        "symmetrize_half_spectrum: need {} leading entries for length {}, got {}",
        keep,
        m + 1,
        half.len()
    );
    let mut full = vec![Complex64::ZERO; m + 1];
    full[..keep].copy_from_slice(&half[..keep]);
    for l in 1..=(m / 2) {
        full[m + 1 - l] = half[l].conj();
    }
    full
}
