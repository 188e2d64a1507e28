//! Thin wrapper over `rustfft` for the ring-lattice transforms.

use std::f64::consts::PI;

use rustfft::FftPlanner;

use crate::C64;

/// In-place forward DFT, `X_j = Σ_n x_n e^{-2πi jn/N}`.
pub(crate) fn forward(buf: &mut [C64]) {
    if buf.is_empty() {
        return;
    }
    FftPlanner::new().plan_fft_forward(buf.len()).process(buf);
}

/// In-place inverse DFT including the `1/N` factor.
pub(crate) fn inverse(buf: &mut [C64]) {
    if buf.is_empty() {
        return;
    }
    FftPlanner::new().plan_fft_inverse(buf.len()).process(buf);
    let scale = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
}

/// Angular wavenumber of DFT bin `j` on `len` points of spacing `spacing`,
/// folded into `[-π/spacing, π/spacing)`.
pub(crate) fn wavenumber(j: usize, len: usize, spacing: f64) -> f64 {
    let signed = if 2 * j < len {
        j as f64
    } else {
        j as f64 - len as f64
    };
    2.0 * PI * signed / (len as f64 * spacing)
}
