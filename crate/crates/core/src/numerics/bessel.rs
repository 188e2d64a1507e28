//! Integer-order Bessel functions of complex argument from their integral
//! representations. Every order is evaluated independently by quadrature.

use super::quadrature::{halfline_quadrature_n, periodic_quadrature_n, QuadratureSpec};
use crate::error::{Error, Result};
use crate::C64;

/// Starting node count for `(2π)⁻¹∫ e^{i(nk − φ(k) z)} dk` style integrands,
/// whose phase winds `O(|n| + |z|)` times over the period.
pub(crate) fn oscillatory_start(spec: &QuadratureSpec, order: f64, z_abs: f64) -> usize {
    spec.initial_points * ((order.abs() + z_abs + 16.0) / 16.0).ceil() as usize
}

/// `J_n(z)` from `(2π)⁻¹ ∫ e^{i(nk − z sin k)} dk`.
pub fn bessel_j(n: i64, z: C64, spec: &QuadratureSpec) -> Result<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("J_{n} at non-finite argument {z}")));
    }
    let m = n.unsigned_abs() as f64;
    let start = oscillatory_start(spec, m, z.norm());
    let [value] = periodic_quadrature_n(
        |k| {
            let s = k.sin();
            // i(mk − z sin k) = z.im·sin k + i(mk − z.re·sin k)
            [C64::from_polar((z.im * s).exp(), m * k - z.re * s)]
        },
        spec,
        start,
    )?;
    // J_{-n} = (-1)^n J_n
    if n < 0 && n % 2 != 0 {
        Ok(-value)
    } else {
        Ok(value)
    }
}

/// Truncation point of `∫_0^∞ e^{-z(cosh t − 1)} cosh(νt) dt`: the smallest
/// `t` with `re(z)(cosh t − 1) − ν t = −ln(abs_tol·10⁻³)`, found by bisection.
fn k_truncation(re_z: f64, nu_max: f64, abs_tol: f64) -> f64 {
    let target = -(abs_tol * 1e-3).ln();
    let g = |t: f64| re_z * 2.0 * (t / 2.0).sinh().powi(2) - nu_max * t;
    let mut hi = 1.0;
    while g(hi) < target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn k_scaled_orders<const D: usize>(
    orders: [u32; D],
    z: C64,
    spec: &QuadratureSpec,
) -> Result<[C64; D]> {
    if !(z.re > 0.0) || !z.im.is_finite() || !z.re.is_finite() {
        return Err(Error::Domain(format!(
            "K_nu requires re(z) > 0, got z = {z}"
        )));
    }
    let nu_max = orders.iter().copied().max().unwrap_or(0) as f64;
    let t_max = k_truncation(z.re, nu_max, spec.abs_tol);
    // about one node per half period of the fastest phase
    let rate = z.im.abs() * t_max.sinh() + nu_max;
    let nyquist = (t_max * rate / std::f64::consts::PI).ceil() as usize;
    let start = nyquist.max(spec.initial_points).next_power_of_two();
    halfline_quadrature_n(
        |t| {
            let e = (-z * (2.0 * (t / 2.0).sinh().powi(2))).exp();
            orders.map(|nu| e * (nu as f64 * t).cosh())
        },
        t_max,
        spec,
        start,
    )
}

/// Exponentially scaled modified Bessel function `e^{z} K_ν(z)`, `re(z) > 0`,
/// from `∫_0^∞ e^{−z(cosh t − 1)} cosh(νt) dt`.
pub fn bessel_k_scaled(nu: u32, z: C64, spec: &QuadratureSpec) -> Result<C64> {
    k_scaled_orders([nu], z, spec).map(|[v]| v)
}

/// `(e^{z}K_0(z), e^{z}K_1(z))` from a single quadrature pass.
pub fn bessel_k01_scaled(z: C64, spec: &QuadratureSpec) -> Result<(C64, C64)> {
    k_scaled_orders([0, 1], z, spec).map(|[k0, k1]| (k0, k1))
}

/// Modified Bessel function of the second kind `K_ν(z)` for `re(z) > 0`.
pub fn bessel_k(nu: u32, z: C64, spec: &QuadratureSpec) -> Result<C64> {
    Ok(bessel_k_scaled(nu, z, spec)? * (-z).exp())
}
