use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::SpinorLattice;
use crate::numerics::{bessel_j, oscillatory_start, periodic_quadrature_n, QuadratureSpec};
use crate::spectral;
use crate::walks::coin_shift_matrix;
use crate::{Spinor, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DtqwPacketParams {
    pub theta: f64,
    /// Localization on the lattice; small `α` is the relativistic regime.
    pub alpha: f64,
}

impl DtqwPacketParams {
    pub fn new(theta: f64, alpha: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(Error::invalid(format!("coin angle must lie in (0, π/2), got {theta}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
        }
        Ok(DtqwPacketParams { theta, alpha })
    }
}

/// Which `I_n` enters the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InVariant {
    /// `I_n(z) = (2π)⁻¹ ∫ e^{ikn − iω(k)z} dk` with `cos ω = cos θ cos k`.
    Exact,
    /// `I_n(z) ≈ e^{iπ(n−z)/2} J_n(z cos θ)`, from `ω ≈ π/2 − cos θ cos k`.
    Bessel,
}

impl InVariant {
    /// `|I_n(z)|` carries a factor `e^{κ·im z}`; the reduced functions below
    /// have it divided out.
    fn kappa(self, theta: f64) -> f64 {
        match self {
            InVariant::Exact => theta,
            InVariant::Bessel => FRAC_PI_2,
        }
    }

    /// `e^{−κ·im z} I_n(z)`.
    fn reduced(self, theta: f64, n: i64, z: C64, spec: &QuadratureSpec) -> Result<C64> {
        match self {
            InVariant::Exact => {
                // e^{−iθz}·(2π)⁻¹∫ e^{ikn − i(ω−θ)z} dk, keeping only the phase of e^{−iθz}
                let start = oscillatory_start(spec, n as f64, z.norm());
                let [v] = periodic_quadrature_n(
                    |k| {
                        let w = (theta.cos() * k.cos()).clamp(-1.0, 1.0).acos() - theta;
                        [C64::from_polar((w * z.im).exp(), n as f64 * k - w * z.re)]
                    },
                    spec,
                    start,
                )?;
                Ok(v * C64::from_polar(1.0, -theta * z.re))
            }
            InVariant::Bessel => {
                let j = bessel_j(n, z * theta.cos(), spec)?;
                Ok(j * C64::from_polar(1.0, FRAC_PI_2 * (n as f64 - z.re)))
            }
        }
    }
}

/// `I_n(z) = (2π)⁻¹ ∫ e^{ikn − iω(k)z} dk` with `cos ω = cos θ cos k`.
pub fn in_function(n: i64, z: C64, theta: f64, spec: &QuadratureSpec) -> Result<C64> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::invalid(format!("coin angle must lie in (0, π/2), got {theta}")));
    }
    Ok(InVariant::Exact.reduced(theta, n, z, spec)? * (theta * z.im).exp())
}

/// Positive-frequency discrete-walk packet
///
/// ```text
/// ψ(n,τ) = N/√2 · ( I_n(τ−1−iα) − e^{−iθ} I_{n−1}(τ−iα),
///                   I_n(τ−1−iα) − e^{−iθ} I_{n+1}(τ−iα) )
/// N = [2I₀(−2iα) − e^{iθ}I₁(−1−2iα) − e^{−iθ}I₁(1−2iα)]^{−1/2}
/// ```
///
/// With [`InVariant::Bessel`] every `I` (including those in `N`) is replaced
/// by its Bessel approximation, so the approximate packet is normalized too.
#[derive(Debug, Clone)]
pub struct DtqwPacket {
    params: DtqwPacketParams,
    variant: InVariant,
    spec: QuadratureSpec,
    /// normalization bracket with `e^{−2κα}` divided out
    bracket: C64,
}

impl DtqwPacket {
    pub fn new(params: DtqwPacketParams, variant: InVariant, spec: &QuadratureSpec) -> Result<Self> {
        let DtqwPacketParams { theta, alpha } = DtqwPacketParams::new(params.theta, params.alpha)?;
        let r0 = variant.reduced(theta, 0, C64::new(0.0, -2.0 * alpha), spec)?;
        let r_minus = variant.reduced(theta, 1, C64::new(-1.0, -2.0 * alpha), spec)?;
        let r_plus = variant.reduced(theta, 1, C64::new(1.0, -2.0 * alpha), spec)?;
        let bracket = r0 * 2.0
            - C64::from_polar(1.0, theta) * r_minus
            - C64::from_polar(1.0, -theta) * r_plus;
        if !(bracket.re > 0.0) || bracket.im.abs() > 1e-10 * bracket.norm() {
            return Err(Error::Normalization {
                re: bracket.re,
                im: bracket.im,
            });
        }
        Ok(DtqwPacket {
            params,
            variant,
            spec: *spec,
            bracket,
        })
    }

    pub fn params(&self) -> DtqwPacketParams {
        self.params
    }

    pub fn variant(&self) -> InVariant {
        self.variant
    }

    /// `N`; overflows for very large `κα`.
    pub fn normalization(&self) -> f64 {
        (self.variant.kappa(self.params.theta) * self.params.alpha).exp() / self.bracket.re.sqrt()
    }

    /// The normalization bracket with the factor `e^{−2κα}` removed.
    pub fn reduced_bracket(&self) -> C64 {
        self.bracket
    }

    fn amplitude_scale(&self) -> f64 {
        FRAC_1_SQRT_2 / self.bracket.re.sqrt()
    }

    fn z_pair(&self, tau: usize) -> (C64, C64) {
        let alpha = self.params.alpha;
        (C64::new(tau as f64, -alpha), C64::new(tau as f64 - 1.0, -alpha))
    }

    /// Closed form at site `n` and integer time `tau`, one site at a time.
    pub fn eval(&self, n: i64, tau: usize) -> Result<Spinor> {
        let theta = self.params.theta;
        let (z0, z1) = self.z_pair(tau);
        let r = |m: i64, z: C64| self.variant.reduced(theta, m, z, &self.spec);
        let lead = r(n, z1)?;
        let back = C64::from_polar(1.0, -theta);
        let scale = self.amplitude_scale();
        Ok([
            (lead - back * r(n - 1, z0)?) * scale,
            (lead - back * r(n + 1, z0)?) * scale,
        ])
    }

    /// Direct quadrature of `N/(2π) ∫ (e^{iω} − U(k)) (1,1)ᵀ/√2 e^{ikn − (α+iτ)ω} dk`
    /// using the explicit 2×2 one-step operator `U(k)`. Only defined for the
    /// exact dispersion.
    pub fn eval_oracle(&self, n: i64, tau: usize) -> Result<Spinor> {
        if self.variant != InVariant::Exact {
            return Err(Error::invalid("the Fourier oracle applies to the exact packet only"));
        }
        let DtqwPacketParams { theta, alpha } = self.params;
        let scale = self.amplitude_scale();
        let start = oscillatory_start(&self.spec, (n.abs() + 1) as f64, C64::new(tau as f64, alpha).norm());
        periodic_quadrature_n(
            |k| {
                let omega = (theta.cos() * k.cos()).clamp(-1.0, 1.0).acos();
                let u = coin_shift_matrix(theta, k);
                let e = C64::from_polar(1.0, omega);
                // (e^{iω} − U)(1,1)ᵀ
                let pv = [e - u[0][0] - u[0][1], e - u[1][0] - u[1][1]];
                // N e^{−αθ} = bracket^{−1/2}
                let w = C64::from_polar(
                    scale * (-alpha * (omega - theta)).exp(),
                    k * n as f64 - tau as f64 * omega,
                );
                [pv[0] * w, pv[1] * w]
            },
            &self.spec,
            start,
        )
    }

    /// Profile on `n_min..=n_max` at time `tau`.
    ///
    /// The exact packet is synthesized on a uniform `k` grid and brought to
    /// position space with one FFT; the Bessel variant is evaluated site by
    /// site.
    pub fn profile(&self, n_min: i64, n_max: i64, tau: usize) -> Result<SpinorLattice> {
        match self.variant {
            InVariant::Exact => self.profile_fft(n_min, n_max, tau),
            InVariant::Bessel => self.profile_quadrature(n_min, n_max, tau),
        }
    }

    fn profile_fft(&self, n_min: i64, n_max: i64, tau: usize) -> Result<SpinorLattice> {
        if n_max < n_min {
            return Err(Error::invalid("empty site range"));
        }
        let DtqwPacketParams { theta, alpha } = self.params;
        let width = (n_max - n_min + 1) as usize;
        let reach = n_min.unsigned_abs().max(n_max.unsigned_abs()) as usize;
        let cone = (theta.cos() * tau as f64).ceil() as usize + 64 + (4.0 * alpha.sqrt()) as usize;
        let m = (4 * width).max(4 * reach).max(4 * cone).max(256).next_power_of_two();
        let scale = self.amplitude_scale();
        let back = C64::from_polar(1.0, -theta);
        let (mut up, mut down): (Vec<C64>, Vec<C64>) = (0..m)
            .map(|j| {
                let k = 2.0 * PI * j as f64 / m as f64;
                let omega = (theta.cos() * k.cos()).clamp(-1.0, 1.0).acos();
                let e = C64::from_polar(1.0, omega);
                let w = C64::from_polar(
                    scale * (-alpha * (omega - theta)).exp(),
                    -(tau as f64) * omega,
                );
                (
                    (e - back * C64::from_polar(1.0, -k)) * w,
                    (e - back * C64::from_polar(1.0, k)) * w,
                )
            })
            .unzip();
        spectral::inverse(&mut up);
        spectral::inverse(&mut down);
        let at = |buf: &[C64], n: i64| buf[n.rem_euclid(m as i64) as usize];
        SpinorLattice::from_fn(n_min, n_max, 1.0, |n| [at(&up, n), at(&down, n)])
    }

    /// Profile from per-site evaluation of the `I_n` (or `J_n`) functions.
    pub fn profile_quadrature(&self, n_min: i64, n_max: i64, tau: usize) -> Result<SpinorLattice> {
        if n_max < n_min {
            return Err(Error::invalid("empty site range"));
        }
        let theta = self.params.theta;
        let (z0, z1) = self.z_pair(tau);
        let lead: Vec<C64> = (n_min..=n_max)
            .into_par_iter()
            .map(|m| self.variant.reduced(theta, m, z1, &self.spec))
            .collect::<Result<_>>()?;
        // n−1 and n+1 neighbours
        let shifted: Vec<C64> = (n_min - 1..=n_max + 1)
            .into_par_iter()
            .map(|m| self.variant.reduced(theta, m, z0, &self.spec))
            .collect::<Result<_>>()?;
        let back = C64::from_polar(1.0, -theta);
        let scale = self.amplitude_scale();
        let up = (0..lead.len()).map(|i| (lead[i] - back * shifted[i]) * scale).collect();
        let down = (0..lead.len()).map(|i| (lead[i] - back * shifted[i + 2]) * scale).collect();
        SpinorLattice::from_components(n_min, up, down, 1.0)
    }
}

pub fn dtqw_packet(n: i64, tau: usize, params: &DtqwPacketParams, spec: &QuadratureSpec) -> Result<Spinor> {
    DtqwPacket::new(*params, InVariant::Exact, spec)?.eval(n, tau)
}

pub fn dtqw_packet_oracle(
    n: i64,
    tau: usize,
    params: &DtqwPacketParams,
    spec: &QuadratureSpec,
) -> Result<Spinor> {
    DtqwPacket::new(*params, InVariant::Exact, spec)?.eval_oracle(n, tau)
}

pub fn dtqw_packet_bessel(
    n: i64,
    tau: usize,
    params: &DtqwPacketParams,
    spec: &QuadratureSpec,
) -> Result<Spinor> {
    DtqwPacket::new(*params, InVariant::Bessel, spec)?.eval(n, tau)
}

pub fn dtqw_normalization(params: &DtqwPacketParams, spec: &QuadratureSpec) -> Result<f64> {
    Ok(DtqwPacket::new(*params, InVariant::Exact, spec)?.normalization())
}
