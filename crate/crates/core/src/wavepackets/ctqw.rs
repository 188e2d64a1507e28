use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::ScalarLattice;
use crate::numerics::{bessel_j, oscillatory_start, periodic_quadrature_from, QuadratureSpec};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtqwPacketParams {
    pub gamma: f64,
    pub alpha: f64,
}

impl CtqwPacketParams {
    pub fn new(gamma: f64, alpha: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::invalid(format!("hopping rate must be positive, got {gamma}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
        }
        Ok(CtqwPacketParams { gamma, alpha })
    }
}

/// Continuous-time walk packet
/// `ψ(n,t) = e^{−2iγt} J₀(−4iγα)^{−1/2} iⁿ J_n(2γ(t − iα))`.
///
/// `J₀(−4iγα) = I₀(4γα)` grows like `e^{4γα}`; amplitudes are formed with the
/// factor `e^{2γα}` divided out of both numerator and normalization.
#[derive(Debug, Clone)]
pub struct CtqwPacket {
    params: CtqwPacketParams,
    spec: QuadratureSpec,
    /// `e^{−4γα} J₀(−4iγα)`
    j0_scaled: f64,
}

impl CtqwPacket {
    pub fn new(params: CtqwPacketParams, spec: &QuadratureSpec) -> Result<Self> {
        let CtqwPacketParams { gamma, alpha } = CtqwPacketParams::new(params.gamma, params.alpha)?;
        // (2π)⁻¹∫ e^{4γα(cos k − 1)} dk
        let x = 4.0 * gamma * alpha;
        let start = oscillatory_start(spec, 0.0, x);
        let j0 = periodic_quadrature_from(|k| C64::new((x * (k.cos() - 1.0)).exp(), 0.0), spec, start)?;
        // cross-check against the complex Bessel routine where it cannot overflow
        if x < 600.0 {
            let direct = bessel_j(0, C64::new(0.0, -x), spec)? * (-x).exp();
            if (direct - j0).norm() > 1e-6 * j0.norm() || direct.im.abs() > 1e-8 * j0.norm() {
                return Err(Error::Normalization {
                    re: direct.re,
                    im: direct.im,
                });
            }
        }
        if !(j0.re > 0.0) {
            return Err(Error::Normalization { re: j0.re, im: j0.im });
        }
        Ok(CtqwPacket {
            params,
            spec: *spec,
            j0_scaled: j0.re,
        })
    }

    pub fn params(&self) -> CtqwPacketParams {
        self.params
    }

    /// `J₀(−4iγα)^{−1/2}`; underflows for very large `γα`.
    pub fn normalization(&self) -> f64 {
        let x = 4.0 * self.params.gamma * self.params.alpha;
        (-0.5 * x).exp() / self.j0_scaled.sqrt()
    }

    pub fn eval(&self, n: i64, t: f64) -> Result<C64> {
        let CtqwPacketParams { gamma, alpha } = self.params;
        let z = C64::new(2.0 * gamma * t, -2.0 * gamma * alpha);
        // e^{−2γα} J_n(z), with the scale folded into the integrand
        let start = oscillatory_start(&self.spec, n as f64, z.norm());
        let j = periodic_quadrature_from(
            |k| {
                let s = k.sin();
                C64::from_polar((z.im * (1.0 + s)).exp(), n as f64 * k - z.re * s)
            },
            &self.spec,
            start,
        )?;
        let phase = C64::from_polar(1.0, -2.0 * gamma * t + std::f64::consts::FRAC_PI_2 * n as f64);
        Ok(phase * j / self.j0_scaled.sqrt())
    }

    /// `J₀^{−1/2}/(2π) ∫ e^{ikn} e^{−2γ(1 − cos k)(α + it)} dk`, the packet
    /// written as a superposition of plane waves.
    pub fn eval_oracle(&self, n: i64, t: f64) -> Result<C64> {
        let CtqwPacketParams { gamma, alpha } = self.params;
        let start = oscillatory_start(&self.spec, n as f64, 2.0 * gamma * t.abs().max(alpha));
        let v = periodic_quadrature_from(
            |k| {
                let w = 2.0 * gamma * (1.0 - k.cos());
                C64::from_polar((-alpha * w).exp(), k * n as f64 - t * w)
            },
            &self.spec,
            start,
        )?;
        // the e^{−2γα} folded into the normalization cancels against the integral's scale
        Ok(v / self.j0_scaled.sqrt())
    }

    pub fn profile(&self, n_min: i64, n_max: i64, t: f64) -> Result<ScalarLattice> {
        if n_max < n_min {
            return Err(Error::invalid("empty site range"));
        }
        let amp: Vec<C64> = (n_min..=n_max).into_par_iter().map(|n| self.eval(n, t)).collect::<Result<_>>()?;
        ScalarLattice::from_amplitudes(n_min, amp)
    }
}

pub fn ctqw_packet(n: i64, t: f64, params: &CtqwPacketParams, spec: &QuadratureSpec) -> Result<C64> {
    CtqwPacket::new(*params, spec)?.eval(n, t)
}

pub fn ctqw_packet_oracle(n: i64, t: f64, params: &CtqwPacketParams, spec: &QuadratureSpec) -> Result<C64> {
    CtqwPacket::new(*params, spec)?.eval_oracle(n, t)
}
