use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::SpinorLattice;
use crate::numerics::{bessel_k01_scaled, periodic_quadrature_n, QuadratureSpec};
use crate::{Spinor, C64};

/// `e^{−a(ω − m)}` is dropped once it falls below this in the momentum
/// integral.
const MOMENTUM_TAIL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracPacketParams {
    pub mass: f64,
    /// Localization length; small `a` is the relativistic regime.
    pub a: f64,
}

impl DiracPacketParams {
    pub fn new(mass: f64, a: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite() && a > 0.0 && a.is_finite()) {
            return Err(Error::invalid(format!(
                "Dirac packet needs mass > 0 and a > 0, got m={mass}, a={a}"
            )));
        }
        Ok(DiracPacketParams { mass, a })
    }
}

/// Positive-energy Dirac packet
///
/// ```text
/// Ψ(x,t) = m𝒩/(π√2) · ( s⁻¹K₁(ms)[a + i(t+x)] + K₀(ms),
///                       s⁻¹K₁(ms)[a + i(t−x)] + K₀(ms) )
/// s = √(x² + (a+it)²),   𝒩 = √(π/2m) [K₁(2ma) + K₀(2ma)]^{−1/2}
/// ```
///
/// Internally every `K_ν` is carried as `e^{z}K_ν(z)`; the factors
/// `e^{ma}` from `𝒩` and `e^{−ms}` from the amplitude combine into
/// `e^{m(a−s)}`, which has modulus at most one because `re s ≥ a`.
#[derive(Debug, Clone)]
pub struct DiracPacket {
    params: DiracPacketParams,
    spec: QuadratureSpec,
    /// `𝒩 e^{−ma}`
    norm_scaled: f64,
}

impl DiracPacket {
    pub fn new(params: DiracPacketParams, spec: &QuadratureSpec) -> Result<Self> {
        let DiracPacketParams { mass, a } = DiracPacketParams::new(params.mass, params.a)?;
        let (k0, k1) = bessel_k01_scaled(C64::new(2.0 * mass * a, 0.0), spec)?;
        let bracket = (k0 + k1).re;
        let norm_scaled = (PI / (2.0 * mass)).sqrt() / bracket.sqrt();
        Ok(DiracPacket {
            params,
            spec: *spec,
            norm_scaled,
        })
    }

    pub fn params(&self) -> DiracPacketParams {
        self.params
    }

    /// `𝒩`; overflows once `m·a` exceeds roughly 700.
    pub fn normalization(&self) -> f64 {
        self.norm_scaled * (self.params.mass * self.params.a).exp()
    }

    /// Closed-form amplitude at `(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> Result<Spinor> {
        let DiracPacketParams { mass, a } = self.params;
        let at = C64::new(a, t);
        // principal root: im(s²) = 2at, so re(s) ≥ a > 0 for t ≥ 0
        let s = (x * x + at * at).sqrt();
        let z = s * mass;
        if !(z.re > 0.0) {
            return Err(Error::Domain(format!(
                "re(m·s) = {} ≤ 0 at x={x}, t={t}",
                z.re
            )));
        }
        let (k0, k1) = bessel_k01_scaled(z, &self.spec)?;
        let pref = (C64::new(mass * a, 0.0) - z).exp()
            * (mass * self.norm_scaled / (PI * std::f64::consts::SQRT_2));
        let k1_s = k1 / s;
        Ok([
            pref * (k1_s * C64::new(a, t + x) + k0),
            pref * (k1_s * C64::new(a, t - x) + k0),
        ])
    }

    /// Direct quadrature of the momentum representation
    /// `𝒩/(2π) ∫ (I + H(p)/ω) (1,1)ᵀ/√2 e^{ipx − (a+it)ω} dp`,
    /// with `H(p) = σz p + σx m`.
    pub fn eval_oracle(&self, x: f64, t: f64) -> Result<Spinor> {
        let DiracPacketParams { mass, a } = self.params;
        let omega_cut = mass - MOMENTUM_TAIL.ln() / a;
        let p_cut = (omega_cut * omega_cut - mass * mass).sqrt();
        // phase px − tω winds (|x| + |t|) per unit momentum
        let nyquist = (2.0 * p_cut * (x.abs() + t.abs() + 1.0) / PI).ceil() as usize;
        let start = nyquist.max(self.spec.initial_points).next_power_of_two();
        let weight = self.norm_scaled * FRAC_1_SQRT_2;
        // p = p_cut·k/π maps [−p_cut, p_cut] onto one period; the integrand is
        // negligible at both ends so the rule stays spectrally accurate
        let [up, down] = periodic_quadrature_n(
            |k| {
                let p = p_cut * k / PI;
                let omega = p.hypot(mass);
                let env = C64::from_polar(
                    weight * (-a * (omega - mass)).exp(),
                    p * x - t * omega,
                );
                [
                    env * (1.0 + (mass + p) / omega),
                    env * (1.0 + (mass - p) / omega),
                ]
            },
            &self.spec,
            start,
        )?;
        // (2π)⁻¹∫_{−π}^{π} dk = (2 p_cut)⁻¹ ∫ dp; restore the (2π)⁻¹ dp measure
        let jacobian = p_cut / PI;
        Ok([up * jacobian, down * jacobian])
    }

    /// Closed form sampled at `x = n · spacing` for `n` in `n_min..=n_max`.
    pub fn sample(&self, n_min: i64, n_max: i64, spacing: f64, t: f64) -> Result<SpinorLattice> {
        let values: Vec<Spinor> = (n_min..=n_max)
            .into_par_iter()
            .map(|n| self.eval(n as f64 * spacing, t))
            .collect::<Result<_>>()?;
        let (up, down) = values.into_iter().map(|[u, d]| (u, d)).unzip();
        SpinorLattice::from_components(n_min, up, down, spacing)
    }
}

pub fn dirac_packet(x: f64, t: f64, params: &DiracPacketParams, spec: &QuadratureSpec) -> Result<Spinor> {
    DiracPacket::new(*params, spec)?.eval(x, t)
}

pub fn dirac_packet_oracle(
    x: f64,
    t: f64,
    params: &DiracPacketParams,
    spec: &QuadratureSpec,
) -> Result<Spinor> {
    DiracPacket::new(*params, spec)?.eval_oracle(x, t)
}

pub fn dirac_normalization(params: &DiracPacketParams, spec: &QuadratureSpec) -> Result<f64> {
    Ok(DiracPacket::new(*params, spec)?.normalization())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn packet(a: f64) -> DiracPacket {
        DiracPacket::new(DiracPacketParams::new(1.0, a).unwrap(), &QuadratureSpec::default()).unwrap()
    }

    fn rho(v: Spinor) -> f64 {
        v[0].norm_sqr() + v[1].norm_sqr()
    }

    #[test]
    fn origin_is_real_and_symmetric() {
        let p = packet(5.0);
        let [u, d] = p.eval(0.0, 0.0).unwrap();
        assert!((u - d).norm() < 1e-15);
        assert!(u.re > 0.0 && u.im.abs() < 1e-15);
        for x in [0.5, 3.0, 11.0] {
            assert!((rho(p.eval(x, 0.0).unwrap()) - rho(p.eval(-x, 0.0).unwrap())).abs() < 1e-15);
        }
    }

    #[test]
    fn reflection_swaps_components() {
        let p = packet(0.5);
        for &(x, t) in &[(1.5, 0.0), (20.0, 50.0), (-7.0, 3.0)] {
            let [u, d] = p.eval_oracle(x, t).unwrap();
            let [um, dm] = p.eval_oracle(-x, t).unwrap();
            assert!((u - dm).norm() < 1e-10 && (d - um).norm() < 1e-10);
        }
    }

    #[test]
    fn closed_form_matches_oracle_spot_checks() {
        for a in [0.5, 5.0] {
            let p = packet(a);
            for &(x, t) in &[(0.0, 0.0), (3.0, 0.0), (10.0, 50.0), (-30.0, 50.0), (49.0, 50.0)] {
                let c = p.eval(x, t).unwrap();
                let o = p.eval_oracle(x, t).unwrap();
                assert!((c[0] - o[0]).norm() < 1e-9 && (c[1] - o[1]).norm() < 1e-9, "a={a} x={x} t={t}");
            }
        }
    }

    #[test]
    fn normalization_integral() {
        // ∫ρ dx by the trapezoid rule at spacing 0.05 over [−200, 200]
        let p = packet(0.5);
        for t in [0.0, 50.0] {
            let lat = p.sample(-4000, 4000, 0.05, t).unwrap();
            assert!((lat.norm_sqr() - 1.0).abs() < 1e-8, "t={t}: {}", lat.norm_sqr());
        }
    }

    #[test]
    fn normalization_grows_with_a() {
        let spec = QuadratureSpec::default();
        let n_small = dirac_normalization(&DiracPacketParams::new(1.0, 0.5).unwrap(), &spec).unwrap();
        let n_large = dirac_normalization(&DiracPacketParams::new(1.0, 5.0).unwrap(), &spec).unwrap();
        assert!(n_large > n_small);
    }

    #[test]
    fn relativistic_fronts() {
        // a ≪ 1/m: the bulk rides the light cone
        let p = packet(0.05);
        let t = 50.0;
        let lat = p.sample(-1000, 1000, 0.1, t).unwrap();
        let (mut best_x, mut best) = (0.0, 0.0);
        for n in lat.sites().filter(|&n| n > 0) {
            let r = rho(lat.get(n).unwrap());
            if r > best {
                best = r;
                best_x = lat.position(n);
            }
        }
        assert!((best_x - t).abs() <= 2.0, "front at {best_x}");
        assert!(rho(p.eval(t + 10.0, t).unwrap()) < 1e-3 * best);
    }

    #[test]
    fn heavy_packet_is_single_hump() {
        let p = DiracPacket::new(DiracPacketParams::new(20.0, 5.0).unwrap(), &QuadratureSpec::default()).unwrap();
        let xs: Vec<f64> = (-200..=200).map(|i| i as f64 * 0.1).collect();
        let r: Vec<f64> = xs.iter().map(|&x| rho(p.eval_oracle(x, 5.0).unwrap())).collect();
        let peak = r.iter().cloned().enumerate().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0;
        assert_eq!(xs[peak], 0.0);
        // monotone wherever the density is above quadrature noise
        let floor = 1e-10 * r[peak];
        assert!(r[..peak].windows(2).all(|w| w[1] >= w[0] || w[1] < floor));
        assert!(r[peak..].windows(2).all(|w| w[1] <= w[0] || w[0] < floor));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(DiracPacketParams::new(0.0, 1.0).is_err());
        assert!(DiracPacketParams::new(1.0, -0.5).is_err());
    }
}
