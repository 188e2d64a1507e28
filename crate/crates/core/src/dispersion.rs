//! Dispersion relations `ω(k)` and group velocities of the four walk models,
//! plus the derived constants (maximum speed, effective mass, Compton
//! wavelength).
//!
//! `ω` is always the principal positive branch. The negative band is reached
//! only through the projectors in [`crate::wavepackets`].

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DispersionModel {
    /// Discrete-time walk with coin `exp(-i θ σx)`, `0 < θ < π/2`.
    Dtqw { theta: f64 },
    /// Continuum Dirac equation with `ħ = c = 1`.
    Dirac { mass: f64 },
    /// Continuous-time walk with hopping rate `γ`.
    Ctqw { gamma: f64 },
    /// Hadamard-coin walk, `sin ω = sin k / √2`.
    Hadamard,
}

impl DispersionModel {
    pub fn dtqw(theta: f64) -> Result<Self> {
        let m = DispersionModel::Dtqw { theta };
        m.validate()?;
        Ok(m)
    }

    pub fn dirac(mass: f64) -> Result<Self> {
        let m = DispersionModel::Dirac { mass };
        m.validate()?;
        Ok(m)
    }

    pub fn ctqw(gamma: f64) -> Result<Self> {
        let m = DispersionModel::Ctqw { gamma };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DispersionModel::Dtqw { theta } if !(theta > 0.0 && theta < FRAC_PI_2) => Err(
                Error::invalid(format!("coin angle must lie in (0, π/2), got {theta}")),
            ),
            DispersionModel::Dirac { mass } if !(mass > 0.0 && mass.is_finite()) => {
                Err(Error::invalid(format!("mass must be positive, got {mass}")))
            }
            DispersionModel::Ctqw { gamma } if !(gamma > 0.0 && gamma.is_finite()) => Err(
                Error::invalid(format!("hopping rate must be positive, got {gamma}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DispersionModel::Dtqw { .. } => "DTQW",
            DispersionModel::Dirac { .. } => "Dirac",
            DispersionModel::Ctqw { .. } => "CTQW",
            DispersionModel::Hadamard => "Hadamard",
        }
    }

    pub fn omega(&self, k: f64) -> f64 {
        match *self {
            DispersionModel::Dtqw { theta } => (theta.cos() * k.cos()).clamp(-1.0, 1.0).acos(),
            DispersionModel::Dirac { mass } => k.hypot(mass),
            DispersionModel::Ctqw { gamma } => 2.0 * gamma * (1.0 - k.cos()),
            DispersionModel::Hadamard => (k.sin() * FRAC_1_SQRT_2).asin(),
        }
    }

    /// `dω/dk` of the branch returned by [`omega`](Self::omega).
    pub fn group_velocity(&self, k: f64) -> f64 {
        match *self {
            DispersionModel::Dtqw { theta } => {
                let c = theta.cos();
                let (sk, ck) = k.sin_cos();
                // sin ω = √(1 − c² cos² k) ≥ sin θ, so this only vanishes as θ → 0
                let sin_omega = (1.0 - (c * ck).powi(2)).max(0.0).sqrt();
                if sin_omega > 1e-300 {
                    c * sk / sin_omega
                } else {
                    // θ → 0 limit: ω = |k|
                    k.signum()
                }
            }
            DispersionModel::Dirac { mass } => {
                let w = k.hypot(mass);
                if w > 0.0 {
                    k / w
                } else {
                    0.0
                }
            }
            DispersionModel::Ctqw { gamma } => 2.0 * gamma * k.sin(),
            DispersionModel::Hadamard => {
                let (sk, ck) = k.sin_cos();
                ck / (2.0 - sk * sk).sqrt()
            }
        }
    }

    /// Supremum of `|dω/dk|`, the model's speed of light.
    pub fn max_speed(&self) -> f64 {
        match *self {
            DispersionModel::Dtqw { theta } => theta.cos(),
            DispersionModel::Dirac { .. } => 1.0,
            DispersionModel::Ctqw { gamma } => 2.0 * gamma,
            DispersionModel::Hadamard => FRAC_1_SQRT_2,
        }
    }

    /// `[d²ω/dk²]⁻¹` at `k = 0`.
    pub fn effective_mass(&self) -> Result<f64> {
        match *self {
            DispersionModel::Dtqw { theta } => Ok(theta.tan()),
            DispersionModel::Dirac { mass } => Ok(mass),
            _ => Err(Error::Unsupported {
                quantity: "effective mass",
                model: self.name(),
            }),
        }
    }

    /// `1 / (m c)`; for the discrete walk this is `1 / sin θ`.
    pub fn compton_wavelength(&self) -> Result<f64> {
        let mass = self.effective_mass().map_err(|_| Error::Unsupported {
            quantity: "Compton wavelength",
            model: self.name(),
        })?;
        Ok(1.0 / (mass * self.max_speed()))
    }
}

/// Continuum localization `a` matching a discrete-walk localization `α`:
/// `a = α / tan θ`.
pub fn localization_correspondence(theta: f64, alpha: f64) -> f64 {
    alpha / theta.tan()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{PI, SQRT_2};

    const THETA: f64 = 3.0 * PI / 7.0;

    fn models() -> Vec<DispersionModel> {
        vec![
            DispersionModel::Dtqw { theta: THETA },
            DispersionModel::Dtqw { theta: PI / 4.0 },
            DispersionModel::Dtqw { theta: 0.05 },
            DispersionModel::Dirac { mass: 1.0 },
            DispersionModel::Ctqw { gamma: THETA.cos() / 2.0 },
            DispersionModel::Hadamard,
        ]
    }

    #[test]
    fn omega_examples() {
        let dtqw = DispersionModel::Dtqw { theta: THETA };
        assert!((dtqw.omega(0.0) - THETA).abs() < 1e-15);
        assert!((dtqw.omega(PI / 2.0) - PI / 2.0).abs() < 1e-15);
        assert_eq!(DispersionModel::Dirac { mass: 1.0 }.omega(0.0), 1.0);
    }

    #[test]
    fn velocity_examples() {
        let dirac = DispersionModel::Dirac { mass: 1.0 };
        let v = dirac.group_velocity(1e6);
        assert!(v < 1.0 && v > 1.0 - 1e-9);
        let dtqw = DispersionModel::Dtqw { theta: THETA };
        assert!((dtqw.group_velocity(PI / 2.0) - 0.2225).abs() < 5e-4);
        assert!((dtqw.group_velocity(PI / 2.0) - THETA.cos()).abs() < 1e-15);
        let ctqw = DispersionModel::Ctqw { gamma: 0.3 };
        assert!((ctqw.group_velocity(PI / 2.0) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn constants() {
        let walk = DispersionModel::Dtqw { theta: PI / 4.0 };
        assert!((walk.max_speed() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((walk.effective_mass().unwrap() - 1.0).abs() < 1e-12);
        assert!((walk.compton_wavelength().unwrap() - SQRT_2).abs() < 1e-12);

        let fig2 = DispersionModel::Dtqw { theta: THETA };
        assert!((fig2.effective_mass().unwrap() - 4.38).abs() < 5e-3);
        let lambda = fig2.compton_wavelength().unwrap();
        assert!((lambda - 1.0 / THETA.sin()).abs() < 1e-12);
        assert!((lambda - 1.0257).abs() < 1e-4);

        let ctqw = DispersionModel::Ctqw { gamma: THETA.cos() / 2.0 };
        assert!((ctqw.max_speed() - 0.2225).abs() < 5e-4);
        assert_eq!(DispersionModel::Dirac { mass: 3.0 }.max_speed(), 1.0);
        assert_eq!(DispersionModel::Dirac { mass: 2.0 }.effective_mass(), Ok(2.0));
        assert_eq!(DispersionModel::Dirac { mass: 1.0 }.compton_wavelength(), Ok(1.0));
    }

    #[test]
    fn unsupported_constants() {
        for m in [DispersionModel::Hadamard, DispersionModel::Ctqw { gamma: 1.0 }] {
            assert!(matches!(m.effective_mass(), Err(Error::Unsupported { .. })));
            assert!(matches!(m.compton_wavelength(), Err(Error::Unsupported { .. })));
        }
    }

    #[test]
    fn correspondence() {
        assert!((localization_correspondence(THETA, 2.2) - 0.502).abs() < 1e-3);
        assert!((localization_correspondence(THETA, 22.0) - 5.02).abs() < 1e-2);
        assert!((localization_correspondence(PI / 4.0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(DispersionModel::dtqw(0.0).is_err());
        assert!(DispersionModel::dtqw(PI / 2.0).is_err());
        assert!(DispersionModel::dirac(-1.0).is_err());
        assert!(DispersionModel::ctqw(0.0).is_err());
        assert!(DispersionModel::dtqw(1.0).is_ok());
    }

    #[test]
    fn speed_bound_on_grid() {
        for m in models() {
            let c = m.max_speed();
            for i in 0..10_000 {
                let k = -PI + 2.0 * PI * i as f64 / 10_000.0;
                let k = if let DispersionModel::Dirac { .. } = m { k * 50.0 } else { k };
                assert!(m.group_velocity(k).abs() <= c * (1.0 + 1e-14), "{m:?} k={k}");
            }
        }
    }

    #[test]
    fn evenness() {
        for m in models() {
            if m == DispersionModel::Hadamard {
                continue;
            }
            for i in 0..100 {
                let k = 0.031 * i as f64;
                assert_eq!(m.omega(k), m.omega(-k));
            }
        }
    }

    #[test]
    fn small_k_expansion_is_quadratic() {
        let m = DispersionModel::Dtqw { theta: THETA };
        let mass = m.effective_mass().unwrap();
        let ratios: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
            .iter()
            .map(|&k| (m.omega(k) - m.omega(0.0) - k * k / (2.0 * mass)) / k.powi(4))
            .collect();
        for r in &ratios {
            assert!(r.abs() < 1.0, "{ratios:?}");
        }
        // O(k⁴): the ratio settles to a constant
        assert!((ratios[3] - ratios[2]).abs() < 0.05 * ratios[2].abs().max(1e-3));
    }

    #[test]
    fn small_cos_theta_form() {
        let theta = 0.49 * PI;
        let c = theta.cos();
        let m = DispersionModel::Dtqw { theta };
        let worst = (0..=2000)
            .map(|i| -PI + 2.0 * PI * i as f64 / 2000.0)
            .map(|k| (m.omega(k) - PI / 2.0 + c * k.cos()).abs())
            .fold(0.0, f64::max);
        assert!(worst < c * c, "{worst} vs {}", c * c);
    }

    #[test]
    fn hadamard_small_k() {
        let m = DispersionModel::Hadamard;
        let k: f64 = 0.01;
        let cubic = k / SQRT_2 - k.powi(3) / (12.0 * SQRT_2);
        assert!((m.omega(k) - cubic).abs() < 1e-11);
    }

    proptest! {
        #[test]
        fn velocity_is_derivative(k in -3.1f64..3.1, idx in 0usize..6) {
            let m = models()[idx];
            let h = 1e-5;
            let fd = (m.omega(k + h) - m.omega(k - h)) / (2.0 * h);
            prop_assert!((fd - m.group_velocity(k)).abs() < 1e-6);
        }
    }
}
