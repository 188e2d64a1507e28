//! Densities, moments, spreading fits, light-cone leakage and the spinor
//! entanglement entropy.

use rayon::prelude::*;

use crate::dispersion::DispersionModel;
use crate::error::{Error, Result};
use crate::lattice::{ScalarLattice, SpinorLattice};
use crate::numerics::QuadratureSpec;
use crate::spectral;
use crate::wavepackets::{DiracPacket, DiracPacketParams, DtqwPacket, DtqwPacketParams, InVariant};
use crate::C64;

/// Anything with amplitudes on a uniform grid.
pub trait LatticeState {
    fn first_site(&self) -> i64;
    fn spacing(&self) -> f64;
    /// Amplitude components, each indexed from `first_site`.
    fn components(&self) -> Vec<&[C64]>;
}

impl LatticeState for SpinorLattice {
    fn first_site(&self) -> i64 {
        self.n_min()
    }

    fn spacing(&self) -> f64 {
        SpinorLattice::spacing(self)
    }

    fn components(&self) -> Vec<&[C64]> {
        vec![self.up(), self.down()]
    }
}

impl LatticeState for ScalarLattice {
    fn first_site(&self) -> i64 {
        self.n_min()
    }

    fn spacing(&self) -> f64 {
        1.0
    }

    fn components(&self) -> Vec<&[C64]> {
        vec![self.amplitudes()]
    }
}

/// `ρ` sampled at `positions`, each sample standing for a cell of width `weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub positions: Vec<f64>,
    pub rho: Vec<f64>,
    pub weight: f64,
}

impl DensityProfile {
    /// `Σ ρ · weight`.
    pub fn total(&self) -> f64 {
        self.rho.iter().sum::<f64>() * self.weight
    }

    /// `Σ |ρ − ρ'| · weight` between two profiles on the same positions.
    pub fn l1_distance(&self, other: &DensityProfile) -> Result<f64> {
        if self.positions != other.positions || self.weight != other.weight {
            return Err(Error::invalid("density profiles live on different grids"));
        }
        Ok(self.rho.iter().zip(&other.rho).map(|(a, b)| (a - b).abs()).sum::<f64>() * self.weight)
    }

    /// Largest pointwise `|ρ − ρ'|`.
    pub fn max_abs_diff(&self, other: &DensityProfile) -> Result<f64> {
        if self.positions != other.positions {
            return Err(Error::invalid("density profiles live on different grids"));
        }
        Ok(self.rho.iter().zip(&other.rho).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSummary {
    pub norm: f64,
    pub mean: f64,
    pub variance: f64,
}

/// Least-squares line through `(t², variance)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadingFit {
    /// Initial variance `(Δx)₀²`.
    pub intercept: f64,
    /// `(Δv)²`.
    pub slope: f64,
    pub r_squared: f64,
}

pub fn density<S: LatticeState>(state: &S) -> DensityProfile {
    let comps = state.components();
    let len = comps.first().map_or(0, |c| c.len());
    let h = state.spacing();
    let n0 = state.first_site();
    DensityProfile {
        positions: (0..len).map(|i| (n0 + i as i64) as f64 * h).collect(),
        rho: (0..len).map(|i| comps.iter().map(|c| c[i].norm_sqr()).sum()).collect(),
        weight: h,
    }
}

pub fn moments(profile: &DensityProfile) -> Result<MomentSummary> {
    let norm = profile.total();
    if !(norm > 0.0) {
        return Err(Error::invalid("moments of an empty density"));
    }
    let w = profile.weight / norm;
    let mean: f64 = profile.positions.iter().zip(&profile.rho).map(|(x, r)| x * r * w).sum();
    let variance: f64 = profile
        .positions
        .iter()
        .zip(&profile.rho)
        .map(|(x, r)| (x - mean).powi(2) * r * w)
        .sum();
    Ok(MomentSummary {
        norm,
        mean,
        variance: variance.max(0.0),
    })
}

/// Variance of the group velocity `dω/dk` under the momentum distribution of
/// `state`. Only meaningful for packets confined to one band.
pub fn velocity_variance<S: LatticeState>(state: &S, model: &DispersionModel) -> f64 {
    let comps = state.components();
    let len = comps.first().map_or(0, |c| c.len());
    // momenta of the ring the state lives on
    let m = len;
    let mut weight = vec![0.0; m];
    for c in comps {
        let mut buf = c.to_vec();
        spectral::forward(&mut buf);
        for (w, v) in weight.iter_mut().zip(&buf) {
            *w += v.norm_sqr();
        }
    }
    let total: f64 = weight.iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    let h = state.spacing();
    let v: Vec<f64> = (0..m).map(|j| model.group_velocity(spectral::wavenumber(j, m, h))).collect();
    let mean: f64 = v.iter().zip(&weight).map(|(v, w)| v * w).sum::<f64>() / total;
    v.iter().zip(&weight).map(|(v, w)| (v - mean).powi(2) * w).sum::<f64>() / total
}

pub fn spreading_fit(times: &[f64], variances: &[f64]) -> Result<SpreadingFit> {
    if times.len() != variances.len() {
        return Err(Error::invalid(format!(
            "{} times but {} variances",
            times.len(),
            variances.len()
        )));
    }
    if times.len() < 3 {
        return Err(Error::invalid("a spreading fit needs at least three samples"));
    }
    let n = times.len() as f64;
    let x: Vec<f64> = times.iter().map(|t| t * t).collect();
    let mx = x.iter().sum::<f64>() / n;
    let my = variances.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= f64::EPSILON * mx * mx * n {
        return Err(Error::DegenerateFit("all sample times have the same t²".into()));
    }
    let sxy: f64 = x.iter().zip(variances).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = variances.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(SpreadingFit {
        intercept,
        slope,
        r_squared,
    })
}

/// Probability at `|position| > speed · t + buffer`.
pub fn lightcone_leakage(profile: &DensityProfile, speed: f64, t: f64, buffer: f64) -> Result<f64> {
    if !(buffer >= 0.0) {
        return Err(Error::invalid(format!("buffer must be non-negative, got {buffer}")));
    }
    let edge = speed * t.abs() + buffer;
    Ok(profile
        .positions
        .iter()
        .zip(&profile.rho)
        .filter(|(x, _)| x.abs() > edge)
        .map(|(_, r)| r)
        .sum::<f64>()
        * profile.weight)
}

/// `Σₙ ψ(n) ψ(n)† · spacing`, not trace-normalized.
pub fn reduced_spinor_density(state: &SpinorLattice) -> [[C64; 2]; 2] {
    let h = state.spacing();
    let mut rho = [[C64::new(0.0, 0.0); 2]; 2];
    for (u, d) in state.up().iter().zip(state.down()) {
        rho[0][0] += u * u.conj();
        rho[0][1] += u * d.conj();
        rho[1][0] += d * u.conj();
        rho[1][1] += d * d.conj();
    }
    rho.map(|row| row.map(|v| v * h))
}

/// Von Neumann entropy in bits of a 2×2 density matrix, after normalizing its
/// trace to one.
pub fn entropy_of(rho: &[[C64; 2]; 2]) -> Result<f64> {
    let trace = rho[0][0].re + rho[1][1].re;
    if !(trace > 0.0) {
        return Err(Error::invalid("reduced density matrix has no weight"));
    }
    let asym = (rho[0][1] - rho[1][0].conj())
        .norm()
        .max(rho[0][0].im.abs())
        .max(rho[1][1].im.abs())
        / trace;
    if asym > 1e-10 {
        return Err(Error::NonHermitian(asym));
    }
    let (p, q) = (rho[0][0].re / trace, rho[1][1].re / trace);
    let off = (rho[0][1] + rho[1][0].conj()) * 0.5 / trace;
    // eigenvalues ½ ± √((p−q)²/4 + |off|²)
    let r = (0.25 * (p - q).powi(2) + off.norm_sqr()).sqrt();
    let mut s = 0.0;
    for lambda in [0.5 + r, 0.5 - r] {
        if lambda < -1e-12 {
            return Err(Error::Domain(format!("negative eigenvalue {lambda} in a density matrix")));
        }
        let lambda = lambda.clamp(0.0, 1.0);
        if lambda > 0.0 {
            s -= lambda * lambda.log2();
        }
    }
    Ok(s.clamp(0.0, 1.0))
}

/// Entanglement between the spinor and position, in ebits.
pub fn spinor_entropy(state: &SpinorLattice) -> Result<f64> {
    entropy_of(&reduced_spinor_density(state))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyModel {
    Dirac { mass: f64 },
    /// Walk packets with `α = a · tan θ`.
    Dtqw { theta: f64 },
}

/// Grid carrying a Dirac packet at time `t` with tail mass below about 1e-10:
/// the density falls off like `e^{−2m(Re s − a)}` outside the light cone and
/// varies on the scale `min(a, √(a/m))`.
pub fn dirac_grid(mass: f64, a: f64, t: f64) -> (i64, f64) {
    let half = a + t.abs() + 16.0 / mass + 5.0;
    let h = (2.0 * std::f64::consts::PI * a / 32.0).min(0.25).min((a / mass).sqrt() / 4.0);
    ((half / h).ceil() as i64, h)
}

/// The Dirac packet sampled on a grid wide enough for entropy and norm
/// integrals at time `t`.
pub fn dirac_packet_grid(params: &DiracPacketParams, t: f64, spec: &QuadratureSpec) -> Result<SpinorLattice> {
    let (n, h) = dirac_grid(params.mass, params.a, t);
    DiracPacket::new(*params, spec)?.sample(-n, n, h, t)
}

/// Sites holding a walk packet of localization `alpha` at `tau`.
pub fn dtqw_packet_range(theta: f64, alpha: f64, tau: usize) -> i64 {
    (theta.cos() * tau as f64).ceil() as i64 + 40 + (12.0 * alpha.sqrt()).ceil() as i64
}

fn entropy_at(model: EntropyModel, a: f64, spec: &QuadratureSpec) -> Result<f64> {
    match model {
        EntropyModel::Dirac { mass } => {
            let params = DiracPacketParams::new(mass, a)?;
            spinor_entropy(&dirac_packet_grid(&params, 0.0, spec)?)
        }
        EntropyModel::Dtqw { theta } => {
            let alpha = a * theta.tan();
            let params = DtqwPacketParams::new(theta, alpha)?;
            let half = dtqw_packet_range(theta, alpha, 0);
            let state = DtqwPacket::new(params, InVariant::Exact, spec)?.profile(-half, half, 0)?;
            spinor_entropy(&state)
        }
    }
}

/// `(a, entropy)` of the initial packet for every `a`.
pub fn entropy_vs_localization(
    model: EntropyModel,
    a_values: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<(f64, f64)>> {
    if let Some(bad) = a_values.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
        return Err(Error::invalid(format!("localization values must be positive, got {bad}")));
    }
    if a_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("localization values must be ascending"));
    }
    a_values.par_iter().map(|&a| Ok((a, entropy_at(model, a, spec)?))).collect()
}

/// `count` logarithmically spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && count >= 2) {
        return Err(Error::invalid(format!("bad log grid [{lo}, {hi}] with {count} points")));
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|i| match i {
            0 => lo,
            i if i == count - 1 => hi,
            i => (l0 + (l1 - l0) * i as f64 / (count - 1) as f64).exp(),
        })
        .collect())
}
