//! Direct simulators: the discrete-time step map, the spectral
//! continuous-time and Dirac propagators, and the Trotter continuum-limit
//! test linking the first to the last.
//!
//! All lattices are rings. Every evolution checks that the light cone of the
//! initial support stays [`LIGHT_CONE_MARGIN`] sites away from the wrap point,
//! so results coincide with infinite-lattice dynamics.

use crate::error::{Error, Result};
use crate::lattice::{ScalarLattice, SpinorLattice};
use crate::spectral;
use crate::C64;

pub const LIGHT_CONE_MARGIN: i64 = 8;

/// Sites whose density is below this fraction of the total are treated as
/// outside the initial support.
pub const SUPPORT_REL_EPS: f64 = 1e-20;

fn check_light_cone(
    n_min: i64,
    n_max: i64,
    support: Option<(i64, i64)>,
    reach_sites: f64,
) -> Result<()> {
    let Some((lo, hi)) = support else {
        // nothing to propagate
        return Ok(());
    };
    let reach = reach_sites.ceil() as i64;
    let (reach_lo, reach_hi) = (lo - reach, hi + reach);
    if reach_lo - LIGHT_CONE_MARGIN < n_min || reach_hi + LIGHT_CONE_MARGIN > n_max {
        return Err(Error::LightConeOverflow {
            n_min,
            n_max,
            reach_lo,
            reach_hi,
            margin: LIGHT_CONE_MARGIN,
        });
    }
    Ok(())
}

/// The one-step operator in momentum space, `diag(e^{-ik}, e^{ik}) · exp(-iθσx)`.
pub fn coin_shift_matrix(theta: f64, k: f64) -> [[C64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    let left = C64::from_polar(1.0, -k);
    let right = C64::from_polar(1.0, k);
    [
        [left * c, left * C64::new(0.0, -s)],
        [right * C64::new(0.0, -s), right * c],
    ]
}

/// One step of the discrete-time walk: coin `exp(-iθσx)` on every site, then
/// the upper component moves one site right and the lower one site left.
pub fn dtqw_step(state: &SpinorLattice, theta: f64) -> SpinorLattice {
    let mut out = state.clone();
    step_into(state.up(), state.down(), &mut out, theta);
    out
}

fn step_into(up: &[C64], down: &[C64], out: &mut SpinorLattice, theta: f64) {
    let (s, c) = theta.sin_cos();
    let mis = C64::new(0.0, -s);
    let len = up.len();
    let (out_up, out_down) = out.components_mut();
    for i in 0..len {
        let u = up[i];
        let d = down[i];
        out_up[(i + 1) % len] = u * c + d * mis;
        out_down[(i + len - 1) % len] = u * mis + d * c;
    }
}

/// Inverse of [`dtqw_step`]: opposite shifts, then the conjugate coin.
pub fn dtqw_step_inverse(state: &SpinorLattice, theta: f64) -> SpinorLattice {
    let (s, c) = theta.sin_cos();
    let pis = C64::new(0.0, s);
    let len = state.len();
    let (up, down) = (state.up(), state.down());
    let mut out = state.clone();
    let (out_up, out_down) = out.components_mut();
    for i in 0..len {
        let u = up[(i + 1) % len];
        let d = down[(i + len - 1) % len];
        out_up[i] = u * c + d * pis;
        out_down[i] = u * pis + d * c;
    }
    out
}

/// `steps` applications of [`dtqw_step`].
pub fn dtqw_evolve(state: &SpinorLattice, theta: f64, steps: usize) -> Result<SpinorLattice> {
    check_light_cone(
        state.n_min(),
        state.n_max(),
        state.support(SUPPORT_REL_EPS),
        theta.cos().abs() * steps as f64,
    )?;
    let mut current = state.clone();
    let mut next = state.clone();
    for _ in 0..steps {
        step_into(current.up(), current.down(), &mut next, theta);
        std::mem::swap(&mut current, &mut next);
    }
    Ok(current)
}

/// Exact continuous-time walk `i∂ψ = −γ(ψ(n−1) − 2ψ(n) + ψ(n+1))`: every ring
/// mode is multiplied by `e^{−iω(k)t}` with `ω(k) = 2γ(1 − cos k)`.
pub fn ctqw_evolve(state: &ScalarLattice, gamma: f64, t: f64) -> Result<ScalarLattice> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(format!("hopping rate must be positive, got {gamma}")));
    }
    check_light_cone(
        state.n_min(),
        state.n_max(),
        state.support(SUPPORT_REL_EPS),
        2.0 * gamma * t.abs(),
    )?;
    let len = state.len();
    let mut buf = state.amplitudes().to_vec();
    spectral::forward(&mut buf);
    for (j, v) in buf.iter_mut().enumerate() {
        let k = spectral::wavenumber(j, len, 1.0);
        let omega = 2.0 * gamma * (1.0 - k.cos());
        *v *= C64::from_polar(1.0, -omega * t);
    }
    spectral::inverse(&mut buf);
    ScalarLattice::from_amplitudes(state.n_min(), buf)
}

/// Spectral propagation of `i∂Ψ = (−iσz∂x + mσx)Ψ` on a periodic grid: each
/// Fourier mode `p` gets `exp(−i(σz p + σx m)t) = cos(ωt) − i sin(ωt) H(p)/ω`.
pub fn dirac_evolve(state: &SpinorLattice, mass: f64, t: f64) -> Result<SpinorLattice> {
    if !(mass >= 0.0 && mass.is_finite()) {
        return Err(Error::invalid(format!("mass must be non-negative, got {mass}")));
    }
    let eps = state.spacing();
    check_light_cone(
        state.n_min(),
        state.n_max(),
        state.support(SUPPORT_REL_EPS),
        t.abs() / eps,
    )?;
    let len = state.len();
    let mut up = state.up().to_vec();
    let mut down = state.down().to_vec();
    spectral::forward(&mut up);
    spectral::forward(&mut down);
    for j in 0..len {
        let p = spectral::wavenumber(j, len, eps);
        let omega = p.hypot(mass);
        let cos = (omega * t).cos();
        // sin(ωt)/ω → t as ω → 0
        let sinc = if omega * t.abs() > 1e-12 {
            (omega * t).sin() / omega
        } else {
            t
        };
        let (u, d) = (up[j], down[j]);
        let mi = C64::new(0.0, -sinc);
        up[j] = u * cos + mi * (u * p + d * mass);
        down[j] = d * cos + mi * (u * mass - d * p);
    }
    spectral::inverse(&mut up);
    spectral::inverse(&mut down);
    SpinorLattice::from_components(state.n_min(), up, down, eps)
}

/// Smooth spinor test state for the continuum-limit check: Gaussian envelope
/// `exp(−(x σp)²)` with momentum spread `σp = cutoff / 8`, spinor `(1, 1)/√2`.
pub fn trotter_test_state(momentum_cutoff: f64, t: f64, eps: f64) -> Result<SpinorLattice> {
    let sigma_p = momentum_cutoff / 8.0;
    let half_length = t.abs() + 12.0 / sigma_p;
    let n_half = (half_length / eps).ceil() as i64 + 2 * LIGHT_CONE_MARGIN;
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    let mut state = SpinorLattice::from_fn(-n_half, n_half - 1, eps, |n| {
        let x = n as f64 * eps;
        let g = (-(x * sigma_p).powi(2)).exp() * amp;
        [C64::new(g, 0.0), C64::new(g, 0.0)]
    })?;
    state.normalize()?;
    Ok(state)
}

/// L² distance between the discrete walk with `θ = mε` run for `round(t/ε)`
/// steps on a grid of spacing `ε` and the exact Dirac propagation of the same
/// state for `steps·ε`, for every `ε` in `epsilons`.
pub fn trotter_convergence(
    mass: f64,
    momentum_cutoff: f64,
    t: f64,
    epsilons: &[f64],
) -> Result<Vec<f64>> {
    if !(mass >= 0.0 && mass.is_finite()) {
        return Err(Error::invalid(format!("mass must be non-negative, got {mass}")));
    }
    if !(momentum_cutoff > 0.0) || !(t >= 0.0) {
        return Err(Error::invalid("momentum cutoff must be positive and t non-negative"));
    }
    if epsilons.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::invalid("grid spacings must be strictly decreasing"));
    }
    epsilons
        .iter()
        .map(|&eps| {
            if !(eps > 0.0) || mass * eps >= std::f64::consts::FRAC_PI_2 {
                return Err(Error::invalid(format!(
                    "spacing {eps} must be positive with m·ε < π/2"
                )));
            }
            if std::f64::consts::PI / eps < momentum_cutoff {
                return Err(Error::invalid(format!(
                    "spacing {eps} cannot resolve momentum cutoff {momentum_cutoff}"
                )));
            }
            let steps = (t / eps).round() as usize;
            let state = trotter_test_state(momentum_cutoff, t, eps)?;
            let walked = dtqw_evolve(&state, mass * eps, steps)?;
            let exact = dirac_evolve(&state, mass, steps as f64 * eps)?;
            walked.distance(&exact)
        })
        .collect()
}
