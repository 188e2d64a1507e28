use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::C64;

/// Controls for the point-doubling trapezoid rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Stop once two successive refinements differ by less than this, or by
    /// less than the rounding floor `128 ε ∫|f|` when that is larger.
    pub abs_tol: f64,
    pub max_doublings: u32,
    /// Minimum number of nodes on the first pass (power of two, at least 8).
    pub initial_points: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            max_doublings: 20,
            initial_points: 64,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, max_doublings: u32, initial_points: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            abs_tol,
            max_doublings,
            initial_points,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Same spec with a different absolute tolerance.
    pub fn with_tol(self, abs_tol: f64) -> Self {
        QuadratureSpec { abs_tol, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::invalid(format!(
                "abs_tol must be positive and finite, got {}",
                self.abs_tol
            )));
        }
        if self.initial_points < 8 || !self.initial_points.is_power_of_two() {
            return Err(Error::invalid(format!(
                "initial_points must be a power of two >= 8, got {}",
                self.initial_points
            )));
        }
        Ok(())
    }
}

fn max_change<const D: usize>(a: &[C64; D], b: &[C64; D]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Rounding floor for a sum whose terms have average magnitude `mean_abs`.
fn rounding_floor(mean_abs: f64) -> f64 {
    128.0 * f64::EPSILON * mean_abs
}

fn check_finite<const D: usize>(v: &[C64; D]) -> Result<()> {
    if v.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Domain("integrand produced a non-finite value".into()))
    }
}

/// `(2π)⁻¹ ∫_{-π}^{π} f(k) dk` for vector-valued `f`, by the uniform
/// trapezoid rule doubled from `start_points` nodes.
pub(crate) fn periodic_quadrature_n<const D: usize, F>(
    f: F,
    spec: &QuadratureSpec,
    start_points: usize,
) -> Result<[C64; D]>
where
    F: Fn(f64) -> [C64; D],
{
    spec.validate()?;
    let mut n = start_points.max(spec.initial_points);
    let mut sum = [C64::new(0.0, 0.0); D];
    let mut abs_sum = 0.0;
    let accumulate = |sum: &mut [C64; D], abs_sum: &mut f64, k: f64| {
        let v = f(k);
        *abs_sum += v.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (s, v) in sum.iter_mut().zip(v) {
            *s += v;
        }
    };

    for j in 0..n {
        accumulate(&mut sum, &mut abs_sum, -PI + 2.0 * PI * j as f64 / n as f64);
    }
    let mut estimate = sum.map(|s| s / n as f64);
    check_finite(&estimate)?;

    let mut last_change = f64::INFINITY;
    for _ in 0..spec.max_doublings {
        for j in 0..n {
            accumulate(&mut sum, &mut abs_sum, -PI + PI * (2 * j + 1) as f64 / n as f64);
        }
        n *= 2;
        let refined = sum.map(|s| s / n as f64);
        check_finite(&refined)?;
        last_change = max_change(&refined, &estimate);
        estimate = refined;
        if last_change < spec.abs_tol.max(rounding_floor(abs_sum / n as f64)) {
            return Ok(estimate);
        }
    }
    Err(Error::ConvergenceFailure {
        abs_tol: spec.abs_tol,
        doublings: spec.max_doublings,
        points: n,
        last_change,
    })
}

/// `(2π)⁻¹ ∫_{-π}^{π} f(k) dk` for a smooth 2π-periodic `f`.
///
/// Uniform trapezoid starting at `spec.initial_points` nodes; the node count
/// doubles until two successive estimates differ by less than `spec.abs_tol`.
pub fn periodic_quadrature<F>(f: F, spec: &QuadratureSpec) -> Result<C64>
where
    F: Fn(f64) -> C64,
{
    periodic_quadrature_from(f, spec, spec.initial_points)
}

/// As [`periodic_quadrature`], but starting from at least `start_points`
/// nodes. Use this when the integrand is known to oscillate many times over
/// the period so the first comparison already happens near the Nyquist rate.
pub fn periodic_quadrature_from<F>(f: F, spec: &QuadratureSpec, start_points: usize) -> Result<C64>
where
    F: Fn(f64) -> C64,
{
    periodic_quadrature_n(|k| [f(k)], spec, start_points).map(|[v]| v)
}

/// Plain `points`-node trapezoid estimate of `(2π)⁻¹ ∫_{-π}^{π} f(k) dk`.
pub fn periodic_trapezoid<F>(f: F, points: usize) -> C64
where
    F: Fn(f64) -> C64,
{
    let sum: C64 = (0..points)
        .map(|j| f(-PI + 2.0 * PI * j as f64 / points as f64))
        .sum();
    sum / points as f64
}

/// `∫_0^{t_max} f(t) dt` for integrands that are even in `t` and negligible at
/// `t_max`, where the trapezoid rule is spectrally accurate.
pub(crate) fn halfline_quadrature_n<const D: usize, F>(
    f: F,
    t_max: f64,
    spec: &QuadratureSpec,
    start_points: usize,
) -> Result<[C64; D]>
where
    F: Fn(f64) -> [C64; D],
{
    spec.validate()?;
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Domain(format!("bad truncation point {t_max}")));
    }
    let mut n = start_points.max(spec.initial_points);
    let mut sum = [C64::new(0.0, 0.0); D];
    let mut abs_sum = 0.0;
    let add = |sum: &mut [C64; D], abs_sum: &mut f64, t: f64, w: f64| {
        let v = f(t);
        *abs_sum += w * v.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (s, v) in sum.iter_mut().zip(v) {
            *s += v * w;
        }
    };
    add(&mut sum, &mut abs_sum, 0.0, 0.5);
    add(&mut sum, &mut abs_sum, t_max, 0.5);
    for j in 1..n {
        add(&mut sum, &mut abs_sum, t_max * j as f64 / n as f64, 1.0);
    }
    let mut estimate = sum.map(|s| s * (t_max / n as f64));
    check_finite(&estimate)?;

    let mut last_change = f64::INFINITY;
    for _ in 0..spec.max_doublings {
        for j in 0..n {
            add(&mut sum, &mut abs_sum, t_max * (2 * j + 1) as f64 / (2 * n) as f64, 1.0);
        }
        n *= 2;
        let refined = sum.map(|s| s * (t_max / n as f64));
        check_finite(&refined)?;
        last_change = max_change(&refined, &estimate);
        estimate = refined;
        if last_change < spec.abs_tol.max(rounding_floor(abs_sum * t_max / n as f64)) {
            return Ok(estimate);
        }
    }
    Err(Error::ConvergenceFailure {
        abs_tol: spec.abs_tol,
        doublings: spec.max_doublings,
        points: n,
        last_change,
    })
}

/// Scalar form of the half-line trapezoid.
pub fn halfline_quadrature<F>(
    f: F,
    t_max: f64,
    spec: &QuadratureSpec,
    start_points: usize,
) -> Result<C64>
where
    F: Fn(f64) -> C64,
{
    halfline_quadrature_n(|t| [f(t)], t_max, spec, start_points).map(|[v]| v)
}
