use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qwalk_core::observables::{
    density, dirac_grid, dtqw_packet_range, entropy_vs_localization, log_grid, moments, DensityProfile,
    EntropyModel,
};
use qwalk_core::walks::{ctqw_evolve, dirac_evolve, dtqw_evolve};
use qwalk_core::wavepackets::{
    CtqwPacket, CtqwPacketParams, DiracPacket, DiracPacketParams, DtqwPacket, DtqwPacketParams, InVariant,
};
use qwalk_core::{QuadratureSpec, ScalarLattice, SpinorLattice};

use crate::output::{check_normalized, Outputs, Table};
use crate::{CliError, Command, Model, PacketModel, Params};

const DEFAULT_THETA: f64 = 3.0 * PI / 7.0;
const DEFAULT_MASS: f64 = 1.0;
const DEFAULT_ALPHA: f64 = 2.2;
const DEFAULT_A: f64 = 0.5;
const WALK_TIME: f64 = 225.0;
const DIRAC_TIME: f64 = 50.0;

/// Flags a command accepts beyond the always-valid `--tol`.
struct Allowed(&'static [&'static str]);

const DTQW_FLAGS: Allowed = Allowed(&["theta", "alpha", "a", "time", "half-width"]);
const CTQW_FLAGS: Allowed = Allowed(&["theta", "gamma", "alpha", "time", "half-width"]);
const DIRAC_FLAGS: Allowed = Allowed(&["mass", "a", "time", "half-width", "spacing"]);
const COMPARE_FLAGS: Allowed = Allowed(&["theta", "alpha", "time", "half-width"]);
const SCAN_FLAGS: Allowed = Allowed(&["theta", "mass"]);

impl Params {
    fn given(&self) -> Vec<&'static str> {
        [
            ("theta", self.theta.is_some()),
            ("mass", self.mass.is_some()),
            ("gamma", self.gamma.is_some()),
            ("alpha", self.alpha.is_some()),
            ("a", self.a.is_some()),
            ("time", self.time.is_some()),
            ("half-width", self.half_width.is_some()),
            ("spacing", self.spacing.is_some()),
        ]
        .into_iter()
        .filter_map(|(name, set)| set.then_some(name))
        .collect()
    }

    fn restrict(&self, allowed: &Allowed, context: &str) -> Result<(), CliError> {
        match self.given().into_iter().find(|f| !allowed.0.contains(f)) {
            Some(flag) => Err(CliError::Usage(format!("--{flag} does not apply to {context}"))),
            None => Ok(()),
        }
    }

    fn spec(&self) -> Result<QuadratureSpec, CliError> {
        let spec = QuadratureSpec::default().with_tol(self.tol.unwrap_or(1e-12));
        spec.validate()?;
        Ok(spec)
    }

    fn theta(&self) -> f64 {
        self.theta.unwrap_or(DEFAULT_THETA)
    }

    fn mass(&self) -> f64 {
        self.mass.unwrap_or(DEFAULT_MASS)
    }

    /// Walk localization from `--alpha`, or from `--a` via `α = a tan θ`.
    fn walk_alpha(&self) -> Result<f64, CliError> {
        match (self.alpha, self.a) {
            (Some(_), Some(_)) => Err(CliError::Usage("give either --alpha or --a, not both".into())),
            (Some(alpha), None) => Ok(alpha),
            (None, Some(a)) => Ok(a * self.theta().tan()),
            (None, None) => Ok(DEFAULT_ALPHA),
        }
    }

    /// Hopping rate, by default matched to the discrete walk's speed `cos θ`.
    fn gamma(&self) -> Result<f64, CliError> {
        match (self.gamma, self.theta) {
            (Some(_), Some(_)) => Err(CliError::Usage("give either --gamma or --theta, not both".into())),
            (Some(g), None) => Ok(g),
            (None, _) => Ok(self.theta().cos() / 2.0),
        }
    }

    fn time(&self, default: f64) -> Result<f64, CliError> {
        let t = self.time.unwrap_or(default);
        if !(t >= 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--time must be non-negative, got {t}")));
        }
        Ok(t)
    }

    fn steps(&self) -> Result<usize, CliError> {
        let t = self.time(WALK_TIME)?;
        if t.fract() != 0.0 {
            return Err(CliError::Usage(format!("the discrete walk needs whole steps, got --time {t}")));
        }
        Ok(t as usize)
    }

    fn half_width(&self, default: i64) -> Result<i64, CliError> {
        match self.half_width {
            Some(h) if h < 1 => Err(CliError::Usage(format!("--half-width must be positive, got {h}"))),
            Some(h) => Ok(h),
            None => Ok(default),
        }
    }

    /// Dirac grid `(half sites, spacing)` holding the packet up to time
    /// `reach`, plus `extra` length units on each side.
    fn dirac_lattice(&self, a: f64, reach: f64, extra: f64) -> Result<(i64, f64), CliError> {
        let mass = self.mass();
        if !(mass > 0.0 && a > 0.0) {
            // let the packet constructor phrase the error
            DiracPacketParams::new(mass, a)?;
        }
        let (n, rule_h) = dirac_grid(mass, a, reach);
        let h = match self.spacing {
            Some(s) if !(s > 0.0 && s.is_finite()) => {
                return Err(CliError::Usage(format!("--spacing must be positive, got {s}")))
            }
            Some(s) => s,
            None => rule_h,
        };
        let default = ((n as f64 * rule_h + extra) / h).ceil() as i64;
        Ok((self.half_width(default)?, h))
    }
}

fn ctqw_range(gamma: f64, alpha: f64, reach: f64) -> i64 {
    (2.0 * gamma * reach).ceil() as i64 + 40 + (12.0 * alpha.sqrt()).ceil() as i64
}

fn path_list(paths: &[PathBuf]) -> String {
    paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(", ")
}

fn checked(name: &str, profile: DensityProfile) -> Result<DensityProfile, CliError> {
    check_normalized(name, &profile)?;
    Ok(profile)
}

pub fn run(command: Command) -> Result<String, CliError> {
    let start = Instant::now();
    let mut out = Outputs::default();
    let summary = match command {
        Command::Simulate { model, params, out: path } => simulate(model, &params, &path, &mut out)?,
        Command::Packet { model, params, out: path } => packet(model, &params, &path, &mut out)?,
        Command::Compare {
            dtqw_vs_ctqw,
            bessel_vs_exact,
            params,
            out: path,
        } => {
            debug_assert!(dtqw_vs_ctqw ^ bessel_vs_exact);
            compare(bessel_vs_exact, &params, &path, &mut out)?
        }
        Command::EntropyScan {
            params,
            a_min,
            a_max,
            points,
            out: path,
        } => entropy_scan(&params, a_min, a_max, points, &path, &mut out)?,
        Command::Figure { which, params, out: dir } => figure(which, &params, &dir, &mut out)?,
    };
    let paths = out.commit();
    Ok(format!(
        "{summary} runtime={:.3}s -> {}",
        start.elapsed().as_secs_f64(),
        path_list(&paths)
    ))
}

fn state_summary(profile: &DensityProfile) -> Result<String, CliError> {
    let m = moments(profile)?;
    Ok(format!("norm={:.12} variance={:.6e}", m.norm, m.variance))
}

fn write_spinor(state: &SpinorLattice, path: &Path, out: &mut Outputs) -> Result<String, CliError> {
    let profile = checked("rho", density(state))?;
    out.write(path, &Table::spinor(state))?;
    state_summary(&profile)
}

fn write_scalar(state: &ScalarLattice, path: &Path, out: &mut Outputs) -> Result<String, CliError> {
    let profile = checked("rho", density(state))?;
    out.write(path, &Table::scalar(state))?;
    state_summary(&profile)
}

fn simulate(model: Model, params: &Params, path: &Path, out: &mut Outputs) -> Result<String, CliError> {
    let spec = params.spec()?;
    match model {
        Model::Dtqw => {
            params.restrict(&DTQW_FLAGS, "the discrete walk")?;
            let (theta, alpha, steps) = (params.theta(), params.walk_alpha()?, params.steps()?);
            let half = params.half_width(dtqw_packet_range(theta, alpha, 2 * steps))?;
            let packet = DtqwPacket::new(DtqwPacketParams::new(theta, alpha)?, InVariant::Exact, &spec)?;
            let end = dtqw_evolve(&packet.profile(-half, half, 0)?, theta, steps)?;
            Ok(format!("simulate dtqw steps={steps} {}", write_spinor(&end, path, out)?))
        }
        Model::Ctqw => {
            params.restrict(&CTQW_FLAGS, "the continuous walk")?;
            let (gamma, alpha, t) = (params.gamma()?, params.alpha.unwrap_or(DEFAULT_ALPHA), params.time(WALK_TIME)?);
            let half = params.half_width(ctqw_range(gamma, alpha, 2.0 * t))?;
            let packet = CtqwPacket::new(CtqwPacketParams::new(gamma, alpha)?, &spec)?;
            let end = ctqw_evolve(&packet.profile(-half, half, 0.0)?, gamma, t)?;
            Ok(format!("simulate ctqw t={t} {}", write_scalar(&end, path, out)?))
        }
        Model::Dirac => {
            params.restrict(&DIRAC_FLAGS, "the Dirac field")?;
            let (a, t) = (params.a.unwrap_or(DEFAULT_A), params.time(DIRAC_TIME)?);
            // the initial tail falls like e^{−2m|x|}; give it room to travel
            let (half, h) = params.dirac_lattice(a, t, t + 24.0 / params.mass())?;
            let packet = DiracPacket::new(DiracPacketParams::new(params.mass(), a)?, &spec)?;
            let end = dirac_evolve(&packet.sample(-half, half, h, 0.0)?, params.mass(), t)?;
            Ok(format!("simulate dirac t={t} {}", write_spinor(&end, path, out)?))
        }
    }
}

fn packet(model: PacketModel, params: &Params, path: &Path, out: &mut Outputs) -> Result<String, CliError> {
    let spec = params.spec()?;
    match model {
        PacketModel::Dtqw | PacketModel::DtqwBessel => {
            params.restrict(&DTQW_FLAGS, "the discrete walk")?;
            let (theta, alpha, steps) = (params.theta(), params.walk_alpha()?, params.steps()?);
            let half = params.half_width(dtqw_packet_range(theta, alpha, steps))?;
            let variant = if model == PacketModel::Dtqw {
                InVariant::Exact
            } else {
                InVariant::Bessel
            };
            let packet = DtqwPacket::new(DtqwPacketParams::new(theta, alpha)?, variant, &spec)?;
            let state = packet.profile(-half, half, steps)?;
            Ok(format!("packet dtqw tau={steps} {}", write_spinor(&state, path, out)?))
        }
        PacketModel::Ctqw => {
            params.restrict(&CTQW_FLAGS, "the continuous walk")?;
            let (gamma, alpha, t) = (params.gamma()?, params.alpha.unwrap_or(DEFAULT_ALPHA), params.time(WALK_TIME)?);
            let half = params.half_width(ctqw_range(gamma, alpha, t))?;
            let state = CtqwPacket::new(CtqwPacketParams::new(gamma, alpha)?, &spec)?.profile(-half, half, t)?;
            Ok(format!("packet ctqw t={t} {}", write_scalar(&state, path, out)?))
        }
        PacketModel::Dirac => {
            params.restrict(&DIRAC_FLAGS, "the Dirac field")?;
            let (a, t) = (params.a.unwrap_or(DEFAULT_A), params.time(DIRAC_TIME)?);
            let (half, h) = params.dirac_lattice(a, t, 0.0)?;
            let state = DiracPacket::new(DiracPacketParams::new(params.mass(), a)?, &spec)?.sample(-half, half, h, t)?;
            Ok(format!("packet dirac t={t} {}", write_spinor(&state, path, out)?))
        }
    }
}

fn compare(bessel: bool, params: &Params, path: &Path, out: &mut Outputs) -> Result<String, CliError> {
    params.restrict(&COMPARE_FLAGS, "compare")?;
    let spec = params.spec()?;
    let (theta, alpha, steps) = (params.theta(), params.walk_alpha()?, params.steps()?);
    let half = params.half_width(dtqw_packet_range(theta, alpha, steps))?;
    let exact = DtqwPacket::new(DtqwPacketParams::new(theta, alpha)?, InVariant::Exact, &spec)?;
    let walk = checked("rho_dtqw", density(&exact.profile(-half, half, steps)?))?;
    let (name, other) = if bessel {
        let approx = DtqwPacket::new(DtqwPacketParams::new(theta, alpha)?, InVariant::Bessel, &spec)?;
        ("rho_bessel", density(&approx.profile(-half, half, steps)?))
    } else {
        let gamma = theta.cos() / 2.0;
        let ctqw = CtqwPacket::new(CtqwPacketParams::new(gamma, alpha)?, &spec)?;
        ("rho_ctqw", density(&ctqw.profile(-half, half, steps as f64)?))
    };
    let other = checked(name, other)?;
    let l1 = walk.l1_distance(&other)?;
    let first = if bessel { "rho_exact" } else { "rho_dtqw" };
    out.write(path, &Table::densities(&[(first, &walk), (name, &other)])?)?;
    let label = if bessel { "bessel-vs-exact" } else { "dtqw-vs-ctqw" };
    Ok(format!("compare {label} tau={steps} alpha={alpha} l1={l1:.6e}"))
}

fn scan_table(params: &Params, grid: &[f64]) -> Result<(Table, f64), CliError> {
    let spec = params.spec()?;
    let dirac = entropy_vs_localization(EntropyModel::Dirac { mass: params.mass() }, grid, &spec)?;
    let walk = entropy_vs_localization(EntropyModel::Dtqw { theta: params.theta() }, grid, &spec)?;
    let mut table = Table::new(&["a", "entropy_dirac", "entropy_dtqw"]);
    let mut gap: f64 = 0.0;
    for ((a, d), (_, w)) in dirac.into_iter().zip(walk) {
        gap = gap.max((d - w).abs());
        table.push(vec![a, d, w]);
    }
    Ok((table, gap))
}

fn entropy_scan(
    params: &Params,
    a_min: f64,
    a_max: f64,
    points: usize,
    path: &Path,
    out: &mut Outputs,
) -> Result<String, CliError> {
    params.restrict(&SCAN_FLAGS, "entropy-scan")?;
    let grid = log_grid(a_min, a_max, points).map_err(|e| CliError::Usage(e.to_string()))?;
    let (table, gap) = scan_table(params, &grid)?;
    out.write(path, &table)?;
    Ok(format!("entropy-scan points={points} max_gap={gap:.6e}"))
}

/// `5` → `5`, `2.2` → `2.2`: compact labels for file names.
fn label(v: f64) -> String {
    format!("{v}")
}

fn figure(which: u8, params: &Params, dir: &Path, out: &mut Outputs) -> Result<String, CliError> {
    let spec = params.spec()?;
    match which {
        1 => {
            params.restrict(&DIRAC_FLAGS, "figure 1")?;
            let t = params.time(DIRAC_TIME)?;
            let mut notes = Vec::new();
            for a in params.a.map_or(vec![5.0, 0.5], |a| vec![a]) {
                let (half, h) = params.dirac_lattice(a, t, 0.0)?;
                let packet = DiracPacket::new(DiracPacketParams::new(params.mass(), a)?, &spec)?;
                let late = format!("rho_t{}", label(t));
                let r0 = checked("rho_t0", density(&packet.sample(-half, half, h, 0.0)?))?;
                let r1 = checked(&late, density(&packet.sample(-half, half, h, t)?))?;
                let table = Table::densities(&[("rho_t0", &r0), (&late, &r1)])?;
                out.write(&dir.join(format!("fig1_a{}.csv", label(a))), &table)?;
                notes.push(format!("a={} rows={}", label(a), table.len()));
            }
            Ok(format!("figure 1 m={} {}", params.mass(), notes.join(" ")))
        }
        2 => {
            params.restrict(&DTQW_FLAGS, "figure 2")?;
            if params.a.is_some() {
                return Err(CliError::Usage("--a does not apply to figure 2; use --alpha".into()));
            }
            let (theta, steps) = (params.theta(), params.steps()?);
            let mut notes = Vec::new();
            for alpha in params.alpha.map_or(vec![2.2, 22.0], |a| vec![a]) {
                let half = params.half_width(dtqw_packet_range(theta, alpha, 2 * steps))?;
                let p = DtqwPacketParams::new(theta, alpha)?;
                let exact = DtqwPacket::new(p, InVariant::Exact, &spec)?;
                let bessel = DtqwPacket::new(p, InVariant::Bessel, &spec)?;
                let start = exact.profile(-half, half, 0)?;
                let names = [
                    format!("rho_sim_t{steps}"),
                    format!("rho_exact_t{steps}"),
                    format!("rho_bessel_t{steps}"),
                ];
                let sim = checked(&names[0], density(&dtqw_evolve(&start, theta, steps)?))?;
                let e0 = checked("rho_exact_t0", density(&start))?;
                let b0 = checked("rho_bessel_t0", density(&bessel.profile(-half, half, 0)?))?;
                let e1 = checked(&names[1], density(&exact.profile_quadrature(-half, half, steps)?))?;
                let b1 = checked(&names[2], density(&bessel.profile(-half, half, steps)?))?;
                let table = Table::densities(&[
                    ("rho_exact_t0", &e0),
                    ("rho_bessel_t0", &b0),
                    (&names[0], &sim),
                    (&names[1], &e1),
                    (&names[2], &b1),
                ])?;
                out.write(&dir.join(format!("fig2_alpha{}.csv", label(alpha))), &table)?;
                notes.push(format!(
                    "alpha={} sim_err={:.2e} bessel_l1={:.6e}",
                    label(alpha),
                    sim.max_abs_diff(&e1)?,
                    b1.l1_distance(&e1)?
                ));
            }
            Ok(format!("figure 2 theta={theta:.10} {}", notes.join(" ")))
        }
        3 => {
            params.restrict(&SCAN_FLAGS, "figure 3")?;
            let grid = log_grid(0.05, 20.0, 25)?;
            let (table, gap) = scan_table(params, &grid)?;
            out.write(&dir.join("fig3.csv"), &table)?;
            Ok(format!("figure 3 points={} max_gap={gap:.6e}", table.len()))
        }
        4 => {
            params.restrict(&CTQW_FLAGS, "figure 4")?;
            let (gamma, t) = (params.gamma()?, params.time(WALK_TIME)?);
            let mut notes = Vec::new();
            for alpha in params.alpha.map_or(vec![2.2, 22.0], |a| vec![a]) {
                let half = params.half_width(ctqw_range(gamma, alpha, t))?;
                let packet = CtqwPacket::new(CtqwPacketParams::new(gamma, alpha)?, &spec)?;
                let late = format!("rho_t{}", label(t));
                let r0 = checked("rho_t0", density(&packet.profile(-half, half, 0.0)?))?;
                let r1 = checked(&late, density(&packet.profile(-half, half, t)?))?;
                let table = Table::densities(&[("rho_t0", &r0), (&late, &r1)])?;
                out.write(&dir.join(format!("fig4_alpha{}.csv", label(alpha))), &table)?;
                notes.push(format!("alpha={} rows={}", label(alpha), table.len()));
            }
            Ok(format!("figure 4 gamma={gamma:.10} {}", notes.join(" ")))
        }
        _ => Err(CliError::Usage(format!("no figure {which}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_checked_against_model() {
        let p = Params {
            mass: Some(2.0),
            ..Params::default()
        };
        let err = p.restrict(&DTQW_FLAGS, "the discrete walk").unwrap_err();
        assert!(err.to_string().contains("--mass"));
        assert_eq!(err.exit_code(), 2);
        assert!(p.restrict(&DIRAC_FLAGS, "the Dirac field").is_ok());
    }

    #[test]
    fn walk_alpha_from_a() {
        let p = Params {
            theta: Some(PI / 4.0),
            a: Some(3.0),
            ..Params::default()
        };
        assert!((p.walk_alpha().unwrap() - 3.0).abs() < 1e-12);
        let both = Params {
            alpha: Some(1.0),
            ..p
        };
        assert!(both.walk_alpha().is_err());
    }

    #[test]
    fn default_gamma_matches_speed() {
        let p = Params::default();
        assert!((2.0 * p.gamma().unwrap() - DEFAULT_THETA.cos()).abs() < 1e-15);
    }

    #[test]
    fn fractional_steps_rejected() {
        let p = Params {
            time: Some(2.5),
            ..Params::default()
        };
        assert!(p.steps().is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(label(5.0), "5");
        assert_eq!(label(2.2), "2.2");
        assert_eq!(label(0.5), "0.5");
    }
}
