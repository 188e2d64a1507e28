//! End-to-end acceptance checks, one line per criterion.
//!
//! Runs without the libtest harness so every verdict is printed even when all
//! pass; the process exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use qwalk_core::observables::{
    density, dirac_packet_grid, entropy_vs_localization, lightcone_leakage, log_grid, moments, spinor_entropy,
    spreading_fit, velocity_variance, EntropyModel,
};
use qwalk_core::walks::{ctqw_evolve, dirac_evolve, dtqw_evolve, dtqw_step, trotter_convergence};
use qwalk_core::wavepackets::{
    CtqwPacket, CtqwPacketParams, DiracPacket, DiracPacketParams, DtqwPacket, DtqwPacketParams, InVariant,
};
use qwalk_core::{DispersionModel, QuadratureSpec, ScalarLattice, SpinorLattice, C64};

const THETA: f64 = 3.0 * PI / 7.0;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default().with_tol(1e-12)
}

fn walk(alpha: f64, variant: InVariant) -> DtqwPacket {
    DtqwPacket::new(DtqwPacketParams::new(THETA, alpha).unwrap(), variant, &spec()).unwrap()
}

fn constants() -> Outcome {
    let w = DispersionModel::dtqw(THETA).map_err(|e| e.to_string())?;
    let m = w.effective_mass().map_err(|e| e.to_string())?;
    let c = w.max_speed();
    let h = DispersionModel::dtqw(PI / 4.0).map_err(|e| e.to_string())?;
    let (hm, hc, hl) = (
        h.effective_mass().map_err(|e| e.to_string())?,
        h.max_speed(),
        h.compton_wavelength().map_err(|e| e.to_string())?,
    );
    let ok = (m - 4.3813).abs() <= 0.005
        && (c - 0.2225).abs() <= 0.005
        && (hc - FRAC_1_SQRT_2).abs() < 1e-12
        && (hm - 1.0).abs() < 1e-12
        && (hl - SQRT_2).abs() < 1e-12;
    check(ok, format!("3π/7: m={m:.5} c={c:.5}; π/4: c={hc:.15} m={hm:.15} λ={hl:.15}"))
}

fn dirac_closed_form() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for a in [0.5, 5.0] {
        let packet = DiracPacket::new(DiracPacketParams::new(1.0, a).unwrap(), &spec()).map_err(|e| e.to_string())?;
        for t in [0.0, 50.0] {
            for x in -100..=100 {
                let x = x as f64;
                let c = packet.eval(x, t).map_err(|e| e.to_string())?;
                let o = packet.eval_oracle(x, t).map_err(|e| e.to_string())?;
                worst = worst.max((c[0] - o[0]).norm()).max((c[1] - o[1]).norm());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst < 1e-8 && secs < 60.0, format!("max |closed − quadrature| = {worst:.2e} in {secs:.1}s"))
}

fn walk_recursion() -> Outcome {
    let mut worst: f64 = 0.0;
    for alpha in [2.2, 22.0] {
        let packet = walk(alpha, InVariant::Exact);
        let mut prev = packet.profile_quadrature(-80, 80, 0).map_err(|e| e.to_string())?;
        for tau in 0..=10 {
            let next = packet.profile_quadrature(-80, 80, tau + 1).map_err(|e| e.to_string())?;
            let stepped = dtqw_step(&prev, THETA);
            for n in -60..=60 {
                let (a, b) = (stepped.get(n).unwrap(), next.get(n).unwrap());
                worst = worst.max((a[0] - b[0]).norm()).max((a[1] - b[1]).norm());
            }
            prev = next;
        }
    }
    check(worst < 1e-8, format!("max |ψ(τ+1) − step ψ(τ)| = {worst:.2e}"))
}

fn walk_reproduction() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    // recorded on first computation; the bound 0.05 is the criterion
    for (alpha, recorded) in [(2.2, 0.032_670), (22.0, 0.012_990)] {
        let exact = walk(alpha, InVariant::Exact);
        let start = exact.profile(-300, 300, 0).map_err(|e| e.to_string())?;
        let simulated = dtqw_evolve(&start, THETA, 225).map_err(|e| e.to_string())?;
        let analytic = exact.profile_quadrature(-300, 300, 225).map_err(|e| e.to_string())?;
        let bessel = walk(alpha, InVariant::Bessel).profile(-300, 300, 225).map_err(|e| e.to_string())?;
        let (ds, da, db) = (density(&simulated), density(&analytic), density(&bessel));
        let sim_err = ds.max_abs_diff(&da).unwrap();
        let l1 = db.l1_distance(&da).unwrap();
        ok &= sim_err < 1e-6 && l1 < 0.05 && (l1 - recorded).abs() < 5e-4;
        details.push(format!("α={alpha}: sim err {sim_err:.2e}, Bessel L¹ {l1:.5}"));
    }
    check(ok, details.join("; "))
}

fn ctqw_reproduction() -> Outcome {
    let gamma = THETA.cos() / 2.0;
    let mut worst: f64 = 0.0;
    for alpha in [2.2, 22.0] {
        let packet = CtqwPacket::new(CtqwPacketParams::new(gamma, alpha).unwrap(), &spec()).map_err(|e| e.to_string())?;
        let start = packet.profile(-300, 300, 0.0).map_err(|e| e.to_string())?;
        let evolved = ctqw_evolve(&start, gamma, 225.0).map_err(|e| e.to_string())?;
        let analytic = packet.profile(-300, 300, 225.0).map_err(|e| e.to_string())?;
        worst = worst.max(evolved.max_abs_diff(&analytic).unwrap());
    }
    check(worst < 1e-8, format!("max amplitude error at t=225: {worst:.2e}"))
}

fn light_cone() -> Outcome {
    let profile = density(&walk(2.2, InVariant::Exact).profile(-300, 300, 225).map_err(|e| e.to_string())?);
    let leak = lightcone_leakage(&profile, THETA.cos(), 225.0, 15.0).map_err(|e| e.to_string())?;
    check(leak < 1e-3, format!("probability beyond cos θ·225 + 15: {leak:.2e}"))
}

fn spreading_law() -> Outcome {
    let times: Vec<f64> = (0..10).map(|i| 25.0 * i as f64).collect();
    let walk_start = walk(22.0, InVariant::Exact).profile(-400, 400, 0).map_err(|e| e.to_string())?;
    let walk_vars: Vec<f64> = times
        .iter()
        .map(|&t| moments(&density(&dtqw_evolve(&walk_start, THETA, t as usize).unwrap())).unwrap().variance)
        .collect();
    let walk_fit = spreading_fit(&times, &walk_vars).map_err(|e| e.to_string())?;
    let walk_dv2 = velocity_variance(&walk_start, &DispersionModel::dtqw(THETA).unwrap());

    let gamma = THETA.cos() / 2.0;
    let packet = CtqwPacket::new(CtqwPacketParams::new(gamma, 22.0).unwrap(), &spec()).map_err(|e| e.to_string())?;
    let ctqw_start: ScalarLattice = packet.profile(-400, 400, 0.0).map_err(|e| e.to_string())?;
    let ctqw_vars: Vec<f64> = times
        .iter()
        .map(|&t| moments(&density(&ctqw_evolve(&ctqw_start, gamma, t).unwrap())).unwrap().variance)
        .collect();
    let ctqw_fit = spreading_fit(&times, &ctqw_vars).map_err(|e| e.to_string())?;
    let ctqw_dv2 = velocity_variance(&ctqw_start, &DispersionModel::ctqw(gamma).unwrap());

    let rel = |fit: f64, dv2: f64| (fit - dv2).abs() / dv2;
    let (rw, rc) = (rel(walk_fit.slope, walk_dv2), rel(ctqw_fit.slope, ctqw_dv2));
    let ok = walk_fit.r_squared > 0.999 && ctqw_fit.r_squared > 0.999 && rw < 0.01 && rc < 0.01;
    check(
        ok,
        format!(
            "walk r²={:.8} slope {:.6e} vs Δv² {:.6e}; continuous r²={:.8} slope {:.6e} vs Δv² {:.6e}",
            walk_fit.r_squared, walk_fit.slope, walk_dv2, ctqw_fit.r_squared, ctqw_fit.slope, ctqw_dv2
        ),
    )
}

fn entanglement_constancy() -> Outcome {
    let packet = walk(2.2, InVariant::Exact);
    let s0 = spinor_entropy(&packet.profile(-300, 300, 0).unwrap()).map_err(|e| e.to_string())?;
    let s1 = spinor_entropy(&packet.profile(-300, 300, 200).unwrap()).map_err(|e| e.to_string())?;
    let params = DiracPacketParams::new(1.0, 0.5).unwrap();
    let d0 = spinor_entropy(&dirac_packet_grid(&params, 0.0, &spec()).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let d1 = spinor_entropy(&dirac_packet_grid(&params, 50.0, &spec()).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    check(
        (s0 - s1).abs() < 1e-6 && (d0 - d1).abs() < 1e-5,
        format!("walk {s0:.10} → {s1:.10}; Dirac {d0:.10} → {d1:.10}"),
    )
}

fn entropy_shape() -> Outcome {
    let grid = log_grid(0.05, 20.0, 25).map_err(|e| e.to_string())?;
    let dirac = entropy_vs_localization(EntropyModel::Dirac { mass: 1.0 }, &grid, &spec()).map_err(|e| e.to_string())?;
    let walk = entropy_vs_localization(EntropyModel::Dtqw { theta: THETA }, &grid, &spec()).map_err(|e| e.to_string())?;
    let monotone = |c: &[(f64, f64)]| c.windows(2).all(|w| w[1].1 <= w[0].1);
    let gap = dirac.iter().zip(&walk).map(|(d, w)| (d.1 - w.1).abs()).fold(0.0, f64::max);
    // regression value recorded on first computation
    const RECORDED_GAP: f64 = 0.1330;
    let at20 = dirac.last().unwrap().1;
    let shape_ok = monotone(&dirac) && monotone(&walk) && (gap - RECORDED_GAP).abs() < 2e-3;
    let large_a_ok = at20 < 0.01;
    check(
        shape_ok && large_a_ok,
        format!(
            "monotone: Dirac {} walk {}; max gap {gap:.4} (recorded {RECORDED_GAP}); S(a=20) Dirac {at20:.4} walk {:.4} (need < 0.01)",
            monotone(&dirac),
            monotone(&walk),
            walk.last().unwrap().1
        ),
    )
}

fn trotter() -> Outcome {
    let errs = trotter_convergence(1.0, 8.0, 1.0, &[0.1, 0.05, 0.025]).map_err(|e| e.to_string())?;
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    check(
        ratios.iter().all(|r| (1.7..=2.3).contains(r)),
        format!(
            "errors [{}], ratios {ratios:.4?}",
            errs.iter().map(|e| format!("{e:.4e}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

/// `|i∂ₜΨ − (−iσz∂ₓ + mσx)Ψ|` by central differences of step `h`.
fn dirac_residual(packet: &DiracPacket, x: f64, t: f64, h: f64) -> f64 {
    let f = |x, t| packet.eval(x, t).unwrap();
    let (xp, xm, tp, tm, c) = (f(x + h, t), f(x - h, t), f(x, t + h), f(x, t - h), f(x, t));
    let i = C64::i();
    let dt = [(tp[0] - tm[0]) / (2.0 * h), (tp[1] - tm[1]) / (2.0 * h)];
    let dx = [(xp[0] - xm[0]) / (2.0 * h), (xp[1] - xm[1]) / (2.0 * h)];
    let m = packet.params().mass;
    let r0 = i * dt[0] - (-i * dx[0] + c[1] * m);
    let r1 = i * dt[1] - (i * dx[1] + c[0] * m);
    r0.norm().max(r1.norm())
}

fn residuals() -> Outcome {
    let packet = DiracPacket::new(DiracPacketParams::new(1.0, 0.5).unwrap(), &spec()).map_err(|e| e.to_string())?;
    let points = [(0.0, 0.0), (3.0, 2.0), (-7.5, 10.0), (48.0, 50.0)];
    let worst = |h: f64| points.iter().map(|&(x, t)| dirac_residual(&packet, x, t, h)).fold(0.0, f64::max);
    let (coarse, fine) = (worst(0.02), worst(0.01));
    let ratio = coarse / fine;

    let gamma = THETA.cos() / 2.0;
    let ctqw = CtqwPacket::new(CtqwPacketParams::new(gamma, 2.2).unwrap(), &spec()).map_err(|e| e.to_string())?;
    let h = 1e-4;
    let mut ctqw_worst: f64 = 0.0;
    for &(n, t) in &[(0i64, 0.0), (-12, 20.0), (25, 100.0), (50, 225.0)] {
        let e = |n, t| ctqw.eval(n, t).unwrap();
        let dt = (e(n, t + h) - e(n, t - h)) / (2.0 * h);
        let lap = e(n + 1, t) + e(n - 1, t) - e(n, t) * 2.0;
        ctqw_worst = ctqw_worst.max((C64::i() * dt + lap * gamma).norm());
    }
    check(
        (3.5..=4.5).contains(&ratio) && ctqw_worst < 1e-6,
        format!("Dirac residual {coarse:.3e} → {fine:.3e} (ratio {ratio:.3}); continuous walk residual {ctqw_worst:.2e}"),
    )
}

fn unitarity() -> Outcome {
    let walk_state = walk(2.2, InVariant::Exact).profile(-300, 300, 0).unwrap();
    let walked = dtqw_evolve(&walk_state, THETA, 225).map_err(|e| e.to_string())?;
    let walk_drift = (walked.norm_sqr() - walk_state.norm_sqr()).abs();

    let gamma = THETA.cos() / 2.0;
    let ctqw = CtqwPacket::new(CtqwPacketParams::new(gamma, 2.2).unwrap(), &spec()).unwrap();
    let scalar0 = ctqw.profile(-300, 300, 0.0).unwrap();
    let mut scalar = scalar0.clone();
    for _ in 0..225 {
        scalar = ctqw_evolve(&scalar, gamma, 1.0).map_err(|e| e.to_string())?;
    }
    let ctqw_drift = (scalar.norm_sqr() - scalar0.norm_sqr()).abs();

    let dirac0: SpinorLattice = DiracPacket::new(DiracPacketParams::new(1.0, 5.0).unwrap(), &spec())
        .unwrap()
        .sample(-560, 560, 0.5, 0.0)
        .unwrap();
    let mut spinor = dirac0.clone();
    for _ in 0..225 {
        spinor = dirac_evolve(&spinor, 1.0, 1.0).map_err(|e| e.to_string())?;
    }
    let dirac_drift = (spinor.norm_sqr() - dirac0.norm_sqr()).abs();
    check(
        walk_drift.max(ctqw_drift).max(dirac_drift) < 1e-12,
        format!("norm drift over 225 steps: walk {walk_drift:.1e}, continuous {ctqw_drift:.1e}, Dirac {dirac_drift:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("constants", constants),
        ("Dirac closed form vs quadrature", dirac_closed_form),
        ("walk packet recursion", walk_recursion),
        ("walk packet reproduction", walk_reproduction),
        ("continuous-walk packet reproduction", ctqw_reproduction),
        ("light cone", light_cone),
        ("spreading law", spreading_law),
        ("entanglement constancy", entanglement_constancy),
        ("entropy vs localization", entropy_shape),
        ("Trotter limit", trotter),
        ("residual checks", residuals),
        ("unitarity", unitarity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let (verdict, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {verdict} [{secs:6.1}s] {name}: {detail}", i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
