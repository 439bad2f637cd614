use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{Command, RunConfig, Suite};
use super::report::{Report, Table};
use super::CliError;
use crate::exponents::{int, rat, theorem_gate, Coupling, Exponent, ParameterPoint, Rational};
use crate::grid::{ComplexField, GridSpec};
use crate::lorentz::{inequality_harness, lorentz_identity_suite, Lemma, MANIFEST};
use crate::sim::{
    continuous_dependence_check, picard_contraction, scattering_diagnostic, simulate, strichartz_diagnostic,
    Diagnostics, EquationParams, PicardConfig, StrichartzFamily,
};

const MASS_TOL_PER_1000: f64 = 1e-8;
const ENERGY_TOL: f64 = 1e-4;

fn f(x: &Rational) -> f64 {
    RunConfig::f64_of(x)
}

/// Shortest round-trip form, switching to exponent notation far from 1.
fn fmt(x: f64) -> String {
    if x != 0.0 && x.is_finite() && !(1e-4..1e6).contains(&x.abs()) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Executes the configured command. The report is not written here.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let command = config
        .command
        .ok_or_else(|| CliError::Usage("no command given".into()))?;
    config.require(command)?;
    match command {
        Command::Gate => gate(config),
        Command::Scan => scan(config),
        Command::Verify => verify(config),
        Command::Simulate => run_simulate(config),
        Command::Picard => picard(config),
        Command::Scatter => scatter(config),
        Command::Depend => depend(config),
    }
}

fn gate(config: &RunConfig) -> Result<Report, CliError> {
    let (n, s) = (config.n.expect("required"), config.s.clone().expect("required"));
    let alpha = config
        .alpha
        .clone()
        .ok_or_else(|| CliError::config(0, "gate needs `alpha`"))?;
    let b = config.b.clone().ok_or_else(|| CliError::config(0, "gate needs `b`"))?;
    let verdict = theorem_gate(n, &s, &alpha, &b);
    let mut report = Report::new("gate", config);
    let mut table = Table::new("gate", &["tag", "status", "detail"]);
    for c in &verdict.checks {
        let status = serde_json::to_value(c.status).expect("status serializes");
        let status = status.as_str().unwrap_or_default().to_string();
        let value = if c.detail.is_empty() { &status } else { &c.detail };
        report.check(c.tag, c.status == crate::exponents::gate::CheckStatus::Pass, value, None);
        table.push(vec![c.tag.to_string(), status.clone(), c.detail.clone()]);
    }
    report.details = serde_json::to_value(&verdict).expect("verdict serializes");
    report.tables.push(table);
    Ok(report)
}

fn ladder(lo: &Rational, hi: &Rational, steps: usize) -> Vec<Rational> {
    if steps <= 1 {
        return vec![lo.clone()];
    }
    let last = int(steps as i64 - 1);
    (0..steps)
        .map(|k| lo + (hi - lo) * int(k as i64) / &last)
        .collect()
}

fn scan(config: &RunConfig) -> Result<Report, CliError> {
    let (n, s) = (config.n.expect("required"), config.s.clone().expect("required"));
    let alpha_hi = config
        .alpha_hi
        .clone()
        .unwrap_or_else(|| int(n as i64) - rat(1, 2));
    if config.steps == 0 {
        return Err(CliError::config(0, "scan needs `steps` >= 1"));
    }
    let alphas = ladder(&config.alpha_lo, &alpha_hi, config.steps);
    let bs = ladder(&config.b_lo, &config.b_hi, config.steps);
    let rows: Vec<Vec<String>> = (0..alphas.len() * bs.len())
        .into_par_iter()
        .map(|k| {
            let (alpha, b) = (&alphas[k / bs.len()], &bs[k % bs.len()]);
            let v = theorem_gate(n, &s, alpha, b);
            let p = v.point.as_ref().map_or(String::new(), |pt| pt.p.to_string());
            let (lo, hi) = v
                .window
                .as_ref()
                .map_or((String::new(), String::new()), |w| (w.lo.to_string(), w.hi.to_string()));
            vec![
                n.to_string(),
                s.to_string(),
                alpha.to_string(),
                b.to_string(),
                p,
                lo,
                hi,
                v.label().to_string(),
            ]
        })
        .collect();
    let passing = rows.iter().filter(|r| r[7] == "PASS").count();
    let mut report = Report::new("scan", config);
    report.check("rows", rows.len() == alphas.len() * bs.len(), rows.len(), None);
    report.details = serde_json::json!({ "passing_rows": passing, "rows": rows.len() });
    let mut table = Table::new(
        "scan",
        &["n", "s", "alpha", "b", "p", "window_lo", "window_hi", "verdict"],
    );
    table.rows = rows;
    report.tables.push(table);
    Ok(report)
}

fn verify(config: &RunConfig) -> Result<Report, CliError> {
    let suite = config.suite.expect("required");
    let n = config.n.unwrap_or(3) as usize;
    let grid = GridSpec::new(n, config.grid, f(&config.half_width)).map_err(|e| CliError::run("grid", e))?;
    let mut report = Report::new("verify", config);
    let tol = |x: f64| Some(format!("< {x:e}"));
    match suite {
        Suite::Identities => {
            let mut table = Table::new(
                "identities",
                &["family", "power_lhs", "power_rhs", "power_residual", "nesting_variation"],
            );
            for fam in MANIFEST.families {
                let rep = lorentz_identity_suite(fam, &grid, 2.0, 4.0, 2.0, MANIFEST.ladder)
                    .map_err(|e| CliError::run("lorentz identities", e))?;
                let residual = rep.power_residual.unwrap_or(f64::NAN);
                report.check(
                    format!("power-identity:{}", fam.name()),
                    residual < crate::lorentz::harness::POWER_TOLERANCE,
                    residual,
                    tol(crate::lorentz::harness::POWER_TOLERANCE),
                );
                report.check(
                    format!("emb:{}", fam.name()),
                    rep.nesting_variation < crate::lorentz::harness::NESTING_TOLERANCE,
                    rep.nesting_variation,
                    tol(crate::lorentz::harness::NESTING_TOLERANCE),
                );
                table.push(vec![
                    fam.name(),
                    fmt(rep.power_lhs.unwrap_or(f64::NAN)),
                    fmt(rep.power_rhs.unwrap_or(f64::NAN)),
                    fmt(residual),
                    fmt(rep.nesting_variation),
                ]);
            }
            report.tables.push(table);
        }
        Suite::Holder | Suite::Hls | Suite::Sobolev => {
            let fin = |x: i64| Exponent::Finite(int(x));
            let (tag, lemma) = match suite {
                Suite::Holder => (
                    "lemma-2.1",
                    Lemma::Holder {
                        p: rat(3, 2),
                        q: fin(1),
                        p1: int(3),
                        q1: fin(2),
                        p2: int(3),
                        q2: fin(2),
                    },
                ),
                Suite::Hls => {
                    let alpha = rat(n as i64 - 1, 1);
                    let p = rat(6, 5);
                    let q = (p.recip() - &alpha / int(n as i64)).recip();
                    ("lemma-2.2", Lemma::Hls { alpha, p, q, r: fin(2) })
                }
                _ => {
                    let s = int(1);
                    let p = int(2);
                    let p1 = (p.recip() - &s / int(n as i64)).recip();
                    ("lemma-2.3", Lemma::Sobolev { s, p, p1, q: fin(2) })
                }
            };
            let rep = inequality_harness(&lemma, MANIFEST.families, &grid, MANIFEST.ladder)
                .map_err(|e| CliError::run(tag, e))?;
            report.check(tag, rep.pass, rep.max_variation, tol(crate::lorentz::harness::LEMMA_VARIATION));
            let mut table = Table::new(lemma.name(), &["family", "delta", "lhs", "rhs", "ratio"]);
            for row in &rep.rows {
                table.push(vec![row.family.clone(), fmt(row.delta), fmt(row.lhs), fmt(row.rhs), fmt(row.ratio)]);
            }
            report.details = serde_json::to_value(&rep.families).expect("summary serializes");
            report.tables.push(table);
        }
        Suite::Strichartz => {
            let family = StrichartzFamily {
                base: grid,
                width: f(&config.width),
                dilations: vec![0.5, 1.0, 2.0],
                window: f(&config.t_end),
                intervals: config.intervals.max(1),
            };
            let s = config.s.as_ref().map_or(0.0, f);
            let rep = strichartz_diagnostic(&family, config.q.clone(), config.r.clone(), s)
                .map_err(|e| CliError::run("prop-2.7", e))?;
            report.check(
                "homo",
                rep.variation < crate::sim::strichartz::STABILITY_TOL,
                rep.variation,
                tol(crate::sim::strichartz::STABILITY_TOL),
            );
            report.check(
                "inho",
                rep.inhomogeneous_variation < crate::sim::strichartz::STABILITY_TOL,
                rep.inhomogeneous_variation,
                tol(crate::sim::strichartz::STABILITY_TOL),
            );
            if let Some(d) = rep.endpoint_deviation {
                report.check("endpoint", d <= crate::sim::strichartz::ENDPOINT_TOL, d, tol(crate::sim::strichartz::ENDPOINT_TOL));
            }
            let mut table = Table::new("strichartz", &["delta", "homogeneous", "inhomogeneous"]);
            for ((d, h), i) in rep.dilations.iter().zip(&rep.ratios).zip(&rep.inhomogeneous) {
                table.push(vec![fmt(*d), fmt(*h), fmt(*i)]);
            }
            report.tables.push(table);
        }
    }
    Ok(report)
}

fn equation(config: &RunConfig) -> Result<EquationParams, CliError> {
    let n = config.n.expect("required");
    let (s, alpha, b) = (
        config.s.clone().expect("required"),
        config.alpha.clone().expect("required"),
        config.b.clone().expect("required"),
    );
    let coupling = if config.lambda < Rational::zero() {
        Coupling::Focusing
    } else {
        Coupling::Defocusing
    };
    let point = match &config.p {
        Some(p) => ParameterPoint::with_power(n, s, alpha, b, coupling, p.clone()),
        None => ParameterPoint::critical(n, s, alpha, b, coupling),
    }
    .map_err(|e| CliError::config(0, e.to_string()))?;
    let grid =
        GridSpec::new(n as usize, config.grid, f(&config.half_width)).map_err(|e| CliError::config(0, e.to_string()))?;
    let params = EquationParams::new(point, grid).map_err(|e| CliError::config(0, e.to_string()))?;
    Ok(if config.lambda.is_zero() {
        params.with_lambda(0.0)
    } else {
        params
    })
}

fn gaussian_datum(config: &RunConfig, grid: GridSpec) -> ComplexField {
    let (amp, w, k) = (f(&config.amplitude), f(&config.width), f(&config.momentum));
    ComplexField::from_fn(grid, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Complex64::from_polar(amp * (-r2 / (2.0 * w * w)).exp(), k * x[0])
    })
}

fn run_simulate(config: &RunConfig) -> Result<Report, CliError> {
    let params = equation(config)?;
    let u0 = gaussian_datum(config, *params.grid());
    let diag = Diagnostics {
        every: config.record_every,
        r: Some(f(&config.r)),
        energy: true,
        snapshots: config.snapshots,
    };
    let traj = simulate(&u0, f(&config.dt), f(&config.t_end), &params, &diag).map_err(|e| CliError::run("HE", e))?;
    let mut report = Report::new("simulate", config);
    let mass_tol = MASS_TOL_PER_1000 * (traj.steps as f64 / 1000.0).max(1.0);
    report.check("mass", traj.mass_drift() < mass_tol, traj.mass_drift(), Some(format!("< {mass_tol:e}")));
    report.check(
        "energy",
        traj.energy_drift() < ENERGY_TOL,
        traj.energy_drift(),
        Some(format!("< {ENERGY_TOL:e}")),
    );
    let mut table = Table::new(
        "trajectory",
        &["t", "mass", "energy", "hdot_s", "h_s", "l_r2", "w_s_r2", "top_octave"],
    );
    for k in 0..traj.times.len() {
        table.push(vec![
            fmt(traj.times[k]),
            fmt(traj.mass[k]),
            fmt(traj.energy[k]),
            fmt(traj.hdot_s[k]),
            fmt(traj.h_s[k]),
            fmt(traj.l_r2[k]),
            fmt(traj.w_s_r2[k]),
            fmt(traj.top_octave[k]),
        ]);
    }
    report.tables.push(table);
    report.snapshots = traj
        .snapshots
        .iter()
        .enumerate()
        .map(|(k, u)| (format!("snapshot_{k:04}.bin"), u.clone()))
        .collect();
    report.details = serde_json::json!({ "dt": traj.dt, "steps": traj.steps });
    Ok(report)
}

fn picard_config(config: &RunConfig) -> PicardConfig {
    PicardConfig {
        intervals: config.intervals,
        cap: config.cap,
        sim_dt: f(&config.dt),
        ..PicardConfig::new(f(&config.t_end), config.q.to_f64(), f(&config.r))
    }
}

fn picard(config: &RunConfig) -> Result<Report, CliError> {
    let params = equation(config)?;
    let u0 = gaussian_datum(config, *params.grid());
    let pc = picard_config(config);
    let rep = picard_contraction(&u0, &pc, &params).map_err(|e| CliError::run("2Duhamel1", e))?;
    let mut report = Report::new("picard", config);
    report.check(
        "contraction",
        rep.contraction_by_3 && !rep.diverged,
        &rep.ratios,
        Some(format!("some ratio < {} by k = 3", crate::sim::picard::CONTRACTION_TARGET)),
    );
    report.check("ball", rep.in_ball, (rep.m_radius, rep.n_radius), None);
    report.check(
        "fixed-point-vs-simulate",
        rep.simulate_distance < rep.simulate_tolerance,
        rep.simulate_distance,
        Some(format!("< {:e}", rep.simulate_tolerance)),
    );
    let mut table = Table::new("picard", &["k", "distance", "ratio"]);
    for (k, d) in rep.distances.iter().enumerate() {
        let ratio = if k > 0 { rep.ratios.get(k - 1).map_or(String::new(), |r| fmt(*r)) } else { String::new() };
        table.push(vec![k.to_string(), fmt(*d), ratio]);
    }
    report.tables.push(table);
    report.details = serde_json::to_value(&rep).expect("report serializes");
    Ok(report)
}

fn depend(config: &RunConfig) -> Result<Report, CliError> {
    let params = equation(config)?;
    let grid = *params.grid();
    let u0 = gaussian_datum(config, grid);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let shift: Vec<f64> = (0..grid.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let w = f(&config.width);
    let direction = ComplexField::from_fn(grid, |x| {
        let r2: f64 = x.iter().zip(&shift).map(|(a, c)| (a - c) * (a - c)).sum();
        Complex64::from_polar((-r2 / (2.0 * w * w)).exp(), phase)
    });
    let sizes: Vec<f64> = config.sizes.iter().map(f).collect();
    let rep = continuous_dependence_check(&u0, &direction, &sizes, &picard_config(config), &params)
        .map_err(|e| CliError::run("continuous dependence", e))?;
    let mut report = Report::new("depend", config);
    report.check(
        "lipschitz",
        rep.pass,
        rep.variation,
        Some(format!("max/min < {}", crate::sim::picard::DEPENDENCE_VARIATION)),
    );
    let mut table = Table::new("depend", &["size", "distance", "ratio"]);
    for k in 0..rep.sizes.len() {
        table.push(vec![fmt(rep.sizes[k]), fmt(rep.distances[k]), fmt(rep.ratios[k])]);
    }
    report.tables.push(table);
    report.details = serde_json::to_value(&rep).expect("report serializes");
    Ok(report)
}

fn scatter(config: &RunConfig) -> Result<Report, CliError> {
    let params = equation(config)?;
    let u0 = gaussian_datum(config, *params.grid());
    let checkpoints: Vec<f64> = config.checkpoints.iter().map(f).collect();
    let rep = scattering_diagnostic(&u0, &params, &checkpoints, f(&config.dt)).map_err(|e| CliError::run("thm-1.3", e))?;
    let mut report = Report::new("scatter", config);
    let criterion = if params.lambda() == 0.0 {
        "cauchy differences vanish".to_string()
    } else {
        format!("factor >= {} per doubling", crate::sim::scatter::DECAY_FACTOR)
    };
    report.check("cauchy-decay", rep.pass, &rep.decay_factors, Some(criterion));
    let mut table = Table::new("scatter", &["t", "cauchy_from_previous", "residual", "boundary_mass"]);
    for k in 0..rep.checkpoints.len() {
        let c = if k > 0 { fmt(rep.cauchy[k - 1]) } else { String::new() };
        table.push(vec![fmt(rep.checkpoints[k]), c, fmt(rep.residuals[k]), fmt(rep.boundary_mass[k])]);
    }
    report.tables.push(table);
    report.details = serde_json::to_value(&rep).expect("report serializes");
    if let Some(phi) = rep.phi {
        report.snapshots.push(("phi.bin".into(), phi));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_config;

    #[test]
    fn gate_pass_and_fail() {
        let ok = run(&parse_config("command = gate\nn = 3\ns = 0\nalpha = 2\nb = 1/2\n").unwrap()).unwrap();
        assert!(ok.pass);
        let bad = run(&parse_config("command = gate\nn = 3\ns = 1\nalpha = 2\nb = 1\n").unwrap()).unwrap();
        assert!(!bad.pass);
        assert!(!bad.checks["as-r"].pass);
    }

    #[test]
    fn scan_rows_replay_under_gate() {
        let cfg = parse_config("command = scan\nn = 3\ns = 0\nsteps = 6\nalpha_lo = 1\nalpha_hi = 5/2\nb_lo = 1/10\nb_hi = 1\n")
            .unwrap();
        let report = run(&cfg).unwrap();
        let rows = &report.tables[0].rows;
        assert_eq!(rows.len(), 36);
        for row in rows {
            let text = format!("command = gate\nn = {}\ns = {}\nalpha = {}\nb = {}\n", row[0], row[1], row[2], row[3]);
            let single = run(&parse_config(&text).unwrap()).unwrap();
            assert_eq!(if single.pass { "PASS" } else { "FAIL" }, row[7]);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = parse_config("command = scan\nn = 4\ns = 1/4\nsteps = 5\n").unwrap();
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.json(), b.json());
        assert_eq!(a.tables[0].to_csv().unwrap(), b.tables[0].to_csv().unwrap());
    }

    #[test]
    fn missing_command_is_usage_error() {
        let err = run(&parse_config("n = 3\n").unwrap()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn infeasible_power_is_config_error() {
        let cfg = parse_config("command = simulate\nn = 3\ns = 0\nalpha = 2\nb = 1/2\np = 3/2\n").unwrap();
        assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
    }
}
