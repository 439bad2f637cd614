use serde::Serialize;

use super::{EquationParams, SimError, Stepper};
use crate::grid::ComplexField;

/// Outer shell `max_i |x_i| > 3L/4` treated as the box boundary.
pub const BOUNDARY_SHELL: f64 = 0.75;
/// Share of the mass in the shell that marks the recurrence horizon.
pub const BOUNDARY_MASS_LIMIT: f64 = 0.01;
pub const DECAY_FACTOR: f64 = 2.0;
/// Relative size of a free-flow Cauchy difference accepted as zero.
pub const FREE_FLOW_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct ScatterReport {
    pub checkpoints: Vec<f64>,
    /// `‖w_{t_{k+1}} − w_{t_k}‖_{H^s}` with `w_t = e^{−itΔ}u(t)`.
    pub cauchy: Vec<f64>,
    /// `cauchy[k]/cauchy[k+1]`.
    pub decay_factors: Vec<f64>,
    /// `‖u(t_k) − e^{it_kΔ}φ‖_{H^s}`, `φ = w` at the last checkpoint.
    pub residuals: Vec<f64>,
    pub boundary_mass: Vec<f64>,
    /// Index of the first checkpoint past the recurrence horizon, if any.
    pub horizon: Option<usize>,
    pub horizon_limited: bool,
    /// Every Cauchy difference shrinks (no sign of non-scattering).
    pub decreasing: bool,
    #[serde(skip)]
    pub phi: Option<ComplexField>,
    pub pass: bool,
}

fn boundary_fraction(u: &ComplexField) -> f64 {
    let g = u.grid();
    let cut = BOUNDARY_SHELL * g.half_width();
    let mut x = vec![0.0; g.dim()];
    let (mut outer, mut all) = (0.0, 0.0);
    for (flat, z) in u.values().iter().enumerate() {
        g.point(flat, &mut x);
        let m = z.norm_sqr();
        all += m;
        if x.iter().any(|v| v.abs() > cut) {
            outer += m;
        }
    }
    if all == 0.0 {
        0.0
    } else {
        outer / all
    }
}

/// Integrates to each checkpoint and measures the convergence of the
/// profiles `e^{−itΔ}u(t)`.
pub fn scattering_diagnostic(
    u0: &ComplexField,
    params: &EquationParams,
    checkpoints: &[f64],
    dt: f64,
) -> Result<ScatterReport, SimError> {
    if checkpoints.len() < 2 || checkpoints[0] <= 0.0 || checkpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SimError::Time("need at least two increasing positive checkpoints".into()));
    }
    if !(dt > 0.0) {
        return Err(SimError::Time(format!("dt = {dt}")));
    }
    u0.check_finite()?;
    let sp = params.spectral();
    let s = params.s();
    let mut stepper = Stepper::new(u0.clone(), 0.0, params);
    let mut profiles = Vec::new();
    let mut states = Vec::new();
    let mut boundary_mass = Vec::new();
    for &t in checkpoints {
        let span = t - stepper.t();
        let steps = ((span / dt) - 1e-9).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        for _ in 0..steps {
            stepper.step(h);
        }
        let u = stepper.u();
        if !u.values().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(SimError::NonFinite(t));
        }
        let fraction = sp.top_octave_fraction(u);
        if fraction > super::integrate::TAIL_LIMIT {
            return Err(SimError::Unresolved { t, fraction });
        }
        boundary_mass.push(boundary_fraction(u));
        profiles.push(sp.propagator(u, -t));
        states.push(u.clone());
    }
    let cauchy: Vec<f64> = profiles
        .windows(2)
        .map(|w| Ok(sp.h(&w[1].sub(&w[0])?, s)))
        .collect::<Result<_, SimError>>()?;
    let decay_factors: Vec<f64> = cauchy.windows(2).map(|w| w[0] / w[1]).collect();
    let phi = profiles.last().expect("checkpoints").clone();
    let residuals = states
        .iter()
        .zip(checkpoints)
        .map(|(u, &t)| Ok(sp.h(&u.sub(&sp.propagator(&phi, t))?, s)))
        .collect::<Result<Vec<_>, SimError>>()?;
    let horizon = boundary_mass.iter().position(|&m| m > BOUNDARY_MASS_LIMIT);
    // factor k compares the intervals ending at checkpoints k+1 and k+2
    let usable = match horizon {
        Some(h) => decay_factors.len().min(h.saturating_sub(2)),
        None => decay_factors.len(),
    };
    let decreasing = cauchy.windows(2).all(|w| w[1] < w[0]);
    let pass = if params.lambda() == 0.0 {
        let scale = sp.h(u0, s);
        cauchy.iter().all(|&c| c <= FREE_FLOW_TOL * scale)
    } else {
        usable > 0 && decay_factors[..usable].iter().all(|&f| f >= DECAY_FACTOR)
    };
    Ok(ScatterReport {
        checkpoints: checkpoints.to_vec(),
        cauchy,
        decay_factors,
        residuals,
        boundary_mass,
        horizon,
        horizon_limited: horizon.is_some(),
        decreasing,
        phi: Some(phi),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::{int, rat, Coupling, ParameterPoint};
    use crate::grid::GridSpec;
    use num_complex::Complex64;

    fn setup(amp: f64, width: f64, l: f64) -> (EquationParams, ComplexField) {
        let pt = ParameterPoint::critical(3, rat(1, 2), int(2), int(1), Coupling::Defocusing).unwrap();
        let g = GridSpec::new(3, 16, l).unwrap();
        let u0 = ComplexField::from_fn(g, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            Complex64::new(amp * (-r2 / (2.0 * width * width)).exp(), 0.0)
        });
        (EquationParams::new(pt, g).unwrap(), u0)
    }

    #[test]
    fn free_flow_control_is_constant() {
        let (p, u0) = setup(1.0, 1.0, 6.0);
        let p = p.with_lambda(0.0);
        let r = scattering_diagnostic(&u0, &p, &[0.25, 0.5, 1.0], 0.05).unwrap();
        assert!(r.cauchy.iter().all(|&c| c < 1e-13), "{:?}", r.cauchy);
    }

    #[test]
    fn boundary_mass_flags_horizon() {
        let (p, u0) = setup(0.01, 1.0, 4.0);
        let r = scattering_diagnostic(&u0, &p, &[0.5, 1.0, 4.0], 0.05).unwrap();
        assert!(r.horizon_limited);
        assert!(r.boundary_mass[2] > BOUNDARY_MASS_LIMIT);
    }

    #[test]
    fn checkpoints_validated() {
        let (p, u0) = setup(0.01, 1.0, 6.0);
        assert!(scattering_diagnostic(&u0, &p, &[1.0], 0.1).is_err());
        assert!(scattering_diagnostic(&u0, &p, &[1.0, 0.5], 0.1).is_err());
    }
}
