use num_complex::Complex64;
use serde::Serialize;

use super::{energy, kick, potential, EquationParams, SimError};
use crate::grid::ComplexField;

/// Share of spectral energy in the top octave that aborts a run.
pub const TAIL_LIMIT: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct SimState {
    pub u: ComplexField,
    pub t: f64,
}

/// What [`simulate`] records.
#[derive(Clone, Debug)]
pub struct Diagnostics {
    /// Record every this many steps (the final step is always recorded).
    pub every: usize,
    /// Lorentz index of the `L^{r,2}` and `W^s_{r,2}` columns; `None` skips them.
    pub r: Option<f64>,
    pub energy: bool,
    pub snapshots: bool,
}

impl Default for Diagnostics {
    fn default() -> Self {
        Self {
            every: 1,
            r: None,
            energy: true,
            snapshots: false,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Trajectory {
    pub dt: f64,
    pub steps: usize,
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub energy: Vec<f64>,
    pub hdot_s: Vec<f64>,
    pub h_s: Vec<f64>,
    pub l_r2: Vec<f64>,
    pub w_s_r2: Vec<f64>,
    pub top_octave: Vec<f64>,
    #[serde(skip)]
    pub snapshots: Vec<ComplexField>,
    #[serde(skip)]
    pub last: Option<ComplexField>,
}

impl Trajectory {
    pub fn mass_drift(&self) -> f64 {
        relative_drift(&self.mass)
    }

    pub fn energy_drift(&self) -> f64 {
        relative_drift(&self.energy)
    }

    pub fn final_state(&self) -> &ComplexField {
        self.last.as_ref().expect("trajectory holds its final state")
    }
}

fn relative_drift(series: &[f64]) -> f64 {
    let Some(first) = series.first() else {
        return 0.0;
    };
    let scale = first.abs().max(f64::MIN_POSITIVE);
    series.iter().map(|v| (v - first).abs()).fold(0.0, f64::max) / scale
}

/// One Strang step with a freshly evaluated potential.
pub fn strang_step(state: &SimState, dt: f64, params: &EquationParams) -> SimState {
    let mut stepper = Stepper::new(state.u.clone(), state.t, params);
    stepper.step(dt);
    stepper.into_state()
}

/// Strang integrator that keeps `V(u)` between steps. The kicks only
/// change the phase and `V` only sees `|u|`, so the potential closing one
/// step opens the next, and a step with `−dt` undoes a step with `dt`.
pub struct Stepper<'a> {
    params: &'a EquationParams,
    u: ComplexField,
    t: f64,
    v: Vec<f64>,
    propagator: Option<(f64, Vec<Complex64>)>,
}

impl<'a> Stepper<'a> {
    pub fn new(u: ComplexField, t: f64, params: &'a EquationParams) -> Self {
        let v = potential(&u, params).into_values();
        Self {
            params,
            u,
            t,
            v,
            propagator: None,
        }
    }

    pub fn u(&self) -> &ComplexField {
        &self.u
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn into_state(self) -> SimState {
        SimState { u: self.u, t: self.t }
    }

    fn drift(&mut self, dt: f64) {
        let lattice = self.params.spectral().lattice();
        let stale = !matches!(&self.propagator, Some((cached, _)) if *cached == dt);
        if stale {
            let m = lattice
                .modulus_sq()
                .iter()
                .map(|&k2| Complex64::from_polar(1.0, -dt * k2))
                .collect();
            self.propagator = Some((dt, m));
        }
        let (_, m) = self.propagator.as_ref().expect("propagator cached");
        let sp = self.params.spectral();
        let mut data = sp.forward(&self.u);
        data.iter_mut().zip(m).for_each(|(a, b)| *a *= b);
        self.u = sp.inverse(data);
    }

    pub fn step(&mut self, dt: f64) {
        let lambda_free = self.params.lambda() == 0.0;
        if !lambda_free {
            kick(&mut self.u, &self.v, 0.5 * dt);
        }
        self.drift(dt);
        if !lambda_free {
            self.v = potential(&self.u, self.params).into_values();
            kick(&mut self.u, &self.v, 0.5 * dt);
        }
        self.t += dt;
    }
}

/// Integrates from `t = 0` to `t_end` in `⌈t_end/dt⌉` equal steps.
pub fn simulate(
    u0: &ComplexField,
    dt: f64,
    t_end: f64,
    params: &EquationParams,
    diag: &Diagnostics,
) -> Result<Trajectory, SimError> {
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(SimError::Time(format!("dt = {dt}, T = {t_end}")));
    }
    if u0.grid() != params.grid() {
        return Err(SimError::Grid(crate::grid::GridError::Mismatch));
    }
    u0.check_finite()?;
    let steps = ((t_end / dt) - 1e-9).ceil().max(0.0) as usize;
    let dt = if steps == 0 { dt } else { t_end / steps as f64 };
    let mut traj = Trajectory {
        dt,
        steps,
        ..Default::default()
    };
    let mut stepper = Stepper::new(u0.clone(), 0.0, params);
    record(&mut traj, stepper.u(), 0.0, params, diag)?;
    let every = diag.every.max(1);
    for k in 1..=steps {
        stepper.step(dt);
        let t = k as f64 * dt;
        if !stepper.u().values().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(SimError::NonFinite(t));
        }
        if k % every == 0 || k == steps {
            record(&mut traj, stepper.u(), t, params, diag)?;
        }
    }
    traj.last = Some(stepper.into_state().u);
    Ok(traj)
}

fn record(
    traj: &mut Trajectory,
    u: &ComplexField,
    t: f64,
    params: &EquationParams,
    diag: &Diagnostics,
) -> Result<(), SimError> {
    let sp = params.spectral();
    let fraction = sp.top_octave_fraction(u);
    if fraction > TAIL_LIMIT {
        return Err(SimError::Unresolved { t, fraction });
    }
    let s = params.s();
    traj.times.push(t);
    traj.mass.push(u.mass());
    traj.top_octave.push(fraction);
    if diag.energy {
        traj.energy.push(energy(u, params));
    }
    traj.hdot_s.push(sp.hdot(u, s));
    traj.h_s.push(sp.h(u, s));
    if let Some(r) = diag.r {
        traj.l_r2.push(sp.sobolev_lorentz(u, 0.0, r)?);
        traj.w_s_r2.push(sp.sobolev_lorentz(u, s, r)?);
    }
    if diag.snapshots {
        traj.snapshots.push(u.clone());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::{int, rat, Coupling, ParameterPoint};
    use crate::grid::GridSpec;

    fn setup(n: usize, lambda: Coupling) -> (EquationParams, ComplexField) {
        let pt = ParameterPoint::critical(3, int(0), int(2), rat(1, 2), lambda).unwrap();
        let g = GridSpec::new(3, n, 6.0).unwrap();
        let u0 = ComplexField::from_fn(g, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            Complex64::new(2.0 * (-r2 / 2.0).exp(), 0.0) * Complex64::from_polar(1.0, 0.3 * x[0])
        });
        (EquationParams::new(pt, g).unwrap(), u0)
    }

    #[test]
    fn lambda_free_is_free_flow() {
        let (p, u0) = setup(16, Coupling::Focusing);
        let p = p.with_lambda(0.0);
        let traj = simulate(&u0, 0.01, 0.2, &p, &Diagnostics::default()).unwrap();
        let free = p.spectral().propagator(&u0, 0.2);
        assert!(traj.final_state().relative_l2(&free) < 1e-12);
    }

    #[test]
    fn time_reversal() {
        let (p, u0) = setup(16, Coupling::Defocusing);
        let mut st = Stepper::new(u0.clone(), 0.0, &p);
        for _ in 0..5 {
            st.step(0.01);
        }
        for _ in 0..5 {
            st.step(-0.01);
        }
        assert!(st.u().relative_l2(&u0) < 1e-10);
    }

    #[test]
    fn gauge_covariant_flow() {
        let (p, u0) = setup(16, Coupling::Focusing);
        let phase = Complex64::from_polar(1.0, 1.1);
        let mut rotated = u0.clone();
        rotated.scale(phase);
        let d = Diagnostics {
            energy: false,
            ..Default::default()
        };
        let a = simulate(&u0, 0.01, 0.1, &p, &d).unwrap();
        let b = simulate(&rotated, 0.01, 0.1, &p, &d).unwrap();
        let mut want = a.final_state().clone();
        want.scale(phase);
        assert!(b.final_state().relative_l2(&want) < 1e-10);
    }

    #[test]
    fn second_order_self_convergence() {
        let (p, u0) = setup(16, Coupling::Focusing);
        let d = Diagnostics {
            energy: false,
            ..Default::default()
        };
        let run = |dt| simulate(&u0, dt, 0.2, &p, &d).unwrap().final_state().clone();
        let (a, b, c) = (run(0.02), run(0.01), run(0.005));
        let ratio = a.sub(&b).unwrap().l2_norm() / b.sub(&c).unwrap().l2_norm();
        assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");
    }

    #[test]
    fn single_step_matches_stepper() {
        let (p, u0) = setup(16, Coupling::Defocusing);
        let one = strang_step(&SimState { u: u0.clone(), t: 0.0 }, 0.01, &p);
        let traj = simulate(&u0, 0.01, 0.01, &p, &Diagnostics::default()).unwrap();
        assert!(one.u.relative_l2(traj.final_state()) < 1e-14);
        assert!((one.t - 0.01).abs() < 1e-15);
    }

    #[test]
    fn rough_data_is_rejected() {
        let (p, _) = setup(16, Coupling::Focusing);
        let rough = ComplexField::from_fn(*p.grid(), |x| Complex64::new((x[0] * std::f64::consts::PI).cos(), 0.0));
        assert!(matches!(
            simulate(&rough, 0.01, 0.01, &p, &Diagnostics::default()),
            Err(SimError::Unresolved { .. })
        ));
    }

    #[test]
    fn bad_step_is_rejected() {
        let (p, u0) = setup(8, Coupling::Focusing);
        assert!(simulate(&u0, 0.0, 1.0, &p, &Diagnostics::default()).is_err());
        assert!(simulate(&u0, f64::NAN, 1.0, &p, &Diagnostics::default()).is_err());
    }
}
