use num_traits::ToPrimitive;
use serde::Serialize;

use super::{simulate, Diagnostics, EquationParams, SimError};
use crate::grid::ComplexField;

pub const HDOT_TOL: f64 = 1e-6;
pub const FIELD_TOL: f64 = 1e-3;

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub delta: f64,
    pub t: f64,
    pub steps: usize,
    /// `(2 − 2b + α)/(2(p − 1))`.
    pub exponent: f64,
    pub s_c: f64,
    pub hdot_sc_original: f64,
    pub hdot_sc_dilated: f64,
    pub hdot_sc_relative: f64,
    /// Relative L² distance of `δ^a u(δx, δ²t)` from `u_δ(x, t)`.
    pub field_mismatch: f64,
    pub top_octave_initial: f64,
    pub pass: bool,
}

fn power_of_two(delta: f64) -> bool {
    delta > 0.0 && delta.is_finite() && {
        let e = delta.log2();
        e == e.round()
    }
}

/// Runs `u₀` to `δ²t` on the grid of `params` and `u_{δ,0}` to `t` on the
/// dilated grid, with the same number of steps.
pub fn scaling_covariance_check(
    u0: &ComplexField,
    delta: f64,
    t: f64,
    steps: usize,
    params: &EquationParams,
) -> Result<ScalingReport, SimError> {
    if !power_of_two(delta) {
        return Err(SimError::Dilation(delta));
    }
    if steps == 0 || !(t > 0.0) {
        return Err(SimError::Time(format!("t = {t}, steps = {steps}")));
    }
    let point = params.point();
    let a = point.scaling_exponent().to_f64().unwrap_or(f64::NAN);
    let s_c = point.s_c.to_f64().unwrap_or(f64::NAN);
    let dilated = params.dilated(delta)?;
    let amp = delta.powf(a);
    let u0_delta = ComplexField::new(*dilated.grid(), u0.values().iter().map(|z| z * amp).collect())?;

    let hdot_a = params.spectral().hdot(u0, s_c);
    let hdot_b = dilated.spectral().hdot(&u0_delta, s_c);

    let diag = Diagnostics {
        energy: false,
        ..Default::default()
    };
    let t_a = delta * delta * t;
    let run_a = simulate(u0, t_a / steps as f64, t_a, params, &diag)?;
    let run_b = simulate(&u0_delta, t / steps as f64, t, &dilated, &diag)?;
    let mut scaled = run_a.final_state().clone();
    scaled.scale(amp.into());
    let reference = ComplexField::new(*dilated.grid(), scaled.into_values())?;
    let field_mismatch = run_b.final_state().relative_l2(&reference);
    let hdot_sc_relative = (hdot_b - hdot_a).abs() / hdot_a.max(f64::MIN_POSITIVE);
    Ok(ScalingReport {
        delta,
        t,
        steps,
        exponent: a,
        s_c,
        hdot_sc_original: hdot_a,
        hdot_sc_dilated: hdot_b,
        hdot_sc_relative,
        field_mismatch,
        top_octave_initial: params.spectral().top_octave_fraction(u0),
        pass: hdot_sc_relative < HDOT_TOL && field_mismatch < FIELD_TOL,
    })
}
