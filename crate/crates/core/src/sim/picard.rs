//! The Duhamel map on a time grid, its Picard iterates, and the
//! Lipschitz dependence on the data, all in the metric
//! `d(u, v) = ‖u − v‖_{L^q_t L^{r,2}_x}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{nonlinearity, simulate, Diagnostics, EquationParams, SimError};
use crate::grid::ComplexField;
use crate::spectral::time_norm;

/// Distances below this multiple of `d(u⁽⁰⁾, 0)` are rounding noise.
pub const ROUNDING_FLOOR: f64 = 1e-13;
pub const CONTRACTION_TARGET: f64 = 0.5;
pub const AGREEMENT_TOL: f64 = 1e-4;
pub const DEPENDENCE_VARIATION: f64 = 2.0;

#[derive(Clone, Debug, Serialize)]
pub struct PicardConfig {
    pub t_end: f64,
    /// Quadrature intervals on `[0, T]`; even, so the coarse rule exists.
    pub intervals: usize,
    pub cap: usize,
    pub q: f64,
    pub r: f64,
    /// Ball radii of `X(T, M, N)`; `None` takes `2‖u₀‖_{H^s}` and `2ε`.
    pub m_radius: Option<f64>,
    pub n_radius: Option<f64>,
    /// Smallness target; `None` takes the measured `‖e^{itΔ}u₀‖_{L^q W^s_{r,2}}`.
    pub epsilon: Option<f64>,
    /// Step of the reference integration.
    pub sim_dt: f64,
}

impl PicardConfig {
    pub fn new(t_end: f64, q: f64, r: f64) -> Self {
        Self {
            t_end,
            intervals: 50,
            cap: 12,
            q,
            r,
            m_radius: None,
            n_radius: None,
            epsilon: None,
            sim_dt: 1e-3,
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(SimError::Config(format!("T = {} must be positive", self.t_end)));
        }
        if self.cap < 3 {
            return Err(SimError::Config(format!("iteration cap {} below 3", self.cap)));
        }
        if self.intervals < 2 || self.intervals % 2 != 0 {
            return Err(SimError::Config(format!("quadrature intervals {} must be even", self.intervals)));
        }
        if !(self.sim_dt > 0.0) {
            return Err(SimError::Config(format!("sim_dt = {}", self.sim_dt)));
        }
        Ok(())
    }

    fn nodes(&self) -> Vec<f64> {
        (0..=self.intervals)
            .map(|k| self.t_end * k as f64 / self.intervals as f64)
            .collect()
    }
}

/// `Φ(u)` at the nodes together with an estimate of the quadrature error
/// at the last node (trapezoid against the rule on every second node).
#[derive(Clone, Debug)]
pub struct DuhamelImage {
    pub fields: Vec<ComplexField>,
    pub quadrature_error: f64,
}

/// `Φ(u)(t) = e^{itΔ}u₀ − i∫₀ᵗ e^{i(t−τ)Δ} F(u(τ)) dτ` by the trapezoid rule
/// in `τ` on the nodes of `u_traj`.
pub fn duhamel_map(
    u_traj: &[ComplexField],
    times: &[f64],
    u0: &ComplexField,
    params: &EquationParams,
) -> Result<DuhamelImage, SimError> {
    if u_traj.is_empty() || u_traj.len() != times.len() {
        return Err(SimError::Config("trajectory and nodes differ in length".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SimError::Time("nodes not strictly increasing".into()));
    }
    let sp = params.spectral();
    let k2 = sp.lattice().modulus_sq();
    // ĝ_j = e^{+iτ_j|ξ|²} F̂(u(τ_j))
    let g: Vec<Vec<Complex64>> = u_traj
        .par_iter()
        .zip(times.par_iter())
        .map(|(u, &tau)| {
            let mut data = sp.forward(&nonlinearity(u, params));
            data.iter_mut()
                .zip(k2)
                .for_each(|(v, &w)| *v *= Complex64::from_polar(1.0, tau * w));
            data
        })
        .collect();
    let u0_hat = sp.forward(u0);
    let len = u0_hat.len();
    let mut partial = Vec::with_capacity(times.len());
    let mut acc = vec![Complex64::default(); len];
    partial.push(acc.clone());
    for j in 1..times.len() {
        let h = 0.5 * (times[j] - times[j - 1]);
        acc.iter_mut()
            .zip(g[j - 1].iter().zip(&g[j]))
            .for_each(|(a, (x, y))| *a += (x + y) * h);
        partial.push(acc.clone());
    }
    let quadrature_error = if times.len() >= 3 && (times.len() - 1) % 2 == 0 {
        let mut coarse = vec![Complex64::default(); len];
        for j in (2..times.len()).step_by(2) {
            let h = 0.5 * (times[j] - times[j - 2]);
            coarse
                .iter_mut()
                .zip(g[j - 2].iter().zip(&g[j]))
                .for_each(|(a, (x, y))| *a += (x + y) * h);
        }
        let diff: f64 = coarse.iter().zip(&acc).map(|(a, b)| (a - b).norm_sqr()).sum();
        (diff * params.grid().cell_measure() / len as f64).sqrt() / 3.0
    } else {
        f64::NAN
    };
    let minus_i = Complex64::new(0.0, -1.0);
    let fields = partial
        .into_par_iter()
        .zip(times.par_iter())
        .map(|(s, &t)| {
            let data = u0_hat
                .iter()
                .zip(&s)
                .zip(k2)
                .map(|((a, b), &w)| (a + minus_i * b) * Complex64::from_polar(1.0, -t * w))
                .collect();
            sp.inverse(data)
        })
        .collect();
    Ok(DuhamelImage {
        fields,
        quadrature_error,
    })
}

/// `‖u − v‖_{L^q_t L^{r,2}}` over the nodes.
pub fn trajectory_distance(a: &[ComplexField], b: &[ComplexField], times: &[f64], q: f64, r: f64) -> Result<f64, SimError> {
    let values = a
        .par_iter()
        .zip(b.par_iter())
        .map(|(x, y)| {
            let d = x.sub(y)?;
            crate::lorentz::lorentz_norm_of(&d, r, 2.0).map_err(|e| SimError::Config(e.to_string()))
        })
        .collect::<Result<Vec<_>, SimError>>()?;
    Ok(time_norm(times, &values, q)?)
}

fn spacetime(fields: &[ComplexField], times: &[f64], q: f64, r: f64, s: f64, params: &EquationParams) -> Result<f64, SimError> {
    let sp = params.spectral();
    let values = fields
        .iter()
        .map(|f| sp.sobolev_lorentz(f, s, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(time_norm(times, &values, q)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct PicardReport {
    pub t_end: f64,
    pub u0_h_s: f64,
    pub epsilon: f64,
    pub m_radius: f64,
    pub n_radius: f64,
    /// `d_k = d(u⁽ᵏ⁺¹⁾, u⁽ᵏ⁾)`.
    pub distances: Vec<f64>,
    /// `d_{k+1}/d_k` while both sit above the rounding floor.
    pub ratios: Vec<f64>,
    /// `(sup_t ‖u⁽ᵏ⁾‖_{H^s}, ‖u⁽ᵏ⁾‖_{L^q W^s_{r,2}})` per iterate.
    pub iterate_norms: Vec<(f64, f64)>,
    pub in_ball: bool,
    pub contraction_by_3: bool,
    pub converged: bool,
    pub diverged: bool,
    pub quadrature_error: f64,
    /// Relative L² distance at `t = T` of the last iterate from [`simulate`].
    pub simulate_distance: f64,
    pub simulate_tolerance: f64,
    pub failure: Option<String>,
    pub pass: bool,
}

pub fn picard_contraction(
    u0: &ComplexField,
    config: &PicardConfig,
    params: &EquationParams,
) -> Result<PicardReport, SimError> {
    config.validate()?;
    u0.check_finite()?;
    let times = config.nodes();
    let s = params.s();
    let sp = params.spectral();
    let mut current: Vec<ComplexField> = times.par_iter().map(|&t| sp.propagator(u0, t)).collect();
    let u0_h_s = sp.h(u0, s);
    let epsilon = config
        .epsilon
        .map_or_else(|| spacetime(&current, &times, config.q, config.r, s, params), Ok)?;
    let m_radius = config.m_radius.unwrap_or(2.0 * u0_h_s);
    let n_radius = config.n_radius.unwrap_or(2.0 * epsilon);
    let zeros: Vec<ComplexField> = times.iter().map(|_| ComplexField::zeros(*params.grid())).collect();
    let scale = trajectory_distance(&current, &zeros, &times, config.q, config.r)?;
    let floor = ROUNDING_FLOOR * scale.max(f64::MIN_POSITIVE);

    let mut iterate_norms = Vec::new();
    let mut distances = Vec::new();
    let mut ratios = Vec::new();
    let mut converged = false;
    let mut diverged = false;
    let mut quadrature_error = 0.0;
    let mut above_one = 0;
    let norms = |f: &[ComplexField]| -> Result<(f64, f64), SimError> {
        let sup = f.iter().map(|u| sp.h(u, s)).fold(0.0, f64::max);
        Ok((sup, spacetime(f, &times, config.q, config.r, s, params)?))
    };
    iterate_norms.push(norms(&current)?);
    for _ in 0..config.cap {
        let image = duhamel_map(&current, &times, u0, params)?;
        quadrature_error = image.quadrature_error;
        let d = trajectory_distance(&image.fields, &current, &times, config.q, config.r)?;
        current = image.fields;
        iterate_norms.push(norms(&current)?);
        if let Some(&prev) = distances.last() {
            if prev > floor && d > floor {
                let ratio = d / prev;
                ratios.push(ratio);
                above_one = if ratio > 1.0 { above_one + 1 } else { 0 };
            }
        }
        distances.push(d);
        if d <= floor {
            converged = true;
            break;
        }
        if above_one >= 3 {
            diverged = true;
            break;
        }
    }
    let contraction_by_3 = if ratios.is_empty() {
        converged
    } else {
        ratios.iter().take(3).any(|&r| r < CONTRACTION_TARGET)
    };
    let in_ball = iterate_norms
        .iter()
        .all(|&(sup, st)| sup <= m_radius && st <= n_radius);

    let steps_per = ((config.t_end / config.intervals as f64) / config.sim_dt).ceil().max(1.0);
    let reference = simulate(
        u0,
        config.t_end / (config.intervals as f64 * steps_per),
        config.t_end,
        params,
        &Diagnostics {
            energy: false,
            ..Default::default()
        },
    )?;
    let last = current.last().expect("at least one node");
    let simulate_distance = last.relative_l2(reference.final_state());
    let relative_quad = if quadrature_error.is_finite() {
        quadrature_error / last.l2_norm().max(f64::MIN_POSITIVE)
    } else {
        0.0
    };
    let simulate_tolerance = AGREEMENT_TOL.max(relative_quad);
    let failure = diverged.then(|| {
        format!(
            "contraction failure: ratio above 1 three times in a row at T = {}, |u0|_H^s = {u0_h_s:.6e}",
            config.t_end
        )
    });
    let pass = contraction_by_3 && !diverged && in_ball && simulate_distance < simulate_tolerance;
    Ok(PicardReport {
        t_end: config.t_end,
        u0_h_s,
        epsilon,
        m_radius,
        n_radius,
        distances,
        ratios,
        iterate_norms,
        in_ball,
        contraction_by_3,
        converged,
        diverged,
        quadrature_error,
        simulate_distance,
        simulate_tolerance,
        failure,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DependenceReport {
    pub sizes: Vec<f64>,
    pub distances: Vec<f64>,
    /// `d(u, v)/‖u₀ − v₀‖_{H^s}`; zero for a zero perturbation.
    pub ratios: Vec<f64>,
    /// Largest over smallest ratio among the nonzero sizes.
    pub variation: f64,
    pub pass: bool,
}

fn node_trajectory(u0: &ComplexField, config: &PicardConfig, params: &EquationParams) -> Result<Vec<ComplexField>, SimError> {
    let per = ((config.t_end / config.intervals as f64) / config.sim_dt).ceil().max(1.0) as usize;
    let steps = per * config.intervals;
    let traj = simulate(
        u0,
        config.t_end / steps as f64,
        config.t_end,
        params,
        &Diagnostics {
            every: per,
            energy: false,
            snapshots: true,
            r: None,
        },
    )?;
    Ok(traj.snapshots)
}

/// Solves from `u₀` and from `u₀ + η ψ/‖ψ‖_{H^s}` for each size `η` and
/// measures `d(u, v)` on `[0, T]`.
pub fn continuous_dependence_check(
    u0: &ComplexField,
    direction: &ComplexField,
    sizes: &[f64],
    config: &PicardConfig,
    params: &EquationParams,
) -> Result<DependenceReport, SimError> {
    config.validate()?;
    if sizes.is_empty() || sizes.iter().any(|&e| !(e >= 0.0 && e.is_finite())) {
        return Err(SimError::Config("perturbation sizes must be finite and >= 0".into()));
    }
    let s = params.s();
    let sp = params.spectral();
    let unit = sp.h(direction, s);
    if !(unit > 0.0) {
        return Err(SimError::Config("perturbation direction vanishes".into()));
    }
    let times = config.nodes();
    let base = node_trajectory(u0, config, params)?;
    let mut distances = Vec::new();
    let mut ratios = Vec::new();
    for &eta in sizes {
        let mut v0 = u0.clone();
        v0.values_mut()
            .iter_mut()
            .zip(direction.values())
            .for_each(|(a, b)| *a += b * (eta / unit));
        let gap = sp.h(&v0.sub(u0)?, s);
        let other = node_trajectory(&v0, config, params)?;
        let d = trajectory_distance(&base, &other, &times, config.q, config.r)?;
        distances.push(d);
        ratios.push(if gap > 0.0 { d / gap } else { 0.0 });
    }
    let nonzero: Vec<f64> = sizes
        .iter()
        .zip(&ratios)
        .filter(|(&e, _)| e > 0.0)
        .map(|(_, &r)| r)
        .collect();
    let variation = if nonzero.is_empty() {
        1.0
    } else {
        let hi = nonzero.iter().copied().fold(f64::MIN, f64::max);
        let lo = nonzero.iter().copied().fold(f64::MAX, f64::min);
        hi / lo
    };
    let pass = nonzero.iter().all(|r| r.is_finite() && *r > 0.0) && variation < DEPENDENCE_VARIATION;
    Ok(DependenceReport {
        sizes: sizes.to_vec(),
        distances,
        ratios,
        variation,
        pass,
    })
}
