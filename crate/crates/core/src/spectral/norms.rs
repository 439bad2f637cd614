use serde::Serialize;

use super::{Spectral, SpectralError};
use crate::grid::ComplexField;
use crate::lorentz::lorentz_norm_of;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormSuite {
    pub h_s: f64,
    pub hdot_s: f64,
    /// `‖(1−Δ)^{s/2} f‖_{L^{r,2}}`.
    pub w_s_r2: f64,
    pub l_r2: f64,
    /// `‖(−Δ)^{s/2} f‖_{L^{r,2}}`.
    pub wdot_s_r2: f64,
    /// `w_s_r2 / (l_r2 + wdot_s_r2)`.
    pub equivalence_ratio: f64,
}

fn lorentz(f: &ComplexField, r: f64) -> Result<f64, SpectralError> {
    lorentz_norm_of(f, r, 2.0).map_err(|e| SpectralError::Lorentz(e.to_string()))
}

impl Spectral {
    pub fn hdot(&self, f: &ComplexField, s: f64) -> f64 {
        self.weighted_energy(f, |k2| if k2 == 0.0 && s > 0.0 { 0.0 } else { k2.powf(s) })
            .sqrt()
    }

    pub fn h(&self, f: &ComplexField, s: f64) -> f64 {
        self.weighted_energy(f, |k2| (1.0 + k2).powf(s)).sqrt()
    }

    /// `‖(1−Δ)^{s/2} f‖_{L^{r,2}}`; `s = 0` is the plain `L^{r,2}` norm.
    pub fn sobolev_lorentz(&self, f: &ComplexField, s: f64, r: f64) -> Result<f64, SpectralError> {
        if s == 0.0 {
            lorentz(f, r)
        } else {
            lorentz(&self.bessel(f, s), r)
        }
    }

    pub fn norm_suite(&self, f: &ComplexField, s: f64, r: f64) -> Result<NormSuite, SpectralError> {
        if s < 0.0 {
            return Err(SpectralError::Regularity(s));
        }
        f.check_finite()?;
        let w_s_r2 = self.sobolev_lorentz(f, s, r)?;
        let l_r2 = lorentz(f, r)?;
        let wdot_s_r2 = lorentz(&self.fractional_laplacian(f, s), r)?;
        Ok(NormSuite {
            h_s: self.h(f, s),
            hdot_s: self.hdot(f, s),
            w_s_r2,
            l_r2,
            wdot_s_r2,
            equivalence_ratio: w_s_r2 / (l_r2 + wdot_s_r2),
        })
    }
}

pub fn norm_suite(f: &ComplexField, s: f64, r: f64) -> Result<NormSuite, SpectralError> {
    Spectral::new(*f.grid()).norm_suite(f, s, r)
}

/// `(∫ g(t)^q dt)^{1/q}` by the composite trapezoid; `q = ∞` is the max.
pub fn time_norm(times: &[f64], values: &[f64], q: f64) -> Result<f64, SpectralError> {
    if times.is_empty() || times.len() != values.len() {
        return Err(SpectralError::EmptyTrajectory);
    }
    if q.is_infinite() {
        return Ok(values.iter().copied().fold(0.0, f64::max));
    }
    let sum: f64 = times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0].powf(q) + v[1].powf(q)))
        .sum();
    Ok(sum.powf(1.0 / q))
}

/// `‖u‖_{L^q_t W^s_{r,2}}` over sampled fields.
pub fn spacetime_norm(times: &[f64], fields: &[ComplexField], q: f64, r: f64, s: f64) -> Result<f64, SpectralError> {
    let first = fields.first().ok_or(SpectralError::EmptyTrajectory)?;
    let sp = Spectral::new(*first.grid());
    let values = fields
        .iter()
        .map(|f| sp.sobolev_lorentz(f, s, r))
        .collect::<Result<Vec<_>, _>>()?;
    time_norm(times, &values, q)
}
