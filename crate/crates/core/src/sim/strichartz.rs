//! Ratios of the homogeneous and inhomogeneous Strichartz estimates over a
//! dilation family of Gaussians, each on its matched grid and on the time
//! window rescaled parabolically with it.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::SimError;
use crate::exponents::{rat_f64, AdmissiblePair, Exponent, Rational};
use crate::grid::{ComplexField, GridSpec};
use crate::lorentz::lorentz_norm_of;
use crate::spectral::{time_norm, Spectral};

pub const STABILITY_TOL: f64 = 0.1;
pub const ENDPOINT_TOL: f64 = 1e-10;

/// Gaussians `exp(−|δx|²/(2w²))` for each dilation `δ`.
#[derive(Clone, Debug, Serialize)]
pub struct StrichartzFamily {
    pub base: GridSpec,
    pub width: f64,
    pub dilations: Vec<f64>,
    /// Time window for `δ = 1`; member `δ` uses `window/δ²`.
    pub window: f64,
    pub intervals: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrichartzReport {
    pub pair: AdmissiblePair,
    pub s: f64,
    pub dilations: Vec<f64>,
    /// `‖|∇|^s e^{itΔ}f‖_{L^q_t L^{r,2}} / ‖f‖_{Ḣ^s}`.
    pub ratios: Vec<f64>,
    pub variation: f64,
    /// `‖∫₀ᵗ e^{i(t−τ)Δ}F dτ‖_{L^q_t L^{r,2}} / ‖F‖_{L^{q'}_t L^{r',2}}` for `F(τ) = f`.
    pub inhomogeneous: Vec<f64>,
    pub inhomogeneous_variation: f64,
    /// `|ratio − 1|` at the `(∞, 2)` endpoint.
    pub endpoint_deviation: Option<f64>,
    pub pass: bool,
}

fn spread(values: &[f64]) -> f64 {
    let hi = values.iter().copied().fold(f64::MIN, f64::max);
    let lo = values.iter().copied().fold(f64::MAX, f64::min);
    hi / lo - 1.0
}

fn lorentz(f: &ComplexField, r: f64) -> Result<f64, SimError> {
    lorentz_norm_of(f, r, 2.0).map_err(|e| SimError::Config(e.to_string()))
}

pub fn strichartz_diagnostic(
    family: &StrichartzFamily,
    q: Exponent,
    r: Rational,
    s: f64,
) -> Result<StrichartzReport, SimError> {
    let pair = AdmissiblePair::new(family.base.dim() as u32, q, r)?;
    if family.dilations.is_empty() || family.intervals == 0 || !(family.window > 0.0) {
        return Err(SimError::Config("empty dilation family or time window".into()));
    }
    let qf = pair.q.to_f64();
    let rf = rat_f64(&pair.r);
    let q_dual = if qf.is_infinite() { 1.0 } else { qf / (qf - 1.0) };
    let r_dual = rf / (rf - 1.0);
    let w = family.width;

    let mut ratios = Vec::new();
    let mut inhomogeneous = Vec::new();
    for &delta in &family.dilations {
        let grid = family.base.dilated(delta)?;
        let f = ComplexField::from_fn(grid, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum::<f64>() * delta * delta;
            Complex64::new((-r2 / (2.0 * w * w)).exp(), 0.0)
        });
        let sp = Spectral::new(grid);
        let t_max = family.window / (delta * delta);
        let times: Vec<f64> = (0..=family.intervals)
            .map(|k| t_max * k as f64 / family.intervals as f64)
            .collect();
        let f_hat = sp.forward(&f);
        let k2 = sp.lattice().modulus_sq();
        let weight: Vec<f64> = k2
            .iter()
            .map(|&k| if s == 0.0 { 1.0 } else { k.powf(0.5 * s) })
            .collect();
        let evaluate = |m: &(dyn Fn(f64, f64) -> Complex64 + Sync)| -> Result<Vec<f64>, SimError> {
            times
                .par_iter()
                .map(|&t| {
                    let data = f_hat
                        .iter()
                        .zip(k2.iter().zip(&weight))
                        .map(|(a, (&k, &wk))| a * m(t, k) * wk)
                        .collect();
                    lorentz(&sp.inverse(data), rf)
                })
                .collect()
        };
        let free = evaluate(&|t, k| Complex64::from_polar(1.0, -t * k))?;
        ratios.push(time_norm(&times, &free, qf)? / sp.hdot(&f, s));

        // ∫₀ᵗ e^{−i(t−τ)k²} dτ = (1 − e^{−itk²})/(ik²)
        let forced = evaluate(&|t, k| {
            if k == 0.0 {
                Complex64::new(t, 0.0)
            } else {
                (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -t * k)) / Complex64::new(0.0, k)
            }
        })?;
        let source = lorentz(&sp.fractional_laplacian(&f, s), r_dual)? * t_max.powf(1.0 / q_dual);
        inhomogeneous.push(time_norm(&times, &forced, qf)? / source);
    }
    let endpoint_deviation = (pair.q == Exponent::Infinite && pair.r == crate::exponents::int(2))
        .then(|| ratios.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max));
    let variation = spread(&ratios);
    let inhomogeneous_variation = spread(&inhomogeneous);
    let finite = ratios.iter().chain(&inhomogeneous).all(|v| v.is_finite() && *v > 0.0);
    let pass = finite
        && variation < STABILITY_TOL
        && inhomogeneous_variation < STABILITY_TOL
        && endpoint_deviation.map_or(true, |d| d <= ENDPOINT_TOL);
    Ok(StrichartzReport {
        pair,
        s,
        dilations: family.dilations.clone(),
        ratios,
        variation,
        inhomogeneous,
        inhomogeneous_variation,
        endpoint_deviation,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::int;

    fn family() -> StrichartzFamily {
        StrichartzFamily {
            base: GridSpec::new(3, 16, 6.0).unwrap(),
            width: 1.0,
            dilations: vec![0.5, 1.0, 2.0],
            window: 0.5,
            intervals: 8,
        }
    }

    #[test]
    fn endpoint_is_unitary() {
        let r = strichartz_diagnostic(&family(), Exponent::Infinite, int(2), 0.0).unwrap();
        assert!(r.endpoint_deviation.unwrap() < 1e-10);
        assert!(r.pass);
    }

    #[test]
    fn admissible_pair_is_dilation_stable() {
        let r = strichartz_diagnostic(&family(), Exponent::Finite(int(4)), int(3), 0.0).unwrap();
        assert!(r.variation < STABILITY_TOL && r.inhomogeneous_variation < STABILITY_TOL, "{r:?}");
        assert!(r.endpoint_deviation.is_none());
    }

    #[test]
    fn non_admissible_rejected() {
        assert!(matches!(
            strichartz_diagnostic(&family(), Exponent::Finite(int(4)), int(4), 0.0),
            Err(SimError::Exponent(_))
        ));
    }
}
