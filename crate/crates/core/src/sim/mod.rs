//! Time integration of `i∂ₜu + Δu = λ(I_α ∗ |·|^{−b}|u|^p)|x|^{−b}|u|^{p−2}u`
//! and the fixed-point diagnostics built on it.

pub mod covariance;
pub mod integrate;
pub mod picard;
pub mod scatter;
pub mod strichartz;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::exponents::{ExponentError, ParameterPoint};
use crate::grid::{ComplexField, GridError, GridSpec, RealField};
use crate::spectral::{RieszOperator, Spectral, SpectralError};

pub use covariance::{scaling_covariance_check, ScalingReport};
pub use integrate::{simulate, strang_step, Diagnostics, SimState, Stepper, Trajectory, TAIL_LIMIT};
pub use picard::{
    continuous_dependence_check, duhamel_map, picard_contraction, trajectory_distance, DependenceReport,
    DuhamelImage, PicardConfig, PicardReport,
};
pub use scatter::{scattering_diagnostic, ScatterReport};
pub use strichartz::{strichartz_diagnostic, StrichartzFamily, StrichartzReport};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("power p = {0} below 2")]
    Power(String),
    #[error("grid dimension {grid} does not match n = {n}")]
    Dimension { grid: usize, n: u32 },
    #[error("field not resolved at t = {t}: {fraction:.3e} of the energy in the top octave")]
    Unresolved { t: f64, fraction: f64 },
    #[error("non-finite field at t = {0}")]
    NonFinite(f64),
    #[error("dilation {0} is not a power of two")]
    Dilation(f64),
    #[error("invalid time step or horizon: {0}")]
    Time(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// The equation on one grid: parameter point, coupling, the weight
/// `|x|^{−b}` at the offset cell centres, and the transform plans.
pub struct EquationParams {
    point: ParameterPoint,
    lambda: f64,
    p: f64,
    b: f64,
    weight: Vec<f64>,
    spectral: Spectral,
    riesz: RieszOperator,
}

impl EquationParams {
    pub fn new(point: ParameterPoint, grid: GridSpec) -> Result<Self, SimError> {
        if point.p < crate::exponents::int(2) {
            return Err(SimError::Power(point.p.to_string()));
        }
        if grid.dim() != point.n as usize {
            return Err(SimError::Dimension {
                grid: grid.dim(),
                n: point.n,
            });
        }
        let p = point.p.to_f64().unwrap_or(f64::NAN);
        let b = point.b.to_f64().unwrap_or(f64::NAN);
        let alpha = point.alpha.to_f64().unwrap_or(f64::NAN);
        let weight = grid.radii().into_iter().map(|r| r.powf(-b)).collect();
        Ok(Self {
            lambda: point.lambda.value(),
            p,
            b,
            weight,
            spectral: Spectral::new(grid),
            riesz: RieszOperator::new(grid, alpha)?,
            point,
        })
    }

    /// Overrides the coupling; `0` gives the free flow.
    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    /// The same equation on `grid.dilated(δ)`.
    pub fn dilated(&self, delta: f64) -> Result<Self, SimError> {
        Ok(Self::new(self.point.clone(), self.grid().dilated(delta)?)?.with_lambda(self.lambda))
    }

    pub fn point(&self) -> &ParameterPoint {
        &self.point
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn power(&self) -> f64 {
        self.p
    }

    pub fn grid(&self) -> &GridSpec {
        self.spectral.grid()
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    pub fn riesz(&self) -> &RieszOperator {
        &self.riesz
    }

    pub fn s(&self) -> f64 {
        self.point.s.to_f64().unwrap_or(f64::NAN)
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `ρ = |x|^{−b}|u|^p` and `I_α ρ`.
    fn density_and_field(&self, u: &ComplexField) -> (Vec<f64>, Vec<f64>) {
        let p = self.p;
        let rho: Vec<f64> = u
            .values()
            .par_iter()
            .zip(self.weight.par_iter())
            .map(|(v, w)| w * v.norm().powf(p))
            .collect();
        let field = self.riesz.apply_real(&rho);
        (rho, field)
    }
}

/// `V(u) = λ (I_α ∗ |·|^{−b}|u|^p) |x|^{−b} |u|^{p−2}`, real.
pub fn potential(u: &ComplexField, params: &EquationParams) -> RealField {
    let grid = *params.grid();
    if params.lambda == 0.0 {
        return RealField::zeros(grid);
    }
    let (_, field) = params.density_and_field(u);
    let q = params.p - 2.0;
    let lambda = params.lambda;
    let values = u
        .values()
        .par_iter()
        .zip(field.par_iter().zip(params.weight.par_iter()))
        .map(|(v, (f, w))| lambda * f * w * v.norm().powf(q))
        .collect();
    RealField::new(grid, values).expect("grid-sized potential")
}

/// `F(u) = V(u)·u`; vanishes where `u` does.
pub fn nonlinearity(u: &ComplexField, params: &EquationParams) -> ComplexField {
    let v = potential(u, params);
    let values = u.values().iter().zip(v.values()).map(|(a, b)| a * b).collect();
    ComplexField::new(*params.grid(), values).expect("grid-sized nonlinearity")
}

/// `E(u) = ½‖∇u‖² + (λ/2p) ∫ (I_α ∗ |·|^{−b}|u|^p) |x|^{−b}|u|^p`.
pub fn energy(u: &ComplexField, params: &EquationParams) -> f64 {
    let kinetic = 0.5 * params.spectral.weighted_energy(u, |k2| k2);
    if params.lambda == 0.0 {
        return kinetic;
    }
    let (rho, field) = params.density_and_field(u);
    let pot: f64 = rho.par_iter().zip(field.par_iter()).map(|(a, b)| a * b).sum();
    kinetic + params.lambda / (2.0 * params.p) * pot * params.grid().cell_measure()
}

/// `‖∇u‖²`.
pub fn gradient_sq(u: &ComplexField, params: &EquationParams) -> f64 {
    params.spectral.weighted_energy(u, |k2| k2)
}

/// Applies `e^{−iV dt/2}` in place.
fn kick(u: &mut ComplexField, v: &[f64], half_dt: f64) {
    u.values_mut()
        .par_iter_mut()
        .zip(v.par_iter())
        .for_each(|(z, &w)| *z *= Complex64::from_polar(1.0, -w * half_dt));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::{int, rat, Coupling};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(lambda: Coupling) -> EquationParams {
        let pt = ParameterPoint::critical(3, int(0), int(2), rat(1, 2), lambda).unwrap();
        EquationParams::new(pt, GridSpec::new(3, 16, 4.0).unwrap()).unwrap()
    }

    fn random_field(g: GridSpec, seed: u64) -> ComplexField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ComplexField::from_fn(g, |_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn zero_field_has_zero_nonlinearity_and_energy() {
        let p = params(Coupling::Focusing);
        let u = ComplexField::zeros(*p.grid());
        assert!(nonlinearity(&u, &p).values().iter().all(|v| v.norm() == 0.0));
        assert_eq!(energy(&u, &p), 0.0);
    }

    #[test]
    fn gauge_covariance() {
        let p = params(Coupling::Defocusing);
        let u = random_field(*p.grid(), 1);
        let phase = Complex64::from_polar(1.0, 0.7);
        let mut ur = u.clone();
        ur.scale(phase);
        let mut f = nonlinearity(&u, &p);
        f.scale(phase);
        assert!(nonlinearity(&ur, &p).relative_l2(&f) < 1e-12);
    }

    #[test]
    fn coupling_sign_only_flips_potential_energy() {
        let u = random_field(GridSpec::new(3, 16, 4.0).unwrap(), 2);
        let plus = params(Coupling::Defocusing);
        let minus = params(Coupling::Focusing);
        let sum = energy(&u, &plus) + energy(&u, &minus);
        assert!((sum / gradient_sq(&u, &plus) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn low_power_is_rejected() {
        let pt = ParameterPoint::with_power(3, int(0), int(2), rat(1, 2), Coupling::Focusing, rat(3, 2)).unwrap();
        assert!(matches!(
            EquationParams::new(pt, GridSpec::new(3, 8, 1.0).unwrap()),
            Err(SimError::Power(_))
        ));
    }
}
