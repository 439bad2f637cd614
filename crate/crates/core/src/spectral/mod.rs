//! Fourier multipliers on the periodic box.
//!
//! Convention: `f̂(ξ) = ∫ f(x) e^{−ixξ} dx`, wave numbers `ξ = πk/L` with
//! `k ∈ [−N/2, N/2)` on each axis.

pub mod norms;
pub mod riesz;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::fft::NdFft;
use crate::grid::{ComplexField, GridError, GridSpec};

pub use norms::{norm_suite, spacetime_norm, time_norm, NormSuite};
pub use riesz::{riesz_constant, RieszOperator, SPLIT};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("Riesz order alpha = {alpha} outside (0, {n})")]
    RieszOrder { alpha: f64, n: usize },
    #[error("regularity s = {0} must be >= 0")]
    Regularity(f64),
    #[error("field is not resolved: {fraction:.3e} of its energy sits in the top octave")]
    Unresolved { fraction: f64 },
    #[error("empty trajectory")]
    EmptyTrajectory,
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("{0}")]
    Lorentz(String),
}

/// Wave numbers of a grid, in transform order.
#[derive(Clone, Debug)]
pub struct FrequencyLattice {
    grid: GridSpec,
    axis: Vec<f64>,
    modulus_sq: Vec<f64>,
}

impl FrequencyLattice {
    pub fn new(grid: GridSpec) -> Self {
        let n = grid.points();
        let step = std::f64::consts::PI / grid.half_width();
        let axis: Vec<f64> = (0..n)
            .map(|j| {
                let k = if j < n / 2 { j as isize } else { j as isize - n as isize };
                k as f64 * step
            })
            .collect();
        let mut idx = vec![0usize; grid.dim()];
        let modulus_sq = (0..grid.len())
            .map(|flat| {
                grid.unflatten(flat, &mut idx);
                idx.iter().map(|&j| axis[j] * axis[j]).sum()
            })
            .collect();
        Self {
            grid,
            axis,
            modulus_sq,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    /// `|ξ|²` per mode, same layout as the field.
    pub fn modulus_sq(&self) -> &[f64] {
        &self.modulus_sq
    }

    /// Largest integer wave index (in units of `π/L`) over the axes, per mode.
    pub fn max_index(&self, flat: usize) -> usize {
        let n = self.grid.points();
        let mut rest = flat;
        let mut best = 0;
        for _ in 0..self.grid.dim() {
            let j = rest % n;
            rest /= n;
            best = best.max(if j < n / 2 { j } else { n - j });
        }
        best
    }
}

/// Transform plan plus lattice for one grid.
pub struct Spectral {
    lattice: FrequencyLattice,
    fft: NdFft,
}

impl Spectral {
    pub fn new(grid: GridSpec) -> Self {
        Self {
            fft: NdFft::new(grid.dim(), grid.points()),
            lattice: FrequencyLattice::new(grid),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        self.lattice.grid()
    }

    pub fn lattice(&self) -> &FrequencyLattice {
        &self.lattice
    }

    pub fn forward(&self, f: &ComplexField) -> Vec<Complex64> {
        let mut data = f.values().to_vec();
        self.fft.forward(&mut data);
        data
    }

    pub fn inverse(&self, mut data: Vec<Complex64>) -> ComplexField {
        self.fft.inverse(&mut data);
        ComplexField::new(*self.grid(), data).expect("lattice-sized buffer")
    }

    /// Multiplies the transform by `m(|ξ|²)`.
    pub fn apply(&self, f: &ComplexField, m: impl Fn(f64) -> Complex64 + Sync) -> ComplexField {
        let mut data = self.forward(f);
        data.par_iter_mut()
            .zip(self.lattice.modulus_sq.par_iter())
            .for_each(|(v, &k2)| *v *= m(k2));
        self.inverse(data)
    }

    /// Real multiplier variant of [`Spectral::apply`].
    pub fn apply_real(&self, f: &ComplexField, m: impl Fn(f64) -> f64 + Sync) -> ComplexField {
        self.apply(f, |k2| Complex64::new(m(k2), 0.0))
    }

    /// `(−Δ)^{s/2}`, multiplier `|ξ|^s` (zero mode kept only for `s = 0`).
    pub fn fractional_laplacian(&self, f: &ComplexField, s: f64) -> ComplexField {
        if s == 0.0 {
            return f.clone();
        }
        self.apply_real(f, |k2| k2.powf(0.5 * s))
    }

    /// `(1 − Δ)^{s/2}`, multiplier `(1 + |ξ|²)^{s/2}`.
    pub fn bessel(&self, f: &ComplexField, s: f64) -> ComplexField {
        self.apply_real(f, |k2| (1.0 + k2).powf(0.5 * s))
    }

    /// `e^{itΔ}`, multiplier `e^{−it|ξ|²}`.
    pub fn propagator(&self, f: &ComplexField, t: f64) -> ComplexField {
        self.apply(f, |k2| Complex64::from_polar(1.0, -t * k2))
    }

    /// `Σ w(|ξ|²) |f̂|²` scaled so that `w ≡ 1` gives `‖f‖²_{L²}`.
    pub fn weighted_energy(&self, f: &ComplexField, w: impl Fn(f64) -> f64 + Sync) -> f64 {
        let data = self.forward(f);
        let sum: f64 = data
            .par_iter()
            .zip(self.lattice.modulus_sq.par_iter())
            .map(|(v, &k2)| w(k2) * v.norm_sqr())
            .sum();
        sum * self.grid().cell_measure() / self.grid().len() as f64
    }

    /// Fraction of the spectral energy in the top octave `max|k| > N/4`.
    pub fn top_octave_fraction(&self, f: &ComplexField) -> f64 {
        let data = self.forward(f);
        let cut = self.grid().points() / 4;
        let (mut top, mut all) = (0.0, 0.0);
        for (flat, v) in data.iter().enumerate() {
            let e = v.norm_sqr();
            all += e;
            if self.lattice.max_index(flat) > cut {
                top += e;
            }
        }
        if all == 0.0 {
            0.0
        } else {
            top / all
        }
    }
}

pub fn fractional_laplacian(f: &ComplexField, s: f64) -> Result<ComplexField, SpectralError> {
    if s < 0.0 {
        return Err(SpectralError::Regularity(s));
    }
    f.check_finite()?;
    Ok(Spectral::new(*f.grid()).fractional_laplacian(f, s))
}

pub fn bessel(f: &ComplexField, s: f64) -> Result<ComplexField, SpectralError> {
    f.check_finite()?;
    Ok(Spectral::new(*f.grid()).bessel(f, s))
}

pub fn propagator(f: &ComplexField, t: f64) -> Result<ComplexField, SpectralError> {
    f.check_finite()?;
    Ok(Spectral::new(*f.grid()).propagator(f, t))
}

pub fn riesz(f: &ComplexField, alpha: f64) -> Result<ComplexField, SpectralError> {
    f.check_finite()?;
    let op = RieszOperator::new(*f.grid(), alpha)?;
    Ok(op.apply(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(grid: GridSpec, w: f64) -> ComplexField {
        ComplexField::from_fn(grid, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            Complex64::new((-r2 / (2.0 * w * w)).exp(), 0.0)
        })
    }

    #[test]
    fn lattice_spacing_and_zero_mode() {
        let g = GridSpec::new(2, 8, std::f64::consts::PI).unwrap();
        let lat = FrequencyLattice::new(g);
        assert_eq!(lat.axis(), &[0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
        assert_eq!(lat.modulus_sq().iter().filter(|&&k| k == 0.0).count(), 1);
    }

    #[test]
    fn zero_order_multipliers_are_identity() {
        let g = GridSpec::new(3, 16, 6.0).unwrap();
        let f = gaussian(g, 1.0);
        let sp = Spectral::new(g);
        assert!(sp.fractional_laplacian(&f, 0.0).relative_l2(&f) < 1e-12);
        assert!(sp.bessel(&f, 0.0).relative_l2(&f) < 1e-12);
        assert!(sp.propagator(&f, 0.0).relative_l2(&f) < 1e-12);
    }

    #[test]
    fn propagator_is_unitary_group() {
        let g = GridSpec::new(3, 16, 6.0).unwrap();
        let f = gaussian(g, 0.8);
        let sp = Spectral::new(g);
        let a = sp.propagator(&sp.propagator(&f, 0.03), 0.05);
        let b = sp.propagator(&f, 0.08);
        assert!(a.relative_l2(&b) < 1e-12);
        assert!((a.l2_norm() / f.l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fractional_powers_compose() {
        let g = GridSpec::new(3, 16, 6.0).unwrap();
        let f = gaussian(g, 1.0);
        let sp = Spectral::new(g);
        let a = sp.fractional_laplacian(&sp.fractional_laplacian(&f, 0.6), 0.9);
        let b = sp.fractional_laplacian(&f, 1.5);
        assert!(a.relative_l2(&b) < 1e-10);
    }

    #[test]
    fn laplacian_of_gaussian() {
        // (−Δ) e^{−r²/2} = (n − r²) e^{−r²/2}
        let g = GridSpec::new(3, 32, 8.0).unwrap();
        let f = gaussian(g, 1.0);
        let lap = Spectral::new(g).fractional_laplacian(&f, 2.0);
        let want = ComplexField::from_fn(g, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            Complex64::new((3.0 - r2) * (-r2 / 2.0).exp(), 0.0)
        });
        assert!(lap.relative_l2(&want) < 1e-8);
    }

    #[test]
    fn plancherel_weights() {
        let g = GridSpec::new(2, 16, 5.0).unwrap();
        let f = gaussian(g, 0.9);
        let e = Spectral::new(g).weighted_energy(&f, |_| 1.0);
        assert!((e / f.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn top_octave_detects_rough_fields() {
        let g = GridSpec::new(2, 32, 5.0).unwrap();
        let sp = Spectral::new(g);
        assert!(sp.top_octave_fraction(&gaussian(g, 1.0)) < 1e-8);
        let rough = ComplexField::from_fn(g, |x| Complex64::new((x[0] * 5.5).cos(), 0.0));
        assert!(sp.top_octave_fraction(&rough) > 0.5);
    }
}
