//! The Riesz potential `I_α f = c_{n,α} |·|^{α−n} ∗ f` by zero-padded FFT.
//!
//! The kernel is split at a Gaussian scale `τ`: with `a = (n−α)/2`,
//! `|x|^{−2a} = Γ(a)⁻¹∫₀^∞ t^{a−1} e^{−t|x|²} dt`, and the parts `t > τ`
//! (near) and `t < τ` (far) are
//!
//! `K_near = c|x|^{α−n} Q(a, τ|x|²)`, transform `|ξ|^{−α} P(α/2, |ξ|²/4τ)`,
//! `K_far  = c|x|^{α−n} P(a, τ|x|²)`, smooth and slowly decaying,
//!
//! with `P`, `Q` the regularized incomplete gamma functions. The near part
//! decays like `e^{−τ|x|²}`, so its periodization on the doubled box is
//! invisible; the far part is sampled at every offset the doubled box can
//! hold, which makes its circular convolution an aperiodic one. Both end up
//! in a single multiplier, finite at `ξ = 0`.

use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;
use statrs::function::gamma::{gamma, gamma_lr};

use super::{FrequencyLattice, SpectralError};
use crate::fft::NdFft;
use crate::grid::{ComplexField, GridSpec};

/// `τ L² `; the near kernel has decayed by `e^{−4·SPLIT}` at the nearest image.
pub const SPLIT: f64 = 9.0;

/// `c_{n,α} = Γ((n−α)/2) / (Γ(α/2) π^{n/2} 2^α)`; with the transform
/// convention of this module the kernel `c_{n,α}|x|^{α−n}` has transform
/// exactly `|ξ|^{−α}`.
pub fn riesz_constant(n: usize, alpha: f64) -> f64 {
    let nf = n as f64;
    libm::tgamma(0.5 * (nf - alpha))
        / (libm::tgamma(0.5 * alpha) * std::f64::consts::PI.powf(0.5 * nf) * 2f64.powf(alpha))
}

pub struct RieszOperator {
    grid: GridSpec,
    alpha: f64,
    constant: f64,
    tau: f64,
    fft: NdFft,
    multiplier: Vec<f64>,
    buffer: Mutex<Vec<Complex64>>,
}

impl RieszOperator {
    pub fn new(grid: GridSpec, alpha: f64) -> Result<Self, SpectralError> {
        let n = grid.dim();
        if !(alpha > 0.0 && alpha < n as f64) {
            return Err(SpectralError::RieszOrder { alpha, n });
        }
        let constant = riesz_constant(n, alpha);
        let tau = SPLIT / (grid.half_width() * grid.half_width());
        let padded = grid.padded();
        let fft = NdFft::new(n, padded.points());

        let mut far = far_kernel(&grid, alpha, constant, tau);
        fft.forward(&mut far);
        let cell = grid.cell_measure();
        let half = 0.5 * alpha;
        let at_zero = (4.0 * tau).powf(-half) / gamma(half + 1.0);
        let lattice = FrequencyLattice::new(padded);
        let multiplier = lattice
            .modulus_sq()
            .par_iter()
            .zip(far.par_iter())
            .map(|(&k2, f)| {
                let near = if k2 == 0.0 {
                    at_zero
                } else {
                    k2.powf(-half) * gamma_lr(half, k2 / (4.0 * tau))
                };
                near + cell * f.re
            })
            .collect();
        Ok(Self {
            grid,
            alpha,
            constant,
            tau,
            fft,
            multiplier,
            buffer: Mutex::new(Vec::new()),
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// The Gaussian split scale `τ`.
    pub fn split(&self) -> f64 {
        self.tau
    }

    fn convolve(&self, data: Vec<Complex64>) -> Vec<Complex64> {
        let n = self.grid.points();
        let m = 2 * n;
        let dim = self.grid.dim();
        let mut guard = self.buffer.lock().unwrap_or_else(|e| e.into_inner());
        let big = &mut *guard;
        big.clear();
        big.resize(m.pow(dim as u32), Complex64::default());
        // embed in the corner [0, N)ⁿ of the padded cube, one row at a time
        for (row, chunk) in data.chunks(n).enumerate() {
            let at = embed(row * n, n, m, dim);
            big[at..at + n].copy_from_slice(chunk);
        }
        self.fft.forward_pruned(big, n);
        big.par_iter_mut()
            .zip(self.multiplier.par_iter())
            .for_each(|(v, &w)| *v *= w);
        self.fft.inverse_pruned(big, n);
        let mut out = Vec::with_capacity(data.len());
        for row in 0..data.len() / n {
            let at = embed(row * n, n, m, dim);
            out.extend_from_slice(&big[at..at + n]);
        }
        out
    }

    pub fn apply(&self, f: &ComplexField) -> ComplexField {
        let out = self.convolve(f.values().to_vec());
        ComplexField::new(self.grid, out).expect("grid-sized output")
    }

    /// Real input, real output.
    pub fn apply_real(&self, f: &[f64]) -> Vec<f64> {
        let data = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.convolve(data).into_iter().map(|v| v.re).collect()
    }

    /// Two real inputs through one complex transform.
    pub fn apply_real_pair(&self, f: &[f64], g: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let data = f.iter().zip(g).map(|(&a, &b)| Complex64::new(a, b)).collect();
        self.convolve(data).into_iter().map(|v| (v.re, v.im)).unzip()
    }
}

/// `K_far` at every offset `d·h`, `d ∈ [−N, N)ⁿ`, in FFT order on the
/// doubled grid. Values depend on `|d|²` only and are tabulated once.
fn far_kernel(grid: &GridSpec, alpha: f64, constant: f64, tau: f64) -> Vec<Complex64> {
    let (n, dim) = (grid.points(), grid.dim());
    let m = 2 * n;
    let h2 = grid.spacing() * grid.spacing();
    let a = 0.5 * (dim as f64 - alpha);
    let table: Vec<f64> = (0..=dim * n * n)
        .into_par_iter()
        .map(|k| {
            if k == 0 {
                constant * tau.powf(a) / gamma(a + 1.0)
            } else {
                let r2 = k as f64 * h2;
                constant * r2.powf(-a) * gamma_lr(a, tau * r2)
            }
        })
        .collect();
    let offset_sq: Vec<usize> = (0..m)
        .map(|j| {
            let d = if j < n { j } else { m - j };
            d * d
        })
        .collect();
    (0..m.pow(dim as u32))
        .into_par_iter()
        .map(|flat| {
            let mut rest = flat;
            let mut key = 0;
            for _ in 0..dim {
                key += offset_sq[rest % m];
                rest /= m;
            }
            Complex64::new(table[key], 0.0)
        })
        .collect()
}

fn embed(flat: usize, n: usize, m: usize, dim: usize) -> usize {
    let mut rest = flat;
    let mut out = 0;
    let mut stride = 1;
    for _ in 0..dim {
        out += (rest % n) * stride;
        rest /= n;
        stride *= m;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_reference_values() {
        // n = 3, α = 2: Γ(1/2)/(Γ(1) π^{3/2} 4) = 1/(4π)
        assert!((riesz_constant(3, 2.0) - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
        // n = 3, α = 1: Γ(1)/(Γ(1/2) π^{3/2} 2) = 1/(2π²)
        let want = 1.0 / (2.0 * std::f64::consts::PI.powi(2));
        assert!((riesz_constant(3, 1.0) - want).abs() < 1e-15);
    }

    #[test]
    fn order_is_validated() {
        let g = GridSpec::new(3, 8, 1.0).unwrap();
        assert!(RieszOperator::new(g, 0.0).is_err());
        assert!(RieszOperator::new(g, 3.0).is_err());
        assert!(RieszOperator::new(g, 1.5).is_ok());
    }

    #[test]
    fn riesz_is_symmetric() {
        let g = GridSpec::new(3, 8, 2.0).unwrap();
        let op = RieszOperator::new(g, 2.0).unwrap();
        let f: Vec<f64> = (0..g.len()).map(|i| ((i * 37 % 11) as f64 - 5.0) / 7.0).collect();
        let h: Vec<f64> = (0..g.len()).map(|i| ((i * 13 % 17) as f64 - 8.0) / 9.0).collect();
        let (if_, ih) = op.apply_real_pair(&f, &h);
        let a: f64 = if_.iter().zip(&h).map(|(x, y)| x * y).sum();
        let b: f64 = f.iter().zip(&ih).map(|(x, y)| x * y).sum();
        assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
        let single = op.apply_real(&f);
        assert!(single.iter().zip(&if_).all(|(x, y)| (x - y).abs() < 1e-12));
    }

    #[test]
    fn multiplier_scales_under_dilation() {
        let g = GridSpec::new(3, 8, 4.0).unwrap();
        let a = RieszOperator::new(g, 1.5).unwrap();
        let b = RieszOperator::new(g.dilated(2.0).unwrap(), 1.5).unwrap();
        let scale = 2f64.powf(1.5);
        for (x, y) in a.multiplier.iter().zip(&b.multiplier) {
            assert!((x - scale * y).abs() < 1e-12 * x.abs());
        }
        assert!(a.multiplier.iter().all(|m| m.is_finite() && *m > 0.0));
    }

    #[test]
    fn split_does_not_show_at_high_frequency() {
        // far from ξ = 0 the near part carries |ξ|^{−α}; what is left is the
        // far kernel cut off at the edge of the doubled box
        let g = GridSpec::new(3, 16, 4.0).unwrap();
        let op = RieszOperator::new(g, 2.0).unwrap();
        let lattice = FrequencyLattice::new(g.padded());
        let (k, k2) = lattice
            .modulus_sq()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert!((op.multiplier[k] * k2 - 1.0).abs() < 1e-5, "{:e}", op.multiplier[k] * k2 - 1.0);
    }

    #[test]
    fn embed_places_corner() {
        assert_eq!(embed(0, 4, 8, 2), 0);
        assert_eq!(embed(5, 4, 8, 2), 9);
        assert_eq!(embed(15, 4, 8, 2), 27);
    }
}
