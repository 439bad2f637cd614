//! Test functions for the inequality harnesses and the versioned manifest
//! that fixes them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::grid::{GridSpec, RealField};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum TestFunction {
    /// `e^{−|x|²/(2w²)}`.
    Gaussian { width: f64 },
    /// Indicator of the ball of the given radius.
    Indicator { radius: f64 },
    /// `min(|x|, core)^{−γ}` on the ball of the given radius, zero
    /// outside; `core = 0` keeps the singularity.
    TruncatedPower { gamma: f64, core: f64, radius: f64 },
    /// A few random plane waves with wave numbers up to `kmax`, under a
    /// Gaussian envelope of width `envelope`.
    BandLimited { seed: u64, modes: usize, kmax: f64, envelope: f64 },
}

impl TestFunction {
    pub fn name(&self) -> String {
        match self {
            TestFunction::Gaussian { width } => format!("gaussian(w={width})"),
            TestFunction::Indicator { radius } => format!("indicator(R={radius})"),
            TestFunction::TruncatedPower { gamma, core, radius } if *core > 0.0 => {
                format!("power(g={gamma},e={core},R={radius})")
            }
            TestFunction::TruncatedPower { gamma, radius, .. } => format!("power(g={gamma},R={radius})"),
            TestFunction::BandLimited { seed, .. } => format!("band(seed={seed})"),
        }
    }

    /// A pointwise evaluator; band-limited members draw their modes once.
    pub fn evaluator(&self) -> Box<dyn Fn(&[f64]) -> f64 + Send + Sync> {
        match *self {
            TestFunction::Gaussian { width } => {
                let k = 0.5 / (width * width);
                Box::new(move |x| (-k * sq(x)).exp())
            }
            TestFunction::Indicator { radius } => {
                let r2 = radius * radius;
                Box::new(move |x| if sq(x) < r2 { 1.0 } else { 0.0 })
            }
            TestFunction::TruncatedPower { gamma, core, radius } => {
                let (r2, c2) = (radius * radius, core * core);
                Box::new(move |x| {
                    let s = sq(x);
                    if s < r2 {
                        s.max(c2).powf(-0.5 * gamma)
                    } else {
                        0.0
                    }
                })
            }
            TestFunction::BandLimited { seed, modes, kmax, envelope } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let waves: Vec<(Vec<f64>, f64, f64)> = (0..modes)
                    .map(|_| {
                        let k: Vec<f64> = (0..8).map(|_| rng.gen_range(-kmax..kmax)).collect();
                        (k, rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(0.5..1.0))
                    })
                    .collect();
                let e = 0.5 / (envelope * envelope);
                Box::new(move |x| {
                    let s: f64 = waves
                        .iter()
                        .map(|(k, phase, amp)| {
                            let dot: f64 = x.iter().zip(k).map(|(a, b)| a * b).sum();
                            amp * (dot + phase).cos()
                        })
                        .sum();
                    s * (-e * sq(x)).exp()
                })
            }
        }
    }

    /// `f(δ·)` sampled on the matched grid `grid.dilated(δ)`; the samples
    /// coincide with those of `f` on `grid`.
    pub fn sample(&self, grid: &GridSpec, delta: f64) -> RealField {
        let f = self.evaluator();
        let g = grid.dilated(delta).expect("positive dilation");
        RealField::from_fn(g, |x| {
            let y: Vec<f64> = x.iter().map(|v| v * delta).collect();
            f(&y)
        })
    }
}

fn sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub const MANIFEST_VERSION: &str = "lorentz-manifest/1";

/// Fixed families and dilation ladders for the constant reports.
pub struct Manifest {
    pub families: &'static [TestFunction],
    pub ladder: &'static [f64],
    pub grid_points: usize,
    pub half_width: f64,
}

pub const MANIFEST: Manifest = Manifest {
    families: &[
        TestFunction::Gaussian { width: 1.0 },
        TestFunction::Indicator { radius: 2.0 },
        TestFunction::TruncatedPower { gamma: 1.0, core: 0.0, radius: 3.0 },
        TestFunction::BandLimited { seed: 7, modes: 4, kmax: 2.0, envelope: 1.5 },
    ],
    ladder: &[0.25, 0.5, 1.0, 2.0, 4.0],
    grid_points: 32,
    half_width: 8.0,
};
