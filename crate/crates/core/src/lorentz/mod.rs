//! Distribution functions, decreasing rearrangements and Lorentz norms of
//! grid fields.
//!
//! A grid field is a step function, so its rearrangement `f*` is a finite
//! staircase and every norm below is a closed-form sum over the steps.

pub mod family;
pub mod harness;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::grid::{GridError, GridFunction, Sample};

pub use family::{TestFunction, MANIFEST, MANIFEST_VERSION};
pub use harness::{
    inequality_harness, lorentz_identity_suite, HarnessReport, IdentityReport, Lemma, LemmaRatio,
};

#[derive(Debug, Error)]
pub enum LorentzError {
    #[error("exponent p = {0} outside (1, inf)")]
    OuterExponent(f64),
    #[error("exponent q = {0} outside [1, inf]")]
    InnerExponent(f64),
    #[error("{lemma}: exponent relation violated: {relation}")]
    Relation { lemma: &'static str, relation: String },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Spectral(#[from] crate::spectral::SpectralError),
}

/// `f*` as a staircase: `f*(t) = levels[k]` on `[measures[k−1], measures[k])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RearrangementProfile {
    levels: Vec<f64>,
    measures: Vec<f64>,
}

impl RearrangementProfile {
    /// Builds the profile of `values` on cells of measure `cell`.
    pub fn from_values(values: &[f64], cell: f64) -> Result<Self, GridError> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFinite(i));
        }
        let mut sorted: Vec<(f64, usize)> = values.iter().map(|v| v.abs()).zip(0..).collect();
        sorted.par_sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut levels = Vec::new();
        let mut measures = Vec::new();
        let mut count = 0usize;
        for (i, &(v, _)) in sorted.iter().enumerate() {
            count += 1;
            let last = i + 1 == sorted.len() || sorted[i + 1].0 != v;
            if last {
                levels.push(v);
                measures.push(count as f64 * cell);
            }
        }
        Ok(Self { levels, measures })
    }

    pub fn from_steps(levels: Vec<f64>, measures: Vec<f64>) -> Self {
        debug_assert!(levels.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(measures.windows(2).all(|w| w[0] < w[1]));
        Self { levels, measures }
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    pub fn total_measure(&self) -> f64 {
        self.measures.last().copied().unwrap_or(0.0)
    }

    /// `f*(t)`.
    pub fn value_at(&self, t: f64) -> f64 {
        let k = self.measures.partition_point(|&m| m <= t);
        self.levels.get(k).copied().unwrap_or(0.0)
    }

    /// `d_f(λ) = |{|f| > λ}|`.
    pub fn distribution(&self, lambda: f64) -> f64 {
        let k = self.levels.partition_point(|&v| v > lambda);
        if k == 0 {
            0.0
        } else {
            self.measures[k - 1]
        }
    }

    /// Steps with positive level as `(level, start, end)`.
    fn steps(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let starts = std::iter::once(0.0).chain(self.measures.iter().copied());
        self.levels
            .iter()
            .zip(starts.zip(self.measures.iter()))
            .map(|(&v, (a, &b))| (v, a, b))
            .take_while(|s| s.0 > 0.0)
    }

    /// Profile of `|f|^r`.
    pub fn power(&self, r: f64) -> Self {
        Self {
            levels: self.levels.iter().map(|v| v.powf(r)).collect(),
            measures: self.measures.clone(),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            levels: self.levels.iter().map(|v| v * c.abs()).collect(),
            measures: self.measures.clone(),
        }
    }
}

pub fn rearrangement<T: Sample>(f: &GridFunction<T>) -> Result<RearrangementProfile, GridError> {
    let moduli: Vec<f64> = f.values().iter().map(|v| v.modulus()).collect();
    RearrangementProfile::from_values(&moduli, f.grid().cell_measure())
}

pub fn distribution_function<T: Sample>(f: &GridFunction<T>, lambda: f64) -> Result<f64, GridError> {
    Ok(rearrangement(f)?.distribution(lambda))
}

fn check_exponents(p: f64, q: f64) -> Result<(), LorentzError> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(LorentzError::OuterExponent(p));
    }
    if q.is_nan() || q < 1.0 {
        return Err(LorentzError::InnerExponent(q));
    }
    Ok(())
}

/// `(∫₀^∞ (t^{1/p} f*(t))^q dt/t)^{1/q}`, or `sup_t t^{1/p} f*(t)` for
/// `q = ∞`. On a step `v` over `[a, b)` the integral is
/// `v^q (p/q)(b^{q/p} − a^{q/p})`.
pub fn lorentz_norm(profile: &RearrangementProfile, p: f64, q: f64) -> Result<f64, LorentzError> {
    check_exponents(p, q)?;
    if q.is_infinite() {
        return Ok(profile.steps().map(|(v, _, b)| v * b.powf(1.0 / p)).fold(0.0, f64::max));
    }
    let e = q / p;
    let sum: f64 = profile
        .steps()
        .map(|(v, a, b)| v.powf(q) * (p / q) * (b.powf(e) - a.powf(e)))
        .sum();
    Ok(sum.powf(1.0 / q))
}

pub fn lorentz_norm_of<T: Sample>(f: &GridFunction<T>, p: f64, q: f64) -> Result<f64, LorentzError> {
    lorentz_norm(&rearrangement(f)?, p, q)
}

// 8-point Gauss–Legendre on [-1, 1]
const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329_0,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362_0,
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// The `f**`-based norm, `f**(t) = t⁻¹∫₀ᵗ f*`. On the first step `f**` is
/// constant; later steps are integrated in `log t` by Gauss–Legendre and
/// the tail beyond the support is closed-form.
pub fn lorentz_norm_maximal(profile: &RearrangementProfile, p: f64, q: f64) -> Result<f64, LorentzError> {
    check_exponents(p, q)?;
    let a = 1.0 / p;
    let mut acc = 0.0; // ∫₀^{start} f*
    let mut total = 0.0;
    let mut sup = 0.0f64;
    for (k, (v, start, end)) in profile.steps().enumerate() {
        let c = acc - v * start; // f**(t) = (c + v t)/t on this step
        let g = |t: f64| t.powf(a - 1.0) * (c + v * t);
        if q.is_infinite() {
            sup = sup.max(g(end));
            if v > 0.0 && c > 0.0 {
                let t_star = (1.0 - a) * c / (a * v);
                if t_star > start && t_star < end {
                    sup = sup.max(g(t_star));
                }
            }
        } else if k == 0 {
            total += v.powf(q) * (p / q) * end.powf(q / p);
        } else {
            let (la, lb) = (start.ln(), end.ln());
            let half = 0.5 * (lb - la);
            let mid = 0.5 * (lb + la);
            total += half
                * GL_NODES
                    .iter()
                    .zip(GL_WEIGHTS)
                    .map(|(x, w)| w * g((mid + half * x).exp()).powf(q))
                    .sum::<f64>();
        }
        acc += v * (end - start);
    }
    let m = profile.steps().last().map(|s| s.2).unwrap_or(0.0);
    if m == 0.0 {
        return Ok(0.0);
    }
    if q.is_infinite() {
        return Ok(sup.max(acc * m.powf(a - 1.0)));
    }
    // ∫_M^∞ (t^{a−1} F)^q dt/t = F^q M^{q(a−1)} / (q(1−a))
    total += acc.powf(q) * m.powf(q * (a - 1.0)) / (q * (1.0 - a));
    Ok(total.powf(1.0 / q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{GridSpec, RealField};

    fn indicator(m_cells: usize, total: usize, cell: f64) -> RearrangementProfile {
        let mut v = vec![0.0; total];
        v[..m_cells].iter_mut().for_each(|x| *x = 1.0);
        RearrangementProfile::from_values(&v, cell).unwrap()
    }

    #[test]
    fn indicator_profile_is_one_step() {
        let prof = indicator(4, 10, 1.0);
        assert_eq!(prof.levels(), &[1.0, 0.0]);
        assert_eq!(prof.measures(), &[4.0, 10.0]);
        assert_eq!(prof.value_at(3.9), 1.0);
        assert_eq!(prof.value_at(4.0), 0.0);
        assert_eq!(prof.distribution(0.5), 4.0);
        assert_eq!(prof.distribution(1.0), 0.0);
    }

    #[test]
    fn indicator_norms() {
        let prof = indicator(4, 10, 1.0);
        assert!((lorentz_norm(&prof, 2.0, 2.0).unwrap() - 2.0).abs() < 1e-14);
        let (p, q) = (3.0, 1.5);
        let want = 4f64.powf(1.0 / p) * (p / q).powf(1.0 / q);
        assert!((lorentz_norm(&prof, p, q).unwrap() / want - 1.0).abs() < 1e-14);
        assert!((lorentz_norm(&prof, p, f64::INFINITY).unwrap() - 4f64.powf(1.0 / p)).abs() < 1e-14);
    }

    #[test]
    fn maximal_norm_of_indicator() {
        // f** = 1 on (0, m), m/t after: ∫₀^m t^{q/p−1} + ∫_m^∞ m^q t^{q/p−q−1}
        let m: f64 = 4.0;
        let prof = indicator(4, 10, 1.0);
        let (p, q) = (2.0, 3.0);
        let want = (m.powf(q / p) * (p / q) + m.powf(q / p) / (q - q / p)).powf(1.0 / q);
        assert!((lorentz_norm_maximal(&prof, p, q).unwrap() / want - 1.0).abs() < 1e-12);
        let sup = lorentz_norm_maximal(&prof, p, f64::INFINITY).unwrap();
        assert!((sup - m.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn maximal_norm_dominates() {
        let values: Vec<f64> = (1..200).map(|k| 1.0 / k as f64).collect();
        let prof = RearrangementProfile::from_values(&values, 0.1).unwrap();
        for q in [1.0, 2.0, 5.0, f64::INFINITY] {
            let a = lorentz_norm(&prof, 3.0, q).unwrap();
            let b = lorentz_norm_maximal(&prof, 3.0, q).unwrap();
            assert!(b >= a * (1.0 - 1e-12), "q={q}");
            // Hardy: ‖f**‖ ≤ p' ‖f*‖
            assert!(b <= 1.5 * a * (1.0 + 1e-9), "q={q}");
        }
    }

    #[test]
    fn shuffles_give_identical_profiles() {
        let g = GridSpec::new(2, 8, 1.0).unwrap();
        let f = RealField::from_fn(g, |x| (x[0] * 3.0).sin() + x[1]);
        let mut v = f.values().to_vec();
        v.reverse();
        v.rotate_left(17);
        let shuffled = RealField::new(g, v).unwrap();
        assert_eq!(rearrangement(&f).unwrap(), rearrangement(&shuffled).unwrap());
    }

    #[test]
    fn rejects_bad_exponents() {
        let prof = indicator(1, 2, 1.0);
        assert!(matches!(lorentz_norm(&prof, 1.0, 2.0), Err(LorentzError::OuterExponent(_))));
        assert!(matches!(lorentz_norm(&prof, 2.0, 0.5), Err(LorentzError::InnerExponent(_))));
        assert!(RearrangementProfile::from_values(&[1.0, f64::INFINITY], 1.0).is_err());
    }
}
