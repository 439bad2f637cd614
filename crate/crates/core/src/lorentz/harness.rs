//! Ratio reports for the Lorentz identities and for the Hölder, HLS and
//! Sobolev inequalities over fixed families and dilation ladders.
//!
//! Exponent relations are checked in exact arithmetic before any field is
//! sampled. The constants are unknown; what is tested is that each ratio is
//! finite and does not drift under dilation.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::family::TestFunction;
use super::{lorentz_norm, rearrangement, LorentzError};
use crate::exponents::{int, Exponent, Rational};
use crate::grid::{ComplexField, GridSpec, RealField};
use crate::spectral::{RieszOperator, Spectral};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub family: String,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    /// `‖|f|^r‖_{L^{p,q}}` and `‖f‖^r_{L^{pr,qr}}` at δ = 1.
    pub power_lhs: Option<f64>,
    pub power_rhs: Option<f64>,
    pub power_residual: Option<f64>,
    pub ladder: Vec<f64>,
    /// `‖f_δ‖_{L^{p,max(q,r)}} / ‖f_δ‖_{L^{p,min(q,r)}}` along the ladder.
    pub nesting_ratios: Vec<f64>,
    pub nesting_variation: f64,
    pub pass: bool,
}

pub const POWER_TOLERANCE: f64 = 1e-10;
pub const NESTING_TOLERANCE: f64 = 1e-6;
pub const LEMMA_VARIATION: f64 = 0.1;

fn variation(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::MIN, f64::max);
    let min = xs.iter().copied().fold(f64::MAX, f64::min);
    max / min - 1.0
}

/// Power identity `‖|f|^r‖_{L^{p,q}} = ‖f‖^r_{L^{pr,qr}}` and the nesting
/// ratio between the second indices `q` and `r`, on each dilation of `f`.
pub fn lorentz_identity_suite(
    f: &TestFunction,
    grid: &GridSpec,
    p: f64,
    q: f64,
    r: f64,
    ladder: &[f64],
) -> Result<IdentityReport, LorentzError> {
    let base = rearrangement(&f.sample(grid, 1.0))?;
    let (power_lhs, power_rhs, power_residual) = if r.is_finite() {
        let lhs = lorentz_norm(&base.power(r), p, q)?;
        let rhs = lorentz_norm(&base, p * r, q * r)?.powf(r);
        (Some(lhs), Some(rhs), Some(((lhs - rhs) / rhs).abs()))
    } else {
        (None, None, None)
    };
    let (lo, hi) = if q <= r { (q, r) } else { (r, q) };
    let mut nesting_ratios = Vec::with_capacity(ladder.len());
    for &delta in ladder {
        let prof = rearrangement(&f.sample(grid, delta))?;
        nesting_ratios.push(lorentz_norm(&prof, p, hi)? / lorentz_norm(&prof, p, lo)?);
    }
    let nesting_variation = variation(&nesting_ratios);
    let pass = power_residual.is_none_or(|res| res < POWER_TOLERANCE)
        && nesting_ratios.iter().all(|x| x.is_finite() && *x > 0.0)
        && nesting_variation < NESTING_TOLERANCE;
    Ok(IdentityReport {
        family: f.name(),
        p,
        q,
        r,
        power_lhs,
        power_rhs,
        power_residual,
        ladder: ladder.to_vec(),
        nesting_ratios,
        nesting_variation,
        pass,
    })
}

/// One of the three inequalities, with exact exponents.
#[derive(Clone, Debug, PartialEq)]
pub enum Lemma {
    /// `‖fg‖_{L^{p,q}} ≤ C‖f‖_{L^{p1,q1}}‖g‖_{L^{p2,q2}}`, here with `g = f`.
    Holder {
        p: Rational,
        q: Exponent,
        p1: Rational,
        q1: Exponent,
        p2: Rational,
        q2: Exponent,
    },
    /// `‖I_α f‖_{L^{q,r}} ≤ C‖f‖_{L^{p,r}}`, `1/q = 1/p − α/n`.
    Hls { alpha: Rational, p: Rational, q: Rational, r: Exponent },
    /// `‖f‖_{L^{p1,q}} ≤ C‖(−Δ)^{s/2}f‖_{L^{p,q}}`, `1/p1 = 1/p − s/n`.
    Sobolev { s: Rational, p: Rational, p1: Rational, q: Exponent },
}

impl Lemma {
    pub fn name(&self) -> &'static str {
        match self {
            Lemma::Holder { .. } => "holder",
            Lemma::Hls { .. } => "hls",
            Lemma::Sobolev { .. } => "sobolev",
        }
    }

    /// Exact check of the exponent relations for dimension `n`.
    pub fn validate(&self, n: usize) -> Result<(), LorentzError> {
        let lemma = self.name();
        let fail = |relation: String| Err(LorentzError::Relation { lemma, relation });
        let one = Rational::one();
        let outer_ok = |x: &Rational| x > &one;
        let inner_ok = |e: &Exponent| e.finite().is_none_or(|v| v >= &one);
        let nr = int(n as i64);
        match self {
            Lemma::Holder { p, q, p1, q1, p2, q2 } => {
                if ![p, p1, p2].into_iter().all(outer_ok) || ![q, q1, q2].into_iter().all(inner_ok) {
                    return fail("need 1 < p, p1, p2 < inf and q, q1, q2 >= 1".into());
                }
                if p.recip() != p1.recip() + p2.recip() {
                    return fail(format!("1/{p} != 1/{p1} + 1/{p2}"));
                }
                if q.reciprocal() != q1.reciprocal() + q2.reciprocal() {
                    return fail(format!("1/{q} != 1/{q1} + 1/{q2}"));
                }
            }
            Lemma::Hls { alpha, p, q, r } => {
                if !alpha.is_positive() || alpha >= &nr {
                    return fail(format!("alpha = {alpha} outside (0, n)"));
                }
                if !(outer_ok(p) && p < q) || !inner_ok(r) {
                    return fail("need 1 < p < q < inf and r >= 1".into());
                }
                if q.recip() != p.recip() - alpha / &nr {
                    return fail(format!("1/{q} != 1/{p} - {alpha}/{n}"));
                }
            }
            Lemma::Sobolev { s, p, p1, q } => {
                if s.is_negative() || !outer_ok(p) || !inner_ok(q) {
                    return fail("need s >= 0, 1 < p < inf, q >= 1".into());
                }
                if s * p >= nr && !s.is_zero() {
                    return fail(format!("s = {s} not below n/p"));
                }
                if p1.recip() != p.recip() - s / &nr {
                    return fail(format!("1/{p1} != 1/{p} - {s}/{n}"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaRatio {
    pub family: String,
    pub delta: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessReport {
    pub lemma: &'static str,
    pub rows: Vec<LemmaRatio>,
    /// Per family: supremum of the ratio and its relative spread over the ladder.
    pub families: Vec<(String, f64, f64)>,
    pub max_variation: f64,
    pub pass: bool,
}

fn rf(x: &Rational) -> f64 {
    crate::exponents::rat_f64(x)
}

fn lnorm(f: &RealField, p: f64, q: f64) -> Result<f64, LorentzError> {
    lorentz_norm(&rearrangement(f)?, p, q)
}

fn complex_lnorm(f: &ComplexField, p: f64, q: f64) -> Result<f64, LorentzError> {
    lorentz_norm(&rearrangement(f)?, p, q)
}

pub fn inequality_harness(
    lemma: &Lemma,
    families: &[TestFunction],
    grid: &GridSpec,
    ladder: &[f64],
) -> Result<HarnessReport, LorentzError> {
    lemma.validate(grid.dim())?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for fam in families {
        let mut ratios = Vec::new();
        for &delta in ladder {
            let f = fam.sample(grid, delta);
            let g = *f.grid();
            let (lhs, rhs) = match lemma {
                Lemma::Holder { p, q, p1, q1, p2, q2 } => {
                    let prod = f.map(|v| v * v);
                    let lhs = lnorm(&prod, rf(p), q.to_f64())?;
                    let rhs = lnorm(&f, rf(p1), q1.to_f64())? * lnorm(&f, rf(p2), q2.to_f64())?;
                    (lhs, rhs)
                }
                Lemma::Hls { alpha, p, q, r } => {
                    let op = RieszOperator::new(g, rf(alpha))?;
                    let out = RealField::new(g, op.apply_real(f.values()))?;
                    (lnorm(&out, rf(q), r.to_f64())?, lnorm(&f, rf(p), r.to_f64())?)
                }
                Lemma::Sobolev { s, p, p1, q } => {
                    let fc = f.map(|v| Complex64::new(v, 0.0));
                    let d = Spectral::new(g).fractional_laplacian(&fc, rf(s));
                    (complex_lnorm(&fc, rf(p1), q.to_f64())?, complex_lnorm(&d, rf(p), q.to_f64())?)
                }
            };
            let ratio = lhs / rhs;
            ratios.push(ratio);
            rows.push(LemmaRatio {
                family: fam.name(),
                delta,
                lhs,
                rhs,
                ratio,
            });
        }
        let sup = ratios.iter().copied().fold(0.0, f64::max);
        summary.push((fam.name(), sup, variation(&ratios)));
    }
    let max_variation = summary.iter().map(|s| s.2).fold(0.0, f64::max);
    let pass = rows.iter().all(|r| r.ratio.is_finite() && r.ratio > 0.0) && max_variation < LEMMA_VARIATION;
    Ok(HarnessReport {
        lemma: lemma.name(),
        rows,
        families: summary,
        max_variation,
        pass,
    })
}
