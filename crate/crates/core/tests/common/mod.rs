//! Independent oracles, which do not go through the crate's FFT, rational
//! or Lorentz code, and a sampler of gate-passing points.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use hartree_lab::exponents::{rat, theorem_gate, Coupling, ParameterPoint};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Unreduced fraction over `BigInt`; only what the dual identity needs.
#[derive(Clone, Debug)]
pub struct Frac {
    pub num: BigInt,
    pub den: BigInt,
}

impl Frac {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let (num, den) = (num.into(), den.into());
        assert!(!den.is_zero());
        Self { num, den }
    }

    pub fn int(v: i64) -> Self {
        Self::new(v, 1)
    }

    /// Parses the `num/den` or integer display form.
    pub fn parse(text: &str) -> Self {
        match text.split_once('/') {
            Some((a, b)) => Self::new(a.trim().parse::<BigInt>().unwrap(), b.trim().parse::<BigInt>().unwrap()),
            None => Self::new(text.trim().parse::<BigInt>().unwrap(), 1),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.den + &o.num * &self.den, &self.den * &o.den)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.den - &o.num * &self.den, &self.den * &o.den)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }

    pub fn signum(&self) -> i32 {
        let s = |x: &BigInt| if x.is_positive() { 1 } else if x.is_negative() { -1 } else { 0 };
        s(&self.num) * s(&self.den)
    }

    /// Strictly between 0 and 1.
    pub fn in_unit_open(&self) -> bool {
        self.signum() > 0 && Frac::int(1).sub(self).signum() > 0
    }
}

/// `2/q̃ + n/r̃` from the definitions `1/q̃ = 1 − (2p−1)/q`,
/// `1/r̃ = 1 − (2p−1)/r − (2b − α − 2s(p−1))/n` and `2/q = n/2 − n/r`.
pub fn dual_sum(n: i64, s: &Frac, alpha: &Frac, b: &Frac, p: &Frac, n_over_r: &Frac) -> Frac {
    let one = Frac::int(1);
    let nf = Frac::int(n);
    let k = Frac::int(2).mul(p).sub(&one);
    let inv_q = nf.div(&Frac::int(4)).sub(&n_over_r.div(&Frac::int(2)));
    let inv_r = n_over_r.div(&nf);
    let inv_qt = one.sub(&k.mul(&inv_q));
    let shift = Frac::int(2).mul(b).sub(alpha).sub(&Frac::int(2).mul(s).mul(&p.sub(&one)));
    let inv_rt = one.sub(&k.mul(&inv_r)).sub(&shift.div(&nf));
    Frac::int(2).mul(&inv_qt).add(&nf.mul(&inv_rt))
}

/// `c_{3,α}` with a Lanczos gamma rather than the crate's.
pub fn riesz_constant_3d(alpha: f64) -> f64 {
    gamma_lanczos(0.5 * (3.0 - alpha)) / (gamma_lanczos(0.5 * alpha) * PI.powf(1.5) * 2f64.powf(alpha))
}

/// Lanczos approximation (g = 7, 9 terms), accurate to ~1e-15.
pub fn gamma_lanczos(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_lanczos(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Composite Simpson on `[a, b]` with `panels` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels + panels % 2;
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + k as f64 * h);
    }
    sum * h / 3.0
}

/// `I_α f(r)` in three dimensions for radial `f`, by quadrature of the
/// angular average of the kernel:
/// `∫_{S²} |x−y|^{α−3} dσ = 2π((r+ρ)^{α−1} − |r−ρ|^{α−1}) / ((α−1) r ρ)`.
/// Requires `1 < α < 3`; the radial integral is split at the kink `ρ = r`.
pub fn riesz_radial_3d(f: &impl Fn(f64) -> f64, alpha: f64, r: f64, cutoff: f64, panels: usize) -> f64 {
    assert!(alpha > 1.0 && alpha < 3.0);
    let c = riesz_constant_3d(alpha);
    let e = alpha - 1.0;
    let integrand = |rho: f64| {
        if rho == 0.0 {
            return 0.0;
        }
        if r == 0.0 {
            return f(rho) * 4.0 * PI * rho.powf(alpha - 1.0);
        }
        let kernel = 2.0 * PI * ((r + rho).powf(e) - (r - rho).abs().powf(e)) / (e * r * rho);
        f(rho) * kernel * rho * rho
    };
    let inner = if r > 0.0 { simpson(integrand, 0.0, r.min(cutoff), panels) } else { 0.0 };
    let outer = if r < cutoff { simpson(integrand, r, cutoff, panels) } else { 0.0 };
    c * (inner + outer)
}

/// `e^{itΔ}` applied to `e^{−|x|²/(2w²)}` in `n` dimensions.
pub fn free_gaussian(n: usize, w: f64, t: f64, r2: f64) -> Complex64 {
    let sigma2 = Complex64::new(w * w, 2.0 * t);
    (Complex64::new(w * w, 0.0) / sigma2).powf(0.5 * n as f64) * (-r2 / (2.0 * sigma2)).exp()
}

/// `m^{1/p} (p/q)^{1/q}`, the `L^{p,q}` norm of an indicator of measure `m`.
pub fn indicator_norm(m: f64, p: f64, q: f64) -> f64 {
    if q.is_infinite() {
        m.powf(1.0 / p)
    } else {
        m.powf(1.0 / p) * (p / q).powf(1.0 / q)
    }
}

/// `ω_n`, volume of the unit ball.
pub fn unit_ball_volume(n: usize) -> f64 {
    PI.powf(0.5 * n as f64) / gamma_lanczos(0.5 * n as f64 + 1.0)
}

/// Gate-passing points with `n ∈ {3,…,6}`, `s ∈ {0, 1/4, …, 1}` and
/// `α`, `b` on a 1/48 lattice, by rejection.
pub fn passing_points(seed: u64, count: usize) -> Vec<ParameterPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(3..=6u32);
        let s = rat(rng.gen_range(0..=4), 4);
        let alpha = rat(rng.gen_range(1..(48 * n as i64)), 48);
        let b = rat(rng.gen_range(1..96), 48);
        if theorem_gate(n, &s, &alpha, &b).pass {
            out.push(ParameterPoint::critical(n, s, alpha, b, Coupling::Defocusing).unwrap());
        }
    }
    out
}
