//! Exact arithmetic for the exponent conditions of the critical Cauchy
//! problem: critical powers, the admissible `(α, b)` region, the `n/r`
//! window, dual Strichartz pairs and the Lorentz–Hölder splits used by the
//! nonlinear estimates.
//!
//! Everything here works over [`Rational`] and [`AlgebraicBound`];
//! floating point only shows up in `to_f64` helpers for reports.

pub mod algebraic;
pub mod constraints;
pub mod gate;
pub mod pairs;
pub mod window;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use algebraic::AlgebraicBound;
pub use constraints::{
    r_window, raw_constraint_windows, window_equivalence_oracle, EquivalenceVerdict, NamedWindow,
    RWindow, RawConstraints, SideCondition,
};
pub use gate::{remark_containment_check, theorem_gate, ContainmentVerdict, GateCheck, GateVerdict};
pub use pairs::{dual_pair, holder_splits, AdmissiblePair, DualPair, HolderSplit};
pub use window::ExponentWindow;

/// Exact rational; all exponent arithmetic runs on arbitrary-precision
/// reduced fractions.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub(crate) fn rat_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn serialize_rational<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExponentError {
    #[error("dimension n = {0} is below 3")]
    Dimension(u32),
    #[error("regularity s = {0} outside [0, 1]")]
    Regularity(String),
    #[error("Riesz order alpha = {0} outside (0, n)")]
    RieszOrder(String),
    #[error("singularity b = {0} must be positive")]
    Singularity(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(&'static str),
    #[error("pair ({q}, {r}) is not admissible: {reason}")]
    NotAdmissible {
        q: String,
        r: String,
        reason: &'static str,
    },
    #[error("dual exponent r~' = {0} outside (1, inf)")]
    DualOutOfRange(String),
    #[error("window has irrational endpoints; no rational sample")]
    IrrationalWindow,
    #[error("malformed rational {0:?}")]
    Parse(String),
}

/// Parses `"num/den"`, an integer or a terminating decimal (optionally
/// with an exponent) into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, ExponentError> {
    let t = text.trim();
    let bad = || ExponentError::Parse(text.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = t.split_once('/') {
        let num = parse_integer(num.trim()).ok_or_else(bad)?;
        let den = parse_integer(den.trim()).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{}{}", int_part, frac_part);
    let mut value = Rational::from_integer(BigInt::from_str(&joined).map_err(|_| bad())?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

fn parse_integer(t: &str) -> Option<BigInt> {
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(t).ok()
}

/// A Lebesgue/Lorentz exponent in `[1, ∞]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Finite(Rational),
    Infinite,
}

impl Exponent {
    /// `1/e`, with `1/∞ = 0`.
    pub fn reciprocal(&self) -> Rational {
        match self {
            Exponent::Finite(v) => v.recip(),
            Exponent::Infinite => Rational::zero(),
        }
    }

    /// The exponent whose reciprocal is `inv`; `inv = 0` gives `∞`.
    pub fn from_reciprocal(inv: &Rational) -> Self {
        if inv.is_zero() {
            Exponent::Infinite
        } else {
            Exponent::Finite(inv.recip())
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Exponent::Finite(v) => Some(v),
            Exponent::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(v) => rat_f64(v),
            Exponent::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{}", v),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Sign of the coupling: `+1` defocusing, `−1` focusing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Coupling {
    Defocusing,
    Focusing,
}

impl Coupling {
    pub fn value(self) -> f64 {
        match self {
            Coupling::Defocusing => 1.0,
            Coupling::Focusing => -1.0,
        }
    }
}

/// Critical power and the related indices for `(n, s, α, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalExponents {
    #[serde(serialize_with = "serialize_rational")]
    pub p: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub s_c: Rational,
    /// `p_*`, the mass-critical power.
    #[serde(serialize_with = "serialize_rational")]
    pub mass_critical: Rational,
    /// `p^*`, the energy-critical power.
    #[serde(serialize_with = "serialize_rational")]
    pub energy_critical: Rational,
}

fn validate(n: u32, s: &Rational, alpha: &Rational) -> Result<(), ExponentError> {
    if n < 3 {
        return Err(ExponentError::Dimension(n));
    }
    if s.is_negative() || s > &Rational::one() {
        return Err(ExponentError::Regularity(s.to_string()));
    }
    if !alpha.is_positive() || alpha >= &int(n as i64) {
        return Err(ExponentError::RieszOrder(alpha.to_string()));
    }
    Ok(())
}

/// `s_c = n/2 − (2 − 2b + α) / (2(p − 1))`.
pub fn critical_index(n: u32, alpha: &Rational, b: &Rational, p: &Rational) -> Result<Rational, ExponentError> {
    let pm1 = p - Rational::one();
    if pm1.is_zero() {
        return Err(ExponentError::Degenerate("p = 1"));
    }
    Ok(rat(n as i64, 2) - (int(2) - int(2) * b + alpha) / (int(2) * pm1))
}

pub fn critical_exponents(
    n: u32,
    s: &Rational,
    alpha: &Rational,
    b: &Rational,
) -> Result<CriticalExponents, ExponentError> {
    validate(n, s, alpha)?;
    let nr = int(n as i64);
    let gap = &nr - int(2) * s;
    if gap.is_zero() {
        return Err(ExponentError::Degenerate("n = 2s"));
    }
    let top = int(2) - int(2) * b + alpha;
    if top.is_zero() {
        return Err(ExponentError::Degenerate("p = 1 (2 - 2b + alpha = 0)"));
    }
    let p = Rational::one() + &top / gap;
    let s_c = critical_index(n, alpha, b, &p)?;
    Ok(CriticalExponents {
        mass_critical: Rational::one() + &top / &nr,
        energy_critical: Rational::one() + &top / (nr - int(2)),
        p,
        s_c,
    })
}

/// The coordinate of every feasibility question.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParameterPoint {
    pub n: u32,
    #[serde(serialize_with = "serialize_rational")]
    pub s: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub alpha: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub b: Rational,
    pub lambda: Coupling,
    #[serde(serialize_with = "serialize_rational")]
    pub p: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub s_c: Rational,
}

impl ParameterPoint {
    /// Point with the critical power `p = 1 + (2 − 2b + α)/(n − 2s)`.
    pub fn critical(
        n: u32,
        s: Rational,
        alpha: Rational,
        b: Rational,
        lambda: Coupling,
    ) -> Result<Self, ExponentError> {
        if !b.is_positive() {
            return Err(ExponentError::Singularity(b.to_string()));
        }
        let ce = critical_exponents(n, &s, &alpha, &b)?;
        Ok(Self {
            n,
            s,
            alpha,
            b,
            lambda,
            p: ce.p,
            s_c: ce.s_c,
        })
    }

    /// Point with a supplied power; `s_c` is derived from it.
    pub fn with_power(
        n: u32,
        s: Rational,
        alpha: Rational,
        b: Rational,
        lambda: Coupling,
        p: Rational,
    ) -> Result<Self, ExponentError> {
        validate(n, &s, &alpha)?;
        if !b.is_positive() {
            return Err(ExponentError::Singularity(b.to_string()));
        }
        let s_c = critical_index(n, &alpha, &b, &p)?;
        Ok(Self {
            n,
            s,
            alpha,
            b,
            lambda,
            p,
            s_c,
        })
    }

    pub fn n_rat(&self) -> Rational {
        int(self.n as i64)
    }

    /// `(2 − 2b + α) / (2(p − 1))`, the amplitude exponent of the scaling
    /// `u_δ(x, t) = δ^β u(δx, δ²t)`.
    pub fn scaling_exponent(&self) -> Rational {
        (int(2) - int(2) * &self.b + &self.alpha) / (int(2) * (&self.p - Rational::one()))
    }
}

/// `max{(n−2)/3, n−4} < α < n`.
pub fn check_alpha_range(n: u32, alpha: &Rational) -> bool {
    let nr = int(n as i64);
    let lower = std::cmp::max(rat(n as i64 - 2, 3), &nr - int(4));
    &lower < alpha && alpha < &nr
}

/// The radicand `9n² − 8n + 16`.
pub fn radicand(n: u32) -> u64 {
    let n = n as u64;
    9 * n * n - 8 * n + 16
}

/// Window of admissible `b` at fixed `(n, s, α)`: the lower end is
/// `max{0, α/2 + 1 − (n−2s)(n+4+√(9n²−8n+16))/(8(n−2))}` (strict) and the
/// upper end `α/2 + 1 − (n−2s)/2` (inclusive).
pub fn b_window(n: u32, s: &Rational, alpha: &Rational) -> ExponentWindow {
    let nr = int(n as i64);
    let gap = &nr - int(2) * s;
    let base = alpha / int(2) + Rational::one();
    let denom = int(8) * (&nr - int(2));
    let a = &base - &gap * (&nr + int(4)) / &denom;
    let c = -(&gap / &denom);
    let algebraic = AlgebraicBound::new(a, c, radicand(n));
    let zero = AlgebraicBound::zero();
    let lo = algebraic.max(zero);
    let hi = AlgebraicBound::rational(base - gap / int(2));
    ExponentWindow::new(lo, true, hi, false)
}

/// `(5n − 4 + √(9n² − 8n + 16)) / (4(n − 2))`.
pub fn p_upper_bound(n: u32) -> AlgebraicBound {
    let denom = int(4) * int(n as i64 - 2);
    AlgebraicBound::new(
        int(5 * n as i64 - 4) / &denom,
        Rational::one() / denom,
        radicand(n),
    )
}
