//! Quadratic irrationals of the form `a + c·√d`.
//!
//! Every square-root bound that shows up in the exponent conditions has a
//! single radical `√(9n² − 8n + 16)`, so a one-surd representation is
//! enough. Comparisons are decided exactly by sign analysis and squaring.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// The number `a + c·√d` with rational `a`, `c` and a square-free `d ≥ 2`
/// (or `c = 0`, `d = 0` for plain rationals).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicBound {
    a: Rational,
    c: Rational,
    d: u64,
}

impl AlgebraicBound {
    /// Builds `a + c·√d`, pulling square factors out of `d`.
    pub fn new(a: Rational, c: Rational, d: u64) -> Self {
        if c.is_zero() || d == 0 {
            return Self::rational(a);
        }
        let (outer, inner) = split_square(d);
        let c = c * Rational::from_integer(BigInt::from(outer));
        if inner == 1 {
            Self::rational(a + c)
        } else {
            Self { a, c, d: inner }
        }
    }

    pub fn rational(a: Rational) -> Self {
        Self {
            a,
            c: Rational::zero(),
            d: 0,
        }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_coefficient(&self) -> &Rational {
        &self.c
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.c.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// Sign of the value: -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        sign_one_surd(&self.a, &self.c, self.d)
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, t: &Rational) -> Ordering {
        ord_of(sign_one_surd(&(&self.a - t), &self.c, self.d))
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.c.is_zero() {
            return a;
        }
        a + self.c.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    pub fn add_rational(&self, t: &Rational) -> Self {
        Self {
            a: &self.a + t,
            c: self.c.clone(),
            d: self.d,
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            a: &self.a * k,
            c: &self.c * k,
            d: self.d,
        }
    }
}

impl From<Rational> for AlgebraicBound {
    fn from(a: Rational) -> Self {
        Self::rational(a)
    }
}

impl Ord for AlgebraicBound {
    fn cmp(&self, other: &Self) -> Ordering {
        let da = &self.a - &other.a;
        if self.c.is_zero() {
            return ord_of(sign_one_surd(&da, &-&other.c, other.d));
        }
        if other.c.is_zero() || self.d == other.d {
            let dc = if other.c.is_zero() {
                self.c.clone()
            } else {
                &self.c - &other.c
            };
            return ord_of(sign_one_surd(&da, &dc, self.d));
        }
        ord_of(sign_two_surds(&da, &self.c, self.d, &-&other.c, other.d))
    }
}

impl PartialOrd for AlgebraicBound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AlgebraicBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.c.is_negative() { '-' } else { '+' };
        let mag = self.c.abs();
        let coeff = if mag.is_one() {
            String::new()
        } else {
            format!("{}*", mag)
        };
        if self.a.is_zero() {
            let lead = if self.c.is_negative() { "-" } else { "" };
            write!(f, "{}{}sqrt({})", lead, coeff, self.d)
        } else {
            write!(f, "{} {} {}sqrt({})", self.a, sign, coeff, self.d)
        }
    }
}

fn ord_of(sign: i8) -> Ordering {
    sign.cmp(&0)
}

fn sign_rat(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `a + c·√d` for `d ≥ 0`.
fn sign_one_surd(a: &Rational, c: &Rational, d: u64) -> i8 {
    let sa = sign_rat(a);
    let sc = if d == 0 { 0 } else { sign_rat(c) };
    if sc == 0 {
        return sa;
    }
    if sa == 0 || sa == sc {
        return sc;
    }
    // opposite signs: the larger magnitude wins
    let lhs = a * a;
    let rhs = c * c * Rational::from_integer(BigInt::from(d));
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sc,
        Ordering::Equal => 0,
    }
}

/// Sign of `a + c1·√d1 + c2·√d2` with `d1 ≠ d2`.
fn sign_two_surds(a: &Rational, c1: &Rational, d1: u64, c2: &Rational, d2: u64) -> i8 {
    let sx = sign_one_surd(a, c1, d1);
    let sy = if d2 == 0 { 0 } else { sign_rat(c2) };
    if sy == 0 {
        return sx;
    }
    if sx == 0 || sx == sy {
        return sy;
    }
    // X = a + c1√d1 and Y = c2√d2 have opposite signs; compare X² with Y².
    let d1r = Rational::from_integer(BigInt::from(d1));
    let d2r = Rational::from_integer(BigInt::from(d2));
    let rat = a * a + c1 * c1 * &d1r - c2 * c2 * d2r;
    let surd = Rational::from_integer(BigInt::from(2)) * a * c1;
    match sign_one_surd(&rat, &surd, d1) {
        1 => sx,
        -1 => sy,
        _ => 0,
    }
}

/// Writes `d = outer² · inner` with `inner` square-free.
fn split_square(mut d: u64) -> (u64, u64) {
    let mut outer = 1u64;
    let mut f = 2u64;
    while f * f <= d {
        while d % (f * f) == 0 {
            d /= f * f;
            outer *= f;
        }
        f += 1;
    }
    (outer, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::rat;

    #[test]
    fn square_factors_are_extracted() {
        let x = AlgebraicBound::new(rat(2, 1), rat(1, 8), 128);
        assert_eq!(x.radicand(), 2);
        assert_eq!(x.surd_coefficient(), &rat(1, 1));
        let y = AlgebraicBound::new(rat(1, 1), rat(1, 1), 16);
        assert!(y.is_rational());
        assert_eq!(y.as_rational(), Some(&rat(5, 1)));
    }

    #[test]
    fn one_surd_signs() {
        // 2 - (7 + sqrt 73)/8 ~ 0.057 > 0
        let x = AlgebraicBound::new(rat(2, 1) - rat(7, 8), rat(-1, 8), 73);
        assert_eq!(x.signum(), 1);
        // 2 - 3(7 + sqrt 73)/8 < 0
        let y = AlgebraicBound::new(rat(2, 1) - rat(21, 8), rat(-3, 8), 73);
        assert_eq!(y.signum(), -1);
        assert_eq!(AlgebraicBound::zero().signum(), 0);
    }

    #[test]
    fn two_surd_comparison() {
        let s2 = AlgebraicBound::new(rat(0, 1), rat(1, 1), 2);
        let s3 = AlgebraicBound::new(rat(0, 1), rat(1, 1), 3);
        assert!(s2 < s3);
        // 1 + sqrt2 ~ 2.414 vs sqrt 6 ~ 2.449
        let a = AlgebraicBound::new(rat(1, 1), rat(1, 1), 2);
        let b = AlgebraicBound::new(rat(0, 1), rat(1, 1), 6);
        assert!(a < b);
        assert_eq!(a.clone().max(b.clone()), b);
    }

    #[test]
    fn display_forms() {
        let x = AlgebraicBound::new(rat(2, 1), rat(1, 1), 2);
        assert_eq!(x.to_string(), "2 + sqrt(2)");
        let y = AlgebraicBound::new(rat(11, 4), rat(1, 4), 73);
        assert_eq!(y.to_string(), "11/4 + 1/4*sqrt(73)");
    }
}
