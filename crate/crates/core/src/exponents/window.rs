use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use super::algebraic::AlgebraicBound;
use super::Rational;

/// An interval with exact endpoints and per-endpoint strictness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentWindow {
    pub lo: AlgebraicBound,
    pub hi: AlgebraicBound,
    pub lo_strict: bool,
    pub hi_strict: bool,
}

impl ExponentWindow {
    pub fn open(lo: impl Into<AlgebraicBound>, hi: impl Into<AlgebraicBound>) -> Self {
        Self {
            lo: lo.into(),
            hi: hi.into(),
            lo_strict: true,
            hi_strict: true,
        }
    }

    pub fn closed(lo: impl Into<AlgebraicBound>, hi: impl Into<AlgebraicBound>) -> Self {
        Self {
            lo: lo.into(),
            hi: hi.into(),
            lo_strict: false,
            hi_strict: false,
        }
    }

    pub fn new(lo: AlgebraicBound, lo_strict: bool, hi: AlgebraicBound, hi_strict: bool) -> Self {
        Self {
            lo,
            hi,
            lo_strict,
            hi_strict,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Less => false,
            Ordering::Equal => self.lo_strict || self.hi_strict,
            Ordering::Greater => true,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let lo_ok = match self.lo.cmp_rational(x) {
            Ordering::Less => true,
            Ordering::Equal => !self.lo_strict,
            Ordering::Greater => false,
        };
        let hi_ok = match self.hi.cmp_rational(x) {
            Ordering::Greater => true,
            Ordering::Equal => !self.hi_strict,
            Ordering::Less => false,
        };
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (lo, lo_strict) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_strict),
            Ordering::Less => (other.lo.clone(), other.lo_strict),
            Ordering::Equal => (self.lo.clone(), self.lo_strict || other.lo_strict),
        };
        let (hi, hi_strict) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_strict),
            Ordering::Greater => (other.hi.clone(), other.hi_strict),
            Ordering::Equal => (self.hi.clone(), self.hi_strict || other.hi_strict),
        };
        Self {
            lo,
            hi,
            lo_strict,
            hi_strict,
        }
    }

    /// Midpoint when both ends are rational.
    pub fn midpoint(&self) -> Option<Rational> {
        let lo = self.lo.as_rational()?;
        let hi = self.hi.as_rational()?;
        Some((lo + hi) / Rational::from_integer(2.into()))
    }

    /// The point `lo + frac·(hi − lo)` for rational endpoints.
    pub fn interpolate(&self, frac: &Rational) -> Option<Rational> {
        let lo = self.lo.as_rational()?;
        let hi = self.hi.as_rational()?;
        Some(lo + (hi - lo) * frac)
    }

    /// Same endpoints as sets' closures (strictness ignored).
    pub fn same_closure(&self, other: &Self) -> bool {
        self.lo == other.lo && self.hi == other.hi
    }

    /// Some rational in exactly one of the two windows, if any.
    ///
    /// Only meaningful when both windows have rational endpoints; otherwise
    /// `None` is returned even when the windows differ.
    pub fn symmetric_difference_witness(&self, other: &Self) -> Option<Rational> {
        let mut candidates = Vec::new();
        for w in [self, other] {
            if let (Some(lo), Some(hi)) = (w.lo.as_rational(), w.hi.as_rational()) {
                candidates.push(lo.clone());
                candidates.push(hi.clone());
            }
        }
        candidates.sort();
        candidates.dedup();
        let two = Rational::from_integer(2.into());
        let mut probes = candidates.clone();
        for pair in candidates.windows(2) {
            probes.push((&pair[0] + &pair[1]) / &two);
        }
        probes
            .into_iter()
            .find(|x| self.contains(x) != other.contains(x))
    }
}

impl fmt::Display for ExponentWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_strict { '(' } else { '[' };
        let close = if self.hi_strict { ')' } else { ']' };
        write!(f, "{}{}, {}{}", open, self.lo, self.hi, close)
    }
}

impl Serialize for ExponentWindow {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("ExponentWindow", 5)?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.serialize_field("lo_strict", &self.lo_strict)?;
        st.serialize_field("hi_strict", &self.hi_strict)?;
        st.serialize_field("empty", &self.is_empty())?;
        st.end()
    }
}
