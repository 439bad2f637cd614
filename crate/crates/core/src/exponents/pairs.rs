//! Admissible pairs, the dual pair of the inhomogeneous estimate, and the
//! Hölder splits of the nonlinear terms.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{int, serialize_rational, Exponent, ExponentError, ParameterPoint, Rational};

/// `(q, r)` with `2/q + n/r = n/2`, `q ∈ [2, ∞]`, `r ∈ [2, 2n/(n−2)]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissiblePair {
    pub n: u32,
    pub q: Exponent,
    #[serde(serialize_with = "serialize_rational")]
    pub r: Rational,
}

impl AdmissiblePair {
    pub fn new(n: u32, q: Exponent, r: Rational) -> Result<Self, ExponentError> {
        let fail = |reason| ExponentError::NotAdmissible {
            q: q.to_string(),
            r: r.to_string(),
            reason,
        };
        if n < 3 {
            return Err(ExponentError::Dimension(n));
        }
        if let Exponent::Finite(v) = &q {
            if v < &int(2) {
                return Err(fail("q < 2"));
            }
        }
        let nr = int(n as i64);
        if r < int(2) || r > int(2) * &nr / (&nr - int(2)) {
            return Err(fail("r outside [2, 2n/(n-2)]"));
        }
        if int(2) * q.reciprocal() + &nr / &r != &nr / int(2) {
            return Err(fail("2/q + n/r != n/2"));
        }
        Ok(Self { n, q, r })
    }

    /// The pair with `n/r = x`.
    pub fn from_n_over_r(n: u32, x: &Rational) -> Result<Self, ExponentError> {
        if !x.is_positive() {
            return Err(ExponentError::NotAdmissible {
                q: "?".into(),
                r: "?".into(),
                reason: "n/r must be positive",
            });
        }
        let nr = int(n as i64);
        let inv_q = (&nr / int(2) - x) / int(2);
        if inv_q.is_negative() {
            return Err(ExponentError::NotAdmissible {
                q: "<0".into(),
                r: (&nr / x).to_string(),
                reason: "n/r > n/2",
            });
        }
        Self::new(n, Exponent::from_reciprocal(&inv_q), nr / x)
    }

    pub fn n_over_r(&self) -> Rational {
        int(self.n as i64) / &self.r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualPair {
    pub q_tilde_prime: Exponent,
    pub r_tilde_prime: Exponent,
    pub q_tilde: Exponent,
    pub r_tilde: Exponent,
    /// `2/q̃ + n/r̃ = n/2`.
    pub identity_holds: bool,
    pub q_tilde_in_range: bool,
    /// `2 ≤ r̃ ≤ 2n/(n−2)`.
    pub r_tilde_in_range: bool,
}

impl DualPair {
    pub fn admissible(&self) -> bool {
        self.identity_holds && self.q_tilde_in_range && self.r_tilde_in_range
    }
}

/// `1/q̃′ = (2p−1)/q` and `1/r̃′ = (2p−1)/r + (2b−α−2s(p−1))/n`.
pub fn dual_pair(point: &ParameterPoint, pair: &AdmissiblePair) -> Result<DualPair, ExponentError> {
    let one = Rational::one();
    let (s, a, b, p) = (&point.s, &point.alpha, &point.b, &point.p);
    let n = point.n_rat();
    let k = int(2) * p - &one;
    let inv_qtp = &k * pair.q.reciprocal();
    let inv_rtp = &k / &pair.r + (int(2) * b - a - int(2) * s * (p - &one)) / &n;
    if !inv_rtp.is_positive() || inv_rtp >= one {
        return Err(ExponentError::DualOutOfRange(
            Exponent::from_reciprocal(&inv_rtp).to_string(),
        ));
    }
    let inv_qt = &one - &inv_qtp;
    let inv_rt = &one - &inv_rtp;
    let identity_holds = int(2) * &inv_qt + &n * &inv_rt == &n / int(2);
    let q_tilde_in_range = !inv_qt.is_negative() && inv_qt <= Rational::new(1.into(), 2.into());
    let r_tilde_in_range = inv_rt <= Rational::new(1.into(), 2.into())
        && inv_rt >= (&n - int(2)) / (int(2) * &n);
    Ok(DualPair {
        q_tilde_prime: Exponent::from_reciprocal(&inv_qtp),
        r_tilde_prime: Exponent::from_reciprocal(&inv_rtp),
        q_tilde: Exponent::from_reciprocal(&inv_qt),
        r_tilde: Exponent::from_reciprocal(&inv_rt),
        identity_holds,
        q_tilde_in_range,
        r_tilde_in_range,
    })
}

/// One second Lorentz index; `None` when its denominator vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecondIndex {
    pub formula: &'static str,
    pub value: Option<Exponent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HolderSplit {
    #[serde(serialize_with = "serialize_rational")]
    pub inv_r1: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub inv_r3: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub inv_r5: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub inv_r7: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub inv_r_tilde_prime: Rational,
    pub second: Vec<SecondIndex>,
    /// Condition tags whose first indices leave `(1, ∞)`.
    pub violations: Vec<&'static str>,
    pub identities_hold: bool,
    /// Set when `p = 2`, where `2(2p−1)/(p−2)` is undefined.
    pub flags: Vec<&'static str>,
}

impl HolderSplit {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.identities_hold
    }

    pub fn first_indices(&self) -> [Exponent; 4] {
        [&self.inv_r1, &self.inv_r3, &self.inv_r5, &self.inv_r7].map(Exponent::from_reciprocal)
    }
}

fn in_unit_open(x: &Rational) -> bool {
    x.is_positive() && x < &Rational::one()
}

pub fn holder_splits(point: &ParameterPoint, r: &Rational) -> HolderSplit {
    let one = Rational::one();
    let (s, a, b, p) = (&point.s, &point.alpha, &point.b, &point.p);
    let n = point.n_rat();
    let pm1 = p - &one;
    let pm2 = p - int(2);
    let inv_r = r.recip();

    let inv_r1 = &pm1 * &inv_r + (b - s * &pm2) / &n;
    let inv_r3 = p * &inv_r + (b - a - s * p) / &n;
    let inv_r5 = &pm1 * &inv_r + (b - s * &pm1) / &n;
    let inv_r7 = p * &inv_r + (b - a - s * &pm1) / &n;
    let inv_rtp = (int(2) * p - &one) * &inv_r + (int(2) * b - a - int(2) * s * &pm1) / &n;

    let mut violations = Vec::new();
    if !(in_unit_open(&inv_r1) && in_unit_open(&inv_r3)) {
        violations.push("2cc2");
    }
    if !(in_unit_open(&inv_r5) && in_unit_open(&inv_r7)) {
        violations.push("2cc4");
    }
    let identities_hold = &inv_r1 + &inv_r3 == inv_rtp && &inv_r5 + &inv_r7 == inv_rtp;

    let four_p1 = int(4) * (p + &one);
    let two_2p1 = int(2) * (int(2) * p - &one);
    let ratio = |num: &Rational, den: Rational| {
        if den.is_zero() {
            None
        } else {
            Some(Exponent::Finite(num / den))
        }
    };
    let second = vec![
        SecondIndex { formula: "4(p+1)/(p+2)", value: ratio(&four_p1, p + int(2)) },
        SecondIndex { formula: "4(p+1)/p", value: ratio(&four_p1, p.clone()) },
        SecondIndex { formula: "4(p+1)/(p-1)", value: ratio(&four_p1, pm1.clone()) },
        SecondIndex { formula: "4(p+1)/(p+3)", value: ratio(&four_p1, p + int(3)) },
        SecondIndex { formula: "2(2p-1)/(p-1)", value: ratio(&two_2p1, pm1.clone()) },
        SecondIndex { formula: "2(2p-1)/p", value: ratio(&two_2p1, p.clone()) },
        SecondIndex { formula: "2(2p-1)/3", value: ratio(&two_2p1, int(3)) },
        SecondIndex { formula: "2(2p-1)/(p-2)", value: ratio(&two_2p1, pm2.clone()) },
    ];
    let flags = if pm2.is_zero() {
        vec!["(ine9) requires p > 2"]
    } else {
        Vec::new()
    };
    HolderSplit {
        inv_r1,
        inv_r3,
        inv_r5,
        inv_r7,
        inv_r_tilde_prime: inv_rtp,
        second,
        violations,
        identities_hold,
        flags,
    }
}
