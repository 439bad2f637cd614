//! The composite feasibility gate for the local well-posedness theorem, and
//! the containment audit of the previously known region.

use num_traits::Signed;
use serde::Serialize;

use super::algebraic::AlgebraicBound;
use super::constraints::{r_window, raw_constraint_windows};
use super::pairs::{dual_pair, holder_splits, AdmissiblePair, DualPair, HolderSplit};
use super::window::ExponentWindow;
use super::{
    b_window, check_alpha_range, int, rat, serialize_rational, Coupling,
    ExponentError, ParameterPoint, Rational,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// An earlier failure left this check without inputs.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GateCheck {
    pub tag: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GateVerdict {
    pub n: u32,
    #[serde(serialize_with = "serialize_rational")]
    pub s: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub alpha: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub b: Rational,
    pub point: Option<ParameterPoint>,
    pub window: Option<ExponentWindow>,
    pub sample: Option<AdmissiblePair>,
    pub dual: Option<DualPair>,
    pub holder: Option<HolderSplit>,
    pub checks: Vec<GateCheck>,
    pub findings: Vec<String>,
    pub pass: bool,
}

impl GateVerdict {
    pub fn check(&self, tag: &str) -> Option<&GateCheck> {
        self.checks.iter().find(|c| c.tag == tag)
    }

    pub fn failures(&self) -> impl Iterator<Item = &GateCheck> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn label(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

struct Checks(Vec<GateCheck>);

impl Checks {
    fn push(&mut self, tag: &'static str, ok: bool, detail: impl Into<String>) -> bool {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        self.0.push(GateCheck {
            tag,
            status,
            detail: detail.into(),
        });
        ok
    }

    fn skip(&mut self, tags: &[&'static str]) {
        for &tag in tags {
            self.0.push(GateCheck {
                tag,
                status: CheckStatus::Skipped,
                detail: String::new(),
            });
        }
    }
}

const TAGS_AFTER_POWER: [&str; 6] = ["cb", "2cc10", "as-r", "def-admissible", "2se1", "2c3"];

/// Evaluates every hypothesis of the local theorem at `(n, s, α, b)` with
/// the critical power, samples the midpoint of the `n/r` window and checks
/// the resulting dual pair and Hölder splits.
pub fn theorem_gate(n: u32, s: &Rational, alpha: &Rational, b: &Rational) -> GateVerdict {
    let mut v = GateVerdict {
        n,
        s: s.clone(),
        alpha: alpha.clone(),
        b: b.clone(),
        point: None,
        window: None,
        sample: None,
        dual: None,
        holder: None,
        checks: Vec::new(),
        findings: Vec::new(),
        pass: false,
    };
    let mut c = Checks(Vec::new());

    let point = match ParameterPoint::critical(n, s.clone(), alpha.clone(), b.clone(), Coupling::Defocusing) {
        Ok(pt) => pt,
        Err(e) => {
            c.push("domain", false, e.to_string());
            c.skip(&["as-1", "as-2", "p>=2"]);
            c.skip(&TAGS_AFTER_POWER);
            v.checks = c.0;
            return v;
        }
    };
    c.push("domain", true, "n >= 3, 0 <= s <= 1, 0 < alpha < n, b > 0");

    let as1 = check_alpha_range(n, alpha);
    c.push("as-1", as1, format!("max{{(n-2)/3, n-4}} < alpha < n at alpha = {alpha}"));
    let bw = b_window(n, s, alpha);
    let as2 = bw.contains(b);
    c.push("as-2", as2, format!("b = {b} in {bw}"));
    let p_ok = point.p >= int(2);
    c.push("p>=2", p_ok, format!("p = {}", point.p));

    if !p_ok {
        c.skip(&TAGS_AFTER_POWER);
        v.point = Some(point);
        v.checks = c.0;
        return v;
    }

    let raw = raw_constraint_windows(&point).expect("p >= 2 checked");
    for tag in ["cb", "2cc10"] {
        let side = raw.sides.iter().find(|sc| sc.tag == tag).expect("side condition present");
        c.push(tag, side.holds, side.statement);
    }

    let rw = r_window(&point).expect("p >= 2 checked");
    let window = rw.window.clone();
    let nonempty = !window.is_empty();
    c.push(
        "as-r",
        nonempty,
        format!(
            "n/r window {window} (lower from {}, upper from {}){}",
            rw.lower_binding,
            rw.upper_binding,
            if nonempty { "" } else { ": empty" }
        ),
    );
    if !nonempty && as1 && as2 {
        v.findings.push(format!(
            "empty (as-r) window although (as-1) and (as-2) hold; alpha + s = {} vs n = {n}",
            alpha + s
        ));
    }
    v.window = Some(window.clone());

    let mid = if nonempty { window.midpoint() } else { None };
    let Some(x) = mid else {
        c.skip(&["def-admissible", "2se1", "2c3"]);
        v.point = Some(point);
        v.checks = c.0;
        return v;
    };

    match AdmissiblePair::from_n_over_r(n, &x) {
        Ok(pair) => {
            c.push("def-admissible", true, format!("(q, r) = ({}, {}) at n/r = {x}", pair.q, pair.r));
            match dual_pair(&point, &pair) {
                Ok(d) => {
                    c.push(
                        "2se1",
                        d.admissible(),
                        format!("(q~, r~) = ({}, {})", d.q_tilde, d.r_tilde),
                    );
                    v.dual = Some(d);
                }
                Err(e) => {
                    c.push("2se1", false, e.to_string());
                }
            }
            let h = holder_splits(&point, &pair.r);
            let detail = if h.is_valid() {
                "first indices r1, r3, r5, r7 in (1, inf)".to_string()
            } else {
                format!("violated: {}", h.violations.join(", "))
            };
            c.push("2c3", h.is_valid(), detail);
            v.holder = Some(h);
            v.sample = Some(pair);
        }
        Err(e) => {
            c.push("def-admissible", false, e.to_string());
            c.skip(&["2se1", "2c3"]);
        }
    }

    v.point = Some(point);
    v.pass = c.0.iter().all(|ch| ch.status == CheckStatus::Pass);
    v.checks = c.0;
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContainmentVerdict {
    pub n: u32,
    #[serde(serialize_with = "serialize_rational")]
    pub s: Rational,
    /// `max{(n−2)/3, n−4} < n − 2`.
    pub alpha_range_contained: bool,
    pub grid_points: usize,
    /// Grid values of α where the new lower bound on b exceeds the old one.
    pub b_bound_failures: Vec<String>,
    pub pass: bool,
}

/// Number of α samples in `(n−2, n)`.
pub const CONTAINMENT_GRID: usize = 128;

/// Checks that the new `(α, b)` region contains the earlier one for
/// `0 ≤ s < 1/2`: the α-range is wider and, on a rational grid over
/// `(n−2, n)`, the new lower bound of b never exceeds
/// `max{0, (α−n)/2 + (n+2)s/n}`.
pub fn remark_containment_check(n: u32, s: &Rational) -> Result<ContainmentVerdict, ExponentError> {
    if n < 3 {
        return Err(ExponentError::Dimension(n));
    }
    if s.is_negative() || s >= &rat(1, 2) {
        return Err(ExponentError::Regularity(s.to_string()));
    }
    let nr = int(n as i64);
    let lower = std::cmp::max(rat(n as i64 - 2, 3), &nr - int(4));
    let alpha_range_contained = lower < &nr - int(2);

    let mut failures = Vec::new();
    let steps = int(CONTAINMENT_GRID as i64 + 1);
    for k in 1..=CONTAINMENT_GRID {
        let alpha = &nr - int(2) + int(2) * int(k as i64) / &steps;
        let new_lo = b_window(n, s, &alpha).lo;
        let old = (&alpha - &nr) / int(2) + (&nr + int(2)) * s / &nr;
        let old_lo = AlgebraicBound::rational(std::cmp::max(old, Rational::from_integer(0.into())));
        if new_lo > old_lo {
            failures.push(alpha.to_string());
        }
    }
    Ok(ContainmentVerdict {
        n,
        s: s.clone(),
        alpha_range_contained,
        grid_points: CONTAINMENT_GRID,
        pass: alpha_range_contained && failures.is_empty(),
        b_bound_failures: failures,
    })
}
