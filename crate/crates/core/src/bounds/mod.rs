//! Bounds on the fourth element of a quadruple and the exact inequality
//! chain that caps the size of a D(−1)-tuple.
//!
//! Bounds are pure formulas; the hypotheses under which they apply are
//! evaluated separately, as a [`HypothesisReport`], and callers decide.
//! Magnitudes are handled through exact norms (`‖α‖ = |α|²`), so every
//! bound here is stated in squared form.

mod chain;
mod jz;
pub mod prec;
mod theta;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::ring::QuadInt;

pub use chain::{cascade_exceeds_upper, chain_verify, threshold_a22, ChainStep, ChainTrace, Relation};
pub use jz::{check_jz_hypotheses, gap_constants_check, jz_constants, GapConstantsCheck, JzConstants};
pub use prec::{check_less, Margin, PrecComplex, PrecReal, DEFAULT_PRECISION, MAX_PRECISION};
pub use theta::{theta_defect, theta_defect_for_tuple, ThetaCheck, ThetaMargins};

/// One named hypothesis and whether it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub holds: bool,
}

impl Clause {
    pub fn new(name: &'static str, holds: bool) -> Self {
        Clause { name, holds }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub clauses: Vec<Clause>,
}

impl HypothesisReport {
    pub fn new(clauses: Vec<Clause>) -> Self {
        HypothesisReport { clauses }
    }

    pub fn all_hold(&self) -> bool {
        self.clauses.iter().all(|c| c.holds)
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        self.clauses.iter().find(|c| !c.holds).map(|c| c.name)
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.clauses.iter().find(|c| c.name == name).map(|c| c.holds)
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{:<20} {}", c.name, if c.holds { "holds" } else { "FAILS" })?;
        }
        Ok(())
    }
}

pub(crate) fn norm_max(a: &BigInt, b: &BigInt) -> BigInt {
    a.max(b).clone()
}

/// Hypotheses of the upper bound `|d| < 3956¹⁰|c|²⁴`:
/// `|a| ≥ 2`, `|b| ≥ 22`, `|b| ≥ (3/2)|a|`, `|c| > |b|¹⁶`.
pub fn check_gap_hypotheses(a: &QuadInt, b: &QuadInt, c: &QuadInt) -> HypothesisReport {
    let (na, nb, nc) = (a.norm(), b.norm(), c.norm());
    HypothesisReport::new(vec![
        Clause::new("|a| >= 2", na >= BigInt::from(4)),
        Clause::new("|b| >= 22", nb >= BigInt::from(484)),
        Clause::new("|b| >= (3/2)|a|", BigInt::from(4) * &nb >= BigInt::from(9) * &na),
        Clause::new("|c| > |b|^16", nc > nb.pow(16)),
    ])
}

/// Hypotheses of the θ-approximation bounds. Both `|c| > 4|b|` (as
/// assumed) and `|c| > 4|a|` (as used for the outer bound) are reported.
pub fn check_theta_hypotheses(a: &QuadInt, b: &QuadInt, c: &QuadInt) -> HypothesisReport {
    let (na, nb, nc) = (a.norm(), b.norm(), c.norm());
    HypothesisReport::new(vec![
        Clause::new("|a| >= 2", na >= BigInt::from(4)),
        Clause::new("|c| > 4|b|", nc > BigInt::from(16) * &nb),
        Clause::new("|c| > 4|a|", nc > BigInt::from(16) * &na),
    ])
}

/// `3956²⁰·‖c‖²⁴`, the square of the bound `3956¹⁰|c|²⁴` on `|d|`.
pub fn upper_bound_d(c: &QuadInt) -> BigInt {
    upper_bound_d_norm(&c.norm())
}

pub fn upper_bound_d_norm(norm_c: &BigInt) -> BigInt {
    BigInt::from(3956u32).pow(20) * norm_c.pow(24)
}

/// `‖a‖‖b‖·13²/66²`, the square of the bound `|ab|·13/66` on `|d|`.
pub fn lower_bound_d(a: &QuadInt, b: &QuadInt) -> BigRational {
    let r = |n: BigInt| BigRational::from_integer(n);
    lower_bound_d_norm(&r(a.norm()), &r(b.norm()))
}

pub fn lower_bound_d_norm(norm_a: &BigRational, norm_b: &BigRational) -> BigRational {
    norm_a * norm_b * BigRational::new(BigInt::from(169), BigInt::from(4356))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    #[test]
    fn hypothesis_examples() {
        let r = make_ring(1).unwrap();
        let q = |x: i64, y: i64| QuadInt::new(r, x, y);
        let h = check_gap_hypotheses(&q(2, 0), &q(22, 0), &q(5, 0));
        assert_eq!(h.get("|b| >= 22"), Some(true));
        assert_eq!(h.get("|c| > |b|^16"), Some(false));
        let h = check_gap_hypotheses(&q(1, 0), &q(2, 0), &q(5, 0));
        assert_eq!(h.get("|c| > |b|^16"), Some(false));
        assert_eq!(h.first_failure(), Some("|a| >= 2"));
        // Chain instance |a₄| = 12, |a₇| = 36 > 35.
        let h = check_gap_hypotheses(&q(12, 0), &q(36, 0), &q(1, 0));
        assert_eq!(h.get("|b| >= (3/2)|a|"), Some(true));
        let h = check_theta_hypotheses(&q(2, 0), &q(3, 0), &q(10, 0));
        assert_eq!(h.get("|c| > 4|b|"), Some(false));
        assert_eq!(h.get("|c| > 4|a|"), Some(true));
    }

    #[test]
    fn bound_formulas() {
        let r = make_ring(1).unwrap();
        let one = QuadInt::from_int(r, 1);
        assert_eq!(upper_bound_d(&one), BigInt::from(3956).pow(20));
        assert_eq!(upper_bound_d(&QuadInt::new(r, 0, 2)), BigInt::from(3956).pow(20) * BigInt::from(4).pow(24));
        assert!(upper_bound_d(&QuadInt::new(r, 2, 1)) > upper_bound_d(&QuadInt::new(r, 2, 0)));

        let lb = lower_bound_d(&QuadInt::from_int(r, 12), &QuadInt::from_int(r, 15));
        assert_eq!(lb, BigRational::new(BigInt::from(2340).pow(2), BigInt::from(66).pow(2)));
        assert!(lb > BigRational::from_integer(BigInt::from(35 * 35)));
        let lb = lower_bound_d(&QuadInt::from_int(r, 10), &QuadInt::from_int(r, -10));
        assert_eq!(lb, BigRational::new(BigInt::from(1300).pow(2), BigInt::from(66).pow(2)));
    }

    #[test]
    fn cascade_consistency_at_threshold() {
        let n = threshold_a22();
        assert!(cascade_exceeds_upper(&(&n + 1)));
        assert!(!cascade_exceeds_upper(&(&n - 1)));
    }
}
