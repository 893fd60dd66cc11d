//! Constants of the simultaneous-approximation lemma for
//! `θᵢ = √(1 + aᵢ/T)`: `L, l, p, P, λ, c₁`.

use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::json;

use super::prec::{check_less, Margin, PrecReal, MAX_PRECISION};
use super::{norm_max, Clause, HypothesisReport};
use crate::error::{Error, Result};
use crate::ring::QuadInt;

/// `|x|` for an element of exact norm `n`.
fn abs_of(norm: &BigInt, prec: u32) -> PrecReal {
    PrecReal::from_bigint(norm, prec).sqrt()
}

#[derive(Debug, Clone)]
pub struct JzConstants {
    pub a1: QuadInt,
    pub a2: QuadInt,
    pub t: QuadInt,
    /// `M² = max(‖a₁‖, ‖a₂‖)`, kept exact.
    pub m_norm: BigInt,
    pub big_l: PrecReal,
    pub l: PrecReal,
    pub p: PrecReal,
    pub big_p: PrecReal,
    pub lambda: PrecReal,
    pub c1: PrecReal,
    pub precision: u32,
}

/// The exact conditions under which the constants are defined.
pub fn check_jz_hypotheses(a1: &QuadInt, a2: &QuadInt, t: &QuadInt) -> HypothesisReport {
    let distinct = a1 != a2;
    let nonzero = !a1.is_zero() && !a2.is_zero();
    let (n1, n2) = (a1.norm(), a2.norm());
    let nt = t.norm();
    let nm = norm_max(&n1, &n2);
    let t_large = nt > nm;
    // L > 1  ⇔  27(√A − √B)² > K  with A = ‖T‖, B = M², K = 16‖a₁‖‖a₂‖‖a₁−a₂‖²,
    // squared once more to stay in integers.
    let l_gt_one = t_large && {
        let k = BigInt::from(16) * &n1 * &n2 * (a1 - a2).norm();
        let lhs = BigInt::from(27) * (&nt + &nm) - k;
        lhs.is_positive() && &lhs * &lhs > BigInt::from(2916) * &nt * &nm
    };
    HypothesisReport::new(vec![
        Clause::new("a1 != a2", distinct),
        Clause::new("a1, a2 nonzero", nonzero),
        Clause::new("|T| > M", t_large),
        Clause::new("L > 1", l_gt_one),
    ])
}

/// Evaluates the constants at `precision_bits`. Fails with
/// [`Error::Hypothesis`] naming the first violated condition.
pub fn jz_constants(a1: &QuadInt, a2: &QuadInt, t: &QuadInt, precision_bits: u32) -> Result<JzConstants> {
    a1.same_ring(a2)?;
    a1.same_ring(t)?;
    if let Some(clause) = check_jz_hypotheses(a1, a2, t).first_failure() {
        return Err(Error::Hypothesis(clause.to_string()));
    }
    let prec = precision_bits.clamp(64, MAX_PRECISION);
    let n1 = a1.norm();
    let n2 = a2.norm();
    let n12 = (a1 - a2).norm();
    let m_norm = norm_max(&n1, &n2);
    let num = |k: i64| PrecReal::from_i64(k, prec);

    let abs_t = abs_of(&t.norm(), prec);
    let m = abs_of(&m_norm, prec);
    let gap = abs_t.sub(&m);
    let prod = PrecReal::from_bigint(&(&n1 * &n2 * &n12), prec);

    let big_l = num(27).mul(&gap).mul(&gap).div(&num(16).mul(&prod));
    let l = num(27).mul(&abs_t).div(&num(64).mul(&gap));
    let two_t_3m = num(2).mul(&abs_t).add(&num(3).mul(&m));
    let p = two_t_3m.div(&num(2).mul(&abs_t).sub(&num(2).mul(&m))).sqrt();
    let min_norm = [&n1, &n2, &n12].into_iter().min().expect("three norms").clone();
    let min_cubed = abs_of(&min_norm, prec).mul(&PrecReal::from_bigint(&min_norm, prec));
    let big_p = num(16).mul(&prod).div(&min_cubed).mul(&two_t_3m);
    let lambda = num(1).add(&big_p.ln().div(&big_l.ln()));
    let two_l = num(2).mul(&l);
    let base = if check_less(&two_l, &num(1)).holds { num(1) } else { two_l };
    let factor = if base.sub(&num(1)).is_zero() { num(1) } else { base.powf(&lambda.sub(&num(1))) };
    let c1 = num(4).mul(&p).mul(&big_p).mul(&factor).recip();

    Ok(JzConstants { a1: a1.clone(), a2: a2.clone(), t: t.clone(), m_norm, big_l, l, p, big_p, lambda, c1, precision: prec })
}

impl JzConstants {
    /// Margins of the lemma's own invariants: `L > 1`, `λ > 1`, `c₁ > 0`.
    pub fn invariant_margins(&self) -> Vec<(&'static str, Margin)> {
        let prec = self.precision;
        let one = PrecReal::from_i64(1, prec);
        vec![
            ("L > 1", check_less(&one, &self.big_l)),
            ("lambda > 1", check_less(&one, &self.lambda)),
            ("c1 > 0", check_less(&PrecReal::zero(prec), &self.c1)),
        ]
    }

    pub fn to_json(&self, digits: usize) -> serde_json::Value {
        let v = |x: &PrecReal| json!({"value": x.to_sci(digits), "max_rel_error": x.max_rel_error()});
        json!({
            "a1": self.a1.format(),
            "a2": self.a2.format(),
            "T": self.t.format(),
            "M_squared": self.m_norm.to_string(),
            "precision_bits": self.precision,
            "L": v(&self.big_l),
            "l": v(&self.l),
            "p": v(&self.p),
            "P": v(&self.big_p),
            "lambda": v(&self.lambda),
            "c1": v(&self.c1),
            "invariants": self.invariant_margins().iter().map(|(name, m)| json!({
                "check": name, "holds": m.holds, "decided": m.decided,
                "rel_margin": m.rel_margin, "error_bound": m.error_bound,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Outcome of the four estimates the gap lemma needs from the constants
/// at `(a₁, a₂, T) = (−b, −a, abc)`.
#[derive(Debug, Clone)]
pub struct GapConstantsCheck {
    pub constants: JzConstants,
    /// `l < 1/2`, `p ≤ √(47/42)`, `L > 1`, `λ < 1.8`, in that order.
    pub checks: Vec<(&'static str, Margin)>,
}

impl GapConstantsCheck {
    pub fn all_confirmed(&self) -> bool {
        self.checks.iter().all(|(_, m)| m.confirmed())
    }
}

/// Evaluates the constants for `(−b, −a, abc)` and checks the estimates,
/// doubling the precision (up to the maximum) until every comparison is
/// decided.
pub fn gap_constants_check(a: &QuadInt, b: &QuadInt, c: &QuadInt, start_precision: u32) -> Result<GapConstantsCheck> {
    let t = &(a * b) * c;
    let mut prec = start_precision.clamp(64, MAX_PRECISION);
    loop {
        let k = jz_constants(&-b, &-a, &t, prec)?;
        let num = |n: i64| PrecReal::from_i64(n, prec);
        let half = num(1).div(&num(2));
        let p_cap = num(47).div(&num(42)).sqrt();
        let lambda_cap = num(9).div(&num(5));
        let checks = vec![
            ("l < 1/2", check_less(&k.l, &half)),
            ("p <= sqrt(47/42)", check_less(&k.p, &p_cap)),
            ("L > 1", check_less(&num(1), &k.big_l)),
            ("lambda < 1.8", check_less(&k.lambda, &lambda_cap)),
        ];
        let decided = checks.iter().all(|(_, m)| m.decided);
        if decided || prec >= MAX_PRECISION {
            return Ok(GapConstantsCheck { constants: k, checks });
        }
        prec = (prec * 2).min(MAX_PRECISION);
    }
}
