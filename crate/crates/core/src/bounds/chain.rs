//! Exact verification of the magnitude chain behind `m ≤ 36`.
//!
//! Every step is an inequality between two big integers obtained by
//! clearing the denominators of the ratio `66/13`; no floating point is
//! involved in deciding any step.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// The ratio `330/65` in lowest terms.
pub const RATIO_NUM: u32 = 66;
pub const RATIO_DEN: u32 = 13;
pub const UPPER_CONSTANT: u32 = 3956;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = ">=")]
    GreaterEq,
}

impl Relation {
    fn holds(self, lhs: &BigInt, rhs: &BigInt) -> bool {
        match self {
            Relation::Greater => lhs > rhs,
            Relation::GreaterEq => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainStep {
    pub id: &'static str,
    pub description: String,
    /// The inequality in symbolic form, e.g. `35^16 * 13^31 > 66^31`.
    pub inequality: String,
    #[serde(serialize_with = "as_decimal")]
    pub lhs: BigInt,
    pub relation: Relation,
    #[serde(serialize_with = "as_decimal")]
    pub rhs: BigInt,
    pub holds: bool,
    /// `log10(lhs / rhs)`; display only.
    pub margin_log10: f64,
}

fn as_decimal<S: serde::Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainTrace {
    pub steps: Vec<ChainStep>,
    pub notes: Vec<String>,
}

impl ChainTrace {
    pub fn confirmed(&self) -> bool {
        !self.steps.is_empty() && self.steps.iter().all(|s| s.holds)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("trace serializes");
        v["confirmed"] = self.confirmed().into();
        v
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{:<5} {:<6} {:>12}  {}\n", "step", "holds", "log10 margin", "inequality"));
        for s in &self.steps {
            out.push_str(&format!(
                "{:<5} {:<6} {:>12.4}  {}\n      {}\n",
                s.id,
                if s.holds { "yes" } else { "NO" },
                s.margin_log10,
                s.inequality,
                s.description
            ));
        }
        out.push_str(&format!("confirmed: {}\n", self.confirmed()));
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

impl fmt::Display for ChainTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table())
    }
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn pow(base: u64, e: u32) -> BigInt {
    big(base).pow(e)
}

/// `log2 n` for positive `n`, accurate to f64 precision.
fn log2_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    let sh = bits.saturating_sub(60);
    (n >> sh).to_f64().unwrap_or(f64::NAN).log2() + sh as f64
}

fn step(id: &'static str, description: &str, inequality: &str, lhs: BigInt, relation: Relation, rhs: BigInt) -> ChainStep {
    let margin_log10 = if lhs.is_zero() || rhs.is_zero() {
        f64::NAN
    } else {
        (log2_big(&lhs) - log2_big(&rhs)) * std::f64::consts::LOG10_2
    };
    ChainStep { id, description: description.into(), inequality: inequality.into(), holds: relation.holds(&lhs, &rhs), lhs, relation, rhs, margin_log10 }
}

/// One application of the lower bound `|d| ≥ |ab|·13/66` with `|a| = |b| = x`.
fn cascade_once(x: &BigRational) -> BigRational {
    x * x * BigRational::new(big(RATIO_DEN as u64), big(RATIO_NUM as u64))
}

/// Smallest positive `N` with `N⁸·13³¹ ≥ 66³¹·3956¹⁰`.
pub fn threshold_a22() -> BigInt {
    let rhs = pow(RATIO_NUM as u64, 31) * pow(UPPER_CONSTANT as u64, 10);
    let scale = pow(RATIO_DEN as u64, 31);
    let ok = |n: &BigInt| n.pow(8) * &scale >= rhs;
    let mut n = (&rhs / &scale).nth_root(8);
    while !ok(&n) {
        n += 1;
    }
    while n > BigInt::one() && ok(&(&n - 1)) {
        n -= 1;
    }
    n
}

/// Runs the six checks in order.
pub fn chain_verify() -> ChainTrace {
    let (p, q, k) = (RATIO_NUM as u64, RATIO_DEN as u64, UPPER_CONSTANT as u64);
    let mut steps = Vec::with_capacity(6);

    steps.push(step(
        "i",
        "|a7| >= |a4||a5|*13/66 with |a4| >= 12, |a5| >= 15 gives |a7| > 35",
        "12 * 15 * 13 > 35 * 66",
        big(12 * 15 * q),
        Relation::Greater,
        big(35 * p),
    ));

    // Five squaring applications a7 → a10 → a13 → a16 → a19 → a22 starting
    // from the bound 35; each intermediate must stay ≥ 10 for the lower
    // bound to apply. The closed form is 35^32 · 13^31 / 66^31.
    let mut x = BigRational::from_integer(big(35));
    let ten = BigRational::from_integer(big(10));
    let mut above_ten = true;
    for _ in 0..5 {
        above_ten &= x >= ten;
        x = cascade_once(&x);
    }
    let closed = BigRational::new(pow(35, 32) * pow(q, 31), pow(p, 31));
    let mut cascade = step(
        "ii",
        "five applications x -> x^2*13/66 from |a7| = 35 reach 35^32*13^31/66^31 (all intermediates >= 10)",
        "iterate(35) * 66^31 >= 35^32 * 13^31",
        x.numer() * closed.denom(),
        Relation::GreaterEq,
        closed.numer() * x.denom(),
    );
    cascade.holds &= above_ten;
    steps.push(cascade);

    steps.push(step(
        "iii",
        "|a7|^32/(66/13)^31 > |a7|^16 at |a7| = 35, hence |a22| > |a7|^16",
        "35^16 * 13^31 > 66^31",
        pow(35, 16) * pow(q, 31),
        Relation::Greater,
        pow(p, 31),
    ));

    steps.push(step(
        "iv",
        "|a22| >= 35^32/(66/13)^31 > 10^27",
        "35^32 * 13^31 > 10^27 * 66^31",
        pow(35, 32) * pow(q, 31),
        Relation::Greater,
        pow(10, 27) * pow(p, 31),
    ));

    steps.push(step(
        "v",
        "|a22|^8 >= (66/13)^31 * 3956^10 holds at |a22| = 1.8e7",
        "(18*10^6)^8 * 13^31 >= 66^31 * 3956^10",
        big(18_000_000).pow(8) * pow(q, 31),
        Relation::GreaterEq,
        pow(p, 31) * pow(k, 10),
    ));

    let x = pow(10, 27);
    steps.push(step(
        "vi",
        "|a37| >= |a22|^32/(66/13)^31 exceeds the upper bound 3956^10 |a22|^24 at |a22| = 10^27",
        "X^32 * 13^31 > 3956^10 * X^24 * 66^31, X = 10^27",
        x.pow(32) * pow(q, 31),
        Relation::Greater,
        pow(k, 10) * x.pow(24) * pow(p, 31),
    ));

    let notes = vec![
        "330/65 is used in lowest terms as 66/13 throughout.".to_string(),
        "The upper bound |d| < 3956^10 |c|^24 is applied with |c| > |b|^16; its derivation uses |b| < |c|^(1/16), \
         which is the reading taken here of the bound on |b| in terms of |c|."
            .to_string(),
        format!("Minimal integer threshold for |a22|: {}.", threshold_a22()),
    ];
    ChainTrace { steps, notes }
}

/// Squared (norm) form of the cascade check: starting from `‖a₂₂‖ = x²`,
/// five applications of the lower bound exceed the upper bound on
/// `‖a₃₇‖`. Strict.
pub fn cascade_exceeds_upper(x: &BigInt) -> bool {
    let mut n = BigRational::from_integer(x * x);
    for _ in 0..5 {
        n = super::lower_bound_d_norm(&n, &n);
    }
    n > BigRational::from_integer(super::upper_bound_d_norm(&(x * x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_is_confirmed() {
        let t = chain_verify();
        assert_eq!(t.steps.len(), 6);
        assert!(t.confirmed(), "{}", t.to_table());
        assert_eq!(t.steps[0].lhs, big(2340));
        assert_eq!(t.steps[0].rhs, big(2310));
        assert_eq!(t.steps[1].lhs, t.steps[1].rhs);
    }

    #[test]
    fn threshold_is_minimal() {
        let n = threshold_a22();
        let rhs = pow(66, 31) * pow(3956, 10);
        let scale = pow(13, 31);
        assert!(n.pow(8) * &scale >= rhs);
        assert!((&n - 1u32).pow(8) * &scale < rhs);
        assert!(n <= big(18_000_000));
    }

    #[test]
    fn json_has_decimal_operands() {
        let v = chain_verify().to_json();
        assert_eq!(v["steps"][0]["lhs"], "2340");
        assert_eq!(v["steps"][0]["relation"], ">");
        assert_eq!(v["confirmed"], true);
    }
}
