//! Exact arithmetic in the ring of integers `O_K = Z[ω]` of `K = Q(√−D)`.
//!
//! Elements are stored in the basis `{1, ω}` where `ω = √−D` when
//! `D ≡ 1, 2 (mod 4)` and `ω = (1 + √−D)/2` when `D ≡ 3 (mod 4)`. All
//! products, norms and square roots go through the half-coordinate view
//! `α = (u + v√−D)/2`, which gives one multiplication kernel for both
//! presentations. Magnitudes are only ever compared through exact norms.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How `ω` relates to `√−D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum OmegaMode {
    /// `ω = √−D` (`−D ≡ 2, 3 mod 4`).
    Sqrt,
    /// `ω = (1 + √−D)/2` (`−D ≡ 1 mod 4`).
    Half,
}

/// Descriptor of the imaginary quadratic field `Q(√−D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingParams {
    d: u64,
    mode: OmegaMode,
}

impl RingParams {
    /// Validates `d` and picks the matching `ω`.
    pub fn new(d: i64) -> Result<Self> {
        if d <= 0 {
            return Err(Error::NonPositiveD(d));
        }
        let d = d as u64;
        if !is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        let mode = if d % 4 == 3 { OmegaMode::Half } else { OmegaMode::Sqrt };
        Ok(RingParams { d, mode })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn omega_mode(&self) -> OmegaMode {
        self.mode
    }

    fn d_big(&self) -> BigInt {
        BigInt::from(self.d)
    }

    /// The units of `O_K`, in canonical order.
    pub fn units(&self) -> Vec<QuadInt> {
        let mut out = match self.d {
            1 => vec![
                QuadInt::from_int(*self, 1),
                QuadInt::from_int(*self, -1),
                QuadInt::new(*self, 0, 1),
                QuadInt::new(*self, 0, -1),
            ],
            3 => [(2, 0), (-2, 0), (1, 1), (1, -1), (-1, 1), (-1, -1)]
                .iter()
                .map(|&(u, v)| QuadInt::from_half(*self, u.into(), v.into()).expect("unit of Z[ω]"))
                .collect(),
            _ => vec![QuadInt::from_int(*self, 1), QuadInt::from_int(*self, -1)],
        };
        out.sort();
        out
    }
}

impl fmt::Display for RingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt(-{}))", self.d)
    }
}

/// Convenience alias for [`RingParams::new`].
pub fn make_ring(d: i64) -> Result<RingParams> {
    RingParams::new(d)
}

/// Trial division up to `√d`.
pub fn is_squarefree(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// An element `x + y·ω` of `O_K`.
#[derive(Clone, Debug)]
pub struct QuadInt {
    ring: RingParams,
    x: BigInt,
    y: BigInt,
}

impl QuadInt {
    pub fn new(ring: RingParams, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        QuadInt { ring, x: x.into(), y: y.into() }
    }

    pub fn from_int(ring: RingParams, n: impl Into<BigInt>) -> Self {
        QuadInt::new(ring, n, 0)
    }

    pub fn zero(ring: RingParams) -> Self {
        QuadInt::new(ring, 0, 0)
    }

    pub fn one(ring: RingParams) -> Self {
        QuadInt::new(ring, 1, 0)
    }

    pub fn omega(ring: RingParams) -> Self {
        QuadInt::new(ring, 0, 1)
    }

    /// Builds `(u + v√−D)/2`, rejecting pairs that are not algebraic integers.
    pub fn from_half(ring: RingParams, u: BigInt, v: BigInt) -> Result<Self> {
        let parity_err = || Error::Parity { u: u.to_string(), v: v.to_string(), d: ring.d };
        match ring.mode {
            OmegaMode::Half => {
                if u.is_odd() != v.is_odd() {
                    return Err(parity_err());
                }
                let x = (&u - &v) / 2;
                Ok(QuadInt { ring, x, y: v })
            }
            OmegaMode::Sqrt => {
                if u.is_odd() || v.is_odd() {
                    return Err(parity_err());
                }
                Ok(QuadInt { ring, x: u / 2, y: v / 2 })
            }
        }
    }

    /// Half-coordinates `(u, v)` with `α = (u + v√−D)/2`.
    pub fn half(&self) -> (BigInt, BigInt) {
        match self.ring.mode {
            OmegaMode::Half => (BigInt::from(2) * &self.x + &self.y, self.y.clone()),
            OmegaMode::Sqrt => (BigInt::from(2) * &self.x, BigInt::from(2) * &self.y),
        }
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// True when the element lies in `Z`.
    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn same_ring(&self, other: &QuadInt) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring.d, right: other.ring.d });
        }
        Ok(())
    }

    /// `‖α‖ = (u² + D v²)/4`.
    pub fn norm(&self) -> BigInt {
        match self.ring.mode {
            OmegaMode::Sqrt => &self.x * &self.x + self.ring.d_big() * &self.y * &self.y,
            OmegaMode::Half => {
                // x² + xy + (1+D)/4 · y²
                let q = BigInt::from((1 + self.ring.d) / 4);
                &self.x * &self.x + &self.x * &self.y + q * &self.y * &self.y
            }
        }
    }

    /// Complex conjugation `√−D ↦ −√−D`.
    pub fn conj(&self) -> QuadInt {
        match self.ring.mode {
            OmegaMode::Sqrt => QuadInt { ring: self.ring, x: self.x.clone(), y: -&self.y },
            // conj(ω) = 1 − ω
            OmegaMode::Half => QuadInt { ring: self.ring, x: &self.x + &self.y, y: -&self.y },
        }
    }

    /// Compares `|self|` with `|other|` through their norms.
    pub fn cmp_abs(&self, other: &QuadInt) -> Ordering {
        self.norm().cmp(&other.norm())
    }

    pub fn checked_add(&self, other: &QuadInt) -> Result<QuadInt> {
        self.same_ring(other)?;
        Ok(QuadInt { ring: self.ring, x: &self.x + &other.x, y: &self.y + &other.y })
    }

    pub fn checked_sub(&self, other: &QuadInt) -> Result<QuadInt> {
        self.same_ring(other)?;
        Ok(QuadInt { ring: self.ring, x: &self.x - &other.x, y: &self.y - &other.y })
    }

    pub fn checked_mul(&self, other: &QuadInt) -> Result<QuadInt> {
        self.same_ring(other)?;
        let (u1, v1) = self.half();
        let (u2, v2) = other.half();
        let u = (&u1 * &u2 - self.ring.d_big() * &v1 * &v2) / 2;
        let v = (&u1 * &v2 + &u2 * &v1) / 2;
        Ok(QuadInt::from_half(self.ring, u, v).expect("O_K is closed under multiplication"))
    }

    pub fn square(&self) -> QuadInt {
        self * self
    }

    pub fn scale(&self, k: &BigInt) -> QuadInt {
        QuadInt { ring: self.ring, x: &self.x * k, y: &self.y * k }
    }

    /// Exact quotient `self / other` if it lies in `O_K`.
    pub fn div_exact(&self, other: &QuadInt) -> Result<Option<QuadInt>> {
        self.same_ring(other)?;
        if other.is_zero() {
            return Err(Error::ZeroDivisor(format!("{self} / 0")));
        }
        let n = other.norm();
        let (u, v) = (self * &other.conj()).half();
        if !u.is_multiple_of(&n) || !v.is_multiple_of(&n) {
            return Ok(None);
        }
        Ok(QuadInt::from_half(self.ring, u / &n, v / &n).ok())
    }

    /// The canonical square root of `self` in `O_K`, if one exists.
    ///
    /// Writing `α = (U + V√−D)/2` and a root `β = (u + v√−D)/2` with
    /// `‖β‖ = n = √‖α‖`, the root's coordinates are forced:
    /// `u² = 2n + U`, `D v² = 2n − U` and `uv = V`. The returned root has
    /// `u > 0`, or `u = 0` and `v ≥ 0`.
    pub fn sqrt_exact(&self) -> Option<QuadInt> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let n = exact_sqrt(&self.norm())?;
        let (big_u, big_v) = self.half();
        let two_n = BigInt::from(2) * n;
        let u = exact_sqrt(&(&two_n + &big_u))?;
        let rest = &two_n - &big_u;
        let d = self.ring.d_big();
        if !rest.is_multiple_of(&d) {
            return None;
        }
        let mut v = exact_sqrt(&(rest / d))?;
        if big_v.is_negative() {
            v = -v;
        }
        if &u * &v != big_v {
            return None;
        }
        let root = QuadInt::from_half(self.ring, u, v).ok()?;
        debug_assert_eq!(&root.square(), self);
        Some(root)
    }

    /// The canonical representative of `{β, −β}`: `u > 0`, or `u = 0, v ≥ 0`.
    pub fn canonical_sign(&self) -> QuadInt {
        let (u, v) = self.half();
        if u.is_negative() || (u.is_zero() && v.is_negative()) {
            -self
        } else {
            self.clone()
        }
    }

    /// Parses `INT`, `INT±INT*w`, `INT*w` or `(INT±INT*s)/2`.
    pub fn parse(text: &str, ring: RingParams) -> Result<QuadInt> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |reason: &str| Error::Parse { text: text.to_string(), reason: reason.to_string() };
        if s.is_empty() {
            return Err(bad("empty"));
        }
        if let Some(rest) = s.strip_prefix('(') {
            let inner = rest.strip_suffix(")/2").ok_or_else(|| bad("expected `(u±v*s)/2`"))?;
            let inner = inner.strip_suffix("*s").ok_or_else(|| bad("expected `*s` term"))?;
            let (u, v) = split_signed_pair(inner).ok_or_else(|| bad("expected `u±v*s`"))?;
            return QuadInt::from_half(ring, u, v);
        }
        if let Some(body) = s.strip_suffix("*w") {
            return match split_signed_pair(body) {
                Some((x, y)) => Ok(QuadInt::new(ring, x, y)),
                None => {
                    let y = parse_int(body).ok_or_else(|| bad("bad ω coefficient"))?;
                    Ok(QuadInt::new(ring, 0, y))
                }
            };
        }
        let x = parse_int(&s).ok_or_else(|| bad("expected an integer"))?;
        Ok(QuadInt::from_int(ring, x))
    }

    /// Canonical text: `x` when `y = 0`, else `x+y*w` / `x-|y|*w`.
    pub fn format(&self) -> String {
        if self.y.is_zero() {
            return self.x.to_string();
        }
        let sign = if self.y.is_negative() { '-' } else { '+' };
        format!("{}{}{}*w", self.x, sign, self.y.abs())
    }

    /// Human-oriented text in terms of `√−D` (`i` when `D = 1`).
    pub fn pretty(&self) -> String {
        let (u, v) = self.half();
        let unit = if self.ring.d == 1 { "i".to_string() } else { format!("√-{}", self.ring.d) };
        let halved = u.is_odd() || v.is_odd();
        let (num, den) = if halved { (u, v) } else { (u / 2, v / 2) };
        let body = match (num.is_zero(), den.is_zero()) {
            (_, true) => num.to_string(),
            (true, false) => format!("{}{unit}", coeff(&den)),
            (false, false) => {
                let sign = if den.is_negative() { '-' } else { '+' };
                format!("{num}{sign}{}{unit}", coeff(&den.abs()))
            }
        };
        if halved {
            format!("({body})/2")
        } else {
            body
        }
    }

    /// Key used to order elements canonically: `(norm, x, y)`.
    pub fn sort_key(&self) -> (BigInt, BigInt, BigInt) {
        (self.norm(), self.x.clone(), self.y.clone())
    }
}

fn coeff(v: &BigInt) -> String {
    if v.is_one() {
        String::new()
    } else if *v == BigInt::from(-1) {
        "-".to_string()
    } else {
        v.to_string()
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Splits `A±B` at the last sign that is not the leading one.
fn split_signed_pair(s: &str) -> Option<(BigInt, BigInt)> {
    let pos = s.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last()?;
    let a = parse_int(&s[..pos])?;
    let b = parse_int(&s[pos..])?;
    Some((a, b))
}

/// Every element with `‖α‖ ≤ max_norm`, sorted by `(norm, x, y)`.
pub fn elements_up_to_norm(ring: RingParams, max_norm: u64, include_zero: bool) -> Vec<QuadInt> {
    let d = ring.d as u128;
    let four_n = 4 * max_norm as u128;
    let mut out = Vec::new();
    // (u² + D v²)/4 ≤ N with the parity rule of the ring
    let v_max = (four_n / d).sqrt() as i128;
    for v in -v_max..=v_max {
        let rem = four_n - d * (v * v) as u128;
        let u_max = rem.sqrt() as i128;
        for u in -u_max..=u_max {
            let ok = match ring.mode {
                OmegaMode::Half => (u - v) % 2 == 0,
                OmegaMode::Sqrt => u % 2 == 0 && v % 2 == 0,
            };
            if !ok || (!include_zero && u == 0 && v == 0) {
                continue;
            }
            out.push(QuadInt::from_half(ring, u.into(), v.into()).expect("parity checked"));
        }
    }
    let mut keyed: Vec<_> = out.into_iter().map(|a| (a.sort_key(), a)).collect();
    keyed.sort_by(|l, r| l.0.cmp(&r.0));
    keyed.into_iter().map(|(_, a)| a).collect()
}

/// `√n` if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl PartialEq for QuadInt {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.x == other.x && self.y == other.y
    }
}

impl Eq for QuadInt {}

impl Hash for QuadInt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ring.hash(state);
        self.x.hash(state);
        self.y.hash(state);
    }
}

/// Canonical order: ring, then `(norm, x, y)`. This is not `cmp_abs`.
impl Ord for QuadInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ring
            .d
            .cmp(&other.ring.d)
            .then_with(|| self.norm().cmp(&other.norm()))
            .then_with(|| self.x.cmp(&other.x))
            .then_with(|| self.y.cmp(&other.y))
    }
}

impl PartialOrd for QuadInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

// Operator impls panic on mixed rings; use the `checked_*` methods when the
// operands are not known to share a ring.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&QuadInt> for &QuadInt {
            type Output = QuadInt;
            fn $method(self, rhs: &QuadInt) -> QuadInt {
                self.$checked(rhs).expect("ring mismatch")
            }
        }
        impl $tr<QuadInt> for QuadInt {
            type Output = QuadInt;
            fn $method(self, rhs: QuadInt) -> QuadInt {
                self.$checked(&rhs).expect("ring mismatch")
            }
        }
        impl $tr<&QuadInt> for QuadInt {
            type Output = QuadInt;
            fn $method(self, rhs: &QuadInt) -> QuadInt {
                self.$checked(rhs).expect("ring mismatch")
            }
        }
        impl $tr<QuadInt> for &QuadInt {
            type Output = QuadInt;
            fn $method(self, rhs: QuadInt) -> QuadInt {
                self.$checked(&rhs).expect("ring mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt { ring: self.ring, x: -&self.x, y: -&self.y }
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt { ring: self.ring, x: -self.x, y: -self.y }
    }
}

/// JSON form of an element: decimal strings, so any size survives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemJson {
    pub x: String,
    pub y: String,
}

impl From<&QuadInt> for ElemJson {
    fn from(a: &QuadInt) -> Self {
        ElemJson { x: a.x.to_string(), y: a.y.to_string() }
    }
}

impl ElemJson {
    pub fn into_elem(self, ring: RingParams) -> Result<QuadInt> {
        let x = parse_int(&self.x).ok_or_else(|| Error::Parse { text: self.x.clone(), reason: "x".into() })?;
        let y = parse_int(&self.y).ok_or_else(|| Error::Parse { text: self.y.clone(), reason: "y".into() })?;
        Ok(QuadInt::new(ring, x, y))
    }
}
