//! Binary floating point on big integers with a tracked relative error bound.
//!
//! A [`PrecReal`] is `mant · 2^exp` with `|mant|` normalized to exactly
//! `prec` bits, plus `err`, an upper bound on `|computed − true| / |true|`
//! accumulated through every operation. Rounding is by truncation, so each
//! operation adds at most one ulp (`2^(1−prec)`) of its own error.
//! [`PrecComplex`] is the complex counterpart, used for the θ approximations.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ring::QuadInt;

pub const DEFAULT_PRECISION: u32 = 128;
pub const MAX_PRECISION: u32 = 1024;
pub const MIN_PRECISION: u32 = 64;

/// Relative margin every decided comparison must exceed.
pub const MIN_MARGIN: f64 = 5.421010862427522e-20; // 2^-64

const GUARD: u32 = 32;

fn ulp(prec: u32) -> f64 {
    ldexp(1.0, 1 - prec as i64)
}

fn ldexp(mut f: f64, mut e: i64) -> f64 {
    while e > 1000 {
        f *= 2f64.powi(1000);
        e -= 1000;
        if f.is_infinite() {
            return f;
        }
    }
    while e < -1000 {
        f *= 2f64.powi(-1000);
        e += 1000;
        if f == 0.0 {
            return f;
        }
    }
    f * 2f64.powi(e as i32)
}

/// `|n| >> sh` with the sign of `n` restored (truncation toward zero).
fn shr_trunc(n: &BigInt, sh: u64) -> (BigInt, bool) {
    let mag = n.magnitude();
    let q = mag >> sh;
    let exact = (&q << sh) == *mag;
    (BigInt::from_biguint(n.sign(), q), exact)
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

#[derive(Clone, Debug)]
pub struct PrecReal {
    mant: BigInt,
    exp: i64,
    prec: u32,
    err: f64,
}

impl PrecReal {
    fn build(mant: BigInt, exp: i64, prec: u32, err: f64) -> PrecReal {
        let bits = mant.bits() as i64;
        if bits == 0 {
            return PrecReal { mant, exp: 0, prec, err: 0.0 };
        }
        let p = prec as i64;
        if bits > p {
            let (m, exact) = shr_trunc(&mant, (bits - p) as u64);
            let extra = if exact { 0.0 } else { ulp(prec) };
            PrecReal { mant: m, exp: exp + bits - p, prec, err: err + extra }
        } else {
            PrecReal { mant: mant << (p - bits) as u64, exp: exp - (p - bits), prec, err }
        }
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> PrecReal {
        PrecReal::build(n.clone(), 0, prec.max(MIN_PRECISION), 0.0)
    }

    pub fn from_i64(n: i64, prec: u32) -> PrecReal {
        PrecReal::from_bigint(&BigInt::from(n), prec)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> PrecReal {
        PrecReal::from_bigint(num, prec).div(&PrecReal::from_bigint(den, prec))
    }

    pub fn zero(prec: u32) -> PrecReal {
        PrecReal { mant: BigInt::zero(), exp: 0, prec, err: 0.0 }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Bound on the relative error of this value.
    pub fn max_rel_error(&self) -> f64 {
        self.err
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn neg(&self) -> PrecReal {
        PrecReal { mant: -&self.mant, ..self.clone() }
    }

    pub fn abs(&self) -> PrecReal {
        PrecReal { mant: self.mant.abs(), ..self.clone() }
    }

    fn with_err(mut self, err: f64) -> PrecReal {
        self.err = err;
        self
    }

    /// `log2 |x|`, approximate; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits() as i64;
        let sh = (bits - 60).max(0);
        let (top, _) = shr_trunc(&self.mant.abs(), sh as u64);
        top.to_f64().unwrap().log2() + (sh + self.exp) as f64
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let sh = (bits - 60).max(0);
        let (top, _) = shr_trunc(&self.mant, sh as u64);
        ldexp(top.to_f64().unwrap(), sh + self.exp)
    }

    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    /// Sum; cancellation is reflected in the error bound.
    pub fn add(&self, o: &PrecReal) -> PrecReal {
        let prec = self.prec.max(o.prec);
        if self.is_zero() {
            return PrecReal::build(o.mant.clone(), o.exp, prec, o.err);
        }
        if o.is_zero() {
            return PrecReal::build(self.mant.clone(), self.exp, prec, self.err);
        }
        let target = self.top().max(o.top()) - prec as i64 - GUARD as i64;
        let align = |x: &PrecReal| -> BigInt {
            if x.exp >= target {
                &x.mant << (x.exp - target) as u64
            } else {
                shr_trunc(&x.mant, (target - x.exp) as u64).0
            }
        };
        let sum = align(self) + align(o);
        if sum.is_zero() {
            let err = if self.err == 0.0 && o.err == 0.0 && self.exp >= target && o.exp >= target {
                0.0
            } else {
                f64::INFINITY
            };
            return PrecReal::zero(prec).with_err(err);
        }
        let out = PrecReal::build(sum, target, prec, 0.0);
        let l = out.log2_abs();
        let ra = (self.log2_abs() - l).exp2();
        let rb = (o.log2_abs() - l).exp2();
        let trunc = ldexp(2.0, target) / out.abs().to_f64().max(f64::MIN_POSITIVE);
        let trunc = if trunc.is_finite() { trunc } else { (target as f64 + 1.0 - l).exp2() };
        let err = ra * self.err + rb * o.err + trunc + out.err + ulp(prec);
        out.with_err(err)
    }

    pub fn sub(&self, o: &PrecReal) -> PrecReal {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &PrecReal) -> PrecReal {
        let prec = self.prec.max(o.prec);
        let err = self.err + o.err + self.err * o.err;
        PrecReal::build(&self.mant * &o.mant, self.exp + o.exp, prec, err + ulp(prec))
    }

    /// Quotient. Panics on division by zero.
    pub fn div(&self, o: &PrecReal) -> PrecReal {
        assert!(!o.is_zero(), "PrecReal division by zero");
        let prec = self.prec.max(o.prec);
        let sh = (prec + GUARD) as u64 + o.mant.bits();
        let q = (&self.mant << sh) / &o.mant;
        let err = if o.err >= 1.0 { f64::INFINITY } else { (self.err + o.err) / (1.0 - o.err) };
        PrecReal::build(q, self.exp - o.exp - sh as i64, prec, err + ulp(prec))
    }

    pub fn recip(&self) -> PrecReal {
        PrecReal::from_i64(1, self.prec).div(self)
    }

    /// Square root of a non-negative value. Panics on negative input.
    pub fn sqrt(&self) -> PrecReal {
        assert!(!self.is_negative(), "PrecReal sqrt of a negative value");
        if self.is_zero() {
            return self.clone();
        }
        let want = 2 * (self.prec + GUARD) as i64;
        let mut sh = want - self.mant.bits() as i64;
        if (self.exp - sh).is_odd() {
            sh += 1;
        }
        let m = if sh >= 0 { &self.mant << sh as u64 } else { shr_trunc(&self.mant, (-sh) as u64).0 };
        let r = m.sqrt();
        let err = self.err / 2.0 + self.err * self.err;
        PrecReal::build(r, (self.exp - sh) / 2, self.prec, err + ulp(self.prec))
    }

    /// `x` as a fixed-point integer `round_down(x · 2^w)`.
    fn to_fixed(&self, w: u32) -> BigInt {
        let e = self.exp + w as i64;
        if e >= 0 {
            &self.mant << e as u64
        } else {
            shr_trunc(&self.mant, (-e) as u64).0
        }
    }

    /// Natural logarithm of a positive value. Panics otherwise.
    pub fn ln(&self) -> PrecReal {
        assert!(!self.is_negative() && !self.is_zero(), "PrecReal ln of a non-positive value");
        let prec = self.prec;
        let w = prec + GUARD;
        // x = m · 2^e with m = mant / 2^(prec-1) in [1, 2)
        let half = pow2((prec - 1) as u64);
        let e = self.exp + prec as i64 - 1;
        let y = ((&self.mant - &half) << w as u64) / (&self.mant + &half);
        let (ln_m, terms_m) = atanh_fixed(&y, w);
        let (ln2, terms_2) = ln2_fixed(w);
        let total = (ln_m << 1u32) + BigInt::from(e) * ln2;
        let out = PrecReal::build(total, -(w as i64), prec, 0.0);
        // Truncation in the series and in ln 2, plus the propagated input error.
        let comp = ldexp((terms_m + 2 * terms_2 * (e.unsigned_abs() as usize + 1) + 4) as f64, -(w as i64));
        let input = if self.err >= 1.0 { f64::INFINITY } else { -(1.0 - self.err).ln() };
        let abs_err = input + comp;
        if out.is_zero() {
            return out.with_err(if abs_err == 0.0 { 0.0 } else { f64::INFINITY });
        }
        let rel = abs_err / out.abs().to_f64();
        let carried = out.err;
        out.with_err(rel + carried + ulp(prec))
    }

    /// `e^x`.
    pub fn exp(&self) -> PrecReal {
        let prec = self.prec;
        let int_bits = self.top().max(0) as u32;
        let w = prec + GUARD + int_bits;
        let t = self.to_fixed(w);
        let (ln2, terms_2) = ln2_fixed(w);
        let k = t.div_floor(&ln2);
        let r = &t - &k * &ln2;
        // Taylor series for e^r, 0 ≤ r < ln 2.
        let one = pow2(w as u64);
        let mut sum = one.clone();
        let mut term = one;
        let mut n = 1u64;
        while !term.is_zero() {
            term = ((&term * &r) >> w as u64) / n;
            sum += &term;
            n += 1;
        }
        let k = k.to_i64().expect("exponent out of range");
        let out = PrecReal::build(sum, k - w as i64, prec, 0.0);
        let arg_err = self.abs().to_f64() * self.err;
        let input = if arg_err > 0.5 { f64::INFINITY } else { arg_err.exp_m1() };
        let comp = ldexp((n as usize + terms_2 * (k.unsigned_abs() as usize + 1) + 4) as f64, -(w as i64) + 1);
        let carried = out.err;
        out.with_err(input + comp + carried + ulp(prec))
    }

    /// `self^y` for `self > 0`.
    pub fn powf(&self, y: &PrecReal) -> PrecReal {
        y.mul(&self.ln()).exp()
    }

    pub fn cmp_value(&self, o: &PrecReal) -> Ordering {
        self.sub(o).mant.sign().cmp(&Sign::NoSign)
    }

    pub fn max(&self, o: &PrecReal) -> PrecReal {
        if self.cmp_value(o) == Ordering::Less {
            o.clone()
        } else {
            self.clone()
        }
    }

    pub fn min(&self, o: &PrecReal) -> PrecReal {
        if self.cmp_value(o) == Ordering::Greater {
            o.clone()
        } else {
            self.clone()
        }
    }

    /// Scientific notation with `sig` significant digits.
    pub fn to_sci(&self, sig: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let sig = sig.max(1);
        let mut e10 = (self.log2_abs() * std::f64::consts::LOG10_2).floor() as i64;
        loop {
            let a = sig as i64 - 1 - e10;
            let mut num = BigInt::from_biguint(Sign::Plus, self.mant.magnitude().clone());
            let mut den = BigInt::one();
            if a >= 0 {
                num *= BigInt::from(10).pow(a as u32);
            } else {
                den *= BigInt::from(10).pow((-a) as u32);
            }
            if self.exp >= 0 {
                num <<= self.exp as u64;
            } else {
                den <<= (-self.exp) as u64;
            }
            let rounded = (num * 2u32 + &den) / (den * 2u32);
            let digits = rounded.to_string();
            if digits.len() > sig {
                e10 += 1;
                continue;
            }
            if digits.len() < sig {
                e10 -= 1;
                continue;
            }
            let sign = if self.is_negative() { "-" } else { "" };
            let (head, tail) = digits.split_at(1);
            let tail = tail.trim_end_matches('0');
            let body = if tail.is_empty() { head.to_string() } else { format!("{head}.{tail}") };
            return if e10 == 0 { format!("{sign}{body}") } else { format!("{sign}{body}e{e10}") };
        }
    }
}

impl fmt::Display for PrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci(f.precision().unwrap_or(20)))
    }
}

/// `2·atanh(y/2^w)` in fixed point; returns the value and the term count.
fn atanh_fixed(y: &BigInt, w: u32) -> (BigInt, usize) {
    let y2 = (y * y) >> w as u64;
    let mut power = y.clone();
    let mut sum = y.clone();
    let mut k = 1u64;
    loop {
        power = (&power * &y2) >> w as u64;
        if power.is_zero() {
            break;
        }
        sum += &power / (2 * k + 1);
        k += 1;
    }
    (sum, k as usize + 1)
}

/// `ln 2 = 2·atanh(1/3)` in fixed point.
fn ln2_fixed(w: u32) -> (BigInt, usize) {
    let third = pow2(w as u64) / 3;
    let (s, terms) = atanh_fixed(&third, w);
    (s << 1u32, terms)
}

/// Outcome of comparing two tracked values against each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    /// The computed values satisfy the relation.
    pub holds: bool,
    /// The relative gap exceeds both the error bounds and [`MIN_MARGIN`].
    pub decided: bool,
    /// `(rhs − lhs) / |rhs|` for `lhs < rhs`.
    pub rel_margin: f64,
    /// Combined relative error bound of the two operands.
    pub error_bound: f64,
}

impl Margin {
    pub fn confirmed(&self) -> bool {
        self.holds && self.decided
    }
}

/// Checks `lhs < rhs` (or `lhs ≤ rhs`; the two coincide once decided).
pub fn check_less(lhs: &PrecReal, rhs: &PrecReal) -> Margin {
    let gap = rhs.sub(lhs);
    let scale = rhs.abs().max(&lhs.abs());
    let rel = if scale.is_zero() { 0.0 } else { gap.div(&scale).to_f64() };
    let ratio = if scale.is_zero() { 1.0 } else { (lhs.log2_abs() - scale.log2_abs()).exp2() };
    let error_bound = rhs.err + ratio * lhs.err + 4.0 * ulp(lhs.prec.min(rhs.prec));
    Margin { holds: rel > 0.0, decided: rel.abs() > error_bound.max(MIN_MARGIN), rel_margin: rel, error_bound }
}

/// A complex number as a pair of [`PrecReal`]s with one relative error
/// bound on the modulus of the error.
#[derive(Clone, Debug)]
pub struct PrecComplex {
    pub re: PrecReal,
    pub im: PrecReal,
    err: f64,
}

impl PrecComplex {
    fn raw(re: PrecReal, im: PrecReal, err: f64) -> PrecComplex {
        PrecComplex { re: re.with_err(0.0), im: im.with_err(0.0), err }
    }

    /// `(u + v√−D)/2` as a complex number.
    pub fn from_quad(a: &QuadInt, prec: u32) -> PrecComplex {
        let (u, v) = a.half();
        let sqrt_d = PrecReal::from_i64(a.ring().d() as i64, prec).sqrt();
        let re = PrecReal::from_bigint(&u, prec).div(&PrecReal::from_i64(2, prec));
        let im = PrecReal::from_bigint(&v, prec).mul(&sqrt_d).div(&PrecReal::from_i64(2, prec));
        let err = if v.is_zero() { 0.0 } else { 4.0 * ulp(prec) };
        PrecComplex::raw(re, im, err)
    }

    pub fn max_rel_error(&self) -> f64 {
        self.err
    }

    fn prec(&self) -> u32 {
        self.re.prec.max(self.im.prec)
    }

    pub fn neg(&self) -> PrecComplex {
        PrecComplex::raw(self.re.neg(), self.im.neg(), self.err)
    }

    pub fn abs(&self) -> PrecReal {
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im)).with_err(0.0);
        let e = self.err + 4.0 * ulp(self.prec());
        n.sqrt().with_err(e)
    }

    fn linear(&self, o: &PrecComplex, sign: bool) -> PrecComplex {
        let (re, im) = if sign { (self.re.add(&o.re), self.im.add(&o.im)) } else { (self.re.sub(&o.re), self.im.sub(&o.im)) };
        let out = PrecComplex::raw(re, im, 0.0);
        let u = ulp(self.prec());
        let l = out.abs().log2_abs();
        let ra = (self.abs().log2_abs() - l).exp2();
        let rb = (o.abs().log2_abs() - l).exp2();
        let err = ra * (self.err + u) + rb * (o.err + u) + u;
        PrecComplex { err: if err.is_nan() { f64::INFINITY } else { err }, ..out }
    }

    pub fn add(&self, o: &PrecComplex) -> PrecComplex {
        self.linear(o, true)
    }

    pub fn sub(&self, o: &PrecComplex) -> PrecComplex {
        self.linear(o, false)
    }

    pub fn mul(&self, o: &PrecComplex) -> PrecComplex {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        let err = self.err + o.err + self.err * o.err + 4.0 * ulp(self.prec());
        PrecComplex::raw(re, im, err)
    }

    pub fn div(&self, o: &PrecComplex) -> PrecComplex {
        let den = o.re.mul(&o.re).add(&o.im.mul(&o.im));
        let re = self.re.mul(&o.re).add(&self.im.mul(&o.im)).div(&den);
        let im = self.im.mul(&o.re).sub(&self.re.mul(&o.im)).div(&den);
        let err = if o.err >= 1.0 { f64::INFINITY } else { (self.err + o.err) / (1.0 - o.err) };
        PrecComplex::raw(re, im, err + 8.0 * ulp(self.prec()))
    }

    /// Principal square root.
    pub fn sqrt(&self) -> PrecComplex {
        let prec = self.prec();
        let two = PrecReal::from_i64(2, prec);
        let err = self.err / 2.0 + self.err * self.err + 8.0 * ulp(prec);
        let modulus = self.re.mul(&self.re).add(&self.im.mul(&self.im)).sqrt();
        if modulus.is_zero() {
            return PrecComplex::raw(PrecReal::zero(prec), PrecReal::zero(prec), self.err);
        }
        // Compute the larger component first to avoid cancellation.
        let big = modulus.add(&self.re.abs()).div(&two).sqrt();
        let small = if big.is_zero() { PrecReal::zero(prec) } else { self.im.abs().div(&big.mul(&two)) };
        let (re, im) = if !self.re.is_negative() {
            (big, if self.im.is_negative() { small.neg() } else { small })
        } else {
            (small, if self.im.is_negative() { big.neg() } else { big })
        };
        PrecComplex::raw(re, im, err)
    }
}
