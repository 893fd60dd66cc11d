//! D(n)-tuples: verification, regularity, the Pellian system attached to a
//! quadruple, extension of triples and the `c±` construction.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{elements_up_to_norm, make_ring, ElemJson, QuadInt, RingParams};

/// A candidate D(n)-tuple. Elements are nonzero, distinct and kept sorted
/// canonically by `(norm, x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DioTuple {
    ring: RingParams,
    n: QuadInt,
    elems: Vec<QuadInt>,
}

impl DioTuple {
    pub fn new(ring: RingParams, n: QuadInt, mut elems: Vec<QuadInt>) -> Result<Self> {
        if n.ring() != ring {
            return Err(Error::RingMismatch { left: ring.d(), right: n.ring().d() });
        }
        for e in &elems {
            if e.ring() != ring {
                return Err(Error::RingMismatch { left: ring.d(), right: e.ring().d() });
            }
            if e.is_zero() {
                return Err(Error::Structural("zero element".into()));
            }
        }
        elems.sort();
        if let Some(w) = elems.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Structural(format!("duplicate element {}", w[0])));
        }
        Ok(DioTuple { ring, n, elems })
    }

    /// Shorthand for a D(n) tuple with a rational shift.
    pub fn with_int_shift(ring: RingParams, n: i64, elems: Vec<QuadInt>) -> Result<Self> {
        DioTuple::new(ring, QuadInt::from_int(ring, n), elems)
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    pub fn shift(&self) -> &QuadInt {
        &self.n
    }

    pub fn elems(&self) -> &[QuadInt] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    fn mapped(&self, f: impl Fn(&QuadInt) -> QuadInt, n: QuadInt) -> DioTuple {
        let mut elems: Vec<_> = self.elems.iter().map(f).collect();
        elems.sort();
        DioTuple { ring: self.ring, n, elems }
    }

    pub fn negated(&self) -> DioTuple {
        self.mapped(|a| -a, self.n.clone())
    }

    /// Elementwise conjugate; the shift is conjugated too.
    pub fn conjugated(&self) -> DioTuple {
        self.mapped(QuadInt::conj, self.n.conj())
    }

    pub fn to_json(&self) -> TupleJson {
        TupleJson {
            d: self.ring.d(),
            n: ElemJson::from(&self.n),
            elems: self.elems.iter().map(ElemJson::from).collect(),
        }
    }

    pub fn from_json(j: TupleJson) -> Result<Self> {
        let ring = make_ring(j.d as i64)?;
        let n = j.n.into_elem(ring)?;
        let elems = j.elems.into_iter().map(|e| e.into_elem(ring)).collect::<Result<Vec<_>>>()?;
        DioTuple::new(ring, n, elems)
    }
}

/// `{"D": int, "n": elem, "elems": [elem...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleJson {
    #[serde(rename = "D")]
    pub d: u64,
    pub n: ElemJson,
    pub elems: Vec<ElemJson>,
}

/// The canonical `x` with `ab + n = x²`, if any.
pub fn pair_witness(a: &QuadInt, b: &QuadInt, n: &QuadInt) -> Result<Option<QuadInt>> {
    let prod = a.checked_mul(b)?.checked_add(n)?;
    Ok(prod.sqrt_exact())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCheck {
    pub a: QuadInt,
    pub b: QuadInt,
    pub witness: Option<QuadInt>,
}

/// Outcome of [`verify_tuple`]. Pairs are checked in order and the scan
/// stops at the first pair without a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleReport {
    pub tuple: DioTuple,
    pub pairs: Vec<PairCheck>,
    pub pass: bool,
}

impl TupleReport {
    pub fn first_failure(&self) -> Option<(&QuadInt, &QuadInt)> {
        self.pairs.iter().find(|p| p.witness.is_none()).map(|p| (&p.a, &p.b))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pairs: Vec<_> = self
            .pairs
            .iter()
            .map(|p| {
                serde_json::json!({
                    "a": ElemJson::from(&p.a),
                    "b": ElemJson::from(&p.b),
                    "witness": p.witness.as_ref().map(ElemJson::from),
                })
            })
            .collect();
        serde_json::json!({
            "tuple": self.tuple.to_json(),
            "pass": self.pass,
            "pairs": pairs,
            "first_failure": self.first_failure().map(|(a, b)| [ElemJson::from(a), ElemJson::from(b)]),
        })
    }
}

pub fn verify_tuple(t: &DioTuple) -> TupleReport {
    let mut pairs = Vec::new();
    let mut pass = true;
    'outer: for (i, a) in t.elems.iter().enumerate() {
        for b in &t.elems[i + 1..] {
            let witness = pair_witness(a, b, &t.n).expect("tuple elements share the ring");
            let ok = witness.is_some();
            pairs.push(PairCheck { a: a.clone(), b: b.clone(), witness });
            if !ok {
                pass = false;
                break 'outer;
            }
        }
    }
    TupleReport { tuple: t.clone(), pairs, pass }
}

/// Whether `c = a + b ± 2r` with `r² = ab − 1`.
pub fn is_regular(a: &QuadInt, b: &QuadInt, c: &QuadInt) -> Result<bool> {
    a.same_ring(b)?;
    a.same_ring(c)?;
    let minus_one = QuadInt::from_int(a.ring(), -1);
    let r = pair_witness(a, b, &minus_one)?
        .ok_or_else(|| Error::MissingWitness(format!("ab - 1 is not a square for a = {a}, b = {b}")))?;
    let base = a + b;
    let two_r = r.scale(&BigInt::from(2));
    Ok(*c == &base + &two_r || *c == &base - &two_r)
}

/// Square witnesses of a D(−1) quadruple `{a, b, c, d}`:
/// `r² = ab−1, s² = ac−1, t² = bc−1, x² = ad−1, y² = bd−1, z² = cd−1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellWitness {
    pub a: QuadInt,
    pub b: QuadInt,
    pub c: QuadInt,
    pub d: QuadInt,
    pub r: QuadInt,
    pub s: QuadInt,
    pub t: QuadInt,
    pub x: QuadInt,
    pub y: QuadInt,
    pub z: QuadInt,
}

impl PellWitness {
    /// Collects canonical witnesses, failing if any product minus one is not a square.
    pub fn from_quadruple(a: &QuadInt, b: &QuadInt, c: &QuadInt, d: &QuadInt) -> Result<Self> {
        for e in [b, c, d] {
            a.same_ring(e)?;
        }
        let m1 = QuadInt::from_int(a.ring(), -1);
        let root = |p: &QuadInt, q: &QuadInt, name: &str| {
            pair_witness(p, q, &m1)?
                .ok_or_else(|| Error::MissingWitness(format!("{name}: {p}·{q} - 1 is not a square")))
        };
        Ok(PellWitness {
            r: root(a, b, "r")?,
            s: root(a, c, "s")?,
            t: root(b, c, "t")?,
            x: root(a, d, "x")?,
            y: root(b, d, "y")?,
            z: root(c, d, "z")?,
            a: a.clone(),
            b: b.clone(),
            c: c.clone(),
            d: d.clone(),
        })
    }

    /// All six square identities, the Pell system and `cd = z² + 1`.
    pub fn is_consistent(&self) -> bool {
        let one = QuadInt::one(self.a.ring());
        let sq = |w: &QuadInt, p: &QuadInt, q: &QuadInt| w.square() == &(p * q) - &one;
        let (r0, r1) = pell_residuals(self);
        sq(&self.r, &self.a, &self.b)
            && sq(&self.s, &self.a, &self.c)
            && sq(&self.t, &self.b, &self.c)
            && sq(&self.x, &self.a, &self.d)
            && sq(&self.y, &self.b, &self.d)
            && sq(&self.z, &self.c, &self.d)
            && r0.is_zero()
            && r1.is_zero()
            && &self.c * &self.d == &self.z.square() + &one
    }
}

/// `(az² − cx² − (c − a), bz² − cy² − (c − b))`.
pub fn pell_residuals(w: &PellWitness) -> (QuadInt, QuadInt) {
    let z2 = w.z.square();
    let first = &(&w.a * &z2) - &(&w.c * &w.x.square()) - (&w.c - &w.a);
    let second = &(&w.b * &z2) - &(&w.c * &w.y.square()) - (&w.c - &w.b);
    (first, second)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub d: QuadInt,
    pub witness: PellWitness,
}

/// Extends the D(−1) triple `{a, b, c}` by scanning `z` with `‖z‖ ≤ z_norm_bound`:
/// whenever `c | z² + 1`, `d = (z² + 1)/c` is kept if it is new and nonzero
/// and `ad − 1`, `bd − 1` are squares. Results follow the order of `‖z‖`;
/// `±z` give the same `d`, which is reported once.
pub fn extend_triple(a: &QuadInt, b: &QuadInt, c: &QuadInt, z_norm_bound: u64) -> Result<Vec<Extension>> {
    let ring = a.ring();
    if c.is_zero() {
        return Err(Error::ZeroDivisor("extension needs c != 0".into()));
    }
    let triple = DioTuple::with_int_shift(ring, -1, vec![a.clone(), b.clone(), c.clone()])?;
    let report = verify_tuple(&triple);
    if !report.pass {
        let (p, q) = report.first_failure().expect("failed report has a failing pair");
        return Err(Error::MissingWitness(format!("{{{a}, {b}, {c}}} is not a D(-1) triple: {p}·{q} - 1")));
    }
    let one = QuadInt::one(ring);
    let m1 = QuadInt::from_int(ring, -1);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for z in elements_up_to_norm(ring, z_norm_bound, true) {
        let Some(d) = (&z.square() + &one).div_exact(c)? else { continue };
        if d.is_zero() || d == *a || d == *b || d == *c || !seen.insert(d.clone()) {
            continue;
        }
        if pair_witness(a, &d, &m1)?.is_none() || pair_witness(b, &d, &m1)?.is_none() {
            continue;
        }
        let witness = PellWitness::from_quadruple(a, b, c, &d)?;
        out.push(Extension { d, witness });
    }
    Ok(out)
}

/// `c± = a + b + d − 2abd ± 2rxy`, reported with `|c₊| ≥ |c₋|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionPair {
    pub a: QuadInt,
    pub b: QuadInt,
    pub d: QuadInt,
    pub r: QuadInt,
    pub x: QuadInt,
    pub y: QuadInt,
    pub c_plus: QuadInt,
    pub c_minus: QuadInt,
}

impl ExtensionPair {
    /// `c₊c₋ = a² + b² + d² − 2ab − 2ad − 2bd + 4`.
    pub fn identity_holds(&self) -> bool {
        let (a, b, d) = (&self.a, &self.b, &self.d);
        let two = BigInt::from(2);
        let rhs = a.square() + b.square() + d.square()
            - (a * b).scale(&two)
            - (a * d).scale(&two)
            - (b * d).scale(&two)
            + QuadInt::from_int(a.ring(), 4);
        &self.c_plus * &self.c_minus == rhs
    }
}

pub fn c_plus_minus(a: &QuadInt, b: &QuadInt, d: &QuadInt) -> Result<ExtensionPair> {
    a.same_ring(b)?;
    a.same_ring(d)?;
    let m1 = QuadInt::from_int(a.ring(), -1);
    let need = |p: &QuadInt, q: &QuadInt| {
        pair_witness(p, q, &m1)?.ok_or_else(|| Error::MissingWitness(format!("{p}·{q} - 1 is not a square")))
    };
    let r = need(a, b)?;
    let x = need(a, d)?;
    let y = need(b, d)?;
    let two = BigInt::from(2);
    let base = a + b + d - (&(a * b) * d).scale(&two);
    let cross = (&(&r * &x) * &y).scale(&two);
    let mut c_plus = &base + &cross;
    let mut c_minus = &base - &cross;
    if c_plus.cmp_abs(&c_minus).is_lt() {
        std::mem::swap(&mut c_plus, &mut c_minus);
    }
    Ok(ExtensionPair { a: a.clone(), b: b.clone(), d: d.clone(), r, x, y, c_plus, c_minus })
}

/// `{t, −t, t̄, −t̄}` for a rational shift, `{t, −t}` otherwise; deduplicated
/// and sorted.
pub fn tuple_orbit(t: &DioTuple) -> Vec<DioTuple> {
    let mut orbit = vec![t.clone(), t.negated()];
    if t.n.is_rational() {
        let c = t.conjugated();
        orbit.push(c.negated());
        orbit.push(c);
    }
    orbit.sort_by(|l, r| l.elems.cmp(&r.elems));
    orbit.dedup();
    orbit
}

/// True if some pairwise product of the tuple is a square in `O_K`.
pub fn has_square_product(t: &DioTuple) -> bool {
    t.elems
        .iter()
        .enumerate()
        .any(|(i, a)| t.elems[i + 1..].iter().any(|b| (a * b).sqrt_exact().is_some()))
}
