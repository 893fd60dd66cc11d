//! The approximations `θ₁ ≈ sx/(az)`, `θ₂ ≈ ty/(bz)` coming from the Pell
//! system of a quadruple, with their defect bounds.

use num_bigint::BigInt;
use num_traits::One;
use serde_json::json;

use super::prec::{check_less, Margin, PrecComplex, PrecReal, MAX_PRECISION, MIN_MARGIN};
use crate::error::{Error, Result};
use crate::ring::QuadInt;
use crate::tuples::{pell_residuals, DioTuple, PellWitness};

#[derive(Debug, Clone)]
pub struct ThetaCheck {
    pub witness: PellWitness,
    pub precision: u32,
    /// `±(s/a)√(a/c)`, sign chosen closest to `sx/(az)`.
    pub theta1: PrecComplex,
    /// `±(t/b)√(b/c)`, sign chosen closest to `ty/(bz)`.
    pub theta2: PrecComplex,
    pub approx1: PrecComplex,
    pub approx2: PrecComplex,
    /// `|θ₁ − sx/(az)|`.
    pub defect1: PrecReal,
    /// `|θ₂ − ty/(bz)|`.
    pub defect2: PrecReal,
    /// `|s||a−c| / (|a|√|ac| |z|²)`.
    pub middle1: PrecReal,
    /// `|s||a−c| / (|b|√|bc| |z|²)`, the second middle bound as printed.
    pub middle2_printed: PrecReal,
    /// `|t||b−c| / (|b|√|bc| |z|²)`, the second middle bound by symmetry.
    pub middle2_symmetric: PrecReal,
    /// `21|c| / (16|a| |z|²)`.
    pub outer: PrecReal,
    /// `√|1 − 1/(ac)|`, compared with `21/20`.
    pub outer_factor: PrecReal,
    /// `|θ₁² − (sx/az)²|` and `|s²/a²|·|c−a|/|cz²|`.
    pub identity_lhs: PrecReal,
    pub identity_rhs: PrecReal,
    /// `az² − cx² = c − a` and `bz² − cy² = c − b`, exactly.
    pub pell_exact: bool,
    /// `|z| > 1`; the `|z|^(2−λ) > |z|^0.2` step needs it.
    pub z_exceeds_one: bool,
}

/// Named comparisons of a [`ThetaCheck`].
#[derive(Debug, Clone)]
pub struct ThetaMargins {
    pub defect1_le_middle1: Margin,
    pub defect2_le_middle2_symmetric: Margin,
    pub defect2_le_middle2_printed: Margin,
    pub middle1_lt_outer: Margin,
    pub middle2_symmetric_lt_outer: Margin,
    pub outer_factor_lt_21_20: Margin,
    /// Relative difference of the two sides of the squared identity and
    /// whether it is within their error bounds.
    pub identity_rel_diff: f64,
    pub identity_holds: bool,
}

fn closest_sign(theta: PrecComplex, approx: &PrecComplex) -> (PrecComplex, PrecReal) {
    let plus = theta.sub(approx).abs();
    let minus = theta.neg().sub(approx).abs();
    if check_less(&minus, &plus).holds {
        (theta.neg(), minus)
    } else {
        (theta, plus)
    }
}

fn norm_real(q: &QuadInt, prec: u32) -> PrecReal {
    PrecReal::from_bigint(&q.norm(), prec)
}

fn abs_real(q: &QuadInt, prec: u32) -> PrecReal {
    norm_real(q, prec).sqrt()
}

fn evaluate(w: &PellWitness, prec: u32) -> ThetaCheck {
    let cx = |q: &QuadInt| PrecComplex::from_quad(q, prec);
    let (a, b, c) = (&w.a, &w.b, &w.c);
    let (ca, cb, cc) = (cx(a), cx(b), cx(c));
    let (cs, ct, cxx, cy, cz) = (cx(&w.s), cx(&w.t), cx(&w.x), cx(&w.y), cx(&w.z));

    let approx1 = cs.mul(&cxx).div(&ca.mul(&cz));
    let approx2 = ct.mul(&cy).div(&cb.mul(&cz));
    let theta1 = cs.div(&ca).mul(&ca.div(&cc).sqrt());
    let theta2 = ct.div(&cb).mul(&cb.div(&cc).sqrt());
    let (theta1, defect1) = closest_sign(theta1, &approx1);
    let (theta2, defect2) = closest_sign(theta2, &approx2);

    let z2 = norm_real(&w.z, prec);
    let middle = |num: &QuadInt, diff: &QuadInt, den: &QuadInt| {
        let root = norm_real(den, prec).mul(&norm_real(c, prec)).sqrt().sqrt();
        abs_real(num, prec).mul(&abs_real(diff, prec)).div(&abs_real(den, prec).mul(&root).mul(&z2))
    };
    let middle1 = middle(&w.s, &(a - c), a);
    let middle2_printed = middle(&w.s, &(a - c), b);
    let middle2_symmetric = middle(&w.t, &(b - c), b);
    let outer = PrecReal::from_i64(21, prec)
        .mul(&abs_real(c, prec))
        .div(&PrecReal::from_i64(16, prec).mul(&abs_real(a, prec)).mul(&z2));

    // 1 − 1/(ac) = s²/(ac), so √|1 − 1/(ac)| = (‖s‖² / ‖ac‖)^(1/4).
    let ns = norm_real(&w.s, prec);
    let outer_factor = ns.mul(&ns).div(&norm_real(&(a * c), prec)).sqrt().sqrt();

    let identity_lhs = theta1.mul(&theta1).sub(&approx1.mul(&approx1)).abs();
    let identity_rhs = norm_real(&w.s, prec)
        .mul(&abs_real(&(c - a), prec))
        .div(&norm_real(a, prec).mul(&abs_real(c, prec)).mul(&z2));

    let (r0, r1) = pell_residuals(w);
    ThetaCheck {
        witness: w.clone(),
        precision: prec,
        theta1,
        theta2,
        approx1,
        approx2,
        defect1,
        defect2,
        middle1,
        middle2_printed,
        middle2_symmetric,
        outer,
        outer_factor,
        identity_lhs,
        identity_rhs,
        pell_exact: r0.is_zero() && r1.is_zero(),
        z_exceeds_one: w.z.norm() > BigInt::one(),
    }
}

impl ThetaCheck {
    pub fn margins(&self) -> ThetaMargins {
        let prec = self.precision;
        let ratio = PrecReal::from_i64(21, prec).div(&PrecReal::from_i64(20, prec));
        let diff = self.identity_lhs.sub(&self.identity_rhs).abs();
        let identity_rel_diff = diff.div(&self.identity_rhs).to_f64();
        let tolerance = (self.identity_lhs.max_rel_error() + self.identity_rhs.max_rel_error()) * 2.0;
        ThetaMargins {
            defect1_le_middle1: check_less(&self.defect1, &self.middle1),
            defect2_le_middle2_symmetric: check_less(&self.defect2, &self.middle2_symmetric),
            defect2_le_middle2_printed: check_less(&self.defect2, &self.middle2_printed),
            middle1_lt_outer: check_less(&self.middle1, &self.outer),
            middle2_symmetric_lt_outer: check_less(&self.middle2_symmetric, &self.outer),
            outer_factor_lt_21_20: check_less(&self.outer_factor, &ratio),
            identity_rel_diff,
            identity_holds: identity_rel_diff <= tolerance.max(MIN_MARGIN),
        }
    }

    pub fn to_json(&self, digits: usize) -> serde_json::Value {
        let v = |x: &PrecReal| json!({"value": x.to_sci(digits), "max_rel_error": x.max_rel_error()});
        let c = |z: &PrecComplex| json!({"re": z.re.to_sci(digits), "im": z.im.to_sci(digits), "max_rel_error": z.max_rel_error()});
        let m = self.margins();
        let mj = |x: &Margin| json!({"holds": x.holds, "decided": x.decided, "rel_margin": x.rel_margin});
        let w = &self.witness;
        let quadruple: Vec<String> = [&w.a, &w.b, &w.c, &w.d].iter().map(|q| q.format()).collect();
        json!({
            "quadruple": quadruple,
            "precision_bits": self.precision,
            "theta1": c(&self.theta1),
            "theta2": c(&self.theta2),
            "approx1": c(&self.approx1),
            "approx2": c(&self.approx2),
            "defect1": v(&self.defect1),
            "defect2": v(&self.defect2),
            "middle1": v(&self.middle1),
            "middle2_printed": v(&self.middle2_printed),
            "middle2_symmetric": v(&self.middle2_symmetric),
            "outer": v(&self.outer),
            "pell_exact": self.pell_exact,
            "z_exceeds_one": self.z_exceeds_one,
            "checks": {
                "defect1_le_middle1": mj(&m.defect1_le_middle1),
                "defect2_le_middle2_symmetric": mj(&m.defect2_le_middle2_symmetric),
                "defect2_le_middle2_printed": mj(&m.defect2_le_middle2_printed),
                "middle1_lt_outer": mj(&m.middle1_lt_outer),
                "middle2_symmetric_lt_outer": mj(&m.middle2_symmetric_lt_outer),
                "outer_factor_lt_21_20": mj(&m.outer_factor_lt_21_20),
                "identity_rel_diff": m.identity_rel_diff,
                "identity_holds": m.identity_holds,
            },
        })
    }
}

/// Evaluates both θ approximations for a Pell witness, escalating the
/// precision until the defect comparisons are decided.
pub fn theta_defect(w: &PellWitness, precision_bits: u32) -> Result<ThetaCheck> {
    for (name, q) in [("a", &w.a), ("b", &w.b), ("c", &w.c), ("z", &w.z)] {
        if q.is_zero() {
            return Err(Error::ZeroDivisor(format!("{name} = 0")));
        }
    }
    let mut prec = precision_bits.clamp(64, MAX_PRECISION);
    loop {
        let check = evaluate(w, prec);
        let m = check.margins();
        let decided = m.defect1_le_middle1.decided && m.defect2_le_middle2_symmetric.decided && m.identity_holds;
        if decided || prec >= MAX_PRECISION {
            return Ok(check);
        }
        prec = (prec * 2).min(MAX_PRECISION);
    }
}

/// [`theta_defect`] for a quadruple given as a tuple, labelled `(a, b, c, d)`
/// in canonical order. Only the shift `n = −1` is supported.
pub fn theta_defect_for_tuple(t: &DioTuple, precision_bits: u32) -> Result<ThetaCheck> {
    if *t.shift() != QuadInt::from_int(t.ring(), -1) {
        return Err(Error::UnsupportedShift(format!("n = {}; bounds assume n = -1", t.shift())));
    }
    let e = t.elems();
    if e.len() != 4 {
        return Err(Error::Structural(format!("expected a quadruple, got {} elements", e.len())));
    }
    theta_defect(&PellWitness::from_quadruple(&e[0], &e[1], &e[2], &e[3])?, precision_bits)
}
