//! Random D(−1) triples and quadruples built by regular extension.
#![allow(dead_code)]

use diotuple_core::{c_plus_minus, make_ring, QuadInt, RingParams};
use rand::seq::SliceRandom;
use rand::Rng;

pub const FIELDS: [i64; 8] = [1, 2, 3, 5, 7, 11, 15, 163];

fn distinct_nonzero(v: &[&QuadInt]) -> bool {
    v.iter().all(|q| !q.is_zero()) && (0..v.len()).all(|i| (i + 1..v.len()).all(|j| v[i] != v[j]))
}

/// A triple `{1, r²+1, (r±1)²+1}` for a random `r` (regular in every ring),
/// followed in `Z[i]` by up to `steps` random regular extensions, each
/// keeping three of the four elements of the resulting quadruple. The
/// extension `a+b+c−2abc±2rst` satisfies `ad−1 = −(at∓rs)²`, so it yields a
/// quadruple only where −1 is a square.
pub fn random_triple<R: Rng>(rng: &mut R, ring: RingParams, steps: usize) -> Option<[QuadInt; 3]> {
    let one = QuadInt::one(ring);
    let r = QuadInt::new(ring, rng.gen_range(-30i64..=30), rng.gen_range(-30i64..=30));
    let b = &r.square() + &one;
    let shift = if rng.gen_bool(0.5) { &r + &one } else { &r - &one };
    let c = &shift.square() + &one;
    if !distinct_nonzero(&[&one, &b, &c]) {
        return None;
    }
    let mut triple = [one, b, c];
    let steps = if ring.d() == 1 { rng.gen_range(0..=steps) } else { 0 };
    for _ in 0..steps {
        let pair = c_plus_minus(&triple[0], &triple[1], &triple[2]).ok()?;
        let fourth = if rng.gen_bool(0.5) { pair.c_plus } else { pair.c_minus };
        let mut four = [triple[0].clone(), triple[1].clone(), triple[2].clone(), fourth];
        if !distinct_nonzero(&four.iter().collect::<Vec<_>>()) {
            return None;
        }
        four.shuffle(rng);
        triple = [four[0].clone(), four[1].clone(), four[2].clone()];
    }
    Some(triple)
}

/// A random quadruple `{a, b, c, d}` in `Z[i]` from a random triple and one
/// of its regular extensions, or `None` if the extension degenerates.
pub fn random_quadruple<R: Rng>(rng: &mut R, steps: usize) -> Option<[QuadInt; 4]> {
    let ring = make_ring(1).unwrap();
    let t = random_triple(rng, ring, steps)?;
    let pair = c_plus_minus(&t[0], &t[1], &t[2]).ok()?;
    let d = if rng.gen_bool(0.5) { pair.c_plus } else { pair.c_minus };
    if !distinct_nonzero(&[&t[0], &t[1], &t[2], &d]) {
        return None;
    }
    Some([t[0].clone(), t[1].clone(), t[2].clone(), d])
}

pub fn random_ring<R: Rng>(rng: &mut R) -> RingParams {
    make_ring(*FIELDS.choose(rng).unwrap()).unwrap()
}
