use std::collections::HashMap;

use diotuple_core::ring::elements_up_to_norm;
use diotuple_core::{make_ring, DioTuple, QuadInt, RingParams};
use num_bigint::BigInt;
use proptest::prelude::*;

const FIELDS: [i64; 8] = [1, 2, 3, 5, 7, 11, 15, 163];

fn ring_strategy() -> impl Strategy<Value = RingParams> {
    prop::sample::select(FIELDS.to_vec()).prop_map(|d| make_ring(d).unwrap())
}

fn elem(ring: RingParams, range: i64) -> impl Strategy<Value = QuadInt> {
    (-range..=range, -range..=range).prop_map(move |(x, y)| QuadInt::new(ring, x, y))
}

fn ring_and_elems(n: usize, range: i64) -> impl Strategy<Value = (RingParams, Vec<QuadInt>)> {
    ring_strategy().prop_flat_map(move |r| (Just(r), prop::collection::vec(elem(r, range), n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn norm_is_multiplicative((_r, v) in ring_and_elems(2, 10_000)) {
        prop_assert_eq!((&v[0] * &v[1]).norm(), v[0].norm() * v[1].norm());
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism((_r, v) in ring_and_elems(2, 1000)) {
        let (a, b) = (&v[0], &v[1]);
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((a * b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((a + b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!(a.conj().norm(), a.norm());
        prop_assert!((a * &a.conj()).is_rational());
    }

    #[test]
    fn sqrt_of_square_round_trips((_r, v) in ring_and_elems(1, 1_000_000)) {
        let a = &v[0];
        let root = a.square().sqrt_exact().expect("a square has a root");
        prop_assert!(root == *a || root == -a);
        prop_assert_eq!(root.square(), a.square());
    }

    #[test]
    fn parse_format_round_trip((r, v) in ring_and_elems(1, 1_000_000)) {
        prop_assert_eq!(QuadInt::parse(&v[0].format(), r).unwrap(), v[0].clone());
    }

    #[test]
    fn exact_division_inverts_multiplication((_r, v) in ring_and_elems(2, 1000)) {
        prop_assume!(!v[1].is_zero());
        let p = &v[0] * &v[1];
        prop_assert_eq!(p.div_exact(&v[1]).unwrap(), Some(v[0].clone()));
    }
}

/// Oracle: square every β with ‖β‖ ≤ 100 and index the results.
#[test]
fn sqrt_exact_is_complete_up_to_norm_10000() {
    for d in [1i64, 2, 3, 7, 163] {
        let r = make_ring(d).unwrap();
        let mut table: HashMap<QuadInt, Vec<QuadInt>> = HashMap::new();
        for beta in elements_up_to_norm(r, 100, true) {
            table.entry(beta.square()).or_default().push(beta);
        }
        let alphas = elements_up_to_norm(r, 10_000, true);
        assert!(alphas.len() > 4_000, "D={d}");
        for alpha in alphas {
            match (alpha.sqrt_exact(), table.get(&alpha)) {
                (None, None) => {}
                (Some(root), Some(roots)) => {
                    assert!(roots.contains(&root), "D={d}: {alpha} root {root} not in {roots:?}");
                    assert!(roots.len() <= 2);
                }
                (got, want) => panic!("D={d}: sqrt({alpha}) = {got:?}, oracle {want:?}"),
            }
        }
    }
}

#[test]
fn units_match_exhaustive_norm_one_scan() {
    for d in FIELDS {
        let r = make_ring(d).unwrap();
        let mut scan = Vec::new();
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                let q = QuadInt::new(r, x, y);
                if q.norm() == BigInt::from(1) {
                    scan.push(q);
                }
            }
        }
        scan.sort();
        assert_eq!(r.units(), scan, "D={d}");
        let expected = match d {
            1 => 4,
            3 => 6,
            _ => 2,
        };
        assert_eq!(scan.len(), expected);
    }
}

#[test]
fn tuples_are_closed_under_negation_and_conjugation() {
    let r = make_ring(1).unwrap();
    let t = DioTuple::with_int_shift(r, -1, [1, 2, 5, -24].iter().map(|&v| QuadInt::from_int(r, v)).collect()).unwrap();
    for image in diotuple_core::tuple_orbit(&t) {
        assert!(diotuple_core::verify_tuple(&image).pass);
    }
    let r = make_ring(2).unwrap();
    // 1·√−2 + (−1 + √−2) = (1 + √−2)²
    let n = QuadInt::new(r, -1, 1);
    let t = DioTuple::new(r, n, vec![QuadInt::new(r, 1, 0), QuadInt::new(r, 0, 1)]).unwrap();
    assert!(diotuple_core::verify_tuple(&t).pass);
    assert!(diotuple_core::verify_tuple(&t.negated()).pass);
    assert!(diotuple_core::verify_tuple(&t.conjugated()).pass);
}
