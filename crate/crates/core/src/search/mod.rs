//! Norm-bounded exhaustive search for D(n)-tuples.
//!
//! A k-tuple with all elements of norm at most `N` is exactly a k-clique of
//! the compatibility graph on the nonzero elements of norm at most `N`.

mod campaign;
mod clique;
mod graph;

pub use campaign::{
    run_campaign, run_campaign_with, run_field, squarefree_range, ConfigEcho, FieldResult, SearchConfig,
    SearchReport, SCHEMA_VERSION,
};
pub use clique::{brute_force_tuples, find_cliques, find_cliques_symmetric};
pub use graph::{build_graph, CompatGraph};

use crate::ring::{elements_up_to_norm, QuadInt, RingParams};

/// All nonzero elements with `‖α‖ ≤ max_norm`, sorted by `(norm, x, y)`.
pub fn enum_elements(ring: RingParams, max_norm: u64) -> Vec<QuadInt> {
    elements_up_to_norm(ring, max_norm, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    #[test]
    fn enumeration_examples() {
        let r1 = make_ring(1).unwrap();
        let units = enum_elements(r1, 1);
        assert_eq!(units, r1.units());

        let r3 = make_ring(3).unwrap();
        assert_eq!(enum_elements(r3, 1).len(), 6);

        let r163 = make_ring(163).unwrap();
        let els = enum_elements(r163, 40);
        let expected: Vec<QuadInt> = {
            let mut v: Vec<_> = (1..=6).flat_map(|k| [QuadInt::from_int(r163, -k), QuadInt::from_int(r163, k)]).collect();
            v.sort();
            v
        };
        assert_eq!(els, expected);
        assert_eq!(enum_elements(r163, 41).len(), 12 + 4);
    }

    #[test]
    fn enumeration_matches_coordinate_scan() {
        // Oracle: scan basis coordinates in a generous box.
        for d in [1i64, 2, 3, 5, 7, 11, 15] {
            let r = make_ring(d).unwrap();
            let bound = 50u64;
            let mut oracle = Vec::new();
            for x in -60i64..=60 {
                for y in -60i64..=60 {
                    let q = QuadInt::new(r, x, y);
                    if !q.is_zero() && q.norm() <= bound.into() {
                        oracle.push(q);
                    }
                }
            }
            oracle.sort();
            assert_eq!(enum_elements(r, bound), oracle, "D={d}");
        }
    }
}
