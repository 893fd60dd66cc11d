//! Exact arithmetic and verification tools for Diophantine D(n)-tuples in
//! rings of integers of imaginary quadratic fields.
//!
//! * [`ring`]: the ring `Z[ω]`, norms, units and exact square roots.
//! * [`tuples`]: tuple verification, regularity, Pell witnesses, extensions.
//! * [`search`]: norm-bounded exhaustive search as clique enumeration.
//! * [`bounds`]: approximation constants, bounds on `d` and the exact
//!   verifier of the `m ≤ 36` inequality chain.

pub mod bounds;
pub mod error;
pub mod ring;
pub mod search;
pub mod tuples;

pub use error::{Error, Result};
pub use ring::{make_ring, OmegaMode, QuadInt, RingParams};
pub use tuples::{
    c_plus_minus, extend_triple, is_regular, pair_witness, pell_residuals, tuple_orbit, verify_tuple, DioTuple,
    ExtensionPair, PellWitness, TupleReport,
};
