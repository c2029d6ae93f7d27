//! Eulerian numbers and ordered Stirling numbers of the second and third kind
//! over a multiset, their q-analogs, and exact checking of the identities that
//! relate them to lattice points of dilated products of simplices.
//!
//! All arithmetic is exact: integers are [`BigInt`] and q-analogs are
//! [`QPolynomial`]s with integer coefficients.
//!
//! ```
//! use mseuler::{numbers, MultisetShape};
//!
//! let shape: MultisetShape = "2,1".parse().unwrap();
//! let row = numbers::stirling2_row_enum(&shape).unwrap();
//! assert_eq!(row.values, [1, 4, 3].map(mseuler::BigInt::from));
//! ```

pub mod arith;
pub mod chain;
pub mod error;
pub mod export;
pub mod lattice;
pub mod numbers;
pub mod perm;
pub mod poly;
pub mod shape;
pub mod verify;

pub use num_bigint::BigInt;

pub use arith::{binomial, multinomial, q_binomial, QBinomialTable};
pub use chain::{chains_of_permutation, enumerate_chains, ChainSimplex, OrderedPartition};
pub use error::{Error, Result};
pub use lattice::{classify_first, classify_second, enumerate_points, LatticePoint};
pub use perm::{enumerate_permutations, Permutation};
pub use poly::QPolynomial;
pub use shape::{compositions, MultisetShape};
pub use verify::{check_decomposition, check_identity, run_suite, IdentityId, IdentityReport, Status};
