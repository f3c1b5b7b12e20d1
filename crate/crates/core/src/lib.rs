//! Exact arithmetic on planar integral well-rounded (IWR) lattices.
//!
//! A planar IWR lattice is, up to rotation and reflection, determined by a
//! similarity class `(p, r, q, D)` with `p² + D·r² = q²`, `gcd(p, q) = 1`,
//! `2p ≤ q` and `D` squarefree, together with an integer scale `k`: the
//! lattice `√(k/q)·Ω_D(p, q)` has Gram matrix `[[kq, kp], [kp, kq]]`,
//! minimum `kq` and determinant `kr·√D`.
//!
//! The crate is organised as
//!
//! - [`arith`]: factorization, divisors and the classical arithmetic functions,
//! - [`classes`]: similarity classes, Gram matrices, Gauss reduction and
//!   classification, and the ternary-form parameterization,
//! - [`conic`]: the Pell-conic composition law on classes of a fixed type,
//! - [`enumerate`]: enumeration and counting of IWR lattices of a fixed determinant,
//! - [`optimize`]: the lattice of a fixed determinant with the largest minimum,
//! - [`zeta`]: Epstein zeta values with certified truncation error, SNR and packing density,
//! - [`cli`]: the `iwr` command-line front end.
//!
//! All integer data is arbitrary precision ([`num_bigint::BigInt`]); only the
//! lattice sums in [`zeta`] use floating point.

pub mod arith;
pub mod classes;
pub mod cli;
pub mod conic;
pub mod enumerate;
mod error;
pub mod optimize;
pub mod zeta;

pub use classes::{GramMatrix, IwrLattice, MnPair, SimilarityClass};
pub use enumerate::{CountReport, DeterminantSpec};
pub use error::{Error, Result};
pub use zeta::ZetaResult;
