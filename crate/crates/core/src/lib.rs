//! Exact and numerical machinery for the irrationality of ζ(3).
//!
//! The crate computes the integer linear forms u_n = A_n + B_n·d_n³·ζ(3)
//! coming from the shifted Legendre integrals, encloses them with exact
//! rational intervals, and cross-checks the underlying integral identities
//! with an independent tanh-sinh quadrature. A certificate for a bound
//! `q_max` exhibits an `n` with 0 < u_n < 1/q_max, which rules out every
//! rational p/q with q ≤ q_max as the value of ζ(3).

pub mod bounds;
pub mod certificate;
pub mod cli;
pub mod error;
pub mod exactnum;
pub mod legendre;
pub mod linearforms;
pub mod primes;
pub mod quadrature;

pub use error::{Error, Result};
pub use exactnum::{Rational, RationalInterval};
pub use num_bigint::BigInt;
