//! Exact dimensions of the full, new and twist-minimal cuspform spaces for
//! `Gamma0(N)`, together with the machinery needed to turn finite scans into
//! exhaustive statements about which dimensions occur.
//!
//! The crate is layered bottom-up:
//!
//! - [`arith`]: sieves, 64-bit factorization and multiplicative evaluation.
//! - [`formulas`]: local factors and the five-term dimension formula, carried
//!   in integer twelfths.
//! - [`spectrum`]: range scans, attained-value spectra, tail certificates and
//!   the discrepancy surveys.
//! - [`distribution`]: value-distribution analytics and the numeric checks of
//!   the supporting inequalities.
//! - [`cli`]: the `gamma0-dims` command-line front end.

pub mod arith;
pub mod cli;
pub mod distribution;
mod error;
pub mod formulas;
pub mod spectrum;

pub use error::{Error, Result};
