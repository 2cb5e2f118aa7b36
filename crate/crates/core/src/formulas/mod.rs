//! Exact dimension formulas for `S_k(Gamma0(N))` and its new and
//! twist-minimal subspaces, evaluated in integer twelfths.

mod coeffs;
mod dimension;
mod local;

pub use coeffs::{coeff_c2, coeff_c3, delta2, SpaceKind, TwelfthInt, Weight};
pub use dimension::{dimension, discrepancy12, eval_component, DimensionBreakdown};
#[cfg(test)]
pub(crate) use dimension::eval_all;
pub(crate) use dimension::total12;
pub use local::{local_factor, local_values, Component, LocalValues};
