//! Factorization infrastructure and multiplicative-function evaluation.

mod factor;
mod primality;
mod sieve;
mod squarefull;

pub use factor::{
    eval_multiplicative, euler_phi, factorize, mobius, omega, squarefull_part, Factorization,
    PrimePower,
};
pub use primality::is_prime_u64;
pub use sieve::{build_spf_sieve, build_spf_sieve_with_budget, SpfSieve, DEFAULT_MEMORY_BUDGET};
pub use squarefull::{enumerate_squarefull, for_each_squarefull_factored};
pub(crate) use squarefull::squarefree_flags;

/// Floor of the square root, exact for all of `u128`.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u128;
    while r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = isqrt_u128(n as u128);
    r * r == n as u128
}
