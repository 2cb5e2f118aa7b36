use serde::Serialize;

use super::primality::split_into_primes;
use super::sieve::SpfSieve;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.p.pow(self.e)
    }
}

/// Prime-power decomposition of a level, primes strictly ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<PrimePower>,
}

impl Factorization {
    /// Builds a factorization from prime powers in any order. Primes are
    /// assumed prime; repeated primes are merged.
    pub fn from_prime_powers(mut parts: Vec<PrimePower>) -> Option<Self> {
        parts.retain(|pp| pp.e > 0);
        parts.sort_by_key(|pp| pp.p);
        let mut factors: Vec<PrimePower> = Vec::with_capacity(parts.len());
        for pp in parts {
            match factors.last_mut() {
                Some(last) if last.p == pp.p => last.e += pp.e,
                _ => factors.push(pp),
            }
        }
        let mut n: u64 = 1;
        for pp in &factors {
            n = n.checked_mul(pp.p.checked_pow(pp.e)?)?;
        }
        Some(Self { n, factors })
    }

    pub fn one() -> Self {
        Self {
            n: 1,
            factors: Vec::new(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|pp| pp.e == 1)
    }

    pub fn is_perfect_square(&self) -> bool {
        self.factors.iter().all(|pp| pp.e % 2 == 0)
    }
}

const TRIAL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97,
];

/// Factors `n >= 1`. Uses the sieve when it covers `n`, otherwise trial
/// division by small primes followed by Pollard-rho on the cofactor.
pub fn factorize(n: u64, sieve: Option<&SpfSieve>) -> Factorization {
    assert!(n >= 1, "factorize is defined on positive integers");
    match sieve {
        Some(s) if n <= s.limit() => factorize_with_sieve(n, s),
        _ => factorize_large(n),
    }
}

pub(crate) fn factorize_with_sieve(n: u64, sieve: &SpfSieve) -> Factorization {
    let mut factors = Vec::new();
    let mut m = n;
    while m > 1 {
        let p = sieve.spf_unchecked(m);
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        factors.push(PrimePower { p, e });
    }
    Factorization { n, factors }
}

fn factorize_large(n: u64) -> Factorization {
    let mut factors = Vec::new();
    let mut m = n;
    for &p in &TRIAL_PRIMES {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push(PrimePower { p, e });
        }
    }
    if m > 1 {
        let mut rest = Vec::new();
        split_into_primes(m, &mut rest);
        rest.sort_unstable();
        for p in rest {
            match factors.last_mut() {
                Some(last) if last.p == p => last.e += 1,
                _ => factors.push(PrimePower { p, e: 1 }),
            }
        }
    }
    Factorization { n, factors }
}

pub fn mobius(f: &Factorization) -> i8 {
    if f.is_squarefree() {
        if f.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

pub fn omega(f: &Factorization) -> u32 {
    f.factors.len() as u32
}

pub fn euler_phi(f: &Factorization) -> u64 {
    f.factors
        .iter()
        .map(|pp| pp.p.pow(pp.e - 1) * (pp.p - 1))
        .product()
}

/// H(N): the largest squarefull divisor of N, i.e. the product of the prime
/// powers with exponent at least 2. `N / H(N)` is squarefree and coprime to it.
pub fn squarefull_part(f: &Factorization) -> u64 {
    f.factors
        .iter()
        .filter(|pp| pp.e >= 2)
        .map(PrimePower::value)
        .product()
}

/// Product of local values over the prime powers of `f`; `N = 1` gives the
/// empty product.
pub fn eval_multiplicative<T, E, F>(f: &Factorization, mut local: F) -> Result<T, E>
where
    T: std::iter::Product<T>,
    F: FnMut(u64, u32) -> Result<T, E>,
{
    f.factors.iter().map(|pp| local(pp.p, pp.e)).product()
}
