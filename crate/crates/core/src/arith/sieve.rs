use crate::{Error, Result};

/// Default ceiling on the memory a single sieve table may take.
pub const DEFAULT_MEMORY_BUDGET: u64 = 2 << 30;

/// Smallest-prime-factor table for `2..=limit`, built with a linear sieve.
///
/// Entries are 32-bit, so the limit must stay below `2^32`.
#[derive(Clone)]
pub struct SpfSieve {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl std::fmt::Debug for SpfSieve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpfSieve")
            .field("limit", &self.limit)
            .field("primes", &self.primes.len())
            .finish()
    }
}

pub fn build_spf_sieve(limit: u64) -> Result<SpfSieve> {
    build_spf_sieve_with_budget(limit, DEFAULT_MEMORY_BUDGET)
}

pub fn build_spf_sieve_with_budget(limit: u64, budget: u64) -> Result<SpfSieve> {
    if !(2..u32::MAX as u64).contains(&limit) {
        return Err(Error::SieveLimit(limit));
    }
    // spf table plus a prime list of at most ~limit/ln(limit) entries
    let entries = limit + 1;
    let prime_estimate = (1.26 * limit as f64 / (limit as f64).ln()).ceil() as u64 + 16;
    let needed = (entries + prime_estimate) * std::mem::size_of::<u32>() as u64;
    if needed > budget {
        return Err(Error::SieveBudget {
            limit,
            needed,
            budget,
        });
    }

    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::with_capacity(prime_estimate as usize);
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            if p > si {
                break;
            }
            let m = i * p as usize;
            if m > n {
                break;
            }
            spf[m] = p;
        }
    }
    Ok(SpfSieve { limit, spf, primes })
}

impl SpfSieve {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n`, for `2 <= n <= limit`.
    pub fn spf(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            None
        } else {
            Some(self.spf[n as usize] as u64)
        }
    }

    pub fn is_prime(&self, n: u64) -> Option<bool> {
        match n {
            0 | 1 => Some(false),
            _ => self.spf(n).map(|p| p == n),
        }
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub(crate) fn spf_unchecked(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_spf(n: u64) -> u64 {
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return d;
            }
            d += 1;
        }
        n
    }

    #[test]
    fn small_table() {
        let s = build_spf_sieve(10).unwrap();
        let got: Vec<u64> = (2..=10).map(|n| s.spf(n).unwrap()).collect();
        assert_eq!(got, vec![2, 3, 2, 5, 2, 7, 2, 3, 2]);
        assert_eq!(s.primes(), &[2, 3, 5, 7]);
    }

    #[test]
    fn smallest_limit() {
        let s = build_spf_sieve(2).unwrap();
        assert_eq!(s.spf(2), Some(2));
        assert_eq!(s.spf(3), None);
    }

    #[test]
    fn rejects_bad_limits() {
        assert!(matches!(build_spf_sieve(1), Err(Error::SieveLimit(1))));
        assert!(matches!(
            build_spf_sieve(1 << 32),
            Err(Error::SieveLimit(_))
        ));
    }

    #[test]
    fn budget_is_enforced_before_allocation() {
        let err = build_spf_sieve_with_budget(1_000_000, 1024).unwrap_err();
        assert!(matches!(err, Error::SieveBudget { .. }));
    }

    #[test]
    fn matches_trial_division() {
        let s = build_spf_sieve(50_000).unwrap();
        for n in 2..=50_000 {
            assert_eq!(s.spf(n), Some(trial_spf(n)), "n={n}");
        }
    }

    #[test]
    #[ignore = "allocates a 400MB table"]
    fn large_table_spot_check() {
        let s = build_spf_sieve(100_000_000).unwrap();
        assert_eq!(trial_spf(99_999_989), 99_999_989);
        assert_eq!(s.spf(99_999_989), Some(99_999_989));
    }
}
