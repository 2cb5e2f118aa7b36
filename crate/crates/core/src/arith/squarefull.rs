use super::factor::PrimePower;
use super::sieve::SpfSieve;

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

fn icbrt(n: u64) -> u64 {
    let mut r = (n as f64).cbrt() as u64;
    while r.checked_pow(3).is_none_or(|c| c > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(3).is_some_and(|c| c <= n) {
        r += 1;
    }
    r
}

/// Squarefree flags for `0..=n` (index 0 unused).
pub(crate) fn squarefree_flags(n: usize) -> Vec<bool> {
    let mut flags = vec![true; n + 1];
    let mut d = 2usize;
    while d * d <= n {
        for m in (d * d..=n).step_by(d * d) {
            flags[m] = false;
        }
        d += 1;
    }
    flags
}

/// Every squarefull number `<= limit` (1 included), ascending.
///
/// Each squarefull number is `a^2 b^3` for exactly one pair with `b`
/// squarefree, so no deduplication is needed.
pub fn enumerate_squarefull(limit: u64) -> Vec<u64> {
    if limit == 0 {
        return Vec::new();
    }
    let bmax = icbrt(limit) as usize;
    let sqf = squarefree_flags(bmax);
    let mut out = Vec::new();
    for b in 1..=bmax {
        if !sqf[b] {
            continue;
        }
        let b3 = (b as u64).pow(3);
        let amax = isqrt(limit / b3);
        out.extend((1..=amax).map(|a| a * a * b3));
    }
    out.sort_unstable();
    out
}

/// Walks every squarefull `n <= limit` together with its factorization,
/// in no particular order. The sieve must reach `sqrt(limit)`.
pub fn for_each_squarefull_factored<F>(limit: u64, sieve: &SpfSieve, mut visit: F)
where
    F: FnMut(u64, &[PrimePower]),
{
    assert!(
        sieve.limit() >= isqrt(limit),
        "sieve too short for squarefull enumeration up to {limit}"
    );
    let mut stack: Vec<PrimePower> = Vec::new();
    walk(limit, sieve.primes(), 0, 1, &mut stack, &mut visit);
}

fn walk<F>(limit: u64, primes: &[u32], from: usize, n: u64, stack: &mut Vec<PrimePower>, visit: &mut F)
where
    F: FnMut(u64, &[PrimePower]),
{
    visit(n, stack);
    for (i, &p) in primes.iter().enumerate().skip(from) {
        let p = p as u64;
        let Some(mut m) = n.checked_mul(p * p).filter(|&m| m <= limit) else {
            break;
        };
        let mut e = 2;
        loop {
            stack.push(PrimePower { p, e });
            walk(limit, primes, i + 1, m, stack, visit);
            stack.pop();
            match m.checked_mul(p) {
                Some(next) if next <= limit => {
                    m = next;
                    e += 1;
                }
                _ => break,
            }
        }
    }
}
