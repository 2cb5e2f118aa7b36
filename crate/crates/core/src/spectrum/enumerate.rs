//! Enumeration of all levels whose index `psi(N)` stays below a bound.
//!
//! The walk extends `N` one prime power at a time in increasing prime order
//! and prunes on `psi`. Pruning is sound because `psi(p^e)` is
//! non-decreasing in `e` and `psi(p)` is non-decreasing in `p` for every
//! space; [`check_pruning_order`] re-checks both facts on the primes used.

use rayon::prelude::*;

use crate::arith::SpfSieve;
use crate::formulas::{local_values, LocalValues, SpaceKind};
use crate::{Error, Result};

/// One level reached by the walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelState {
    pub n: u64,
    pub values: LocalValues,
    pub mu: i8,
    pub omega: u32,
}

impl LevelState {
    pub const ROOT: LevelState = LevelState {
        n: 1,
        values: LocalValues::ONE,
        mu: 1,
        omega: 0,
    };

    pub fn psi(&self) -> u64 {
        self.values.psi as u64
    }
}

/// Primes needed to reach every level with `psi <= psi_limit`.
fn prime_bound(psi_limit: u64) -> u64 {
    psi_limit.saturating_add(1)
}

fn check_sieve(psi_limit: u64, sieve: &SpfSieve) -> Result<()> {
    if sieve.limit() < prime_bound(psi_limit) {
        return Err(Error::InvalidInput(format!(
            "psi walk up to {psi_limit} needs primes up to {}, sieve stops at {}",
            prime_bound(psi_limit),
            sieve.limit()
        )));
    }
    Ok(())
}

/// Confirms the two monotonicity facts the pruning relies on, for every
/// prime in `primes`.
pub fn check_pruning_order(space: SpaceKind, primes: &[u32]) -> Result<()> {
    let mut prev = 0i128;
    for &p in primes {
        let p = p as u64;
        let first = local_values(space, p, 1)?.psi;
        if first < prev || first < 1 {
            return Err(Error::InvalidCertificate(format!(
                "{space}: psi(p) not non-decreasing at p={p}"
            )));
        }
        prev = first;
        let mut last = first;
        let max_e = (100.0 / (p as f64).log2()).floor() as u32;
        for e in 2..=max_e.max(1) {
            let v = local_values(space, p, e)?.psi;
            if v < last {
                return Err(Error::InvalidCertificate(format!(
                    "{space}: psi(p^e) decreases at {p}^{e}"
                )));
            }
            last = v;
        }
    }
    Ok(())
}

fn child(space: SpaceKind, s: &LevelState, p: u64, pe: u64, e: u32) -> LevelState {
    let lv = local_values(space, p, e).expect("positive exponent");
    LevelState {
        n: s.n * pe,
        values: s.values * lv,
        mu: if e == 1 { -s.mu } else { 0 },
        omega: s.omega + 1,
    }
}

/// Calls `visit` on every child of `s` that respects the bound, passing the
/// index of the next admissible prime.
fn for_each_child(
    space: SpaceKind,
    psi_limit: u64,
    primes: &[u32],
    from: usize,
    s: &LevelState,
    mut visit: impl FnMut(LevelState, usize),
) {
    let psi = s.values.psi;
    for (i, &p) in primes.iter().enumerate().skip(from) {
        let p = p as u64;
        let first = local_values(space, p, 1).expect("positive exponent").psi;
        if psi * first > psi_limit as i128 {
            break;
        }
        let mut e = 1;
        let mut pe = p;
        loop {
            let lv = local_values(space, p, e).expect("positive exponent");
            if psi * lv.psi > psi_limit as i128 {
                break;
            }
            if s.n.checked_mul(pe).is_none() {
                break;
            }
            visit(child(space, s, p, pe, e), i + 1);
            match pe.checked_mul(p) {
                Some(next) => {
                    pe = next;
                    e += 1;
                }
                None => break,
            }
        }
    }
}

fn descend(
    space: SpaceKind,
    psi_limit: u64,
    primes: &[u32],
    from: usize,
    s: &LevelState,
    visit: &mut impl FnMut(&LevelState),
) {
    visit(s);
    for_each_child(space, psi_limit, primes, from, s, |c, next| {
        descend(space, psi_limit, primes, next, &c, visit)
    });
}

/// Visits every level `N` with `psi(N) <= psi_limit`, exactly once each,
/// single-threaded.
pub fn for_each_level_with_psi_at_most(
    space: SpaceKind,
    psi_limit: u64,
    sieve: &SpfSieve,
    mut visit: impl FnMut(&LevelState),
) -> Result<()> {
    check_sieve(psi_limit, sieve)?;
    let primes = usable_primes(psi_limit, sieve);
    descend(space, psi_limit, primes, 0, &LevelState::ROOT, &mut visit);
    Ok(())
}

fn usable_primes(psi_limit: u64, sieve: &SpfSieve) -> &[u32] {
    let bound = prime_bound(psi_limit);
    let all = sieve.primes();
    let end = all.partition_point(|&p| (p as u64) <= bound);
    &all[..end]
}

/// Parallel fold over the same set of levels as
/// [`for_each_level_with_psi_at_most`]. The result is deterministic as long
/// as `merge` is commutative and associative.
pub fn fold_levels_with_psi_at_most<A, I, V, M>(
    space: SpaceKind,
    psi_limit: u64,
    sieve: &SpfSieve,
    init: I,
    visit: V,
    merge: M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &LevelState) + Sync,
    M: Fn(A, A) -> A,
{
    check_sieve(psi_limit, sieve)?;
    let primes = usable_primes(psi_limit, sieve);

    // Split the tree into subtrees: nodes with a large remaining budget are
    // visited here and replaced by their children.
    let split_below = psi_limit / 256;
    let mut head = init();
    let mut items: Vec<(LevelState, usize)> = Vec::new();
    let mut frontier = vec![(LevelState::ROOT, 0usize)];
    while let Some((s, from)) = frontier.pop() {
        if s.values.psi as u64 <= split_below.max(1) && s.omega < 3 {
            visit(&mut head, &s);
            for_each_child(space, psi_limit, primes, from, &s, |c, next| {
                frontier.push((c, next))
            });
        } else {
            items.push((s, from));
        }
    }
    items.sort_by_key(|(s, _)| s.n);

    let buckets = rayon::current_num_threads().max(1) * 4;
    let parts: Vec<A> = (0..buckets)
        .into_par_iter()
        .map(|b| {
            let mut acc = init();
            for (s, from) in items.iter().skip(b).step_by(buckets) {
                descend(space, psi_limit, primes, *from, s, &mut |x| visit(&mut acc, x));
            }
            acc
        })
        .collect();
    Ok(parts.into_iter().fold(head, merge))
}
