use crate::arith::build_spf_sieve;
use crate::formulas::SpaceKind;
use crate::spectrum::for_each_level_with_psi_at_most;
use crate::{Error, Result};

/// `V(x)`: the number of distinct values `psi(N) <= x` over all levels.
///
/// The walk over all levels with `psi <= x` is exhaustive by construction,
/// so no separate tail bound is needed.
pub fn v_psi_exact(space: SpaceKind, x: u64) -> Result<u64> {
    Ok(v_psi_grid(space, &[x])?[0])
}

/// `V` at several points from a single walk up to the largest one.
pub fn v_psi_grid(space: SpaceKind, grid: &[u64]) -> Result<Vec<u64>> {
    let Some(&x_max) = grid.iter().max() else {
        return Ok(Vec::new());
    };
    if x_max >= u32::MAX as u64 - 2 {
        return Err(Error::InvalidInput(format!("x = {x_max} is beyond the sieve range")));
    }
    let sieve = build_spf_sieve(x_max + 2)?;
    let mut seen = vec![false; x_max as usize + 1];
    for_each_level_with_psi_at_most(space, x_max, &sieve, |s| {
        if let Some(b) = seen.get_mut(s.values.psi as usize) {
            *b = true;
        }
    })?;
    let mut prefix = Vec::with_capacity(seen.len());
    let mut acc = 0u64;
    for &b in &seen {
        acc += b as u64;
        prefix.push(acc);
    }
    Ok(grid.iter().map(|&x| prefix[x as usize]).collect())
}
