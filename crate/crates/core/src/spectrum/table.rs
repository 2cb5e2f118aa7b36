use rayon::prelude::*;
use serde::Serialize;

use crate::arith::SpfSieve;
use crate::formulas::{local_values, total12, LocalValues, SpaceKind, Weight};
use crate::{Error, Result};

const CHUNK: usize = 1 << 16;

/// Exact dimensions `d(N)` for `1 <= N <= limit`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionTable {
    pub space: SpaceKind,
    pub k: Weight,
    pub limit: u64,
    #[serde(skip)]
    pub(crate) dims: Vec<u64>,
}

impl DimensionTable {
    pub(crate) fn from_parts(space: SpaceKind, k: Weight, dims: Vec<u64>) -> Self {
        DimensionTable {
            space,
            k,
            limit: dims.len() as u64,
            dims,
        }
    }

    pub fn get(&self, n: u64) -> Option<u64> {
        if n == 0 {
            None
        } else {
            self.dims.get(n as usize - 1).copied()
        }
    }

    /// Dimensions in level order, starting at `N = 1`.
    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.dims.iter().enumerate().map(|(i, &d)| (i as u64 + 1, d))
    }
}

/// Local values, mu(N) and omega(N) for `n <= sieve.limit()` without
/// materializing a factorization.
pub(crate) fn level_values(space: SpaceKind, n: u64, sieve: &SpfSieve) -> (LocalValues, i8, u32) {
    let mut acc = LocalValues::ONE;
    let mut mu: i8 = 1;
    let mut omega = 0;
    let mut m = n;
    while m > 1 {
        let p = sieve.spf_unchecked(m);
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        omega += 1;
        mu = if e == 1 { -mu } else { 0 };
        acc = acc * local_values(space, p, e).expect("exponent is positive");
    }
    (acc, mu, omega)
}

pub(crate) fn level_dimension(space: SpaceKind, k: Weight, n: u64, sieve: &SpfSieve) -> Result<u64> {
    let (v, mu, _) = level_values(space, n, sieve);
    let slot = if space == SpaceKind::Full { 1 } else { mu };
    let t = total12(space, k, n, &v, slot)? / 12;
    u64::try_from(t).map_err(|_| Error::Overflow(format!("dimension at N={n} exceeds 64 bits")))
}

/// Dimensions for every level up to `limit`. The result does not depend on
/// the size of the rayon pool it runs in.
pub fn sieve_dimensions(
    space: SpaceKind,
    k: Weight,
    limit: u64,
    sieve: &SpfSieve,
) -> Result<DimensionTable> {
    if limit == 0 {
        return Err(Error::InvalidInput("table limit must be positive".into()));
    }
    if limit > sieve.limit() && limit > 1 {
        return Err(Error::InvalidInput(format!(
            "table limit {limit} exceeds sieve limit {}",
            sieve.limit()
        )));
    }
    let mut dims = vec![0u64; limit as usize];
    dims.par_chunks_mut(CHUNK)
        .enumerate()
        .try_for_each(|(ci, chunk)| -> Result<()> {
            let base = (ci * CHUNK) as u64 + 1;
            for (i, slot) in chunk.iter_mut().enumerate() {
                *slot = level_dimension(space, k, base + i as u64, sieve)?;
            }
            Ok(())
        })?;
    Ok(DimensionTable::from_parts(space, k, dims))
}
