use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::certificate::{certify_index_bound, certify_scan_bound};
use super::enumerate::{fold_levels_with_psi_at_most, LevelState};
use super::table::level_values;
use crate::arith::{build_spf_sieve, is_perfect_square, SpfSieve};
use crate::distribution::eta_interval;
use crate::formulas::{total12, SpaceKind, Weight};
use crate::{Error, Result};

const CHUNK: u64 = 1 << 15;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurveyCheckpoint {
    pub limit: u64,
    pub distinct: usize,
}

/// Distinct values of `12 d - (k-1) psi` over a constrained set of levels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaSurvey {
    pub space: SpaceKind,
    pub k: Weight,
    /// Only levels with fewer than `r` distinct prime factors qualify.
    pub r: u32,
    /// Full space only: squarefull part at most `s`.
    pub s: Option<u64>,
    pub scan_limit: u64,
    pub qualifying_levels: u64,
    pub distinct_count: usize,
    /// Upper bound on the number of distinct values.
    pub bound: f64,
    pub checkpoints: Vec<SurveyCheckpoint>,
    /// The distinct values in twelfths, ascending.
    pub values12: Vec<i128>,
    pub pass: bool,
}

/// The bound on distinct discrepancy values: `3(2r+1)^2` for the new and
/// minimal spaces, `eta sqrt(s) r (r+1)^2` for the full space.
pub fn delta_bound(space: SpaceKind, r: u32, s: Option<u64>) -> Result<f64> {
    let r = r as f64;
    match space {
        SpaceKind::Full => {
            let s = s.ok_or_else(|| {
                Error::InvalidInput("the full-space survey needs a squarefull cap s".into())
            })?;
            Ok(eta_interval().hi * (s as f64).sqrt() * r * (r + 1.0).powi(2))
        }
        _ => Ok(3.0 * (2.0 * r + 1.0).powi(2)),
    }
}

/// Squarefull part `H(N)` and `omega` from the sieve.
fn shape(n: u64, sieve: &SpfSieve) -> (u64, u32) {
    let (mut m, mut h, mut w) = (n, 1u64, 0u32);
    while m > 1 {
        let p = sieve.spf(m).expect("within sieve");
        let mut pe = 1;
        while m % p == 0 {
            m /= p;
            pe *= p;
        }
        w += 1;
        if pe != p {
            h *= pe;
        }
    }
    (h, w)
}

/// Enumerates distinct discrepancies over `N <= scan_limit` with
/// `omega(N) < r` and, for the full space, `H(N) <= s`; for the new and
/// minimal spaces perfect squares are excluded. Counts are also recorded at
/// each checkpoint (clamped to the scan limit).
pub fn delta_value_survey(
    space: SpaceKind,
    k: Weight,
    r: u32,
    s: Option<u64>,
    scan_limit: u64,
    checkpoints: &[u64],
    sieve: &SpfSieve,
) -> Result<DeltaSurvey> {
    if scan_limit > sieve.limit() {
        return Err(Error::InvalidInput(format!(
            "scan limit {scan_limit} exceeds sieve limit {}",
            sieve.limit()
        )));
    }
    let bound = delta_bound(space, r, s)?;
    let km1 = (k.get() - 1) as i128;
    let chunks = scan_limit.div_ceil(CHUNK);
    let found: Vec<Vec<(u64, i128)>> = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<Vec<(u64, i128)>> {
            let lo = c * CHUNK + 1;
            let hi = ((c + 1) * CHUNK).min(scan_limit);
            let mut out = Vec::new();
            for n in lo..=hi {
                let (h, w) = if n == 1 { (1, 0) } else { shape(n, sieve) };
                if w >= r {
                    continue;
                }
                let ok = match space {
                    SpaceKind::Full => s.is_some_and(|s| h <= s),
                    _ => n == 1 || !is_perfect_square(n),
                };
                if !ok {
                    continue;
                }
                let (v, mu, _) = level_values(space, n, sieve);
                let slot = if space == SpaceKind::Full { 1 } else { mu };
                out.push((n, total12(space, k, n, &v, slot)? - km1 * v.psi));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut marks: Vec<u64> = checkpoints.iter().map(|&c| c.min(scan_limit)).collect();
    marks.push(scan_limit);
    marks.sort_unstable();
    marks.dedup();
    let mut seen = BTreeSet::new();
    let mut qualifying = 0u64;
    let mut cps = Vec::new();
    let mut next = 0;
    for (n, d) in found.into_iter().flatten() {
        while next < marks.len() && marks[next] < n {
            cps.push(SurveyCheckpoint {
                limit: marks[next],
                distinct: seen.len(),
            });
            next += 1;
        }
        seen.insert(d);
        qualifying += 1;
    }
    for &m in &marks[next..] {
        cps.push(SurveyCheckpoint {
            limit: m,
            distinct: seen.len(),
        });
    }
    let pass = cps.iter().all(|c| c.distinct as f64 <= bound);
    Ok(DeltaSurvey {
        space,
        k,
        r,
        s,
        scan_limit,
        qualifying_levels: qualifying,
        distinct_count: seen.len(),
        bound,
        checkpoints: cps,
        values12: seen.into_iter().collect(),
        pass,
    })
}

/// Levels that are exceptional at scale `x`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub space: SpaceKind,
    pub k: Weight,
    pub x: f64,
    /// `3 lnln x`.
    pub omega_threshold: f64,
    /// Levels with `min(psi, 12d/(k-1)) <= x`, which the census ranges over.
    pub candidates: u64,
    pub count: u64,
    pub squares: u64,
    pub many_factors: u64,
    /// `count ln x / x`.
    pub ratio: f64,
}

#[derive(Default)]
struct Tally {
    candidates: u64,
    count: u64,
    squares: u64,
    many: u64,
}

impl Tally {
    fn add(&mut self, n: u64, omega: u32, thr: f64) {
        self.candidates += 1;
        let sq = is_perfect_square(n);
        let many = omega as f64 > thr;
        if sq || many {
            self.count += 1;
        }
        self.squares += sq as u64;
        self.many += many as u64;
    }

    fn merge(self, o: Tally) -> Tally {
        Tally {
            candidates: self.candidates + o.candidates,
            count: self.count + o.count,
            squares: self.squares + o.squares,
            many: self.many + o.many,
        }
    }
}

/// Counts levels with `min(psi(N), 12 d(N)/(k-1)) <= x` that have more than
/// `3 lnln x` prime factors or are perfect squares. The candidate set is
/// made finite by a tail certificate at target `floor((k-1)x/12)`.
pub fn exceptional_census(space: SpaceKind, k: Weight, x: f64) -> Result<CensusReport> {
    if !(x > 1.0) || x > 1e12 {
        return Err(Error::Domain(format!("census scale must lie in (1, 1e12], got {x}")));
    }
    let thr = 3.0 * x.ln().ln();
    let km1 = (k.get() - 1) as i128;
    let t = super::values::ceiling_for(k, x);
    let xi = x.floor() as u64;
    let in_range = |psi: i128, d12: i128| psi as f64 <= x || d12 as f64 <= km1 as f64 * x;

    let tally = match space {
        SpaceKind::Full => {
            // psi^full(N) >= N, so both conditions confine N to the scan bound
            let cert = certify_scan_bound(space, k, t)?;
            let limit = cert.scan_limit().expect("level envelope").max(xi).max(2);
            let sieve = build_spf_sieve(limit)?;
            (1..=limit)
                .into_par_iter()
                .fold(Tally::default, |mut acc, n| {
                    let (v, _, w) = level_values(space, n, &sieve);
                    let d12 = total12(space, k, n, &v, 1).expect("consistent tables");
                    if in_range(v.psi, d12) {
                        acc.add(n, w, thr);
                    }
                    acc
                })
                .reduce(Tally::default, Tally::merge)
        }
        _ => {
            let cert = certify_index_bound(space, k, t)?;
            let b = cert.psi_limit().expect("index envelope").max(xi);
            let sieve = build_spf_sieve((b + 1).max(2))?;
            fold_levels_with_psi_at_most(
                space,
                b,
                &sieve,
                Tally::default,
                |acc, s: &LevelState| {
                    let d12 = total12(space, k, s.n, &s.values, s.mu).expect("consistent tables");
                    if in_range(s.values.psi, d12) {
                        acc.add(s.n, s.omega, thr);
                    }
                },
                Tally::merge,
            )?
        }
    };
    Ok(CensusReport {
        space,
        k,
        x,
        omega_threshold: thr,
        candidates: tally.candidates,
        count: tally.count,
        squares: tally.squares,
        many_factors: tally.many,
        ratio: tally.count as f64 * x.ln() / x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factorize, squarefull_part};
    use crate::formulas::{dimension, discrepancy12, eval_all};

    fn w(k: u64) -> Weight {
        Weight::new(k).unwrap()
    }

    #[test]
    fn single_level_when_r_is_one() {
        let sieve = build_spf_sieve(10_000).unwrap();
        let s = delta_value_survey(SpaceKind::New, w(2), 1, None, 10_000, &[], &sieve).unwrap();
        assert_eq!(s.qualifying_levels, 1);
        assert_eq!(s.distinct_count, 1);
        assert_eq!(s.bound, 27.0);
        assert!(s.pass);
    }

    #[test]
    fn survey_matches_direct_enumeration() {
        let sieve = build_spf_sieve(20_000).unwrap();
        for (space, s) in [(SpaceKind::New, None), (SpaceKind::Min, None), (SpaceKind::Full, Some(8))] {
            let got = delta_value_survey(space, w(4), 3, s, 20_000, &[100, 5000], &sieve).unwrap();
            let mut want = BTreeSet::new();
            for n in 1..=20_000u64 {
                let f = factorize(n, None);
                if f.factors().len() >= 3 {
                    continue;
                }
                let ok = match space {
                    SpaceKind::Full => squarefull_part(&f) <= 8,
                    _ => n == 1 || !f.is_perfect_square(),
                };
                if ok {
                    want.insert(discrepancy12(space, w(4), &f).unwrap());
                }
            }
            assert_eq!(got.values12, want.into_iter().collect::<Vec<_>>(), "{space}");
            let c: Vec<usize> = got.checkpoints.iter().map(|c| c.distinct).collect();
            assert!(c.windows(2).all(|p| p[0] <= p[1]));
            assert_eq!(got.checkpoints.last().unwrap().limit, 20_000);
        }
    }

    #[test]
    fn full_survey_needs_cap() {
        let sieve = build_spf_sieve(100).unwrap();
        assert!(delta_value_survey(SpaceKind::Full, w(2), 2, None, 100, &[], &sieve).is_err());
    }

    #[test]
    fn census_threshold_at_e_to_the_e() {
        let x = std::f64::consts::E.powf(std::f64::consts::E);
        let c = exceptional_census(SpaceKind::New, w(2), x).unwrap();
        assert!((c.omega_threshold - 3.0).abs() < 1e-12);
    }

    #[test]
    fn census_matches_brute_force() {
        let x = 2000.0;
        for space in SpaceKind::ALL {
            let c = exceptional_census(space, w(2), x).unwrap();
            let thr = 3.0 * f64::ln(f64::ln(x));
            let mut want = 0;
            for n in 1..=1_000_000u64 {
                let f = factorize(n, None);
                let psi = eval_all(space, &f).psi as f64;
                let d = dimension(space, w(2), &f).unwrap().total as f64;
                if psi.min(12.0 * d) <= x && (f.factors().len() as f64 > thr || f.is_perfect_square()) {
                    want += 1;
                }
            }
            assert_eq!(c.count, want, "{space}");
        }
    }
}
