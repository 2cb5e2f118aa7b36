//! Whole-range consistency checks of the dimension formulas.

use super::report::{DistReport, ReportRow};
use super::scan::scan_levels;
use crate::arith::{build_spf_sieve, SpfSieve};
use crate::formulas::{total12, SpaceKind, Weight};
use crate::spectrum::{level_values, sieve_dimensions};
use crate::{Error, Result};

fn sieve_for(limit: u64) -> Result<SpfSieve> {
    if limit == 0 {
        return Err(Error::InvalidInput("limit must be positive".into()));
    }
    build_spf_sieve(limit.max(2))
}

fn dims12(n: u64, k: Weight, sieve: &SpfSieve) -> [std::result::Result<i128, String>; 3] {
    SpaceKind::ALL.map(|space| {
        let (v, mu, _) = level_values(space, n, sieve);
        let slot = if space == SpaceKind::Full { 1 } else { mu };
        total12(space, k, n, &v, slot).map_err(|e| e.to_string())
    })
}

/// Every space and weight yields a non-negative multiple of 12 at every
/// `N <= limit`.
pub fn integrality_audit(limit: u64, weights: &[Weight]) -> Result<DistReport> {
    let sieve = sieve_for(limit)?;
    let out = scan_levels(
        limit,
        || 0u64,
        |n, checked, viol| {
            for &k in weights {
                for r in dims12(n, k, &sieve) {
                    *checked += 1;
                    if let Err(e) = r {
                        viol.push(e);
                    }
                }
            }
        },
        |a, b| a + b,
    );
    let mut report = DistReport::new(format!("integrality and sign, N <= {limit}"));
    let checked = out.into_report(&mut report);
    let failures = report.violation_count;
    report.rows.push(
        ReportRow::new("integrality", limit as f64, failures as f64, 0.0, failures == 0)
            .with_note(format!("{checked} (space, k, N) evaluations")),
    );
    Ok(report)
}

/// `d^full >= d^new >= d^min` at every `N <= limit`.
pub fn monotonicity_audit(limit: u64, weights: &[Weight]) -> Result<DistReport> {
    let sieve = sieve_for(limit)?;
    let out = scan_levels(
        limit,
        || 0u64,
        |n, checked, viol| {
            for &k in weights {
                *checked += 1;
                match dims12(n, k, &sieve) {
                    [Ok(f), Ok(nw), Ok(m)] if f >= nw && nw >= m => {}
                    [f, nw, m] => viol.push(format!(
                        "k={k} N={n}: 12d full={f:?} new={nw:?} min={m:?}"
                    )),
                }
            }
        },
        |a, b| a + b,
    );
    let mut report = DistReport::new(format!("full >= new >= min, N <= {limit}"));
    let checked = out.into_report(&mut report);
    let failures = report.violation_count;
    report.rows.push(
        ReportRow::new("monotonicity", limit as f64, failures as f64, 0.0, failures == 0)
            .with_note(format!("{checked} (k, N) comparisons")),
    );
    Ok(report)
}

/// `d^new = d^min` at every squarefree `N <= limit`.
pub fn squarefree_coincidence_audit(limit: u64, weights: &[Weight]) -> Result<DistReport> {
    let sieve = sieve_for(limit)?;
    let out = scan_levels(
        limit,
        || 0u64,
        |n, checked, viol| {
            let (_, mu, _) = level_values(SpaceKind::New, n, &sieve);
            if mu == 0 {
                return;
            }
            for &k in weights {
                *checked += 1;
                let [_, nw, m] = dims12(n, k, &sieve);
                if nw != m {
                    viol.push(format!("k={k} N={n}: 12d new={nw:?} min={m:?}"));
                }
            }
        },
        |a, b| a + b,
    );
    let mut report = DistReport::new(format!("new = min on squarefree levels, N <= {limit}"));
    let checked = out.into_report(&mut report);
    let failures = report.violation_count;
    report.rows.push(
        ReportRow::new("squarefree coincidence", limit as f64, failures as f64, 0.0, failures == 0)
            .with_note(format!("{checked} (k, N) comparisons")),
    );
    Ok(report)
}

/// `d^full(N) = sum over M | N of sigma0(N/M) d^new(M)` for every
/// `N <= limit`, with the right side accumulated over multiples.
pub fn divisor_decomposition_audit(limit: u64, weights: &[Weight]) -> Result<DistReport> {
    let sieve = sieve_for(limit)?;
    let n = limit as usize;
    let mut tau = vec![0u64; n + 1];
    for d in 1..=n {
        for m in (d..=n).step_by(d) {
            tau[m] += 1;
        }
    }
    let mut report = DistReport::new(format!("divisor decomposition, N <= {limit}"));
    for &k in weights {
        let full = sieve_dimensions(SpaceKind::Full, k, limit, &sieve)?;
        let new = sieve_dimensions(SpaceKind::New, k, limit, &sieve)?;
        let mut sum = vec![0u64; n + 1];
        for (m, dn) in new.iter() {
            if dn == 0 {
                continue;
            }
            let m = m as usize;
            for (q, target) in (m..=n).step_by(m).enumerate() {
                sum[target] += tau[q + 1] * dn;
            }
        }
        let mut bad = 0u64;
        for (lvl, df) in full.iter() {
            if sum[lvl as usize] != df {
                bad += 1;
                report.violation(format!(
                    "k={k} N={lvl}: full={df}, divisor sum={}",
                    sum[lvl as usize]
                ));
            }
        }
        report.rows.push(ReportRow::new(
            format!("k={k}"),
            limit as f64,
            bad as f64,
            0.0,
            bad == 0,
        ));
    }
    Ok(report)
}

/// `psi^full >= psi^new >= psi^min >= 1` at every `N <= limit`.
pub fn psi_ordering_audit(limit: u64) -> Result<DistReport> {
    let sieve = sieve_for(limit)?;
    let out = scan_levels(
        limit,
        || (),
        |n, _, viol| {
            let [f, nw, m] = SpaceKind::ALL.map(|s| level_values(s, n, &sieve).0.psi);
            if !(f >= nw && nw >= m && m >= 1) {
                viol.push(format!("N={n}: psi full={f} new={nw} min={m}"));
            }
        },
        |_, _| (),
    );
    let mut report = DistReport::new(format!("psi ordering, N <= {limit}"));
    out.into_report(&mut report);
    let failures = report.violation_count;
    report.rows.push(ReportRow::new(
        "psi ordering",
        limit as f64,
        failures as f64,
        0.0,
        failures == 0,
    ));
    Ok(report)
}

/// All formula oracles at once, for weights `2..=max_weight`.
pub fn oracle_suite(limit: u64, max_weight: u64) -> Result<DistReport> {
    let weights: Vec<Weight> = Weight::up_to(max_weight).collect();
    if weights.is_empty() {
        return Err(Error::InvalidInput("max weight must be at least 2".into()));
    }
    let mut report = DistReport::new(format!("formula oracles, N <= {limit}, k <= {max_weight}"));
    report.absorb(divisor_decomposition_audit(limit, &weights)?);
    report.absorb(squarefree_coincidence_audit(limit, &weights)?);
    report.absorb(integrality_audit(limit, &weights)?);
    report.absorb(monotonicity_audit(limit, &weights)?);
    report.absorb(psi_ordering_audit(limit)?);
    Ok(report)
}
