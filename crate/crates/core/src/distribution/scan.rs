use rayon::prelude::*;

use super::report::{DistReport, MAX_LISTED_VIOLATIONS};

const CHUNK: u64 = 1 << 14;

/// Per-chunk result of a parallel level scan.
pub(crate) struct ChunkOutcome<S> {
    pub stats: S,
    pub violations: Vec<String>,
    pub violation_count: u64,
}

/// Runs `check` over `1..=limit` in parallel chunks. Each call returns its
/// violations; statistics are folded per chunk and merged in level order,
/// so the outcome does not depend on scheduling.
pub(crate) fn scan_levels<S, F, M>(limit: u64, init: impl Fn() -> S + Sync, check: F, merge: M) -> ChunkOutcome<S>
where
    S: Send,
    F: Fn(u64, &mut S, &mut Vec<String>) + Sync,
    M: Fn(S, S) -> S,
{
    let chunks = limit.div_ceil(CHUNK);
    let parts: Vec<ChunkOutcome<S>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut stats = init();
            let mut v = Vec::new();
            let mut count = 0;
            for n in c * CHUNK + 1..=((c + 1) * CHUNK).min(limit) {
                let before = v.len();
                check(n, &mut stats, &mut v);
                count += (v.len() - before) as u64;
                v.truncate(MAX_LISTED_VIOLATIONS);
            }
            ChunkOutcome {
                stats,
                violations: v,
                violation_count: count,
            }
        })
        .collect();
    let mut out = ChunkOutcome {
        stats: init(),
        violations: Vec::new(),
        violation_count: 0,
    };
    for p in parts {
        out.stats = merge(out.stats, p.stats);
        out.violation_count += p.violation_count;
        for v in p.violations {
            if out.violations.len() < MAX_LISTED_VIOLATIONS {
                out.violations.push(v);
            }
        }
    }
    out
}

impl<S> ChunkOutcome<S> {
    pub(crate) fn into_report(self, report: &mut DistReport) -> S {
        report.violation_count += self.violation_count;
        report.violations.extend(self.violations);
        report.violations.truncate(MAX_LISTED_VIOLATIONS);
        self.stats
    }
}
