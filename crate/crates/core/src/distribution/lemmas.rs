use serde::Serialize;

use super::report::{DistReport, ReportRow};
use super::scan::scan_levels;
use super::zeta::{eta_interval, zeta_interval};
use crate::arith::{
    build_spf_sieve, enumerate_squarefull, for_each_squarefull_factored, isqrt_u128, squarefree_flags,
};
use crate::formulas::{coeff_c2, coeff_c3, local_values, SpaceKind, Weight};
use crate::spectrum::level_values;
use crate::{Error, Result};

/// Largest cutoff the squarefull enumerations accept.
pub const MAX_SQUAREFULL_CUTOFF: u64 = 10_000_000_000_000;

#[derive(Clone, Default)]
struct NuStats {
    /// max of nu_inf^2 N / psi^2 per space
    cusp: [f64; 3],
    /// max of |12 c2 nu2 + 12 c3 nu3| / (7 2^omega) per space and weight
    elliptic: [[f64; 12]; 3],
}

impl NuStats {
    fn merge(mut self, o: NuStats) -> NuStats {
        for s in 0..3 {
            self.cusp[s] = self.cusp[s].max(o.cusp[s]);
            for k in 0..12 {
                self.elliptic[s][k] = self.elliptic[s][k].max(o.elliptic[s][k]);
            }
        }
        self
    }
}

/// Exact checks of `nu_inf >= 0`, `nu_inf^2 N <= psi^2` and
/// `|12 c2 nu2 + 12 c3 nu3| <= 7 * 2^omega` for every `N <= limit`, every
/// space and every weight `2..=24`.
pub fn verify_nu_bounds(limit: u64) -> Result<DistReport> {
    if limit == 0 {
        return Err(Error::InvalidInput("limit must be positive".into()));
    }
    let sieve = build_spf_sieve(limit.max(2))?;
    let weights: Vec<Weight> = Weight::up_to(24).collect();
    let out = scan_levels(
        limit,
        NuStats::default,
        |n, st, viol| {
            for (si, space) in SpaceKind::ALL.into_iter().enumerate() {
                let (v, _, w) = level_values(space, n, &sieve);
                let lhs = v.nu_inf * v.nu_inf * n as i128;
                let rhs = v.psi * v.psi;
                if v.nu_inf < 0 || lhs > rhs {
                    viol.push(format!(
                        "{space} N={n}: psi={} nu_inf={} nu2={} nu3={} (cusp bound)",
                        v.psi, v.nu_inf, v.nu2, v.nu3
                    ));
                }
                st.cusp[si] = st.cusp[si].max(lhs as f64 / rhs as f64);
                let cap = 7i128 << w;
                for (ki, &k) in weights.iter().enumerate() {
                    let e = (coeff_c2(k).num12 * v.nu2 + coeff_c3(k).num12 * v.nu3).abs();
                    if e > cap {
                        viol.push(format!(
                            "{space} k={k} N={n}: psi={} nu_inf={} nu2={} nu3={} omega={w} (elliptic bound)",
                            v.psi, v.nu_inf, v.nu2, v.nu3
                        ));
                    }
                    st.elliptic[si][ki] = st.elliptic[si][ki].max(e as f64 / cap as f64);
                }
            }
        },
        NuStats::merge,
    );
    let mut report = DistReport::new(format!("nu bounds, N <= {limit}"));
    let stats = out.into_report(&mut report);
    for (si, space) in SpaceKind::ALL.into_iter().enumerate() {
        let c = stats.cusp[si];
        report.rows.push(
            ReportRow::new(format!("{space} cusp ratio"), limit as f64, c, 1.0, c <= 1.0)
                .with_note("max nu_inf^2 N / psi^2"),
        );
        for (ki, k) in weights.iter().enumerate() {
            let e = stats.elliptic[si][ki];
            report.rows.push(
                ReportRow::new(format!("{space} k={k} elliptic ratio"), limit as f64, e, 1.0, e <= 1.0)
                    .with_note("max |12 c2 nu2 + 12 c3 nu3| / (7 * 2^omega)"),
            );
        }
    }
    Ok(report)
}

/// Neumaier-compensated sum of terms given in the order they should be added.
fn compensated_sum(terms: impl IntoIterator<Item = f64>) -> (f64, u64) {
    let (mut sum, mut c, mut n) = (0.0f64, 0.0f64, 0u64);
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            c += (sum - s) + t;
        } else {
            c += (t - s) + sum;
        }
        sum = s;
        n += 1;
    }
    (sum + c, n)
}

/// Allowance for rounding in a sum of `n` positive terms.
fn rounding_allowance(sum: f64, n: u64) -> f64 {
    sum * (n as f64 + 4.0) * f64::EPSILON
}

/// `sum over squarefull N > y of 1/N`, bounded above by writing
/// `N = a^2 b^3` with `b` squarefree.
fn reciprocal_tail_bound(y: u64) -> f64 {
    let mut b_max = (y as f64).cbrt() as u64 + 1;
    while b_max.pow(3) > y {
        b_max -= 1;
    }
    let b_max = b_max.max(1);
    let squarefree = squarefree_flags(b_max as usize + 1);
    let mut sum = 0.0;
    for b in 1..=b_max {
        if squarefree[b as usize] {
            let a = isqrt_u128((y / (b * b * b)) as u128) as f64;
            sum += 1.0 / ((b * b * b) as f64 * a);
        }
    }
    let z2 = zeta_interval(2.0).hi;
    (sum + z2 / (2.0 * (b_max as f64).powi(2))) * (1.0 + 1e-9)
}

/// Checks `#{N squarefull <= x} <= eta sqrt(x)` and
/// `sum_{N squarefull > x} 1/N <= 2 eta / sqrt(x)` at every grid point. The
/// tail is summed up to `x * cutoff_factor` and the rest is bounded.
pub fn verify_eta_bounds(grid: &[u64], cutoff_factor: u64) -> Result<DistReport> {
    let eta = eta_interval();
    let mut report = DistReport::new("squarefull counts and reciprocal tails");
    report.rows.push(
        ReportRow::new("eta", 0.0, eta.mid(), 2.17325, format!("{:.5}", eta.mid()) == "2.17325")
            .with_aux(eta.width())
            .with_note(format!("zeta(3/2)/zeta(3) in [{:.12}, {:.12}]", eta.lo, eta.hi)),
    );
    for &x in grid {
        if x == 0 {
            return Err(Error::InvalidInput("grid points must be positive".into()));
        }
        let y = x
            .checked_mul(cutoff_factor)
            .filter(|&y| y <= MAX_SQUAREFULL_CUTOFF && cutoff_factor >= 100)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "cutoff {x} * {cutoff_factor} must be at least 100x and at most {MAX_SQUAREFULL_CUTOFF}"
                ))
            })?;
        let all = enumerate_squarefull(y);
        let count = all.partition_point(|&n| n <= x);
        let reference = eta.lo * (x as f64).sqrt();
        report.rows.push(
            ReportRow::new("count", x as f64, count as f64, reference, (count as f64) <= reference)
                .with_note("squarefull N <= x against eta sqrt(x)"),
        );
        let (partial, n) = compensated_sum(all[count..].iter().map(|&m| 1.0 / m as f64));
        let trunc = reciprocal_tail_bound(y);
        let total = partial + trunc + rounding_allowance(partial, n);
        let reference = 2.0 * eta.lo / (x as f64).sqrt();
        report.rows.push(
            ReportRow::new("tail", x as f64, total, reference, total <= reference)
                .with_aux(trunc)
                .with_note(format!("sum to {y} plus truncation bound (aux)")),
        );
    }
    Ok(report)
}

/// Upper bound for the reciprocal index sum over squarefull `N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailSum {
    pub space: SpaceKind,
    pub x: u64,
    pub cutoff: u64,
    /// Sum over squarefull `N` in `(x, cutoff]`.
    pub partial: f64,
    pub terms: u64,
    /// Bound for everything beyond the cutoff, plus rounding.
    pub error_bound: f64,
    /// `(partial + error_bound) sqrt(x) / ln x`.
    pub ratio: f64,
}

impl TailSum {
    pub fn upper(&self) -> f64 {
        self.partial + self.error_bound
    }
}

const RANKIN_PRIMES: u64 = 10_000;

/// Lower bound `p^e (1 - 1/p)^2 / 2` for `psi(p^e)` in every space.
fn local_floor(p: f64, e: i32) -> f64 {
    p.powi(e) * (1.0 - 1.0 / p).powi(2) / 2.0
}

/// Upper bound for `sum over squarefull N > y of 1/psi(N)` by Rankin's
/// method: for `0 < s < 1/2` the sum is at most
/// `y^-s prod_p (1 + sum_{e >= 2} p^{es} / psi(p^e))`. Exact local values
/// are used for `p < 10^4` and small `e`, the local floor elsewhere.
pub fn rankin_tail_bound(space: SpaceKind, y: u64) -> Result<f64> {
    let sieve = build_spf_sieve(RANKIN_PRIMES)?;
    let primes: Vec<u64> = sieve.primes().iter().map(|&p| p as u64).collect();
    // the local floor must hold wherever it is used
    for &p in primes.iter().take(50) {
        for e in 2..=40u32 {
            if (p as f64).powi(e as i32) > 1e30 {
                break;
            }
            let psi = local_values(space, p, e)?.psi as f64;
            if psi < local_floor(p as f64, e as i32) * (1.0 - 1e-12) {
                return Err(Error::InvalidInput(format!("local floor fails at {p}^{e}")));
            }
        }
    }
    let big_p = RANKIN_PRIMES as f64;
    let ly = (y as f64).ln();
    let mut best = f64::INFINITY;
    let mut s = 0.05;
    while s < 0.495 {
        let mut log_prod = 0.0;
        for &p in &primes {
            let pf = p as f64;
            let mut inner = 0.0;
            let mut e = 2;
            while pf.powi(e) < 1e27 {
                let psi = local_values(space, p, e as u32)?.psi as f64;
                inner += pf.powf(e as f64 * s) / psi;
                e += 1;
            }
            // remaining exponents via the local floor, as a geometric series
            let r = pf.powf(s - 1.0);
            inner += 2.0 / (1.0 - 1.0 / pf).powi(2) * r.powi(e) / (1.0 - r);
            log_prod += inner.ln_1p();
        }
        let c = 2.0 * (big_p / (big_p - 1.0)).powi(2) / (1.0 - big_p.powf(s - 1.0));
        log_prod += c * big_p.powf(2.0 * s - 1.0) / (1.0 - 2.0 * s);
        best = best.min((log_prod - s * ly).exp());
        s += 0.005;
    }
    Ok(best * (1.0 + 1e-9))
}

/// `sum over squarefull N > x of 1/psi(N)`, summed exactly to `cutoff` in
/// descending order of terms, with a rigorous bound for the rest.
pub fn squarefull_reciprocal_tail(space: SpaceKind, x: u64, cutoff: u64) -> Result<TailSum> {
    if x < 2 {
        return Err(Error::Domain("x must be at least 2".into()));
    }
    if cutoff < x.saturating_mul(100) || cutoff > MAX_SQUAREFULL_CUTOFF {
        return Err(Error::InvalidInput(format!(
            "cutoff {cutoff} must lie between 100x = {} and {MAX_SQUAREFULL_CUTOFF}",
            x.saturating_mul(100)
        )));
    }
    let root = isqrt_u128(cutoff as u128) as u64 + 1;
    let sieve = build_spf_sieve(root.max(2))?;
    let mut terms_desc: Vec<f64> = Vec::new();
    for_each_squarefull_factored(cutoff, &sieve, |n, f| {
        if n > x {
            let psi: u128 = f
                .iter()
                .map(|pp| local_values(space, pp.p, pp.e).expect("positive exponent").psi as u128)
                .product();
            terms_desc.push(1.0 / psi as f64);
        }
    });
    terms_desc.sort_unstable_by(|a, b| b.total_cmp(a));
    let (partial, terms) = compensated_sum(terms_desc);
    let trunc = rankin_tail_bound(space, cutoff)?;
    if trunc >= partial {
        return Err(Error::InvalidInput(format!(
            "cutoff {cutoff} too small: truncation bound {trunc:.3e} exceeds the partial sum {partial:.3e}"
        )));
    }
    let error_bound = trunc + rounding_allowance(partial, terms);
    let ratio = (partial + error_bound) * (x as f64).sqrt() / (x as f64).ln();
    Ok(TailSum {
        space,
        x,
        cutoff,
        partial,
        terms,
        error_bound,
        ratio,
    })
}

/// Default cutoff for reciprocal tails at `x`.
pub fn default_tail_cutoff(x: u64) -> u64 {
    x.saturating_mul(10_000_000).clamp(1_000_000_000_000, MAX_SQUAREFULL_CUTOFF)
}

/// Reciprocal tail ratios for every space on a grid, each compared against
/// `ceiling`.
pub fn squarefull_tail_report(grid: &[u64], ceiling: f64) -> Result<DistReport> {
    let mut report = DistReport::new("squarefull reciprocal index tails");
    for space in SpaceKind::ALL {
        for &x in grid {
            let t = squarefull_reciprocal_tail(space, x, default_tail_cutoff(x))?;
            report.rows.push(
                ReportRow::new(format!("{space} ratio"), x as f64, t.ratio, ceiling, t.ratio <= ceiling)
                    .with_aux(t.error_bound)
                    .with_note(format!("sum {:.6e} over {} terms to {}", t.partial, t.terms, t.cutoff)),
            );
        }
    }
    Ok(report)
}
