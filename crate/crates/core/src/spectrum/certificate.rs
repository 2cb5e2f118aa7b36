//! Tail certificates: proofs that only finitely many levels can have
//! dimension at most a target `T`, with the finite part made explicit.
//!
//! Every envelope starts from the same pointwise bound
//!
//! ```text
//! 12 d(N) >= (k-1) psi(N) - 6 nu_inf(N) - 7 * 2^omega(N) - 12 [k = 2]
//! ```
//!
//! (the elliptic terms are at most `7/12 * 2^omega` in absolute value) and
//! differs only in how `psi`, `nu_inf` and `2^omega` are controlled.
//!
//! - [`Envelope::Explicit`]: floating-point chain in `N` for the new and
//!   minimal spaces, using explicit totient and omega bounds, with 1% slack.
//! - [`Envelope::Primorial`]: exact integer chain in `N` for the full space,
//!   using `psi^full(N) >= N` and the primorial bound on `omega`.
//! - [`Envelope::Index`]: exact integer chain in `psi(N)` for the new and
//!   minimal spaces, using `nu_inf <= sqrt(psi)` and `omega` bounded by
//!   products of `q - 1` over odd primes `q`.

use serde::{Deserialize, Serialize};

use crate::arith::{build_spf_sieve, is_prime_u64};
use crate::formulas::{delta2, local_values, SpaceKind, Weight};
use crate::{Error, Result};

/// Largest level the explicit envelope will search.
pub const DEFAULT_SEARCH_MAX: u64 = 1 << 50;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Constants of the explicit envelope. They are fixed; a certificate that
/// carries anything else fails validation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplicitConstants {
    pub euler_gamma: f64,
    /// `N / phi(N) < e^gamma lnln N + c / lnln N` for `N >= 3`.
    pub totient_c: f64,
    /// `omega(N) <= c ln N / lnln N` for `N >= 3`.
    pub omega_c: f64,
    /// Primes below this enter the product lower bound for the new space.
    pub product_cutoff: u64,
    pub slack: f64,
}

impl ExplicitConstants {
    pub const STANDARD: ExplicitConstants = ExplicitConstants {
        euler_gamma: EULER_GAMMA,
        totient_c: 3.0,
        omega_c: 1.3841,
        product_cutoff: 10_000,
        slack: 0.01,
    };
}

/// Rigorous lower bound for `prod_p (1 - 1/(p(p-1)))`: the partial product
/// over `p < cutoff`, times `1 - 1/cutoff` for the rest, times a rounding
/// allowance.
pub fn product_lower_bound(cutoff: u64) -> f64 {
    let mut prod = 1.0f64;
    let mut n = 0u64;
    for p in 2..cutoff {
        if is_prime_u64(p) {
            let p = p as f64;
            prod *= 1.0 - 1.0 / (p * (p - 1.0));
            n += 1;
        }
    }
    prod * (1.0 - 1.0 / cutoff as f64) * (1.0 - 4.0 * (n + 2) as f64 * f64::EPSILON)
}

/// One inequality in a certificate chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub name: String,
    pub detail: String,
    pub holds: bool,
}

impl ChainCheck {
    fn new(name: &str, holds: bool, detail: String) -> Self {
        ChainCheck {
            name: name.to_string(),
            detail,
            holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Envelope {
    /// Every `N > scan_limit` has `d(N) > T`.
    Explicit {
        scan_limit: u64,
        constants: ExplicitConstants,
        /// Lower bound for `psi(N)/phi(N)` (new space) or 1 (minimal space).
        psi_coefficient: f64,
    },
    /// Every `N > scan_limit` has `d(N) > T`.
    Primorial { scan_limit: u64 },
    /// Every `N` with `d(N) <= T` has `psi(N) <= psi_limit`.
    Index { psi_limit: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailCertificate {
    pub space: SpaceKind,
    pub k: Weight,
    pub target: u64,
    pub envelope: Envelope,
    pub checks: Vec<ChainCheck>,
}

impl TailCertificate {
    /// Levels beyond this have dimension above the target, for level-type
    /// certificates.
    pub fn scan_limit(&self) -> Option<u64> {
        match self.envelope {
            Envelope::Explicit { scan_limit, .. } | Envelope::Primorial { scan_limit } => {
                Some(scan_limit)
            }
            Envelope::Index { .. } => None,
        }
    }

    pub fn psi_limit(&self) -> Option<u64> {
        match self.envelope {
            Envelope::Index { psi_limit } => Some(psi_limit),
            _ => None,
        }
    }

    /// Recomputes the whole chain from the parameters and checks that it
    /// reproduces this certificate and that every step holds.
    pub fn validate(&self) -> Result<()> {
        let fresh = match &self.envelope {
            Envelope::Explicit { scan_limit, .. } => {
                certify_explicit(self.space, self.k, self.target, (*scan_limit).max(16))
            }
            Envelope::Primorial { .. } => certify_primorial(self.space, self.k, self.target),
            Envelope::Index { .. } => certify_index(self.space, self.k, self.target),
        }
        .map_err(|e| Error::InvalidCertificate(format!("chain does not recompute: {e}")))?;
        if fresh.envelope != self.envelope {
            return Err(Error::InvalidCertificate(format!(
                "envelope does not match recomputation: stored {:?}, recomputed {:?}",
                self.envelope, fresh.envelope
            )));
        }
        if let Some(bad) = fresh.checks.iter().find(|c| !c.holds) {
            return Err(Error::InvalidCertificate(format!(
                "{}: {}",
                bad.name, bad.detail
            )));
        }
        if fresh.checks != self.checks {
            return Err(Error::InvalidCertificate(
                "stored chain differs from recomputation".into(),
            ));
        }
        Ok(())
    }

    /// Lower bound for `12 d(N)` implied by this certificate's envelope,
    /// given the exact `psi(N)`. For level-type envelopes this is the
    /// envelope at `N`, which ignores `psi`.
    pub fn lower_bound12(&self, n: u64, psi: u128) -> f64 {
        let km1 = self.k.get() - 1;
        match &self.envelope {
            Envelope::Explicit {
                constants,
                psi_coefficient,
                ..
            } => {
                let m = ExplicitModel::new(self.space, self.k, *constants, *psi_coefficient);
                m.lower12(n as f64)
            }
            Envelope::Primorial { .. } => {
                let j = count_breakpoints_le(&primorials(), n as u128);
                (km1 as f64) * n as f64 - 6.0 * (n as f64).sqrt() - 7.0 * 2f64.powi(j as i32)
            }
            Envelope::Index { .. } => {
                let j = count_breakpoints_le(&odd_prime_products(), psi);
                (km1 as f64) * psi as f64
                    - 6.0 * (psi as f64).sqrt()
                    - 7.0 * 2f64.powi(j as i32 + 1)
                    - 12.0 * delta2(self.k) as f64
            }
        }
    }
}

// ---------------------------------------------------------------------------
// explicit envelope

struct ExplicitModel {
    km1: f64,
    delta12: f64,
    c: ExplicitConstants,
    coef: f64,
    /// power of the totient bound in the psi lower bound
    a: f64,
    /// power of 2^omega dividing the psi lower bound
    b: f64,
}

impl ExplicitModel {
    fn new(space: SpaceKind, k: Weight, c: ExplicitConstants, coef: f64) -> Self {
        let (a, b) = match space {
            SpaceKind::New => (1.0, 0.0),
            _ => (2.0, 1.0),
        };
        ExplicitModel {
            km1: (k.get() - 1) as f64,
            delta12: 12.0 * delta2(k) as f64,
            c,
            coef,
            a,
            b,
        }
    }

    fn g(&self, n: f64) -> f64 {
        let ll = n.ln().ln();
        self.c.euler_gamma.exp() * ll + self.c.totient_c / ll
    }

    fn omega_bound(&self, n: f64) -> f64 {
        self.c.omega_c * n.ln() / n.ln().ln()
    }

    fn factor(&self, n: f64) -> f64 {
        self.km1 - 6.0 / n.sqrt()
    }

    fn main(&self, n: f64) -> f64 {
        let w = self.omega_bound(n);
        (1.0 - self.c.slack) * self.coef * n * self.factor(n)
            / (self.g(n).powf(self.a) * 2f64.powf(self.b * w))
    }

    fn err(&self, n: f64) -> f64 {
        7.0 * 2f64.powf(self.omega_bound(n))
    }

    fn lower12(&self, n: f64) -> f64 {
        self.main(n) - self.err(n) - self.delta12
    }

    /// Sufficient conditions (in `L = ln N`) for `main` and `main / err` to
    /// be increasing from `n` on.
    fn growth_margins(&self, n: f64) -> (f64, f64) {
        let l = n.ln();
        let ll = l.ln();
        let cw = self.c.omega_c * std::f64::consts::LN_2;
        let base = 1.0 - self.a / (l * ll);
        (base - self.b * cw / ll, base - (self.b + 1.0) * cw / ll)
    }

    fn eventually_above(&self, n: f64, target12: f64) -> bool {
        if n < 16.0 {
            return false;
        }
        let (m1, m2) = self.growth_margins(n);
        m1 > 0.0 && m2 > 0.0 && self.factor(n) > 0.0 && self.lower12(n) > target12
    }
}

fn explicit_coefficient(space: SpaceKind, c: &ExplicitConstants) -> f64 {
    match space {
        SpaceKind::New => product_lower_bound(c.product_cutoff),
        _ => 1.0,
    }
}

fn certify_explicit(space: SpaceKind, k: Weight, target: u64, search_max: u64) -> Result<TailCertificate> {
    if space == SpaceKind::Full {
        return Err(Error::InvalidInput(
            "the explicit envelope covers the new and minimal spaces; use the primorial envelope for full".into(),
        ));
    }
    let c = ExplicitConstants::STANDARD;
    let coef = explicit_coefficient(space, &c);
    let m = ExplicitModel::new(space, k, c, coef);
    let t12 = 12.0 * target as f64;
    if !m.eventually_above(search_max as f64, t12) {
        return Err(Error::EnvelopeFailure { target, search_max });
    }
    let (mut lo, mut hi) = (16u64, search_max);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if m.eventually_above(mid as f64, t12) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let x = lo;
    let xf = x as f64;
    let (m1, m2) = m.growth_margins(xf);
    let mut checks = vec![
        ChainCheck::new(
            "main_increasing",
            m1 > 0.0,
            format!("1 - a/(L lnL) - b*c*ln2/lnL = {m1:.6e} at N = {x}"),
        ),
        ChainCheck::new(
            "ratio_increasing",
            m2 > 0.0,
            format!("1 - a/(L lnL) - (b+1)*c*ln2/lnL = {m2:.6e} at N = {x}"),
        ),
        ChainCheck::new(
            "weight_factor_positive",
            m.factor(xf) > 0.0,
            format!("(k-1) - 6/sqrt(N) = {:.6e} at N = {x}", m.factor(xf)),
        ),
        ChainCheck::new(
            "envelope_exceeds_target",
            m.lower12(xf) > t12,
            format!("lower bound for 12d = {:.6e} > {t12:.6e} at N = {x}", m.lower12(xf)),
        ),
    ];
    // Grid sanity pass: the same conditions on a geometric grid over two
    // decades, plus direct comparison of consecutive envelope values.
    let mut grid_ok = true;
    let mut points = 0;
    let mut prev: Option<(f64, f64)> = None;
    let mut n = xf;
    while n <= xf * 100.0 {
        let cur = (m.main(n), m.main(n) / m.err(n));
        let monotone = prev.is_none_or(|(pm, pr)| cur.0 >= pm && cur.1 >= pr);
        grid_ok &= monotone && m.eventually_above(n, t12);
        prev = Some(cur);
        points += 1;
        n *= 1.01;
    }
    checks.push(ChainCheck::new(
        "grid_monotone",
        grid_ok,
        format!("{points} geometric grid points from N = {x}"),
    ));
    checks.push(ChainCheck::new(
        "coefficient",
        coef > 0.0 && coef <= 1.0,
        format!("psi lower-bound coefficient {coef:.12}"),
    ));
    Ok(TailCertificate {
        space,
        k,
        target,
        envelope: Envelope::Explicit {
            scan_limit: x,
            constants: c,
            psi_coefficient: coef,
        },
        checks,
    })
}

// ---------------------------------------------------------------------------
// exact envelopes

/// `1, 2, 6, 30, ...`: products of the first j primes.
fn primorials() -> Vec<u128> {
    breakpoints(|p| p as u128, 2)
}

/// `1, 2, 8, 48, ...`: products of `q - 1` over the first j odd primes.
fn odd_prime_products() -> Vec<u128> {
    breakpoints(|q| q as u128 - 1, 3)
}

fn breakpoints(step: impl Fn(u64) -> u128, first_prime: u64) -> Vec<u128> {
    let mut out = vec![1u128];
    let mut p = first_prime;
    loop {
        if is_prime_u64(p) {
            match out.last().unwrap().checked_mul(step(p)) {
                Some(v) => out.push(v),
                None => return out,
            }
        }
        p += 1;
    }
}

/// Number of breakpoints after the first that are `<= v`.
fn count_breakpoints_le(bp: &[u128], v: u128) -> usize {
    bp.partition_point(|&b| b <= v) - 1
}

/// Integer form of `slope v - 6 sqrt(v) - 7 * 2^w - extra > thr`.
fn exceeds(slope: u128, v: u128, w: u32, extra: u128, thr: u128) -> bool {
    let rhs = (7u128 << w) + extra + thr;
    let Some(lhs) = slope.checked_mul(v) else {
        return true;
    };
    if lhs <= rhs {
        return false;
    }
    let gap = lhs - rhs;
    gap.checked_mul(gap).is_none_or(|g2| g2 > 36 * v)
}

/// Largest `v >= 1` where the inequality fails, with the `omega` exponent
/// `offset + j(v)` and `j` counted by `bp`. Requires consecutive breakpoints
/// to at least double, which makes success at a breakpoint propagate to all
/// later ones.
fn last_failure(slope: u128, bp: &[u128], offset: u32, extra: u128, thr: u128) -> Result<u128> {
    const BRUTE: u128 = 64;
    let w = |v: u128| offset + count_breakpoints_le(bp, v) as u32;
    let mut last = 0u128;
    for v in 1..BRUTE {
        if !exceeds(slope, v, w(v), extra, thr) {
            last = v;
        }
    }
    for j in 0..bp.len() - 1 {
        let (start, end) = (bp[j].max(BRUTE), bp[j + 1] - 1);
        if start > end {
            continue;
        }
        let wj = offset + j as u32;
        if bp[j] >= BRUTE && exceeds(slope, bp[j], wj, extra, thr) {
            return Ok(last);
        }
        // v >= 64 > 9/slope^2, so the inequality is monotone inside the interval
        if exceeds(slope, end, wj, extra, thr) {
            let (mut lo, mut hi) = (start, end);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if exceeds(slope, mid, wj, extra, thr) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            if lo > start {
                last = lo - 1;
            }
        } else {
            last = end;
        }
    }
    Err(Error::Overflow("breakpoint table exhausted".into()))
}

fn doubling(bp: &[u128]) -> bool {
    bp.windows(2).all(|w| w[1] >= 2 * w[0])
}

fn certify_primorial(space: SpaceKind, k: Weight, target: u64) -> Result<TailCertificate> {
    if space != SpaceKind::Full {
        return Err(Error::InvalidInput("the primorial envelope covers the full space only".into()));
    }
    let km1 = (k.get() - 1) as u128;
    let bp = primorials();
    let thr = 12 * target as u128;
    let fail = last_failure(km1, &bp, 0, 0, thr)?;
    // the weight factor (k-1) - 6/sqrt(N) is non-negative from 36/(k-1)^2 on
    let valid_from = 36u128.div_ceil(km1 * km1).max(1);
    let x = fail.max(valid_from - 1).max(1);
    let scan_limit = u64::try_from(x).map_err(|_| Error::Overflow("scan limit".into()))?;
    let next = x + 1;
    let j = count_breakpoints_le(&bp, next) as u32;
    let checks = vec![
        ChainCheck::new(
            "psi_at_least_level",
            audit_full_psi(),
            "psi^full(p^e) >= p^e on audited prime powers".into(),
        ),
        ChainCheck::new(
            "cusp_bound",
            audit_cusp_ratio(space),
            "nu_inf(p^e)^2 p^e <= psi(p^e)^2 on audited prime powers".into(),
        ),
        ChainCheck::new(
            "breakpoints_double",
            doubling(&bp),
            format!("{} primorials, each at least twice the previous", bp.len()),
        ),
        ChainCheck::new(
            "weight_factor_nonnegative",
            (km1 * km1) * next >= 36,
            format!("(k-1)^2 N >= 36 for N >= {next}"),
        ),
        ChainCheck::new(
            "envelope_exceeds_target",
            exceeds(km1, next, j, 0, thr),
            format!("(k-1)N - 6 sqrt(N) - 7*2^{j} > {thr} at N = {next}"),
        ),
    ];
    Ok(TailCertificate {
        space,
        k,
        target,
        envelope: Envelope::Primorial { scan_limit },
        checks,
    })
}

fn certify_index(space: SpaceKind, k: Weight, target: u64) -> Result<TailCertificate> {
    if space == SpaceKind::Full {
        return Err(Error::InvalidInput(
            "the index envelope covers the new and minimal spaces; use the primorial envelope for full".into(),
        ));
    }
    let km1 = (k.get() - 1) as u128;
    let bp = odd_prime_products();
    let thr = 12 * target as u128;
    let extra = 12 * delta2(k) as u128;
    let fail = last_failure(km1, &bp, 1, extra, thr)?;
    let psi_limit = u64::try_from(fail.max(1)).map_err(|_| Error::Overflow("psi limit".into()))?;
    let next = fail.max(1) + 1;
    let j = count_breakpoints_le(&bp, next) as u32 + 1;
    let checks = vec![
        ChainCheck::new(
            "cusp_bound",
            audit_cusp_index(space),
            "nu_inf(p^e)^2 <= psi(p^e) on audited prime powers".into(),
        ),
        ChainCheck::new(
            "odd_prime_index",
            audit_odd_prime_index(space),
            "psi(p^e) >= p - 1 for odd p and psi(2^e) >= 1 on audited prime powers".into(),
        ),
        ChainCheck::new(
            "breakpoints_double",
            doubling(&bp),
            format!("{} products of q - 1, each at least twice the previous", bp.len()),
        ),
        ChainCheck::new(
            "envelope_exceeds_target",
            exceeds(km1, next, j, extra, thr),
            format!("(k-1)psi - 6 sqrt(psi) - 7*2^{j} - {extra} > {thr} at psi = {next}"),
        ),
    ];
    Ok(TailCertificate {
        space,
        k,
        target,
        envelope: Envelope::Index { psi_limit },
        checks,
    })
}

// ---------------------------------------------------------------------------
// local audits of the pointwise facts each envelope relies on

/// Prime powers `p^e` with `p < 2000` and `p^e < 2^bits`.
fn audited_prime_powers(bits: f64) -> impl Iterator<Item = (u64, u32)> {
    let sieve = build_spf_sieve(2000).expect("small sieve");
    let primes: Vec<u64> = sieve.primes().iter().map(|&p| p as u64).collect();
    primes.into_iter().flat_map(move |p| {
        let max_e = (bits / (p as f64).log2()).floor() as u32;
        (1..=max_e.max(1)).map(move |e| (p, e))
    })
}

fn audit_full_psi() -> bool {
    audited_prime_powers(100.0).all(|(p, e)| {
        local_values(SpaceKind::Full, p, e).is_ok_and(|v| v.psi >= (p as i128).pow(e))
    })
}

fn audit_cusp_ratio(space: SpaceKind) -> bool {
    // p^e psi^2 stays inside 128 bits
    audited_prime_powers(40.0).all(|(p, e)| {
        local_values(space, p, e).is_ok_and(|v| {
            let pe = (p as i128).pow(e);
            v.nu_inf >= 0
                && (v.nu_inf as u128)
                    .checked_mul(v.nu_inf as u128)
                    .and_then(|s| s.checked_mul(pe as u128))
                    .is_some_and(|l| {
                        (v.psi as u128).checked_mul(v.psi as u128).is_none_or(|r| l <= r)
                    })
        })
    })
}

fn audit_cusp_index(space: SpaceKind) -> bool {
    audited_prime_powers(100.0).all(|(p, e)| {
        local_values(space, p, e)
            .is_ok_and(|v| v.nu_inf >= 0 && v.nu_inf * v.nu_inf <= v.psi)
    })
}

fn audit_odd_prime_index(space: SpaceKind) -> bool {
    audited_prime_powers(100.0).all(|(p, e)| {
        local_values(space, p, e).is_ok_and(|v| {
            if p == 2 {
                v.psi >= 1
            } else {
                v.psi >= p as i128 - 1
            }
        })
    })
}

// ---------------------------------------------------------------------------
// entry points

/// Level-type certificate: every `N` beyond the returned scan limit has
/// `d(N) > target`. Uses the primorial envelope for the full space and the
/// explicit envelope otherwise, searching up to `search_max`.
pub fn certify_scan_bound(space: SpaceKind, k: Weight, target: u64) -> Result<TailCertificate> {
    certify_scan_bound_within(space, k, target, DEFAULT_SEARCH_MAX)
}

pub fn certify_scan_bound_within(
    space: SpaceKind,
    k: Weight,
    target: u64,
    search_max: u64,
) -> Result<TailCertificate> {
    let cert = match space {
        SpaceKind::Full => certify_primorial(space, k, target)?,
        _ => certify_explicit(space, k, target, search_max)?,
    };
    if cert.scan_limit().is_some_and(|x| x > search_max) {
        return Err(Error::EnvelopeFailure { target, search_max });
    }
    Ok(cert)
}

/// Index-type certificate for the new and minimal spaces: every `N` with
/// `d(N) <= target` has `psi(N)` at most the returned bound.
pub fn certify_index_bound(space: SpaceKind, k: Weight, target: u64) -> Result<TailCertificate> {
    certify_index(space, k, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;
    use crate::formulas::{dimension, eval_all};
    use rand::{Rng, SeedableRng};

    fn w(k: u64) -> Weight {
        Weight::new(k).unwrap()
    }

    #[test]
    fn product_bound_brackets_known_value() {
        let a = product_lower_bound(10_000);
        assert!(a < 0.373_955_813_6 && a > 0.3739, "{a}");
    }

    #[test]
    fn breakpoint_tables() {
        assert_eq!(&primorials()[..5], &[1, 2, 6, 30, 210]);
        assert_eq!(&odd_prime_products()[..5], &[1, 2, 8, 48, 480]);
        assert!(doubling(&primorials()) && doubling(&odd_prime_products()));
        assert_eq!(count_breakpoints_le(&primorials(), 29), 2);
        assert_eq!(count_breakpoints_le(&primorials(), 30), 3);
    }

    #[test]
    fn exceeds_matches_float() {
        for v in 1..2000u128 {
            for w in 0..4 {
                let f = 3.0 * v as f64 - 6.0 * (v as f64).sqrt() - 7.0 * 2f64.powi(w as i32) - 12.0;
                if (f - 100.0).abs() > 1e-6 {
                    assert_eq!(exceeds(3, v, w, 12, 100), f > 100.0, "v={v} w={w}");
                }
            }
        }
    }

    #[test]
    fn reproduction_bound_below_twenty_million() {
        let c = certify_scan_bound(SpaceKind::New, w(2), 67846).unwrap();
        let x = c.scan_limit().unwrap();
        assert!(x <= 20_000_000, "{x}");
        assert!(x > 1_000_000);
        c.validate().unwrap();
    }

    #[test]
    fn full_space_target_zero() {
        let c = certify_scan_bound(SpaceKind::Full, w(2), 0).unwrap();
        assert!(c.scan_limit().unwrap() >= 1);
        c.validate().unwrap();
    }

    #[test]
    fn infeasible_search_is_explicit_failure() {
        let r = certify_scan_bound_within(SpaceKind::Min, w(2), 67846, 10_000_000);
        assert!(matches!(r, Err(Error::EnvelopeFailure { .. })));
    }

    #[test]
    fn tampered_certificates_rejected() {
        let mut c = certify_scan_bound(SpaceKind::New, w(2), 1000).unwrap();
        if let Envelope::Explicit { scan_limit, .. } = &mut c.envelope {
            *scan_limit /= 2;
        }
        assert!(c.validate().is_err());

        let mut c = certify_index_bound(SpaceKind::Min, w(2), 1000).unwrap();
        c.envelope = Envelope::Index { psi_limit: 10 };
        assert!(c.validate().is_err());

        let mut c = certify_scan_bound(SpaceKind::Full, w(4), 1000).unwrap();
        c.checks.pop();
        assert!(c.validate().is_err());

        let mut c = certify_scan_bound(SpaceKind::New, w(2), 1000).unwrap();
        if let Envelope::Explicit { constants, .. } = &mut c.envelope {
            constants.omega_c = 1.0;
        }
        assert!(c.validate().is_err());
    }

    #[test]
    fn wrong_space_rejected() {
        assert!(certify_index_bound(SpaceKind::Full, w(2), 10).is_err());
        assert!(certify_explicit(SpaceKind::Full, w(2), 10, 1 << 40).is_err());
        assert!(certify_primorial(SpaceKind::New, w(2), 10).is_err());
    }

    // The envelope never exceeds the truth, and levels past the scan bound
    // really do have larger dimension.
    #[test]
    fn bounds_are_sound_on_random_levels() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for (space, k, t) in [
            (SpaceKind::New, 2, 500),
            (SpaceKind::Full, 2, 500),
            (SpaceKind::Full, 12, 20),
            (SpaceKind::New, 4, 50),
        ] {
            let c = certify_scan_bound(space, w(k), t).unwrap();
            let x = c.scan_limit().unwrap();
            for _ in 0..1000 {
                let n = rng.gen_range(x + 1..=10 * x);
                let f = factorize(n, None);
                let d = dimension(space, w(k), &f).unwrap().total;
                let psi = eval_all(space, &f).psi as u128;
                assert!(c.lower_bound12(n, psi) <= 12.0 * d as f64, "{space} N={n}");
                assert!(d > t as i128, "{space} N={n}");
            }
        }
        for space in [SpaceKind::New, SpaceKind::Min] {
            for k in [2, 4, 10] {
                let c = certify_index_bound(space, w(k), 200).unwrap();
                for n in 1..20_000u64 {
                    let f = factorize(n, None);
                    let d = dimension(space, w(k), &f).unwrap().total;
                    let psi = eval_all(space, &f).psi as u128;
                    assert!(c.lower_bound12(n, psi) <= 12.0 * d as f64 + 1e-9, "{space} N={n}");
                    if psi > c.psi_limit().unwrap() as u128 {
                        assert!(d > 200);
                    }
                }
            }
        }
    }

    #[test]
    fn index_bound_is_tight_enough() {
        // psi_limit is about 12T/(k-1) plus lower-order terms
        let c = certify_index_bound(SpaceKind::Min, w(2), 1_000_000).unwrap();
        let b = c.psi_limit().unwrap();
        assert!(b > 12_000_000 && b < 12_100_000, "{b}");
        c.validate().unwrap();
    }
}
