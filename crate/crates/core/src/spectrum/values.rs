use serde::Serialize;

use super::certificate::{
    certify_index_bound, certify_scan_bound_within, Envelope, TailCertificate,
};
use super::enumerate::fold_levels_with_psi_at_most;
use super::table::{sieve_dimensions, DimensionTable};
use crate::arith::{build_spf_sieve, factorize, SpfSieve};
use crate::formulas::{dimension, total12, SpaceKind, Weight};
use crate::{Error, Result};

/// Largest scan the automatic method will run before switching to the
/// index envelope.
pub const AUTO_LEVEL_SCAN_MAX: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Pick per space and target.
    Auto,
    /// Scan all levels up to a level-type certificate's bound.
    Level,
    /// Enumerate all levels below an index-type certificate's bound.
    Index,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "level" => Ok(Method::Level),
            "index" => Ok(Method::Index),
            _ => Err(Error::InvalidInput(format!(
                "unknown method {s:?} (expected auto, level or index)"
            ))),
        }
    }
}

/// Every dimension `0..=max_certified` with the number of levels attaining
/// it and the smallest such level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValueSpectrum {
    pub space: SpaceKind,
    pub k: Weight,
    /// Largest level that contributed to the spectrum.
    pub limit: u64,
    pub max_certified: u64,
    #[serde(skip)]
    counts: Vec<u32>,
    #[serde(skip)]
    witnesses: Vec<u64>,
}

#[derive(Clone)]
struct Acc {
    counts: Vec<u32>,
    witnesses: Vec<u64>,
    limit: u64,
}

impl Acc {
    fn new(t: u64) -> Self {
        Acc {
            counts: vec![0; t as usize + 1],
            witnesses: vec![u64::MAX; t as usize + 1],
            limit: 0,
        }
    }

    fn add(&mut self, d: u64, n: u64) {
        if let Some(c) = self.counts.get_mut(d as usize) {
            *c += 1;
            let w = &mut self.witnesses[d as usize];
            *w = (*w).min(n);
            self.limit = self.limit.max(n);
        }
    }

    fn merge(mut self, o: Acc) -> Acc {
        for i in 0..self.counts.len() {
            self.counts[i] += o.counts[i];
            self.witnesses[i] = self.witnesses[i].min(o.witnesses[i]);
        }
        self.limit = self.limit.max(o.limit);
        self
    }
}

impl ValueSpectrum {
    fn from_acc(space: SpaceKind, k: Weight, t: u64, a: Acc) -> Self {
        ValueSpectrum {
            space,
            k,
            limit: a.limit,
            max_certified: t,
            counts: a.counts,
            witnesses: a.witnesses,
        }
    }

    /// Spectrum from a level-type certificate and a table reaching its scan
    /// limit.
    pub fn from_table(cert: &TailCertificate, table: &DimensionTable) -> Result<Self> {
        let x = check_level_cert(cert, table)?;
        let mut acc = Acc::new(cert.target);
        for (n, d) in table.iter().take(x as usize) {
            acc.add(d, n);
        }
        Ok(Self::from_acc(cert.space, cert.k, cert.target, acc))
    }

    /// Spectrum from an index-type certificate, enumerating every level
    /// whose index is within the certified bound. `sieve` must reach one
    /// past that bound.
    pub fn from_index_walk(cert: &TailCertificate, sieve: &SpfSieve) -> Result<Self> {
        cert.validate()?;
        let Envelope::Index { psi_limit } = cert.envelope else {
            return Err(Error::InvalidCertificate("expected an index envelope".into()));
        };
        let (space, k, t) = (cert.space, cert.k, cert.target);
        let t12 = 12 * t as i128;
        let failure = std::sync::Mutex::new(None);
        let acc = fold_levels_with_psi_at_most(
            space,
            psi_limit,
            sieve,
            || Acc::new(t),
            |acc, s| {
                // cheap screen: 12d >= (k-1)psi - 6 sqrt(psi) - 7*2^omega - 12
                let km1 = (k.get() - 1) as i128;
                if km1 * s.values.psi - 6 * s.values.psi.isqrt() - 7 * (1i128 << s.omega) - 18 > t12 {
                    return;
                }
                match total12(space, k, s.n, &s.values, s.mu) {
                    Ok(d12) => acc.add((d12 / 12) as u64, s.n),
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e.to_string());
                    }
                }
            },
            Acc::merge,
        )?;
        if let Some(e) = failure.into_inner().unwrap() {
            return Err(Error::InvalidInput(e));
        }
        Ok(Self::from_acc(space, k, t, acc))
    }

    /// Certified spectrum of `d <= target`, choosing the envelope by
    /// `method`. Builds its own sieve.
    pub fn build(space: SpaceKind, k: Weight, target: u64, method: Method) -> Result<Self> {
        let (s, _) = build_spectrum(space, k, target, method)?;
        Ok(s)
    }

    pub fn multiplicity(&self, d: u64) -> Option<u32> {
        self.counts.get(d as usize).copied()
    }

    /// Smallest level with dimension `d`, if any.
    pub fn witness(&self, d: u64) -> Option<u64> {
        self.witnesses.get(d as usize).copied().filter(|&w| w != u64::MAX)
    }

    pub fn is_attained(&self, d: u64) -> Result<bool> {
        if d > self.max_certified {
            return Err(Error::Uncertified {
                requested: d,
                certified: self.max_certified,
            });
        }
        Ok(self.counts[d as usize] > 0)
    }

    /// Number of distinct attained values `<= t`.
    pub fn count_distinct_upto(&self, t: u64) -> Result<u64> {
        if t > self.max_certified {
            return Err(Error::Uncertified {
                requested: t,
                certified: self.max_certified,
            });
        }
        Ok(self.counts[..=t as usize].iter().filter(|&&c| c > 0).count() as u64)
    }

    /// `D(x)`: distinct attained values `<= (k-1) x / 12`.
    pub fn count_distinct(&self, x: f64) -> Result<u64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("x must be non-negative, got {x}")));
        }
        let t = ceiling_for(self.k, x);
        self.count_distinct_upto(t)
    }

    /// Certified missing values in `0..=max_certified`.
    pub fn missing(&self) -> Vec<u64> {
        (0..=self.max_certified)
            .filter(|&d| self.counts[d as usize] == 0)
            .collect()
    }

    pub fn attained_count(&self) -> u64 {
        self.counts.iter().filter(|&&c| c > 0).count() as u64
    }

    /// Re-derives every witness through the single-level formula.
    pub fn verify_witnesses(&self) -> Result<()> {
        for d in 0..=self.max_certified {
            if let Some(n) = self.witness(d) {
                let got = dimension(self.space, self.k, &factorize(n, None))?.total;
                if got != d as i128 {
                    return Err(Error::InvalidInput(format!(
                        "witness N={n} for d={d} has dimension {got}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `floor((k-1) x / 12)`, computed without going through a float product
/// when `x` is integral.
pub fn ceiling_for(k: Weight, x: f64) -> u64 {
    let km1 = k.get() - 1;
    if x.fract() == 0.0 && x < 2f64.powi(53) {
        (km1 as u128 * x as u128 / 12) as u64
    } else {
        (km1 as f64 * x / 12.0).floor() as u64
    }
}

fn check_level_cert(cert: &TailCertificate, table: &DimensionTable) -> Result<u64> {
    cert.validate()?;
    let x = cert
        .scan_limit()
        .ok_or_else(|| Error::InvalidCertificate("expected a level-type envelope".into()))?;
    if cert.space != table.space || cert.k != table.k {
        return Err(Error::InvalidCertificate(format!(
            "certificate for ({}, k={}) does not match table ({}, k={})",
            cert.space, cert.k, table.space, table.k
        )));
    }
    if x > table.limit {
        return Err(Error::InvalidCertificate(format!(
            "scan limit {x} exceeds table limit {}",
            table.limit
        )));
    }
    Ok(x)
}

/// Dimensions `<= target` attained by no level at all. Refuses to answer
/// unless the certificate validates and the table reaches its scan limit.
pub fn missing_values(
    space: SpaceKind,
    k: Weight,
    target: u64,
    cert: &TailCertificate,
    table: &DimensionTable,
) -> Result<Vec<u64>> {
    if cert.space != space || cert.k != k || cert.target != target {
        return Err(Error::InvalidCertificate(format!(
            "certificate is for ({}, k={}, T={}), not ({space}, k={k}, T={target})",
            cert.space, cert.k, cert.target
        )));
    }
    Ok(ValueSpectrum::from_table(cert, table)?.missing())
}

/// Certificate and spectrum together, as the CLI reports them.
pub fn build_spectrum(
    space: SpaceKind,
    k: Weight,
    target: u64,
    method: Method,
) -> Result<(ValueSpectrum, TailCertificate)> {
    let method = match (method, space) {
        (Method::Index, SpaceKind::Full) => {
            return Err(Error::InvalidInput(
                "the index method covers the new and minimal spaces".into(),
            ))
        }
        (Method::Auto, SpaceKind::Full) => Method::Level,
        (Method::Auto, _) => match certify_scan_bound_within(space, k, target, AUTO_LEVEL_SCAN_MAX) {
            Ok(_) => Method::Level,
            Err(Error::EnvelopeFailure { .. }) => Method::Index,
            Err(e) => return Err(e),
        },
        (m, _) => m,
    };
    match method {
        Method::Level => {
            let cert = certify_scan_bound_within(space, k, target, u32::MAX as u64 - 1)?;
            let x = cert.scan_limit().expect("level envelope").max(2);
            let sieve = build_spf_sieve(x)?;
            let table = sieve_dimensions(space, k, x, &sieve)?;
            drop(sieve);
            Ok((ValueSpectrum::from_table(&cert, &table)?, cert))
        }
        _ => {
            let cert = certify_index_bound(space, k, target)?;
            let b = cert.psi_limit().expect("index envelope");
            let sieve = build_spf_sieve((b + 1).max(2))?;
            Ok((ValueSpectrum::from_index_walk(&cert, &sieve)?, cert))
        }
    }
}
