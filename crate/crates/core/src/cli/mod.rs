//! The `gamma0-dims` command line.
//!
//! Exit codes: 0 success, 1 usage, 2 computation or certification failure
//! (including failed verification checks), 3 I/O.

mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::arith::{build_spf_sieve, factorize};
use crate::distribution::{
    density_trend, oracle_suite, squarefull_tail_report, verify_eta_bounds, verify_nu_bounds,
    DistReport, FordConstants, ReportRow,
};
use crate::formulas::{dimension, SpaceKind, Weight};
use crate::spectrum::{
    build_spectrum, ceiling_for, certify_scan_bound_within, delta_value_survey,
    exceptional_census, load_cached, sieve_dimensions, store_cached, write_table, Method,
    ValueSpectrum, CACHE_DIR_ENV,
};
use crate::Error;

pub use output::SCHEMA_VERSION;
use output::{csv_header, report_csv};

/// Ceiling for `sum_{N squarefull > x} 1/psi(N) * sqrt(x) / ln x`, pinned
/// from observed ratios with margin.
pub const TAIL_RATIO_CEILING: f64 = 4.0;

/// Ceiling for the exceptional-level ratio `count ln x / x`, pinned from
/// observed ratios with margin.
pub const CENSUS_RATIO_CEILING: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "gamma0-dims", version, about = "Exact dimensions of cuspform spaces for Gamma0(N)")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write output here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Directory for cached dimension tables (overrides the environment).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    /// full, new or min.
    #[arg(long, value_parser = parse_space)]
    pub space: SpaceKind,
    /// Even weight k >= 2.
    #[arg(long, value_parser = parse_weight)]
    pub weight: Weight,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension of a single space with its five terms.
    Dim {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        level: u64,
    },
    /// Dimensions for every level up to a limit.
    Scan {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        limit: u64,
        /// Write the binary table format (requires --output).
        #[arg(long)]
        binary: bool,
    },
    /// Certified list of dimensions up to a target that no level attains.
    Missing {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        target: u64,
        #[arg(long, value_parser = parse_method, default_value = "auto")]
        method: Method,
    },
    /// Distinct attained dimensions D(x) and the attained-value density.
    Spectrum {
        #[command(flatten)]
        space: SpaceArgs,
        /// Comma-separated x values.
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<f64>,
        #[arg(long, value_parser = parse_method, default_value = "auto")]
        method: Method,
        /// Constant C of the reference shape.
        #[arg(long)]
        ford_c: Option<f64>,
        /// Constant D of the reference shape; enables the comparison column.
        #[arg(long)]
        ford_d: Option<f64>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        opts: VerifyArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Suite {
    NuBounds,
    Eta,
    SquarefullTail,
    DeltaValues,
    Exceptions,
    Oracles,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Level limit (nu_bounds, delta_values, oracles).
    #[arg(long)]
    pub limit: Option<u64>,
    /// Largest weight (oracles).
    #[arg(long, default_value_t = 12)]
    pub max_weight: u64,
    /// Weight (delta_values, exceptions).
    #[arg(long, value_parser = parse_weight, default_value = "2")]
    pub weight: Weight,
    /// Comma-separated grid (eta, squarefull_tail, exceptions).
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    /// Tail sums run to grid point times this factor (eta).
    #[arg(long, default_value_t = 10_000)]
    pub cutoff_factor: u64,
    /// Largest r (delta_values).
    #[arg(long, default_value_t = 4)]
    pub r_max: u32,
    /// Squarefull caps for the full space (delta_values).
    #[arg(long, value_delimiter = ',', default_value = "1,4,8")]
    pub s_values: Vec<u64>,
    /// Intermediate checkpoint (delta_values).
    #[arg(long, default_value_t = 100_000)]
    pub checkpoint: u64,
    /// Ratio ceiling (squarefull_tail, exceptions); defaults to the pinned constant.
    #[arg(long)]
    pub ceiling: Option<f64>,
}

fn parse_space(s: &str) -> Result<SpaceKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_weight(s: &str) -> Result<Weight, String> {
    let k: u64 = s.parse().map_err(|e| format!("{e}"))?;
    Weight::new(k).map_err(|e| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Failure { code: 1, message: m.into() }
    }

    fn computation(m: impl Into<String>) -> Self {
        Failure { code: 2, message: m.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Cache(_) => 3,
            Error::InvalidInput(_) | Error::InvalidWeight(_) | Error::Domain(_) | Error::SieveLimit(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 3, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli) -> CliResult<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::usage("--threads must be positive"));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Failure::computation(format!("thread pool: {e}")))?;
    let body = pool.install(|| produce(cli))?;
    write_output(cli, &body)
}

enum Body {
    Text(String),
    Bytes(Vec<u8>),
    /// A report whose failures still decide the exit code.
    Report(String, u64),
}

fn write_output(cli: &Cli, body: &Body) -> CliResult<()> {
    let bytes: &[u8] = match body {
        Body::Text(s) | Body::Report(s, _) => s.as_bytes(),
        Body::Bytes(b) => b,
    };
    match &cli.output {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(bytes)?;
            w.flush()?;
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    if let Body::Report(_, failures) = body {
        if *failures > 0 {
            return Err(Failure::computation(format!("{failures} check(s) failed")));
        }
        eprintln!("all checks passed");
    }
    Ok(())
}

fn cache_dir(cli: &Cli) -> Option<PathBuf> {
    cli.cache_dir
        .clone()
        .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
}

fn produce(cli: &Cli) -> CliResult<Body> {
    match &cli.command {
        Command::Dim { space, level } => cmd_dim(cli, space, *level),
        Command::Scan { space, limit, binary } => cmd_scan(cli, space, *limit, *binary),
        Command::Missing { space, target, method } => cmd_missing(cli, space, *target, *method),
        Command::Spectrum {
            space,
            grid,
            method,
            ford_c,
            ford_d,
        } => cmd_spectrum(cli, space, grid, *method, *ford_c, *ford_d),
        Command::Verify { suite, opts } => cmd_verify(cli, *suite, opts),
    }
}

fn cmd_dim(cli: &Cli, a: &SpaceArgs, level: u64) -> CliResult<Body> {
    if level == 0 {
        return Err(Failure::usage("--level must be positive"));
    }
    let d = dimension(a.space, a.weight, &factorize(level, None))?;
    let terms = d.terms();
    Ok(Body::Text(match cli.format {
        Format::Json => {
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "space": d.space,
                "k": d.k,
                "N": d.n,
                "psi": d.psi.to_string(),
                "nu_inf": d.nu_inf.to_string(),
                "nu2": d.nu2.to_string(),
                "nu3": d.nu3.to_string(),
                "mu_term": d.mu_term,
                "terms_twelfths": terms.iter().map(|t| t.num12.to_string()).collect::<Vec<_>>(),
                "total": d.total.to_string(),
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        Format::Csv => {
            let mut s = csv_header("dimension", &[]);
            s.push_str("space,k,N,psi_12ths,nu_inf_12ths,nu2_12ths,nu3_12ths,delta_12ths,total\n");
            s.push_str(&format!("{},{},{}", d.space, d.k, d.n));
            for t in terms {
                s.push_str(&format!(",{}", t.num12));
            }
            s.push_str(&format!(",{}\n", d.total));
            s
        }
    }))
}

fn cmd_scan(cli: &Cli, a: &SpaceArgs, limit: u64, binary: bool) -> CliResult<Body> {
    if limit == 0 {
        return Err(Failure::usage("--limit must be positive"));
    }
    if binary && cli.output.is_none() {
        return Err(Failure::usage("--binary needs --output"));
    }
    let cached = cache_dir(cli).and_then(|d| load_cached(&d, a.space, a.weight, limit));
    let table = match cached {
        Some(t) => t,
        None => {
            let sieve = build_spf_sieve(limit.max(2))?;
            let t = sieve_dimensions(a.space, a.weight, limit, &sieve)?;
            if let Some(d) = cache_dir(cli) {
                store_cached(&d, &t)?;
            }
            t
        }
    };
    if binary {
        let mut buf = Vec::new();
        write_table(&table, &mut buf)?;
        return Ok(Body::Bytes(buf));
    }
    Ok(Body::Text(match cli.format {
        Format::Json => {
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "space": table.space,
                "k": table.k,
                "limit": table.limit,
                "dims": table.dims(),
            });
            format!("{}\n", serde_json::to_string(&v).expect("json"))
        }
        Format::Csv => {
            let mut s = csv_header(
                "dimension-table",
                &[
                    ("space", a.space.to_string()),
                    ("weight", a.weight.to_string()),
                    ("limit", limit.to_string()),
                ],
            );
            s.reserve(table.dims().len() * 12);
            s.push_str("N,dim\n");
            for (n, d) in table.iter() {
                s.push_str(&n.to_string());
                s.push(',');
                s.push_str(&d.to_string());
                s.push('\n');
            }
            s
        }
    }))
}

/// Spectrum for `d <= target`; level scans go through the table cache when
/// one is configured.
fn spectrum_for(
    cli: &Cli,
    space: SpaceKind,
    k: Weight,
    target: u64,
    method: Method,
) -> CliResult<(ValueSpectrum, crate::spectrum::TailCertificate)> {
    if let (Some(dir), true) = (cache_dir(cli), method != Method::Index) {
        if let Ok(cert) = certify_scan_bound_within(space, k, target, u32::MAX as u64 - 1) {
            let x = cert.scan_limit().expect("level envelope").max(2);
            let level_ok = method == Method::Level
                || space == SpaceKind::Full
                || x <= crate::spectrum::AUTO_LEVEL_SCAN_MAX;
            if level_ok {
                let table = match load_cached(&dir, space, k, x) {
                    Some(t) => t,
                    None => {
                        let sieve = build_spf_sieve(x)?;
                        let t = sieve_dimensions(space, k, x, &sieve)?;
                        store_cached(&dir, &t)?;
                        t
                    }
                };
                return Ok((ValueSpectrum::from_table(&cert, &table)?, cert));
            }
        }
    }
    Ok(build_spectrum(space, k, target, method)?)
}

fn cmd_missing(cli: &Cli, a: &SpaceArgs, target: u64, method: Method) -> CliResult<Body> {
    let (spec, cert) = spectrum_for(cli, a.space, a.weight, target, method)?;
    cert.validate()?;
    spec.verify_witnesses()?;
    let missing = spec.missing();
    let attained = spec.attained_count();
    let envelope = serde_json::to_value(&cert.envelope).expect("json");
    let kind = envelope["kind"].as_str().unwrap_or("").to_string();
    Ok(Body::Text(match cli.format {
        Format::Json => {
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "space": a.space,
                "k": a.weight,
                "target": target,
                "missing": missing,
                "attained_count": attained,
                "largest_level_used": spec.limit,
                "scan_bound": cert.scan_limit(),
                "psi_bound": cert.psi_limit(),
                "certificate": cert,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        Format::Csv => {
            let mut fields = vec![
                ("space", a.space.to_string()),
                ("weight", a.weight.to_string()),
                ("target", target.to_string()),
                ("envelope", kind),
            ];
            if let Some(x) = cert.scan_limit() {
                fields.push(("scan_bound", x.to_string()));
            }
            if let Some(b) = cert.psi_limit() {
                fields.push(("psi_bound", b.to_string()));
            }
            fields.push(("attained", attained.to_string()));
            fields.push(("missing", missing.len().to_string()));
            let mut s = csv_header("missing", &fields);
            for c in &cert.checks {
                s.push_str(&format!(
                    "# check {} {}: {}\n",
                    c.name,
                    if c.holds { "ok" } else { "FAILED" },
                    c.detail
                ));
            }
            s.push_str("dim\n");
            for d in &missing {
                s.push_str(&format!("{d}\n"));
            }
            s
        }
    }))
}

fn cmd_spectrum(
    cli: &Cli,
    a: &SpaceArgs,
    grid: &[f64],
    method: Method,
    ford_c: Option<f64>,
    ford_d: Option<f64>,
) -> CliResult<Body> {
    if grid.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Failure::usage("grid values must be finite and non-negative"));
    }
    let x_max = grid.iter().cloned().fold(0.0, f64::max);
    let target = ceiling_for(a.weight, x_max);
    let (spec, _) = spectrum_for(cli, a.space, a.weight, target, method)?;
    let ford = ford_d.map(|d| FordConstants {
        c: ford_c.unwrap_or(FordConstants::default().c),
        d: Some(d),
    });
    if ford_c.is_some() && ford_d.is_none() {
        return Err(Failure::usage("--ford-c needs --ford-d"));
    }
    // density rows for the positive part of the grid, in ascending order
    let mut positive: Vec<f64> = grid.iter().cloned().filter(|&x| x > 0.0).collect();
    positive.sort_by(f64::total_cmp);
    positive.dedup();
    let trend = density_trend(&spec, &positive, ford.as_ref())?;
    let mut rows = Vec::new();
    for &x in grid {
        let d = spec.count_distinct(x)?;
        let row = trend.rows.iter().find(|r| r.x == x);
        rows.push((x, d, row));
    }
    let failures = trend.failures();
    Ok(Body::Report(
        match cli.format {
            Format::Json => {
                let v = json!({
                    "schema_version": SCHEMA_VERSION,
                    "space": a.space,
                    "k": a.weight,
                    "ford": ford,
                    "rows": rows.iter().map(|(x, d, r)| json!({
                        "x": x,
                        "D": d,
                        "density": r.map(|r| r.observed),
                        "non_increasing": r.map(|r| r.pass),
                        "d_over_x_rho": r.and_then(|r| r.aux),
                        "shape_only": r.and_then(|r| r.note.as_ref()).is_some_and(|n| n.contains("shape-only")),
                    })).collect::<Vec<_>>(),
                });
                format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
            }
            Format::Csv => {
                let mut s = csv_header(
                    "spectrum",
                    &[("space", a.space.to_string()), ("weight", a.weight.to_string())],
                );
                s.push_str("x,D,density,d_over_x_rho\n");
                for (x, d, r) in rows {
                    let dens = r.map(|r| r.observed.to_string()).unwrap_or_default();
                    let aux = r.and_then(|r| r.aux).map(|v| v.to_string()).unwrap_or_default();
                    s.push_str(&format!("{x},{d},{dens},{aux}\n"));
                }
                s
            }
        },
        failures,
    ))
}

fn grid_u64(grid: &Option<Vec<f64>>, default: &[u64]) -> CliResult<Vec<u64>> {
    match grid {
        None => Ok(default.to_vec()),
        Some(g) => g
            .iter()
            .map(|&x| {
                if x >= 1.0 && x.fract() == 0.0 && x < 1.8e19 {
                    Ok(x as u64)
                } else {
                    Err(Failure::usage(format!("grid value {x} must be a positive integer")))
                }
            })
            .collect(),
    }
}

fn cmd_verify(cli: &Cli, suite: Suite, o: &VerifyArgs) -> CliResult<Body> {
    let report = match suite {
        Suite::NuBounds => verify_nu_bounds(o.limit.unwrap_or(1_000_000))?,
        Suite::Eta => verify_eta_bounds(
            &grid_u64(&o.grid, &[100, 10_000, 1_000_000, 100_000_000])?,
            o.cutoff_factor,
        )?,
        Suite::SquarefullTail => squarefull_tail_report(
            &grid_u64(&o.grid, &[100, 1_000, 10_000, 100_000])?,
            o.ceiling.unwrap_or(TAIL_RATIO_CEILING),
        )?,
        Suite::DeltaValues => delta_report(o)?,
        Suite::Exceptions => census_report(o)?,
        Suite::Oracles => oracle_suite(o.limit.unwrap_or(10_000), o.max_weight)?,
    };
    let failures = report.failures();
    Ok(Body::Report(
        match cli.format {
            Format::Json => {
                let v = json!({
                    "schema_version": SCHEMA_VERSION,
                    "suite": format!("{suite:?}"),
                    "passed": report.passed(),
                    "failures": failures,
                    "report": report,
                });
                format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
            }
            Format::Csv => report_csv(&report),
        },
        failures,
    ))
}

/// Distinct-discrepancy survey for every space, `r <= r_max` and (full
/// space) every squarefull cap, plus stabilization rows comparing the
/// intermediate checkpoint with the final count for `r <= 3`.
pub fn delta_report(o: &VerifyArgs) -> crate::Result<DistReport> {
    let limit = o.limit.unwrap_or(1_000_000);
    let sieve = build_spf_sieve(limit.max(2))?;
    let mut report = DistReport::new(format!("distinct discrepancies, N <= {limit}"));
    for space in SpaceKind::ALL {
        let caps: Vec<Option<u64>> = match space {
            SpaceKind::Full => o.s_values.iter().map(|&s| Some(s)).collect(),
            _ => vec![None],
        };
        for r in 1..=o.r_max {
            for &s in &caps {
                let sv = delta_value_survey(space, o.weight, r, s, limit, &[o.checkpoint], &sieve)?;
                let cap = s.map(|s| format!(" s={s}")).unwrap_or_default();
                report.rows.push(
                    ReportRow::new(
                        format!("{space} r={r}{cap} count"),
                        limit as f64,
                        sv.distinct_count as f64,
                        sv.bound,
                        sv.pass,
                    )
                    .with_note(format!(
                        "checkpoints {}",
                        sv.checkpoints
                            .iter()
                            .map(|c| format!("{}:{}", c.limit, c.distinct))
                            .collect::<Vec<_>>()
                            .join(" ")
                    )),
                );
                if r <= 3 && o.checkpoint < limit {
                    let early = sv
                        .checkpoints
                        .iter()
                        .find(|c| c.limit == o.checkpoint)
                        .map_or(0, |c| c.distinct);
                    report.rows.push(ReportRow::new(
                        format!("{space} r={r}{cap} stable"),
                        limit as f64,
                        sv.distinct_count as f64,
                        early as f64,
                        sv.distinct_count == early,
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Exceptional-level census ratios for every space on a grid.
pub fn census_report(o: &VerifyArgs) -> crate::Result<DistReport> {
    let grid = o.grid.clone().unwrap_or_else(|| vec![1e4, 1e5, 1e6]);
    let ceiling = o.ceiling.unwrap_or(CENSUS_RATIO_CEILING);
    let mut report = DistReport::new("exceptional levels");
    for space in SpaceKind::ALL {
        for &x in &grid {
            let c = exceptional_census(space, o.weight, x)?;
            report.rows.push(
                ReportRow::new(format!("{space} ratio"), x, c.ratio, ceiling, c.ratio <= ceiling)
                    .with_aux(c.count as f64)
                    .with_note(format!(
                        "count {} (squares {}, many factors {}) of {} candidates",
                        c.count, c.squares, c.many_factors, c.candidates
                    )),
            );
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["gamma0-dims", "dim", "--space", "old", "--weight", "2", "--level", "1"]), 1);
        assert_eq!(run(["gamma0-dims", "dim", "--space", "new", "--weight", "3", "--level", "1"]), 1);
        assert_eq!(run(["gamma0-dims", "scan", "--space", "new", "--weight", "2", "--limit", "0"]), 1);
        assert_eq!(run(["gamma0-dims", "frobnicate"]), 1);
        assert_eq!(run(["gamma0-dims", "--help"]), 0);
    }

    #[test]
    fn error_classes() {
        assert_eq!(Failure::from(Error::Cache("x".into())).code, 3);
        assert_eq!(Failure::from(Error::EnvelopeFailure { target: 1, search_max: 2 }).code, 2);
        assert_eq!(Failure::from(Error::Domain("x".into())).code, 1);
        assert_eq!(Failure::from(Error::Overflow("x".into())).code, 2);
    }
}
