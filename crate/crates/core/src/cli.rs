//! Command line front end.
//!
//! Every command is a pure function of its flags and seed and writes one
//! table. Exit codes: 0 success, 1 a checked rate proxy failed, 2 usage
//! error, 3 data error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::dst::{build, knuth_corpus, parse_corpus, BitString, InsertReport};
use crate::error::Error;
use crate::lifetimes::LifetimeFamily;
use crate::limit_law::{sample_q_family, LimitLaw};
use crate::metrics::{
    check_grid, check_rate_proxy, comparison_range, rate_report, tv_distance, tv_to_limit,
    DistanceKind, DistanceReport, DistanceRow, MAX_TV_STEPS,
};
use crate::output::{Cell, Format, Table};
use crate::pmf::IntPmf;
use crate::renewal::{centered_count_distribution, log2_split, simulate_count, RenewalConfig};
use crate::rng::{stream_rng, DEFAULT_SEED};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Assertion(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Assertion(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Assertion(m) => write!(f, "check failed: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `A:B` or `A:B:step`. If both ends are written `2^a` and `2^b` the
/// grid is `2^a, 2^(a+step), ...`; otherwise it is arithmetic.
pub fn parse_grid(spec: &str) -> CliResult<Vec<u64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(usage(format!("grid {spec:?} must look like A:B or A:B:step")));
    }
    let step: u64 = match parts.get(2) {
        Some(s) => s.parse().map_err(|_| usage(format!("bad grid step {s:?}")))?,
        None => 1,
    };
    if step == 0 {
        return Err(usage("grid step must be positive"));
    }
    let exponent = |s: &str| s.strip_prefix("2^").map(|e| e.parse::<u32>());
    let grid: Vec<u64> = match (exponent(parts[0]), exponent(parts[1])) {
        (Some(a), Some(b)) => {
            let (a, b) = (
                a.map_err(|_| usage("bad grid exponent"))?,
                b.map_err(|_| usage("bad grid exponent"))?,
            );
            if a > b {
                return Err(usage(format!("grid {spec:?} is reversed")));
            }
            if b > 62 {
                return Err(usage("grid exponent too large"));
            }
            (a..=b).step_by(step as usize).map(|e| 1u64 << e).collect()
        }
        _ => {
            let num = |s: &str| s.parse::<u64>().map_err(|_| usage(format!("bad grid value {s:?}")));
            let (a, b) = (num(parts[0])?, num(parts[1])?);
            if a > b {
                return Err(usage(format!("grid {spec:?} is reversed")));
            }
            (a..=b).step_by(step as usize).collect()
        }
    };
    check_grid(&grid).map_err(usage)?;
    Ok(grid)
}

fn parse_range(spec: &str) -> CliResult<(i64, i64)> {
    let (a, b) = spec
        .split_once(':')
        .ok_or_else(|| usage(format!("range {spec:?} must look like A:B")))?;
    let num = |s: &str| s.parse::<i64>().map_err(|_| usage(format!("bad range value {s:?}")));
    let (a, b) = (num(a)?, num(b)?);
    if a > b {
        return Err(usage(format!("range {spec:?} is reversed")));
    }
    Ok((a, b))
}

/// `x, cdf, pmf, tail` of `Q_eta` for `x` in `x_range`.
pub fn cmd_limit_law(eta: f64, x_range: (i64, i64)) -> CliResult<Table> {
    let law = LimitLaw::new(eta).map_err(usage)?;
    let mut t = Table::new(vec!["x", "cdf", "pmf", "tail"]);
    for x in x_range.0..=x_range.1 {
        t.push(vec![
            Cell::from(x),
            Cell::from(law.cdf(x)),
            Cell::from(law.pmf(x)),
            Cell::from(law.tail(x)),
        ]);
    }
    Ok(t.meta("eta", eta))
}

/// Exact centered depth law after `n` steps beside its limit member, with
/// the total variation distance in a trailing `tv` row.
pub fn cmd_depth_dist(n: i64) -> CliResult<Table> {
    if !(1..=MAX_TV_STEPS).contains(&n) {
        return Err(usage(format!("--n must be in 1..=2^22 for the exact engine, got {n}")));
    }
    let (centered, eta) = centered_count_distribution(n).map_err(usage)?;
    let law = LimitLaw::new(eta).map_err(usage)?;
    let (lo, hi) = comparison_range(&centered, &law);
    let mut t = Table::new(vec!["j", "exact_pmf", "q_pmf", "abs_diff"]);
    for j in lo..=hi {
        let (p, q) = (centered.get(j), law.pmf(j));
        t.push(vec![Cell::from(j), Cell::from(p), Cell::from(q), Cell::from((p - q).abs())]);
    }
    let tv = tv_to_limit(n).map_err(usage)?;
    t.push(vec![Cell::from("tv"), Cell::Empty, Cell::Empty, Cell::from(tv.tv)]);
    Ok(t.meta("n", n).meta("eta", eta))
}

/// Builds the tree from `corpus` (the embedded ten-key corpus when `None`)
/// and lists each key's placement; `probe` adds a non-mutating query row.
pub fn cmd_dst_demo(corpus: Option<&str>, probe: Option<&str>) -> CliResult<Table> {
    let entries = match corpus {
        Some(text) => parse_corpus(text).map_err(usage)?,
        None => knuth_corpus(),
    };
    let probe = probe
        .map(|p| p.parse::<BitString>().map_err(usage))
        .transpose()?;
    let (tree, reports) = build(&entries).map_err(|e| CliError::Data(e.to_string()))?;
    let mut t = Table::new(vec!["label", "bits", "depth", "parent", "side"]);
    let row = |label: &str, bits: &BitString, r: &InsertReport<String>| {
        vec![
            Cell::from(label),
            Cell::Text(bits.to_string()),
            Cell::from(r.depth as i64),
            r.parent.as_deref().map_or(Cell::Empty, Cell::from),
            Cell::from(r.side.as_str()),
        ]
    };
    for ((label, bits), r) in entries.iter().zip(&reports) {
        t.push(row(label, bits, r));
    }
    if let Some(bits) = probe {
        let r = tree.probe(&bits).map_err(|e| CliError::Data(e.to_string()))?;
        t.push(row("probe", &bits, &r));
    }
    Ok(t)
}

/// Simulated centered renewal counts at each horizon in `t_grid`, compared
/// in total variation with `Q_eta`: exactly for the DST family, against an
/// equally large sample of `Q_eta` otherwise.
pub fn cmd_simulate(
    family: &LifetimeFamily,
    t_grid: &[u64],
    samples: usize,
    seed: u64,
) -> CliResult<DistanceReport> {
    if samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    check_grid(t_grid).map_err(usage)?;
    if t_grid.first() == Some(&0) {
        return Err(usage("horizons must be positive"));
    }
    let rate = family.rate();
    let mut rows = Vec::with_capacity(t_grid.len());
    for (i, &t) in t_grid.iter().enumerate() {
        let start = std::time::Instant::now();
        let run_seed = seed ^ (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let config = RenewalConfig {
            family: *family,
            horizon: t as f64,
            samples,
            seed: run_seed,
        };
        let (k, eta) = if family.is_dst() {
            log2_split(t)
        } else {
            rate.split(t as f64)
        };
        let counts = simulate_count(&config).map_err(usage)?;
        let centered =
            IntPmf::from_samples(counts.iter().map(|&c| c as i64 - k)).map_err(usage)?;
        let value = if family.is_dst() {
            let law = LimitLaw::new(eta).map_err(usage)?;
            let (lo, hi) = comparison_range(&centered, &law);
            let body: f64 = (lo..=hi).map(|j| (centered.get(j) - law.pmf(j)).abs()).sum();
            0.5 * (body + law.cdf(lo - 1) + law.tail(hi + 1))
        } else {
            let mut rng = stream_rng(run_seed, u64::MAX);
            let reference =
                IntPmf::from_samples((0..samples).map(|_| sample_q_family(family, eta, &mut rng)))
                    .map_err(usage)?;
            tv_distance(&centered, &reference)
        };
        rows.push(DistanceRow {
            n: t,
            eta,
            kind: DistanceKind::TvSim,
            value,
            trunc_bound: 0.0,
            ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    Ok(DistanceReport { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RateKind {
    Tv,
    Ks,
}

impl RateKind {
    fn distance(self) -> DistanceKind {
        match self {
            RateKind::Tv => DistanceKind::TvLimit,
            RateKind::Ks => DistanceKind::KsScaled,
        }
    }

    pub fn default_grid(self) -> &'static str {
        match self {
            RateKind::Tv => "2^4:2^18:2",
            RateKind::Ks => "4:18:1",
        }
    }
}

/// Rate report over `grid`, plus the outcome of its finite-n proxy check.
pub fn cmd_converge(kind: RateKind, grid: &[u64]) -> CliResult<(DistanceReport, CliResult<()>)> {
    let report = rate_report(grid, kind.distance()).map_err(usage)?;
    let verdict = check_rate_proxy(&report).map_err(|v| {
        CliError::Assertion(format!("row {} (n = {}): {}", v.row, v.n, v.reason))
    });
    Ok((report, verdict))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Dst,
    Scaled,
}

#[derive(Debug, Parser)]
#[command(name = "renewal-dst", version, about = "Renewal counts under exponentially growing lifetimes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, default_value = "csv")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distribution function, mass function and tail of Q_eta.
    LimitLaw {
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        #[arg(long, default_value = "-3:12", allow_hyphen_values = true)]
        x_range: String,
    },
    /// Exact centered insertion-depth law next to its limit.
    DepthDist {
        #[arg(long)]
        n: i64,
    },
    /// Digital search tree placements for a corpus.
    DstDemo {
        /// `label bits` per line; the embedded corpus when omitted.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        probe: Option<String>,
    },
    /// Monte Carlo renewal counts against the limit family.
    Simulate {
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// Defaults to `dst` when alpha is 2 and `scaled` otherwise.
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        /// Mean of the exponential base law of the scaled family.
        #[arg(long, default_value_t = 1.0)]
        base_mean: f64,
        #[arg(long, default_value = "2^6:2^14:2")]
        n_grid: String,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Report wall times instead of zeros.
        #[arg(long)]
        timing: bool,
    },
    /// Convergence-rate table with its monotone proxy check.
    Converge {
        #[arg(long, value_enum, default_value = "tv")]
        kind: RateKind,
        #[arg(long)]
        n_grid: Option<String>,
        #[arg(long)]
        timing: bool,
    },
}

fn execute(cli: &Cli) -> CliResult<(Table, CliResult<()>)> {
    let seed = cli.seed;
    let ok = |t: Table| Ok((t, Ok(())));
    match &cli.command {
        Command::LimitLaw { eta, x_range } => {
            let range = parse_range(x_range)?;
            ok(cmd_limit_law(*eta, range)?
                .meta("command", "limit-law")
                .meta("x_range", x_range))
        }
        Command::DepthDist { n } => ok(cmd_depth_dist(*n)?.meta("command", "depth-dist")),
        Command::DstDemo { corpus, probe } => {
            let text = corpus
                .as_ref()
                .map(|p| {
                    std::fs::read_to_string(p)
                        .map_err(|e| CliError::Data(format!("{}: {e}", p.display())))
                })
                .transpose()?;
            let source = corpus
                .as_ref()
                .map_or("builtin".to_string(), |p| p.display().to_string());
            let mut t = cmd_dst_demo(text.as_deref(), probe.as_deref())?
                .meta("command", "dst-demo")
                .meta("corpus", source);
            if let Some(p) = probe {
                t = t.meta("probe", p);
            }
            ok(t)
        }
        Command::Simulate {
            alpha,
            family,
            base_mean,
            n_grid,
            samples,
            timing,
        } => {
            let family_arg = family.unwrap_or(if *alpha == 2.0 {
                FamilyArg::Dst
            } else {
                FamilyArg::Scaled
            });
            let lifetimes = match family_arg {
                FamilyArg::Dst if *alpha != 2.0 => {
                    return Err(usage("the dst family has alpha = 2"));
                }
                FamilyArg::Dst => LifetimeFamily::GeometricDst,
                FamilyArg::Scaled => {
                    LifetimeFamily::scaled_exponential(*alpha, *base_mean).map_err(usage)?
                }
            };
            let grid = parse_grid(n_grid)?;
            let report = cmd_simulate(&lifetimes, &grid, *samples, seed)?;
            ok(report
                .to_table(*timing)
                .meta("command", "simulate")
                .meta("alpha", alpha)
                .meta("family", format!("{family_arg:?}").to_lowercase())
                .meta("base_mean", base_mean)
                .meta("n_grid", n_grid)
                .meta("samples", samples))
        }
        Command::Converge {
            kind,
            n_grid,
            timing,
        } => {
            let spec = n_grid.as_deref().unwrap_or(kind.default_grid());
            let grid = parse_grid(spec)?;
            let (report, verdict) = cmd_converge(*kind, &grid)?;
            let t = report
                .to_table(*timing)
                .meta("command", "converge")
                .meta("kind", format!("{kind:?}").to_lowercase())
                .meta("n_grid", spec);
            Ok((t, verdict))
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (table, verdict) = match execute(&cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("renewal-dst: {e}");
            return e.exit_code();
        }
    };
    let table = table
        .meta("seed", cli.seed)
        .meta("version", env!("CARGO_PKG_VERSION"))
        .meta("format", format!("{:?}", cli.format).to_lowercase());
    let text = table.render(cli.format);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| e.to_string())
        }
    };
    if let Err(e) = written {
        eprintln!("renewal-dst: {e}");
        return 3;
    }
    match verdict {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("renewal-dst: {e}");
            e.exit_code()
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InsufficientBits { .. } => CliError::Data(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
