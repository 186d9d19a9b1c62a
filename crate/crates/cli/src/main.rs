//! Command-line front end for p-rank sampling campaigns.
//!
//! Exit codes: 0 success, 1 other failure, 2 nothing to do, 3 I/O error,
//! 4 invalid configuration.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pstrata::campaign::{self, ConfigPatch, FigureKind};
use pstrata::stats;
use pstrata::Error;

#[derive(Parser)]
#[command(
    name = "pstrata",
    version,
    about = "p-rank strata of hyperelliptic curves over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample curves over a range of primes and estimate stratum component counts.
    Campaign(CampaignArgs),
    /// Enumerate a whole family and report its p-rank distribution.
    Enumerate {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        ext: u32,
    },
    /// Write two-column plot data from one or more campaign directories.
    Figure {
        /// Campaign output directory; repeat to overlay methods.
        #[arg(long, required = true)]
        report: Vec<PathBuf>,
        /// nonordinary, codim2 or prank0.
        #[arg(long)]
        kind: String,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count p-rank 0 Galois-type curves over GF(p) for primes p = 1 mod 4.
    #[command(name = "scan-conj-1mod4")]
    ScanConj1Mod4 {
        #[arg(long)]
        genus: usize,
        /// Prime range `lo:hi`.
        #[arg(long)]
        primes: String,
    },
}

#[derive(Args)]
struct CampaignArgs {
    /// key = value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    genus: Option<usize>,
    /// Prime range `lo:hi` or a single prime.
    #[arg(long)]
    primes: Option<String>,
    /// Extension degree r of GF(p^r).
    #[arg(long)]
    ext: Option<u32>,
    /// family or galois.
    #[arg(long)]
    method: Option<String>,
    /// Curves per prime, e.g. 100000 or 1e6, or `all` to enumerate.
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated p-rank thresholds.
    #[arg(long)]
    thresholds: Option<String>,
    #[arg(long)]
    batch_size: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
}

impl CampaignArgs {
    fn patch(&self) -> pstrata::Result<ConfigPatch> {
        let mut patch = ConfigPatch::default();
        let pairs: [(&str, Option<String>); 10] = [
            ("genus", self.genus.map(|v| v.to_string())),
            ("primes", self.primes.clone()),
            ("ext", self.ext.map(|v| v.to_string())),
            ("method", self.method.clone()),
            ("samples", self.samples.clone()),
            ("seed", self.seed.map(|v| v.to_string())),
            ("out", self.out.as_ref().map(|v| v.display().to_string())),
            ("thresholds", self.thresholds.clone()),
            ("batch_size", self.batch_size.map(|v| v.to_string())),
            ("workers", self.workers.map(|v| v.to_string())),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                patch.set(key, &v)?;
            }
        }
        Ok(patch)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NothingToDo(_) => 2,
        Error::Io(_) => 3,
        Error::InvalidConfig(_)
        | Error::InvalidRange { .. }
        | Error::InvalidCharacteristic(_)
        | Error::InvalidDegree(_)
        | Error::MethodUnavailable { .. }
        | Error::FieldTooSmall { .. } => 4,
        _ => 1,
    }
}

fn run_campaign(args: &CampaignArgs) -> pstrata::Result<()> {
    let base = match &args.config {
        Some(path) => ConfigPatch::parse(&fs::read_to_string(path)?)?,
        None => ConfigPatch::default(),
    };
    let cfg = base.overlay(args.patch()?).build()?;
    let report = campaign::run_campaign(&cfg)?;
    for s in &report.skipped {
        eprintln!("skipped p = {}: {:?}", s.p, s.reason);
    }
    print!("{}", campaign::summary_csv(&report));
    eprintln!("wrote {}", cfg.output_dir.display());
    Ok(())
}

fn enumerate(genus: usize, p: u32, ext: u32) -> pstrata::Result<()> {
    let (smooth, tally) = campaign::enumerate_family_tally(genus, p, ext)?;
    println!("genus {genus} over GF({p}^{ext})");
    println!("smooth members: {smooth}");
    println!("distinct curves: {}", tally.sample_size());
    for (k, c) in tally.counts.iter().enumerate() {
        println!("p-rank {k}: {c}");
    }
    for f in campaign::default_thresholds(genus) {
        println!("M_{f}: {}", stats::m_value(&tally, f)?.m_decimal(9));
    }
    Ok(())
}

fn figure(reports: &[PathBuf], kind: &str, out: Option<&PathBuf>) -> pstrata::Result<()> {
    let kind: FigureKind = kind.parse()?;
    let reports = reports
        .iter()
        .map(|dir| campaign::load_report(dir))
        .collect::<pstrata::Result<Vec<_>>>()?;
    let data = campaign::emit_figure_data(&reports, kind)?;
    match out {
        Some(path) => fs::write(path, data)?,
        None => print!("{data}"),
    }
    Ok(())
}

fn scan(genus: usize, primes: &str) -> pstrata::Result<()> {
    let (lo, hi) = campaign::parse_prime_range(primes)?;
    let rows = campaign::scan_prank_zero(genus, lo, hi)?;
    println!("p,curves,p_rank_zero");
    for r in &rows {
        println!("{},{},{}", r.p, r.curves, r.p_rank_zero);
    }
    let total: u64 = rows.iter().map(|r| r.p_rank_zero).sum();
    eprintln!(
        "{total} curves of p-rank 0 among {} Galois-type curves",
        rows.iter().map(|r| r.curves).sum::<u64>()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Campaign(args) => run_campaign(args),
        Command::Enumerate { genus, p, ext } => enumerate(*genus, *p, *ext),
        Command::Figure { report, kind, out } => figure(report, kind, out.as_ref()),
        Command::ScanConj1Mod4 { genus, primes } => scan(*genus, primes),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
