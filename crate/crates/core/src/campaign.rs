//! Sampling campaigns: per-prime tallies, M-values and the files written for
//! them.
//!
//! A campaign writes four files into its output directory:
//!
//! * `tallies.csv`: one row per prime,
//!   `method,g,p,r,s_raw,s_distinct,c0,...,cg,M_f_gm1,M_f_gm2,M_f_0`, with
//!   M-values as 9-place decimals of exact rationals;
//! * `summary.csv`: summary statistics over the primes for each threshold;
//! * `report.json`: the same data plus the configuration and skipped primes;
//! * `timings.json`: wall-clock seconds per prime.
//!
//! Everything except `timings.json` is a function of the configuration alone.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{self, CanonicalKey};
use crate::ff::FieldCtx;
use crate::galois;
use crate::prank;
use crate::stats::{self, EstimateRow, Method, StratumTally, SummaryStats};

/// How many curves to take per prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleSize {
    /// Draw this many curves (family) or stop after this many classes
    /// (galois).
    Count(u64),
    /// Take every curve the method can produce.
    Enumerate,
}

impl std::str::FromStr for SampleSize {
    type Err = Error;

    fn from_str(s: &str) -> Result<SampleSize> {
        match s {
            "all" | "enumerate" => Ok(SampleSize::Enumerate),
            _ => parse_count(s)
                .map(SampleSize::Count)
                .ok_or_else(|| Error::InvalidConfig(format!("bad sample size {s:?}"))),
        }
    }
}

/// Accepts plain integers, `_` separators and powers of ten like `1e6`.
fn parse_count(s: &str) -> Option<u64> {
    let s = s.replace('_', "");
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: u64 = m.parse().ok()?;
        let e: u32 = e.parse().ok()?;
        return m.checked_mul(10u64.checked_pow(e)?);
    }
    s.parse().ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub genus: usize,
    pub prime_min: u32,
    pub prime_max: u32,
    pub r: u32,
    pub method: Method,
    pub samples: SampleSize,
    pub thresholds: Vec<usize>,
    pub master_seed: u64,
    /// Not serialized, so reports from identical runs in different
    /// directories are byte-identical.
    #[serde(skip)]
    pub output_dir: PathBuf,
    pub batch_size: u64,
    /// Zero means one worker per core.
    pub workers: usize,
}

/// Default thresholds: non-ordinary, codimension two and p-rank zero.
pub fn default_thresholds(g: usize) -> Vec<usize> {
    let mut t = vec![g.saturating_sub(1)];
    if g >= 2 {
        t.push(g - 2);
    }
    t.push(0);
    t.dedup();
    t
}

impl CampaignConfig {
    pub fn new(genus: usize, prime_min: u32, prime_max: u32) -> CampaignConfig {
        CampaignConfig {
            genus,
            prime_min,
            prime_max,
            r: 1,
            method: Method::Family,
            samples: SampleSize::Count(100_000),
            thresholds: default_thresholds(genus),
            master_seed: 0,
            output_dir: PathBuf::from("campaign_out"),
            batch_size: 10_000,
            workers: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.genus == 0 {
            return bad("genus must be positive".into());
        }
        if self.prime_min < 3 {
            return bad(format!(
                "prime_min must be at least 3, got {}",
                self.prime_min
            ));
        }
        if self.prime_min > self.prime_max {
            return bad(format!(
                "empty prime range {}:{}",
                self.prime_min, self.prime_max
            ));
        }
        if self.r == 0 {
            return bad("extension degree must be positive".into());
        }
        if self.batch_size == 0 {
            return bad("batch_size must be positive".into());
        }
        if self.samples == SampleSize::Count(0) {
            return bad("sample size must be positive".into());
        }
        if let Some(&f) = self.thresholds.iter().find(|&&f| f > self.genus) {
            return bad(format!("threshold {f} exceeds genus {}", self.genus));
        }
        Ok(())
    }
}

/// A partial configuration, as read from a key=value file or from flags.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigPatch {
    pub genus: Option<usize>,
    pub prime_min: Option<u32>,
    pub prime_max: Option<u32>,
    pub r: Option<u32>,
    pub method: Option<Method>,
    pub samples: Option<SampleSize>,
    pub thresholds: Option<Vec<usize>>,
    pub master_seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub batch_size: Option<u64>,
    pub workers: Option<usize>,
}

/// Parses `lo:hi` or a single prime.
pub fn parse_prime_range(s: &str) -> Result<(u32, u32)> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| Error::InvalidConfig(format!("bad prime range {s:?}")))
    };
    match s.split_once(':') {
        Some((lo, hi)) => Ok((num(lo)?, num(hi)?)),
        None => {
            let p = num(s)?;
            Ok((p, p))
        }
    }
}

impl ConfigPatch {
    /// Reads `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<ConfigPatch> {
        let mut patch = ConfigPatch::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {}: expected key = value", n + 1))
            })?;
            patch.set(key.trim(), value.trim())?;
        }
        Ok(patch)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::InvalidConfig(format!("bad value for {key}: {v:?}")))
        }
        match key {
            "genus" | "g" => self.genus = Some(num(key, value)?),
            "primes" => {
                let (lo, hi) = parse_prime_range(value)?;
                self.prime_min = Some(lo);
                self.prime_max = Some(hi);
            }
            "prime_min" => self.prime_min = Some(num(key, value)?),
            "prime_max" => self.prime_max = Some(num(key, value)?),
            "ext" | "r" => self.r = Some(num(key, value)?),
            "method" => self.method = Some(value.parse()?),
            "samples" => self.samples = Some(value.parse()?),
            "thresholds" => {
                self.thresholds = Some(
                    value
                        .split(',')
                        .map(|t| num(key, t.trim()))
                        .collect::<Result<_>>()?,
                )
            }
            "seed" | "master_seed" => self.master_seed = Some(num(key, value)?),
            "out" | "output_dir" => self.output_dir = Some(PathBuf::from(value)),
            "batch_size" => self.batch_size = Some(num(key, value)?),
            "workers" => self.workers = Some(num(key, value)?),
            _ => return Err(Error::InvalidConfig(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(self, top: ConfigPatch) -> ConfigPatch {
        ConfigPatch {
            genus: top.genus.or(self.genus),
            prime_min: top.prime_min.or(self.prime_min),
            prime_max: top.prime_max.or(self.prime_max),
            r: top.r.or(self.r),
            method: top.method.or(self.method),
            samples: top.samples.or(self.samples),
            thresholds: top.thresholds.or(self.thresholds),
            master_seed: top.master_seed.or(self.master_seed),
            output_dir: top.output_dir.or(self.output_dir),
            batch_size: top.batch_size.or(self.batch_size),
            workers: top.workers.or(self.workers),
        }
    }

    pub fn build(self) -> Result<CampaignConfig> {
        let genus = self
            .genus
            .ok_or_else(|| Error::InvalidConfig("genus is required".into()))?;
        let prime_min = self
            .prime_min
            .ok_or_else(|| Error::InvalidConfig("prime range is required".into()))?;
        let mut cfg = CampaignConfig::new(genus, prime_min, self.prime_max.unwrap_or(prime_min));
        if let Some(v) = self.r {
            cfg.r = v;
        }
        if let Some(v) = self.method {
            cfg.method = v;
        }
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.thresholds {
            cfg.thresholds = v;
        }
        if let Some(v) = self.master_seed {
            cfg.master_seed = v;
        }
        if let Some(v) = self.output_dir {
            cfg.output_dir = v;
        }
        if let Some(v) = self.batch_size {
            cfg.batch_size = v;
        }
        if let Some(v) = self.workers {
            cfg.workers = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// All primes in `[lo, hi]`.
pub fn primes_in_range(lo: u32, hi: u32) -> Result<Vec<u32>> {
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        if i >= lo as usize {
            out.push(i as u32);
        }
        for j in (i * i..=n).step_by(i) {
            composite[j] = true;
        }
    }
    Ok(out)
}

/// Why a prime in range produced no data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    /// The family needs p ∤ 2g+1.
    PDividesTwoGPlusOne,
    /// Galois-type curves need q > 2g+1.
    FieldTooSmall,
    /// The method found no curves at all.
    NoCurves,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedPrime {
    pub p: u32,
    pub reason: SkipReason,
}

/// One M-value as stored in the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateEntry {
    pub f: usize,
    pub n_le_f: u64,
    /// `numerator/denominator` in lowest terms.
    pub m_exact: String,
    /// Nine-place decimal.
    pub m: String,
}

impl EstimateEntry {
    fn from_row(row: &EstimateRow) -> EstimateEntry {
        EstimateEntry {
            f: row.f,
            n_le_f: row.n_le_f,
            m_exact: format!("{}/{}", row.m.numer(), row.m.denom()),
            m: row.m_decimal(9),
        }
    }

    pub fn m_f64(&self) -> f64 {
        self.m.parse().unwrap_or(f64::NAN)
    }
}

/// Results for one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeResult {
    pub p: u32,
    /// Curves drawn or enumerated, duplicates included.
    pub s_raw: u64,
    /// Distinct isomorphism classes among them; the tally counts these.
    pub s_distinct: u64,
    pub tally: StratumTally,
    pub estimates: Vec<EstimateEntry>,
    /// Galois-type data over a prime field, which is known to behave
    /// differently from the r > 1 data.
    pub anomalous_r1: bool,
}

impl PrimeResult {
    pub fn estimate(&self, f: usize) -> Option<&EstimateEntry> {
        self.estimates.iter().find(|e| e.f == f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub f: usize,
    pub stats: SummaryStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub version: String,
    pub config: CampaignConfig,
    pub primes: Vec<PrimeResult>,
    pub skipped: Vec<SkippedPrime>,
    pub summaries: Vec<SummaryEntry>,
    /// Seconds per prime; kept out of `report.json` so that file is
    /// reproducible.
    #[serde(skip)]
    pub timings: Vec<(u32, f64)>,
}

impl CampaignReport {
    pub fn prime(&self, p: u32) -> Option<&PrimeResult> {
        self.primes.iter().find(|r| r.p == p)
    }

    pub fn summary(&self, f: usize) -> Option<&SummaryStats> {
        self.summaries.iter().find(|s| s.f == f).map(|s| &s.stats)
    }
}

/// Deterministic per-batch generator.
pub fn batch_rng(master_seed: u64, p: u32, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((p as u64) << 32) | (batch & 0xffff_ffff));
    rng
}

struct Sample {
    s_raw: u64,
    p_ranks: Vec<usize>,
}

/// Draws one batch and returns its distinct keys, each with its p-rank.
fn family_batch(
    ctx: &FieldCtx,
    g: usize,
    seed: u64,
    batch: u64,
    n: u64,
) -> Result<Vec<(CanonicalKey, usize)>> {
    let mut rng = batch_rng(seed, ctx.p(), batch);
    let mut keys = Vec::new();
    let mut seen = HashSet::new();
    for _ in 0..n {
        let c = family::sample_family(ctx, g, &mut rng)?;
        let key = family::canonical_key(ctx, &c);
        if seen.insert(key.clone()) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|k| {
            let rank = prank::p_rank_of(ctx, k.poly())?.value;
            Ok((k, rank))
        })
        .collect()
}

fn family_sample(cfg: &CampaignConfig, ctx: &FieldCtx) -> Result<Sample> {
    let g = cfg.genus;
    match cfg.samples {
        SampleSize::Enumerate => {
            let e = family::enumerate_family(ctx, g)?;
            let p_ranks = e
                .representatives
                .par_iter()
                .map(|c| prank::p_rank_of(ctx, c.f()).map(|r| r.value))
                .collect::<Result<Vec<_>>>()?;
            Ok(Sample {
                s_raw: e.smooth_members as u64,
                p_ranks,
            })
        }
        SampleSize::Count(s) => {
            let batches = s.div_ceil(cfg.batch_size);
            let results = (0..batches)
                .into_par_iter()
                .map(|b| {
                    let n = cfg.batch_size.min(s - b * cfg.batch_size);
                    family_batch(ctx, g, cfg.master_seed, b, n)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut seen = HashSet::new();
            let mut p_ranks = Vec::new();
            for (key, rank) in results.into_iter().flatten() {
                if seen.insert(key) {
                    p_ranks.push(rank);
                }
            }
            Ok(Sample { s_raw: s, p_ranks })
        }
    }
}

fn galois_sample(cfg: &CampaignConfig, ctx: &FieldCtx) -> Result<Sample> {
    let limit = match cfg.samples {
        SampleSize::Count(s) => usize::try_from(s).unwrap_or(usize::MAX),
        SampleSize::Enumerate => usize::MAX,
    };
    let curves = galois::enumerate_split(ctx, cfg.genus, limit)?;
    let p_ranks = curves
        .par_iter()
        .map(|f| prank::p_rank_of(ctx, f).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sample {
        s_raw: p_ranks.len() as u64,
        p_ranks,
    })
}

fn skip_reason(cfg: &CampaignConfig, p: u32) -> Option<SkipReason> {
    let n = 2 * cfg.genus as u64 + 1;
    match cfg.method {
        Method::Family if n.is_multiple_of(p as u64) => Some(SkipReason::PDividesTwoGPlusOne),
        Method::Galois if (p as u64).pow(cfg.r) <= n => Some(SkipReason::FieldTooSmall),
        _ => None,
    }
}

fn run_prime(cfg: &CampaignConfig, p: u32) -> Result<Option<PrimeResult>> {
    let ctx = FieldCtx::new(p, cfg.r)?;
    let sample = match cfg.method {
        Method::Family => family_sample(cfg, &ctx)?,
        Method::Galois => galois_sample(cfg, &ctx)?,
    };
    if sample.p_ranks.is_empty() {
        return Ok(None);
    }
    let tally = stats::tally(&sample.p_ranks, cfg.genus, p, cfg.r, cfg.method)?;
    let estimates = cfg
        .thresholds
        .iter()
        .map(|&f| stats::m_value(&tally, f).map(|row| EstimateEntry::from_row(&row)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(PrimeResult {
        p,
        s_raw: sample.s_raw,
        s_distinct: tally.sample_size(),
        tally,
        estimates,
        anomalous_r1: cfg.method == Method::Galois && cfg.r == 1,
    }))
}

/// Summary statistics per threshold over every prime with data.
pub fn summaries_from_tallies(
    tallies: &[StratumTally],
    thresholds: &[usize],
) -> Result<Vec<SummaryEntry>> {
    if tallies.is_empty() {
        return Ok(Vec::new());
    }
    thresholds
        .iter()
        .map(|&f| {
            let rows = tallies
                .iter()
                .map(|t| stats::m_value(t, f))
                .collect::<Result<Vec<_>>>()?;
            Ok(SummaryEntry {
                f,
                stats: stats::summarize(&rows)?,
            })
        })
        .collect()
}

/// Runs the campaign in memory without writing anything.
pub fn compute_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let primes = primes_in_range(cfg.prime_min, cfg.prime_max)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let mut results = Vec::new();
    let mut skipped = Vec::new();
    let mut timings = Vec::new();
    for p in primes {
        if let Some(reason) = skip_reason(cfg, p) {
            log::info!("skipping p = {p}: {reason:?}");
            skipped.push(SkippedPrime { p, reason });
            continue;
        }
        let start = Instant::now();
        match pool.install(|| run_prime(cfg, p))? {
            Some(res) => {
                log::info!(
                    "p = {p}: {} distinct of {} curves, counts {:?}",
                    res.s_distinct,
                    res.s_raw,
                    res.tally.counts
                );
                results.push(res);
            }
            None => skipped.push(SkippedPrime {
                p,
                reason: SkipReason::NoCurves,
            }),
        }
        timings.push((p, start.elapsed().as_secs_f64()));
    }
    if results.is_empty() {
        return Err(Error::NothingToDo(format!(
            "no admissible primes in {}:{} for method {}",
            cfg.prime_min, cfg.prime_max, cfg.method
        )));
    }
    let tallies: Vec<StratumTally> = results.iter().map(|r| r.tally.clone()).collect();
    let summaries = summaries_from_tallies(&tallies, &cfg.thresholds)?;
    Ok(CampaignReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        primes: results,
        skipped,
        summaries,
        timings,
    })
}

/// Runs the campaign and writes its files to `cfg.output_dir`.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.output_dir)?;
    let report = compute_campaign(cfg)?;
    write_report(&report, &cfg.output_dir)?;
    Ok(report)
}

fn m_column(t: &StratumTally, f: Option<usize>) -> Result<String> {
    match f {
        Some(f) => Ok(stats::m_value(t, f)?.m_decimal(9)),
        None => Ok(String::new()),
    }
}

/// Header of `tallies.csv` for genus g.
pub fn tallies_header(g: usize) -> String {
    let mut h = String::from("method,g,p,r,s_raw,s_distinct");
    for k in 0..=g {
        write!(h, ",c{k}").unwrap();
    }
    h.push_str(",M_f_gm1,M_f_gm2,M_f_0");
    h
}

/// `tallies.csv` contents. The M columns are always the thresholds g-1,
/// g-2 and 0; a threshold below zero leaves its column empty.
pub fn tallies_csv(report: &CampaignReport) -> Result<String> {
    let g = report.config.genus;
    let mut out = tallies_header(g);
    out.push('\n');
    for res in &report.primes {
        let t = &res.tally;
        write!(
            out,
            "{},{},{},{},{},{}",
            t.method, g, t.p, t.r, res.s_raw, res.s_distinct
        )
        .unwrap();
        for c in &t.counts {
            write!(out, ",{c}").unwrap();
        }
        for f in [g.checked_sub(1), g.checked_sub(2), Some(0)] {
            write!(out, ",{}", m_column(t, f)?).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// Reads `tallies.csv` back into tallies and `(s_raw, s_distinct)` pairs.
pub fn parse_tallies_csv(text: &str) -> Result<Vec<(StratumTally, u64, u64)>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::MissingData("empty tallies file".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    let g = cols
        .iter()
        .filter(|c| c.starts_with('c') && c[1..].parse::<usize>().is_ok())
        .count()
        .checked_sub(1)
        .ok_or_else(|| Error::MissingData("no count columns".into()))?;
    if header != tallies_header(g) {
        return Err(Error::InvalidInput(format!("unexpected header {header:?}")));
    }
    let bad = |line: &str| Error::InvalidInput(format!("bad tallies row {line:?}"));
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != cols.len() {
                return Err(bad(line));
            }
            let n = |i: usize| f[i].parse::<u64>().map_err(|_| bad(line));
            let method: Method = f[0].parse()?;
            let mut t = StratumTally::empty(g, n(2)? as u32, n(3)? as u32, method);
            for k in 0..=g {
                t.counts[k] = n(6 + k)?;
            }
            Ok((t, n(4)?, n(5)?))
        })
        .collect()
}

fn fmt_stat(x: f64) -> String {
    format!("{x:.9}")
}

/// `summary.csv` contents.
pub fn summary_csv(report: &CampaignReport) -> String {
    let c = &report.config;
    let mut out = String::from("method,g,r,f,n_primes,median,mean,min,max,std_dev\n");
    for s in &report.summaries {
        let st = &s.stats;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            c.method,
            c.genus,
            c.r,
            s.f,
            st.n,
            fmt_stat(st.median),
            fmt_stat(st.mean),
            fmt_stat(st.min),
            fmt_stat(st.max),
            fmt_stat(st.std_dev)
        )
        .unwrap();
    }
    out
}

/// Recomputes `summary.csv` from a campaign directory's `tallies.csv` and
/// `report.json` configuration.
pub fn recompute_summary(dir: &Path) -> Result<String> {
    let mut report = load_report(dir)?;
    let text = fs::read_to_string(dir.join("tallies.csv"))?;
    let tallies: Vec<StratumTally> = parse_tallies_csv(&text)?
        .into_iter()
        .map(|(t, _, _)| t)
        .collect();
    report.summaries = summaries_from_tallies(&tallies, &report.config.thresholds)?;
    Ok(summary_csv(&report))
}

/// Writes all four campaign files.
pub fn write_report(report: &CampaignReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("tallies.csv"), tallies_csv(report)?)?;
    fs::write(dir.join("summary.csv"), summary_csv(report))?;
    let json = serde_json::to_string_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(dir.join("report.json"), json + "\n")?;
    let timings: BTreeMap<String, f64> = report
        .timings
        .iter()
        .map(|(p, t)| (p.to_string(), *t))
        .collect();
    let json = serde_json::to_string_pretty(&timings).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(dir.join("timings.json"), json + "\n")?;
    Ok(())
}

pub fn load_report(dir: &Path) -> Result<CampaignReport> {
    let text = fs::read_to_string(dir.join("report.json"))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("bad report.json: {e}")))
}

/// Which stratum a figure plots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureKind {
    /// p-rank at most g-1.
    NonOrdinary,
    /// p-rank at most g-2.
    Codim2,
    /// p-rank 0.
    PRank0,
}

impl std::str::FromStr for FigureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<FigureKind> {
        match s {
            "nonordinary" => Ok(FigureKind::NonOrdinary),
            "codim2" => Ok(FigureKind::Codim2),
            "prank0" => Ok(FigureKind::PRank0),
            _ => Err(Error::InvalidConfig(format!("unknown figure kind {s:?}"))),
        }
    }
}

impl FigureKind {
    fn threshold(self, g: usize) -> Option<usize> {
        match self {
            FigureKind::NonOrdinary => g.checked_sub(1),
            FigureKind::Codim2 => g.checked_sub(2),
            FigureKind::PRank0 => Some(0),
        }
    }
}

/// Two-column `p,M` plot data, or `method,p,M` for p-rank 0 where family
/// and Galois-type data are overlaid.
pub fn emit_figure_data(reports: &[CampaignReport], kind: FigureKind) -> Result<String> {
    let with_method = kind == FigureKind::PRank0;
    let mut out = String::from(if with_method { "method,p,M\n" } else { "p,M\n" });
    let mut rows = 0;
    for report in reports {
        let g = report.config.genus;
        let f = kind
            .threshold(g)
            .ok_or_else(|| Error::MissingData(format!("genus {g} has no {kind:?} stratum")))?;
        for res in &report.primes {
            let e = res.estimate(f).ok_or_else(|| {
                Error::MissingData(format!("threshold {f} missing at p = {}", res.p))
            })?;
            if with_method {
                write!(out, "{},", report.config.method).unwrap();
            }
            writeln!(out, "{},{}", res.p, e.m).unwrap();
            rows += 1;
        }
    }
    if rows == 0 {
        return Err(Error::MissingData("no data points".into()));
    }
    Ok(out)
}

/// One line of a p-rank-0 scan over Galois-type curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub p: u32,
    pub curves: u64,
    pub p_rank_zero: u64,
}

/// Enumerates every Galois-type curve of genus g over GF(p) for the primes
/// p ≡ 1 mod 4 in range and counts those of p-rank 0.
pub fn scan_prank_zero(g: usize, lo: u32, hi: u32) -> Result<Vec<ScanRow>> {
    let mut out = Vec::new();
    for p in primes_in_range(lo, hi)? {
        if p % 4 != 1 || p as usize <= 2 * g + 1 {
            continue;
        }
        let ctx = FieldCtx::new(p, 1)?;
        let curves = galois::enumerate_split(&ctx, g, usize::MAX)?;
        let ranks = curves
            .par_iter()
            .map(|f| prank::p_rank_of(&ctx, f).map(|r| r.value))
            .collect::<Result<Vec<_>>>()?;
        out.push(ScanRow {
            p,
            curves: ranks.len() as u64,
            p_rank_zero: ranks.iter().filter(|&&r| r == 0).count() as u64,
        });
    }
    if out.is_empty() {
        return Err(Error::NothingToDo(format!(
            "no primes p = 1 mod 4 above {} in {lo}:{hi}",
            2 * g + 1
        )));
    }
    Ok(out)
}

/// Counts of curves by exact p-rank for a whole family.
pub fn enumerate_family_tally(g: usize, p: u32, r: u32) -> Result<(usize, StratumTally)> {
    let ctx = FieldCtx::new(p, r)?;
    let e = family::enumerate_family(&ctx, g)?;
    let ranks = e
        .representatives
        .par_iter()
        .map(|c| prank::p_rank_of(&ctx, c.f()).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        e.smooth_members,
        stats::tally(&ranks, g, p, r, Method::Family)?,
    ))
}

/// Per-prime M-values of a report as exact rationals, keyed by threshold.
pub fn exact_m_values(report: &CampaignReport) -> Result<HashMap<usize, Vec<(u32, BigRational)>>> {
    let mut out: HashMap<usize, Vec<(u32, BigRational)>> = HashMap::new();
    for res in &report.primes {
        for e in &res.estimates {
            let (n, d) = e
                .m_exact
                .split_once('/')
                .ok_or_else(|| Error::InvalidInput(format!("bad rational {:?}", e.m_exact)))?;
            let parse = |s: &str| {
                s.parse::<BigInt>()
                    .map_err(|_| Error::InvalidInput(format!("bad rational {:?}", e.m_exact)))
            };
            out.entry(e.f)
                .or_default()
                .push((res.p, BigRational::new(parse(n)?, parse(d)?)));
        }
    }
    Ok(out)
}
