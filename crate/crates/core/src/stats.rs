//! Stratum tallies, Lang-Weil M-values and summary statistics.
//!
//! For a sample of `s` distinct curves of genus g over GF(p^r) with
//! `n_{≤f}` curves of p-rank at most f,
//!
//! ```text
//! M = (n_{≤f} / s) · p^{r(g-f)}
//! ```
//!
//! estimates the number of GF(p^r)-components of the p-rank ≤ f stratum.
//! M is kept as an exact rational; floats appear only in summaries.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the curves of a sample were produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Family,
    Galois,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Family => "family",
            Method::Galois => "galois",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "family" => Ok(Method::Family),
            "galois" => Ok(Method::Galois),
            _ => Err(Error::InvalidConfig(format!("unknown method {s:?}"))),
        }
    }
}

/// Counts of distinct curves by exact p-rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumTally {
    pub g: usize,
    pub p: u32,
    pub r: u32,
    pub method: Method,
    /// `counts[k]` curves have p-rank exactly k.
    pub counts: Vec<u64>,
}

impl StratumTally {
    pub fn empty(g: usize, p: u32, r: u32, method: Method) -> StratumTally {
        StratumTally {
            g,
            p,
            r,
            method,
            counts: vec![0; g + 1],
        }
    }

    pub fn record(&mut self, p_rank: usize) -> Result<()> {
        match self.counts.get_mut(p_rank) {
            Some(c) => {
                *c += 1;
                Ok(())
            }
            None => Err(Error::InvalidPRank {
                value: p_rank,
                g: self.g,
            }),
        }
    }

    /// Number of curves in the sample.
    pub fn sample_size(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Curves of p-rank at most f.
    pub fn n_le(&self, f: usize) -> u64 {
        self.counts.iter().take(f + 1).sum()
    }

    /// Non-ordinary curves, `N` in the M-value formula.
    pub fn non_ordinary(&self) -> u64 {
        if self.g == 0 {
            0
        } else {
            self.n_le(self.g - 1)
        }
    }

    /// Adds another tally with the same labels.
    pub fn merge(&self, other: &StratumTally) -> Result<StratumTally> {
        if (self.g, self.p, self.r, self.method) != (other.g, other.p, other.r, other.method) {
            return Err(Error::InvalidInput(
                "cannot merge tallies with different labels".into(),
            ));
        }
        Ok(StratumTally {
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        })
    }
}

/// Histogram of a list of p-ranks.
pub fn tally(p_ranks: &[usize], g: usize, p: u32, r: u32, method: Method) -> Result<StratumTally> {
    let mut t = StratumTally::empty(g, p, r, method);
    for &k in p_ranks {
        t.record(k)?;
    }
    Ok(t)
}

/// One M-value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimateRow {
    pub g: usize,
    pub f: usize,
    pub p: u32,
    pub r: u32,
    pub n_le_f: u64,
    pub s: u64,
    pub m: BigRational,
}

impl EstimateRow {
    pub fn m_f64(&self) -> f64 {
        self.m.to_f64().unwrap_or(f64::NAN)
    }

    /// `m` rounded half-up to `places` decimals.
    pub fn m_decimal(&self, places: usize) -> String {
        to_decimal(&self.m, places)
    }

    /// Binomial standard error of M; informational only.
    pub fn std_error(&self) -> f64 {
        let s = self.s as f64;
        let pi = self.n_le_f as f64 / s;
        let scale = (self.p as f64).powi((self.r as usize * (self.g - self.f)) as i32);
        scale * (pi * (1.0 - pi) / s).sqrt()
    }
}

/// `(n_{≤f} / s) · p^{r(g-f)}` as an exact rational.
pub fn m_value(t: &StratumTally, f: usize) -> Result<EstimateRow> {
    if f > t.g {
        return Err(Error::InvalidInput(format!(
            "threshold {f} exceeds genus {}",
            t.g
        )));
    }
    let s = t.sample_size();
    if s == 0 {
        return Err(Error::EmptySample);
    }
    let n_le_f = t.n_le(f);
    let scale = num_traits::pow(BigInt::from(t.p), t.r as usize * (t.g - f));
    Ok(EstimateRow {
        g: t.g,
        f,
        p: t.p,
        r: t.r,
        n_le_f,
        s,
        m: BigRational::new(BigInt::from(n_le_f) * scale, BigInt::from(s)),
    })
}

/// Decimal rendering of a rational with `places` digits, rounding half away
/// from zero.
pub fn to_decimal(x: &BigRational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = x.abs() * BigRational::from_integer(scale.clone());
    let rounded = (scaled + BigRational::new(1.into(), 2.into()))
        .floor()
        .to_integer();
    let int_part = &rounded / &scale;
    let frac_part = &rounded % &scale;
    let sign = if x.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part:0>places$}")
    }
}

/// Nearest integer, ties to even.
pub fn round_half_even(x: &BigRational) -> BigInt {
    let fl = x.floor();
    let frac = x - &fl;
    let half = BigRational::new(1.into(), 2.into());
    let fl = fl.to_integer();
    match frac.cmp(&half) {
        std::cmp::Ordering::Less => fl,
        std::cmp::Ordering::Greater => fl + 1,
        std::cmp::Ordering::Equal => {
            if (&fl % 2u8).is_zero() {
                fl
            } else {
                fl + 1
            }
        }
    }
}

/// Median, mean, extremes and population standard deviation of a set of
/// M-values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub n: usize,
    pub median: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub std_dev: f64,
}

/// Computed exactly and converted at the end, so the result does not depend
/// on the order of the inputs.
pub fn summarize_values(values: &[BigRational]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = values.to_vec();
    sorted.sort();
    let n = sorted.len();
    let n_q = BigRational::from_integer(BigInt::from(n));
    let median = if n % 2 == 1 {
        sorted[n / 2].clone()
    } else {
        (&sorted[n / 2 - 1] + &sorted[n / 2]) / BigRational::from_integer(2.into())
    };
    let mean = sorted.iter().fold(BigRational::zero(), |acc, v| acc + v) / &n_q;
    let var = sorted
        .iter()
        .map(|v| {
            let d = v - &mean;
            &d * &d
        })
        .fold(BigRational::zero(), |acc, v| acc + v)
        / &n_q;
    let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
    Ok(SummaryStats {
        n,
        median: f(&median),
        mean: f(&mean),
        min: f(&sorted[0]),
        max: f(&sorted[n - 1]),
        std_dev: f(&var).sqrt(),
    })
}

pub fn summarize(rows: &[EstimateRow]) -> Result<SummaryStats> {
    let values: Vec<BigRational> = rows.iter().map(|r| r.m.clone()).collect();
    summarize_values(&values)
}

/// Per-(g, f, p) component count estimate over the available extension
/// degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentEstimate {
    pub g: usize,
    pub f: usize,
    pub p: u32,
    /// `(r, M)` pairs, sorted by r.
    pub m_values: Vec<(u32, BigRational)>,
    /// Maximum over r of the rounded M.
    pub c_estimate: BigInt,
}

pub fn component_estimate(rows: &[EstimateRow]) -> Result<ComponentEstimate> {
    let first = rows.first().ok_or(Error::EmptySample)?;
    if rows
        .iter()
        .any(|r| (r.g, r.f, r.p) != (first.g, first.f, first.p))
    {
        return Err(Error::InvalidInput(
            "component estimates need rows with one (g, f, p)".into(),
        ));
    }
    let mut m_values: Vec<(u32, BigRational)> = rows.iter().map(|r| (r.r, r.m.clone())).collect();
    m_values.sort_by_key(|(r, _)| *r);
    let c_estimate = m_values
        .iter()
        .map(|(_, m)| round_half_even(m))
        .max()
        .expect("nonempty");
    Ok(ComponentEstimate {
        g: first.g,
        f: first.f,
        p: first.p,
        m_values,
        c_estimate,
    })
}
