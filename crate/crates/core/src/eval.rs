//! Redundancy experiments over an even grid of p values.
//!
//! For each p on the grid, `draws_per_p` bounds n are drawn uniformly from the
//! comparison's range, and the code's expected length is compared with a
//! reference (entropy, Huffman, or the Golomb code). Ratios are binned with
//! fixed edges, inclusive on the high end.
//!
//! Draws are reproducible in any language: the draw for grid index `k` and
//! draw index `d` uses the 64-bit word
//!
//! ```text
//! z = splitmix64(splitmix64(splitmix64(seed) ^ k) ^ d)
//! n = lo + ((z as u128 * (hi - lo) as u128) >> 64)
//! ```
//!
//! where `splitmix64(x)` adds 0x9E3779B97F4A7C15 to x and applies the
//! standard splitmix64 finaliser.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::bounded::GeometricParams;
use crate::codes::GolombParams;
use crate::error::{Error, Result};
use crate::oracle::{huffman_lengths, BoundedGeometric};

/// Relative differences at or below this are reported as exactly zero; the
/// two expected lengths come from different floating-point sums.
pub const ZERO_TOLERANCE: f64 = 1e-12;

const ENTROPY_EDGES: &[f64] = &[
    0.0,
    1e-5,
    1e-4,
    0.001,
    0.005,
    0.01,
    0.02,
    0.03,
    0.05,
    0.1,
    0.5,
    f64::INFINITY,
];
const HUFFMAN_EDGES: &[f64] = &[0.0, 1e-5, 1e-4, 0.001, 0.005, 0.01, 0.02, f64::INFINITY];
const GOLOMB_EDGES: &[f64] = &[0.05, 0.1, 0.5, 1.0, f64::INFINITY];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    Entropy,
    Huffman,
    Golomb,
}

impl Comparison {
    pub fn bin_edges(self) -> &'static [f64] {
        match self {
            Comparison::Entropy => ENTROPY_EDGES,
            Comparison::Huffman => HUFFMAN_EDGES,
            Comparison::Golomb => GOLOMB_EDGES,
        }
    }

    /// Half-open range [lo, hi) of bounds n tested for bunch size m.
    pub fn n_range(self, m: u64) -> (u64, u64) {
        let lo = match self {
            Comparison::Entropy => m.div_ceil(2).max(2),
            Comparison::Huffman | Comparison::Golomb => 2,
        };
        (lo, 3 * m)
    }

    pub fn bin_index(self, ratio: f64) -> usize {
        let ratio = if ratio.abs() <= ZERO_TOLERANCE { 0.0 } else { ratio };
        let edges = self.bin_edges();
        edges
            .iter()
            .position(|&e| ratio <= e)
            .unwrap_or(edges.len() - 1)
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Entropy => "entropy",
            Comparison::Huffman => "huffman",
            Comparison::Golomb => "golomb",
        })
    }
}

impl FromStr for Comparison {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "entropy" => Ok(Comparison::Entropy),
            "huffman" => Ok(Comparison::Huffman),
            "golomb" => Ok(Comparison::Golomb),
            other => Err(format!("unknown comparison '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub num_p: u64,
    pub draws_per_p: u64,
    pub seed: u64,
    pub comparison: Comparison,
}

impl ExperimentConfig {
    pub fn new(comparison: Comparison, num_p: u64, seed: u64) -> Self {
        Self {
            num_p,
            draws_per_p: 10,
            seed,
            comparison,
        }
    }

    /// p_k = ½ + k / (2·num_p), for k in 0..num_p.
    pub fn p_at(&self, k: u64) -> f64 {
        0.5 + k as f64 / (2.0 * self.num_p as f64)
    }
}

/// One evaluated (p, n) case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseResult {
    pub p_index: u64,
    pub p: f64,
    pub n: u64,
    /// Expected length of the bounded geometric code, L(p, n).
    pub code_len: f64,
    /// Entropy, Huffman or Golomb expected length.
    pub reference_len: f64,
    pub ratio: f64,
    /// L(p, n) ≤ H(p, n) + 2 − (n+1)p^(n−1)(1−p).
    pub within_horibe: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    /// High endpoint (inclusive); infinite for the overflow bin.
    pub high: f64,
    pub count: u64,
    pub percent: f64,
    /// First case, in grid order, that landed in this bin.
    pub sample: Option<(f64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalReport {
    pub comparison: Option<Comparison>,
    pub bins: Vec<Bin>,
    /// Σ L over all cases divided by Σ reference length.
    pub aggregate_ratio: f64,
    pub total_cases: u64,
    /// Grid points whose n range was empty.
    pub skipped: u64,
    pub horibe_violations: u64,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

impl EvalReport {
    pub fn percent_in(&self, high: f64) -> Option<f64> {
        self.bins.iter().find(|b| b.high == high).map(|b| b.percent)
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn splitmix64(x: u64) -> u64 {
    mix64(x.wrapping_add(0x9E37_79B9_7F4A_7C15))
}

/// Uniform draw in [lo, hi) for grid index `k`, draw `d`.
pub fn draw_n(seed: u64, k: u64, d: u64, lo: u64, hi: u64) -> u64 {
    let z = splitmix64(splitmix64(splitmix64(seed) ^ k) ^ d);
    lo + ((u128::from(z) * u128::from(hi - lo)) >> 64) as u64
}

/// Single-case evaluation; the ratio is (L − H)/H, (L − L_H)/L_H or
/// (L_G − L)/L_G depending on `comparison`.
pub fn evaluate_case(p: f64, n: u64, comparison: Comparison) -> Result<CaseResult> {
    let params = GeometricParams::derive(p)?;
    let dist = BoundedGeometric::new(p, n)?;
    let layout = params.layout(n);
    let code_len = layout.expected_length_for(&dist);
    let entropy = dist.entropy();
    let (reference_len, ratio) = match comparison {
        Comparison::Entropy => (entropy, (code_len - entropy) / entropy),
        Comparison::Huffman => {
            let lengths = huffman_lengths(&dist);
            let lh = dist.expected_length(|i| lengths[i as usize]);
            (lh, (code_len - lh) / lh)
        }
        Comparison::Golomb => {
            let golomb = GolombParams::new(params.m)?;
            let lg = dist.expected_length(|i| golomb.len(i));
            (lg, (lg - code_len) / lg)
        }
    };
    let within_horibe = n == 0 || {
        let bound = entropy + 2.0 - (n as f64 + 1.0) * p.powf(n as f64 - 1.0) * (1.0 - p);
        code_len <= bound + ZERO_TOLERANCE
    };
    Ok(CaseResult {
        p_index: 0,
        p,
        n,
        code_len,
        reference_len,
        ratio,
        within_horibe,
    })
}

/// Ratio and bin for one (p, n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpotCheck {
    pub ratio: f64,
    pub bin: usize,
    /// (low, high] of the bin.
    pub bin_range: (f64, f64),
}

pub fn spot_check(p: f64, n: u64, comparison: Comparison) -> Result<SpotCheck> {
    let case = evaluate_case(p, n, comparison)?;
    let bin = comparison.bin_index(case.ratio);
    let edges = comparison.bin_edges();
    let low = if bin == 0 { f64::NEG_INFINITY } else { edges[bin - 1] };
    Ok(SpotCheck {
        ratio: case.ratio,
        bin,
        bin_range: (low, edges[bin]),
    })
}

/// Every case of an experiment, in grid order, plus the number of skipped
/// grid points.
pub fn run_cases(cfg: &ExperimentConfig) -> Result<(Vec<CaseResult>, u64)> {
    if cfg.num_p == 0 {
        return Err(Error::ValueOutOfRange { value: 0, bound: 1 });
    }
    let per_p: Vec<Result<Option<Vec<CaseResult>>>> = (0..cfg.num_p)
        .into_par_iter()
        .map(|k| {
            let p = cfg.p_at(k);
            let m = GeometricParams::derive(p)?.m;
            let (lo, hi) = cfg.comparison.n_range(m);
            if lo >= hi {
                return Ok(None);
            }
            (0..cfg.draws_per_p)
                .map(|d| {
                    let n = draw_n(cfg.seed, k, d, lo, hi);
                    let mut case = evaluate_case(p, n, cfg.comparison)?;
                    case.p_index = k;
                    Ok(case)
                })
                .collect::<Result<Vec<_>>>()
                .map(Some)
        })
        .collect();

    let mut cases = Vec::new();
    let mut skipped = 0;
    for chunk in per_p {
        match chunk? {
            Some(c) => cases.extend(c),
            None => skipped += 1,
        }
    }
    if skipped > 0 {
        log::info!("{skipped} grid points had an empty n range");
    }
    Ok((cases, skipped))
}

pub fn summarize(comparison: Comparison, cases: &[CaseResult], skipped: u64) -> EvalReport {
    let edges = comparison.bin_edges();
    let mut bins: Vec<Bin> = edges
        .iter()
        .map(|&high| Bin {
            high,
            count: 0,
            percent: 0.0,
            sample: None,
        })
        .collect();
    let (mut code_total, mut ref_total) = (0.0f64, 0.0f64);
    let mut horibe_violations = 0;
    let (mut min_ratio, mut max_ratio) = (f64::INFINITY, f64::NEG_INFINITY);
    for c in cases {
        let bin = &mut bins[comparison.bin_index(c.ratio)];
        bin.count += 1;
        bin.sample.get_or_insert((c.p, c.n));
        code_total += c.code_len;
        ref_total += c.reference_len;
        horibe_violations += u64::from(!c.within_horibe);
        min_ratio = min_ratio.min(c.ratio);
        max_ratio = max_ratio.max(c.ratio);
    }
    let total = cases.len() as u64;
    if total > 0 {
        for b in &mut bins {
            b.percent = 100.0 * b.count as f64 / total as f64;
        }
    }
    EvalReport {
        comparison: Some(comparison),
        bins,
        aggregate_ratio: if ref_total > 0.0 { code_total / ref_total } else { 0.0 },
        total_cases: total,
        skipped,
        horibe_violations,
        min_ratio,
        max_ratio,
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<EvalReport> {
    let (cases, skipped) = run_cases(cfg)?;
    Ok(summarize(cfg.comparison, &cases, skipped))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(format!("unknown format '{other}'")),
        }
    }
}

fn bin_label(bins: &[Bin], idx: usize) -> String {
    let high = bins[idx].high;
    if high.is_infinite() {
        match idx.checked_sub(1) {
            Some(prev) => format!(">{}", bins[prev].high),
            None => "inf".to_string(),
        }
    } else {
        format!("{high}")
    }
}

/// Grid p values carry float noise (0.5589999999999999); nine decimals is
/// exact for any grid up to 10^8 points.
fn short_p(p: f64) -> String {
    let s = format!("{p:.9}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn emit_report(report: &EvalReport, format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str("bin_high,percent,sample_p,sample_n\n");
            for (idx, b) in report.bins.iter().enumerate() {
                let (sp, sn) = match b.sample {
                    Some((p, n)) => (short_p(p), n.to_string()),
                    None => (String::new(), String::new()),
                };
                let _ = writeln!(out, "{},{:.3},{sp},{sn}", bin_label(&report.bins, idx), b.percent);
            }
        }
        ReportFormat::Markdown => {
            let name = report
                .comparison
                .map(|c| c.to_string())
                .unwrap_or_else(|| "none".into());
            let _ = writeln!(out, "## Comparison: {name}\n");
            out.push_str("| high | % | sample p | n |\n|---|---:|---:|---:|\n");
            for (idx, b) in report.bins.iter().enumerate() {
                let (sp, sn) = match b.sample {
                    Some((p, n)) => (short_p(p), n.to_string()),
                    None => (String::new(), String::new()),
                };
                let _ = writeln!(
                    out,
                    "| {} | {:.1} | {sp} | {sn} |",
                    bin_label(&report.bins, idx),
                    b.percent
                );
            }
            let _ = writeln!(out, "\naggregate ratio: {:.6}", report.aggregate_ratio);
            let _ = writeln!(out, "total cases: {}", report.total_cases);
            if report.skipped > 0 {
                let _ = writeln!(out, "skipped grid points: {}", report.skipped);
            }
        }
    }
    out
}
