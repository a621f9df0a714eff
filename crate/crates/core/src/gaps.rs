//! Consecutive-prime gaps and their normalized merits.
//!
//! Four normalizations are supported: the square-root difference
//! `√p_next − √p_prev`, the Cramér ratio `g / ln²(p_next)`, the ratio to the
//! Baker–Harman–Pintz window `g / p_next^0.525`, and the ultra-Cramér family
//! `g / ln^(1+ε)(p_next)`. All logarithms are natural.
//!
//! Scans over `[2, limit]` are chunked; each chunk starts its gap stream from
//! the prime preceding the chunk, so the pair straddling a chunk boundary is
//! seen exactly once.

use std::fmt;
use std::num::NonZeroU32;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{floor_pow_ratio, SqrtThreshold};
use crate::scan::ScanConfig;
use crate::sieve::{is_prime, next_prime, PrimeStream, Sieve, VALUE_LIMIT};

/// Default ε values for ultra-Cramér scans.
pub const DEFAULT_ULTRA_EPSILONS: [f64; 3] = [0.1, 0.25, 0.5];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GapError {
    #[error("epsilon must be a positive finite number, got {0}")]
    InvalidEpsilon(f64),
    #[error("limit {0} is outside [3, 2^63)")]
    InvalidLimit(u64),
    #[error("unknown merit kind `{0}` (expected sqrt, cramer, bhp or ultra:EPS)")]
    UnknownKind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeGap {
    pub p_prev: u64,
    pub p_next: u64,
    pub gap: u64,
}

impl PrimeGap {
    pub fn new(p_prev: u64, p_next: u64) -> PrimeGap {
        debug_assert!(p_prev < p_next);
        PrimeGap { p_prev, p_next, gap: p_next - p_prev }
    }
}

impl fmt::Display for PrimeGap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p_prev, self.p_next)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeritKind {
    /// `√p_next − √p_prev`
    SqrtDiff,
    /// `g / ln²(p_next)`
    Cramer,
    /// `g / p_next^0.525`
    Bhp,
    /// `g / ln^(1+ε)(p_next)`
    Ultra(f64),
}

impl MeritKind {
    pub fn validate(self) -> Result<MeritKind, GapError> {
        match self {
            MeritKind::Ultra(eps) if !(eps.is_finite() && eps > 0.0) => Err(GapError::InvalidEpsilon(eps)),
            kind => Ok(kind),
        }
    }

    /// Merit of `gap`; the kind must already be validated.
    #[inline]
    pub fn eval(self, gap: &PrimeGap) -> f64 {
        let next = gap.p_next as f64;
        let g = gap.gap as f64;
        match self {
            MeritKind::SqrtDiff => next.sqrt() - (gap.p_prev as f64).sqrt(),
            MeritKind::Cramer => g / log_power(next.ln(), 2.0),
            MeritKind::Bhp => g / next.powf(0.525),
            MeritKind::Ultra(eps) => g / log_power(next.ln(), 1.0 + eps),
        }
    }
}

/// `l^e`, squaring exactly when `e = 2` so that ULTRA(1) and CRAMER agree bit for bit.
#[inline]
fn log_power(l: f64, e: f64) -> f64 {
    if e == 2.0 {
        l * l
    } else {
        l.powf(e)
    }
}

impl fmt::Display for MeritKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeritKind::SqrtDiff => f.write_str("sqrt"),
            MeritKind::Cramer => f.write_str("cramer"),
            MeritKind::Bhp => f.write_str("bhp"),
            MeritKind::Ultra(eps) => write!(f, "ultra:{eps}"),
        }
    }
}

impl FromStr for MeritKind {
    type Err = GapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let kind = match s {
            "sqrt" | "sqrt_diff" => MeritKind::SqrtDiff,
            "cramer" => MeritKind::Cramer,
            "bhp" => MeritKind::Bhp,
            _ => {
                let eps = s
                    .strip_prefix("ultra:")
                    .and_then(|e| e.parse::<f64>().ok())
                    .ok_or_else(|| GapError::UnknownKind(s.to_string()))?;
                MeritKind::Ultra(eps)
            }
        };
        kind.validate()
    }
}

impl Serialize for MeritKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MeritKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Merit of `gap` under `kind`.
pub fn merit_of(gap: &PrimeGap, kind: MeritKind) -> Result<f64, GapError> {
    Ok(kind.validate()?.eval(gap))
}

/// Consecutive-prime pairs whose larger member lies in a closed range.
pub struct GapStream {
    primes: PrimeStream,
    prev: Option<u64>,
}

impl Iterator for GapStream {
    type Item = PrimeGap;

    fn next(&mut self) -> Option<PrimeGap> {
        loop {
            let p = self.primes.next()?;
            if let Some(prev) = self.prev.replace(p) {
                return Some(PrimeGap::new(prev, p));
            }
        }
    }
}

impl Sieve {
    /// All gaps `(p_prev, p_next)` with `lo ≤ p_next ≤ hi`.
    pub fn gap_stream(&self, lo: u64, hi: u64) -> GapStream {
        let primes = self.prime_stream(lo, hi, true);
        GapStream { prev: primes.carry_in(), primes }
    }
}

pub fn gap_stream(lo: u64, hi: u64) -> GapStream {
    Sieve::default().gap_stream(lo, hi)
}

fn check_limit(limit: u64) -> Result<(), GapError> {
    if (3..VALUE_LIMIT).contains(&limit) {
        Ok(())
    } else {
        Err(GapError::InvalidLimit(limit))
    }
}

/// `a` ranks above `b`: larger merit, ties to the smaller `p_next`.
#[inline]
fn outranks(a: (f64, u64), b: (f64, u64)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Running maximum of one merit over all gaps with `p_next ≤ scanned_up_to`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub merit_kind: MeritKind,
    pub best_gap: PrimeGap,
    pub best_value: f64,
    pub scanned_up_to: u64,
}

impl GapRecord {
    pub const CSV_HEADER: [&'static str; 6] = ["merit_kind", "p_prev", "p_next", "gap", "value", "scanned_up_to"];

    /// CSV fields in [`GapRecord::CSV_HEADER`] order, value at 17 significant digits.
    pub fn csv_fields(&self) -> [String; 6] {
        [
            self.merit_kind.to_string(),
            self.best_gap.p_prev.to_string(),
            self.best_gap.p_next.to_string(),
            self.best_gap.gap.to_string(),
            format_sig17(self.best_value),
            self.scanned_up_to.to_string(),
        ]
    }
}

/// A double printed with 17 significant digits, enough to round-trip.
pub fn format_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn max_merit(limit: u64, kind: MeritKind) -> Result<GapRecord, GapError> {
    max_merit_with(&ScanConfig::default(), limit, kind)
}

pub fn max_merit_with(cfg: &ScanConfig, limit: u64, kind: MeritKind) -> Result<GapRecord, GapError> {
    let scan = merit_scan_with(cfg, limit, kind, 1)?;
    let (best_gap, best_value) = scan.top[0];
    Ok(GapRecord { merit_kind: kind, best_gap, best_value, scanned_up_to: limit })
}

/// Top gaps by merit plus the trace of running-maximum records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeritScan {
    pub merit_kind: MeritKind,
    pub scanned_up_to: u64,
    /// Best gaps, value descending, ties by `p_next` ascending.
    pub top: Vec<(PrimeGap, f64)>,
    /// Each gap whose merit strictly exceeded every earlier gap's.
    pub records: Vec<(PrimeGap, f64)>,
}

#[derive(Default)]
struct ChunkMerits {
    top: Vec<(PrimeGap, f64)>,
    records: Vec<(PrimeGap, f64)>,
}

fn push_top(top: &mut Vec<(PrimeGap, f64)>, cap: usize, gap: PrimeGap, value: f64) {
    if top.len() == cap {
        let last = top[cap - 1];
        if !outranks((value, gap.p_next), (last.1, last.0.p_next)) {
            return;
        }
        top.pop();
    }
    let at = top.partition_point(|e| outranks((e.1, e.0.p_next), (value, gap.p_next)));
    top.insert(at, (gap, value));
}

pub fn merit_scan_with(cfg: &ScanConfig, limit: u64, kind: MeritKind, top: usize) -> Result<MeritScan, GapError> {
    let kind = kind.validate()?;
    check_limit(limit)?;
    let cap = top.max(1);
    let chunks = ScanConfig::partition(2, limit, cfg.chunk_size);
    let parts = cfg.map_chunks(&chunks, |a, b| {
        let mut acc = ChunkMerits::default();
        let mut best = f64::NEG_INFINITY;
        for gap in cfg.sieve.gap_stream(a, b) {
            let v = kind.eval(&gap);
            push_top(&mut acc.top, cap, gap, v);
            if v > best {
                best = v;
                acc.records.push((gap, v));
            }
        }
        acc
    });
    let mut out = MeritScan { merit_kind: kind, scanned_up_to: limit, top: Vec::new(), records: Vec::new() };
    let mut best = f64::NEG_INFINITY;
    for part in parts {
        for (gap, v) in part.top {
            push_top(&mut out.top, cap, gap, v);
        }
        for (gap, v) in part.records {
            if v > best {
                best = v;
                out.records.push((gap, v));
            }
        }
    }
    out.top.truncate(top);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub k: u32,
    pub last_violation: Option<PrimeGap>,
    pub n_k: u64,
    pub scanned_up_to: u64,
}

/// Last gap with `√p_next − √p_prev ≥ 1/k` up to `limit`, and the resulting `N_k`.
pub fn find_threshold(k: NonZeroU32, limit: u64) -> Result<ThresholdResult, GapError> {
    find_threshold_with(&ScanConfig::default(), k, limit)
}

pub fn find_threshold_with(cfg: &ScanConfig, k: NonZeroU32, limit: u64) -> Result<ThresholdResult, GapError> {
    check_limit(limit)?;
    let threshold = SqrtThreshold::reciprocal(k.get());
    let last_violation = sqrt_violations(cfg, &threshold, 2, limit).pop();
    let n_k = match last_violation {
        Some(g) => next_prime(g.p_next).expect("a prime follows every prime below 2^62"),
        None => 2,
    };
    Ok(ThresholdResult { k: k.get(), last_violation, n_k, scanned_up_to: limit })
}

/// Every gap with `lo ≤ p_next ≤ hi` reaching the square-root threshold, in order.
pub fn sqrt_violations(cfg: &ScanConfig, threshold: &SqrtThreshold, lo: u64, hi: u64) -> Vec<PrimeGap> {
    let chunks = ScanConfig::partition(lo, hi, cfg.chunk_size);
    cfg.map_chunks(&chunks, |a, b| {
        cfg.sieve.gap_stream(a, b).filter(|g| threshold.reached_by(g.p_prev, g.p_next)).collect::<Vec<_>>()
    })
    .concat()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CramerCalibration {
    pub max_ratio: f64,
    pub min_integer_k: u64,
    pub at: PrimeGap,
    pub scanned_up_to: u64,
}

/// Largest `g / ln²(p_next)` up to `limit` and the smallest integer `k` exceeding it.
pub fn calibrate_cramer(limit: u64) -> Result<CramerCalibration, GapError> {
    calibrate_cramer_with(&ScanConfig::default(), limit)
}

pub fn calibrate_cramer_with(cfg: &ScanConfig, limit: u64) -> Result<CramerCalibration, GapError> {
    let rec = max_merit_with(cfg, limit, MeritKind::Cramer)?;
    Ok(CramerCalibration {
        max_ratio: rec.best_value,
        min_integer_k: rec.best_value.floor() as u64 + 1,
        at: rec.best_gap,
        scanned_up_to: limit,
    })
}

/// `⌊x^0.525⌋`, exact.
pub fn bhp_window_width(x: u64) -> u64 {
    floor_pow_ratio(x, 21, 40)
}

/// Largest prime in `[x − ⌊x^0.525⌋, x]`, if any.
pub fn bhp_witness(x: u64) -> Option<u64> {
    let lo = x.saturating_sub(bhp_window_width(x));
    (lo..=x).rev().find(|&m| is_prime(m))
}

/// Whether `[x − ⌊x^0.525⌋, x]` contains a prime.
pub fn check_bhp_window(x: u64) -> bool {
    bhp_witness(x).is_some()
}
