//! Closed-form bounds on the number of primes in `(n, 2n)`.
//!
//! The two-sided classical estimate is real-valued; the gap-derived lower
//! bounds are floored counts. Floors are exact: integer square roots and
//! big-integer powers decide the value at integer boundaries, and quotients
//! involving logarithms fall back to 60-digit arithmetic when the double
//! result is within rounding distance of an integer.

use std::fmt;
use std::num::NonZeroU32;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{floor_pow_ratio, floor_prop2_precise, trost_lower_below, trost_upper_above};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("{bound} is undefined for n = {n} (needs n ≥ {min})")]
    Domain { bound: &'static str, n: u64, min: u64 },
}

fn require(bound: &'static str, n: u64, min: u64) -> Result<(), BoundsError> {
    if n < min {
        Err(BoundsError::Domain { bound, n, min })
    } else {
        Ok(())
    }
}

/// Relative band around a real bound inside which an integer comparison is
/// re-decided at high precision.
pub const GUARD_BAND: f64 = 1e-12;

/// `n / (3·ln 2n)`
pub fn trost_lower(n: u64) -> Result<f64, BoundsError> {
    require("trost_lower", n, 2)?;
    Ok(n as f64 / (3.0 * (2.0 * n as f64).ln()))
}

/// `7n / (5·ln n)`
pub fn trost_upper(n: u64) -> Result<f64, BoundsError> {
    require("trost_upper", n, 2)?;
    Ok(7.0 * n as f64 / (5.0 * (n as f64).ln()))
}

/// Whether `trost_lower(n) < actual` and `actual < trost_upper(n)`, each
/// re-decided at 60 digits when inside the guard band.
pub fn trost_holds(n: u64, actual: u64) -> Result<(bool, bool), BoundsError> {
    let (lo, hi) = (trost_lower(n)?, trost_upper(n)?);
    let a = actual as f64;
    let lower_ok = if (a - lo).abs() <= GUARD_BAND * lo { trost_lower_below(n, actual) } else { a > lo };
    let upper_ok = if (a - hi).abs() <= GUARD_BAND * hi { trost_upper_above(n, actual) } else { a < hi };
    Ok((lower_ok, upper_ok))
}

/// `⌊(k/4)·√(2n)⌋`
pub fn bound_prop1(n: u64, k: NonZeroU32) -> u64 {
    let k = u128::from(k.get());
    // (k/4)√(2n) = √(2n·k²)/4 and ⌊⌊y⌋/4⌋ = ⌊y/4⌋
    ((2 * u128::from(n) * k * k).isqrt() / 4) as u64
}

/// `⌊½·√(2n)⌋`, the `k = 2` case of [`bound_prop1`].
pub fn bound_cor2(n: u64) -> u64 {
    bound_prop1(n, NonZeroU32::new(2).unwrap())
}

/// `⌊n / (k·ln²(2n))⌋`
pub fn bound_prop2(n: u64, k: NonZeroU32) -> Result<u64, BoundsError> {
    require("bound_prop2", n, 2)?;
    let l = (2.0 * n as f64).ln();
    let q = n as f64 / (f64::from(k.get()) * l * l);
    let r = q.round();
    if q < 1e15 && (q - r).abs() > GUARD_BAND * q.max(1.0) {
        Ok(q as u64)
    } else {
        Ok(floor_prop2_precise(n, k.get()))
    }
}

/// `⌊½·(2n)^0.475⌋`
pub fn bound_prop3(n: u64) -> u64 {
    floor_pow_ratio(2 * n, 19, 40) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum BoundKind {
    TrostLower,
    TrostUpper,
    Prop1 { k: NonZeroU32 },
    Cor2,
    Prop2 { k: NonZeroU32 },
    Prop3,
}

/// A bound value: real for the classical estimate, floored count otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundValue {
    Count(u64),
    Real(f64),
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Count(c) => write!(f, "{c}"),
            BoundValue::Real(x) => f.write_str(&crate::gaps::format_sig17(*x)),
        }
    }
}

impl BoundKind {
    /// The six bounds reported side by side for one `n`.
    pub fn all(k: NonZeroU32) -> [BoundKind; 6] {
        [
            BoundKind::TrostLower,
            BoundKind::TrostUpper,
            BoundKind::Prop1 { k },
            BoundKind::Cor2,
            BoundKind::Prop2 { k },
            BoundKind::Prop3,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::TrostLower => "trost_lower",
            BoundKind::TrostUpper => "trost_upper",
            BoundKind::Prop1 { .. } => "prop1",
            BoundKind::Cor2 => "cor2",
            BoundKind::Prop2 { .. } => "prop2",
            BoundKind::Prop3 => "prop3",
        }
    }

    pub fn evaluate(&self, n: u64) -> Result<BoundValue, BoundsError> {
        Ok(match *self {
            BoundKind::TrostLower => BoundValue::Real(trost_lower(n)?),
            BoundKind::TrostUpper => BoundValue::Real(trost_upper(n)?),
            BoundKind::Prop1 { k } => BoundValue::Count(bound_prop1(n, k)),
            BoundKind::Cor2 => BoundValue::Count(bound_cor2(n)),
            BoundKind::Prop2 { k } => BoundValue::Count(bound_prop2(n, k)?),
            BoundKind::Prop3 => BoundValue::Count(bound_prop3(n)),
        })
    }
}
