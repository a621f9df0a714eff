//! Exact decisions at integer and rational boundaries.
//!
//! Bounds and thresholds are evaluated in double precision first. Whenever
//! the double result lies too close to a boundary for its rounding error to
//! be ruled out, the decision is redone exactly: with big-integer powers for
//! rational exponents, by squaring out radicals for square-root differences,
//! and with 60-digit decimal arithmetic for logarithms.

use dashu_float::DBig;
use num_bigint::{BigInt, BigUint};

/// `⌊x^(p/q)⌋`, exact.
pub fn floor_pow_ratio(x: u64, p: u32, q: u32) -> u64 {
    assert!(q > 0);
    if x < 2 || p == 0 {
        return if p == 0 { 1 } else { x };
    }
    let y = (x as f64).powf(f64::from(p) / f64::from(q));
    let clear = (y - y.round()).abs() > 1e-9 * y.max(1.0);
    if clear && y < 9.0e15 {
        return y as u64;
    }
    let target = BigUint::from(x).pow(p);
    let fits = |w: u64| BigUint::from(w).pow(q) <= target;
    let mut w = y.min(u64::MAX as f64) as u64;
    while w > 0 && !fits(w) {
        w -= 1;
    }
    while fits(w + 1) {
        w += 1;
    }
    w
}

/// Positive rational threshold for square-root differences, kept both as a
/// double (for filtering) and as an exact fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct SqrtThreshold {
    value: f64,
    num: BigUint,
    den: BigUint,
}

impl SqrtThreshold {
    /// The threshold `1/k`.
    pub fn reciprocal(k: u32) -> SqrtThreshold {
        assert!(k > 0);
        SqrtThreshold { value: 1.0 / f64::from(k), num: BigUint::from(1u8), den: BigUint::from(k) }
    }

    /// The exact binary value of a finite, non-negative double.
    pub fn from_f64(c: f64) -> Option<SqrtThreshold> {
        if !c.is_finite() || c < 0.0 {
            return None;
        }
        if c == 0.0 {
            return Some(SqrtThreshold { value: 0.0, num: BigUint::ZERO, den: BigUint::from(1u8) });
        }
        let bits = c.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1 << 52) - 1);
        let (mant, exp) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
        let tz = mant.trailing_zeros() as i64;
        let (mant, exp) = (mant >> tz, exp + tz);
        let (num, den) = if exp >= 0 {
            (BigUint::from(mant) << exp as usize, BigUint::from(1u8))
        } else {
            (BigUint::from(mant), BigUint::from(1u8) << (-exp) as usize)
        };
        Some(SqrtThreshold { value: c, num, den })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Whether `√b − √a ≥ threshold` for `a < b`.
    pub fn reached_by(&self, a: u64, b: u64) -> bool {
        debug_assert!(a < b);
        let sb = (b as f64).sqrt();
        let diff = sb - (a as f64).sqrt();
        let tol = 1e-9f64.max(1e-14 * sb);
        if diff > self.value + tol {
            true
        } else if diff < self.value - tol {
            false
        } else {
            self.reached_exact(a, b)
        }
    }

    /// `den·√b − den·√a ≥ num` ⇔ `den²(b−a) − num² ≥ 2·num·den·√a`; the
    /// right side is non-negative, so a negative left side decides `false`,
    /// otherwise both sides are squared.
    pub fn reached_exact(&self, a: u64, b: u64) -> bool {
        let den2 = BigInt::from(&self.den * &self.den);
        let num = BigInt::from(self.num.clone());
        let lhs = den2 * BigInt::from(b - a) - &num * &num;
        if lhs.sign() == num_bigint::Sign::Minus {
            return false;
        }
        let den = BigInt::from(self.den.clone());
        let rhs_sq = BigInt::from(4u8) * &num * &num * &den * &den * BigInt::from(a);
        &lhs * &lhs >= rhs_sq
    }
}

const DIGITS: usize = 60;

fn dec(n: u64) -> DBig {
    DBig::from(n).with_precision(DIGITS).value()
}

/// Natural logarithm of `n` to 60 significant digits.
pub fn ln_precise(n: u64) -> DBig {
    dec(n).ln()
}

/// `n / (3·ln 2n) < actual`, decided at 60 digits.
pub fn trost_lower_below(n: u64, actual: u64) -> bool {
    dec(3) * dec(actual) * ln_precise(2 * n) > dec(n)
}

/// `actual < 7n / (5·ln n)`, decided at 60 digits.
pub fn trost_upper_above(n: u64, actual: u64) -> bool {
    dec(5) * dec(actual) * ln_precise(n) < dec(7) * dec(n)
}

/// `⌊n / (k·ln²(2n))⌋` at 60 digits.
pub fn floor_prop2_precise(n: u64, k: u32) -> u64 {
    let l = ln_precise(2 * n);
    let q = dec(n) / (dec(u64::from(k)) * &l * &l);
    u64::try_from(q.floor().to_int().value()).expect("quotient fits in u64")
}
