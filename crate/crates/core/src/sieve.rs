//! Segmented sieve of Eratosthenes over 64-bit subranges.
//!
//! A [`Segment`] holds one primality bit per candidate integer in `[lo, hi]`.
//! Base primes up to `⌊√hi⌋` are produced once and cached process-wide, so
//! sieving many disjoint segments (possibly from several threads) only pays
//! for the crossing-off work.
//!
//! Every value handled here must stay below `2^63` so that callers can form
//! `2n` without overflowing `u64`.

use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

/// Exclusive upper limit for every integer accepted by this crate.
pub const VALUE_LIMIT: u64 = 1 << 63;

/// Default number of candidates per segment.
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SieveError {
    #[error("segment [{lo}, {hi}] spans {len} candidates, more than the configured {max}")]
    RangeTooLarge { lo: u64, hi: u64, len: u64, max: u64 },
    #[error("value {0} is not below 2^63")]
    Overflow(u64),
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },
}

/// Primes up to some limit, used to cross off composites in segments.
#[derive(Debug)]
pub struct BasePrimes {
    limit: u64,
    primes: Vec<u32>,
}

impl BasePrimes {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All base primes `≤ bound` (bound must not exceed `limit`).
    pub fn up_to(&self, bound: u64) -> &[u32] {
        debug_assert!(bound <= self.limit);
        let end = self.primes.partition_point(|&p| u64::from(p) <= bound);
        &self.primes[..end]
    }

    fn build(limit: u64) -> BasePrimes {
        // √(2^63 - 1) < 2^32, so every base prime fits in a u32.
        let limit = limit.min(u64::from(u32::MAX));
        let tiny = simple_sieve(limit.isqrt());
        let mut primes: Vec<u32> = Vec::new();
        let mut lo = 2;
        while lo <= limit {
            let hi = limit.min(lo + DEFAULT_SEGMENT_SIZE - 1);
            let seg = Segment::sieve_with(lo, hi, &tiny);
            primes.extend(seg.primes().map(|p| p as u32));
            lo = hi + 1;
        }
        BasePrimes { limit, primes }
    }
}

/// Plain sieve of Eratosthenes returning all primes `≤ n`.
fn simple_sieve(n: u64) -> Vec<u32> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&i| !composite[i]).map(|i| i as u32).collect()
}

static BASE_CACHE: OnceLock<Mutex<Option<Arc<BasePrimes>>>> = OnceLock::new();

/// Cached base primes covering at least `⌊√hi⌋`.
pub fn base_primes_for(hi: u64) -> Arc<BasePrimes> {
    let need = hi.isqrt();
    let cache = BASE_CACHE.get_or_init(|| Mutex::new(None));
    let mut slot = cache.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(base) = slot.as_ref() {
        if base.limit >= need {
            return Arc::clone(base);
        }
    }
    let grown = slot.as_ref().map_or(0, |b| b.limit.saturating_mul(2));
    let base = Arc::new(BasePrimes::build(need.max(grown).max(1 << 16)));
    *slot = Some(Arc::clone(&base));
    base
}

/// Primality flags for every integer in `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    lo: u64,
    hi: u64,
    flags: Vec<u64>,
}

impl Segment {
    /// Sieves `[lo, hi]` with the given base primes. Caller guarantees the
    /// base primes reach `⌊√hi⌋` and that `2 ≤ lo ≤ hi < 2^63`.
    pub(crate) fn sieve_with(lo: u64, hi: u64, base: &[u32]) -> Segment {
        let len = hi - lo + 1;
        let words = len.div_ceil(64) as usize;
        // Odd positions set; bit i stands for lo + i.
        let pattern = if lo.is_multiple_of(2) { 0xAAAA_AAAA_AAAA_AAAAu64 } else { 0x5555_5555_5555_5555u64 };
        let mut flags = vec![pattern; words];
        if lo == 2 {
            flags[0] |= 1;
        }
        for &p in base {
            let p = u64::from(p);
            if p == 2 {
                continue;
            }
            let sq = p * p;
            if sq > hi {
                break;
            }
            let mut m = if sq >= lo { sq } else { lo.div_ceil(p) * p };
            if m % 2 == 0 {
                m += p;
            }
            let step = (2 * p) as usize;
            let mut idx = (m - lo) as usize;
            let len = len as usize;
            while idx < len {
                flags[idx >> 6] &= !(1u64 << (idx & 63));
                idx += step;
            }
        }
        let tail = len % 64;
        if tail != 0 {
            flags[words - 1] &= (1u64 << tail) - 1;
        }
        Segment { lo, hi, flags }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    /// Number of candidates covered.
    pub fn candidates(&self) -> u64 {
        self.hi - self.lo + 1
    }

    /// Primality of `n`; `n` must lie inside the segment.
    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n >= self.lo && n <= self.hi, "{n} outside [{}, {}]", self.lo, self.hi);
        let i = (n - self.lo) as usize;
        self.flags[i >> 6] >> (i & 63) & 1 == 1
    }

    /// Primes of the segment in increasing order.
    pub fn primes(&self) -> SegmentPrimes<'_> {
        SegmentPrimes { seg: self, word: 0, bits: self.flags.first().copied().unwrap_or(0) }
    }

    pub fn count(&self) -> u64 {
        self.flags.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Number of primes in `[a, b] ∩ [lo, hi]`.
    pub fn count_in(&self, a: u64, b: u64) -> u64 {
        let a = a.max(self.lo);
        let b = b.min(self.hi);
        if a > b {
            return 0;
        }
        let (i, j) = ((a - self.lo) as usize, (b - self.lo) as usize);
        let (wi, wj) = (i >> 6, j >> 6);
        let lo_mask = !0u64 << (i & 63);
        let hi_mask = !0u64 >> (63 - (j & 63));
        if wi == wj {
            return u64::from((self.flags[wi] & lo_mask & hi_mask).count_ones());
        }
        let mut total = u64::from((self.flags[wi] & lo_mask).count_ones());
        total += self.flags[wi + 1..wj].iter().map(|w| u64::from(w.count_ones())).sum::<u64>();
        total + u64::from((self.flags[wj] & hi_mask).count_ones())
    }
}

pub struct SegmentPrimes<'a> {
    seg: &'a Segment,
    word: usize,
    bits: u64,
}

impl Iterator for SegmentPrimes<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.bits == 0 {
            self.word += 1;
            self.bits = *self.seg.flags.get(self.word)?;
        }
        let tz = self.bits.trailing_zeros() as u64;
        self.bits &= self.bits - 1;
        Some(self.seg.lo + (self.word as u64) * 64 + tz)
    }
}

/// Sieve engine with a configurable segment size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sieve {
    segment_size: u64,
}

impl Default for Sieve {
    fn default() -> Self {
        Sieve { segment_size: DEFAULT_SEGMENT_SIZE }
    }
}

impl Sieve {
    pub fn new(segment_size: u64) -> Sieve {
        Sieve { segment_size: segment_size.max(64) }
    }

    pub fn segment_size(&self) -> u64 {
        self.segment_size
    }

    pub fn segment(&self, lo: u64, hi: u64) -> Result<Segment, SieveError> {
        if hi >= VALUE_LIMIT {
            return Err(SieveError::Overflow(hi));
        }
        if lo < 2 || lo > hi {
            return Err(SieveError::InvalidRange { lo, hi });
        }
        let len = hi - lo + 1;
        if len > self.segment_size {
            return Err(SieveError::RangeTooLarge { lo, hi, len, max: self.segment_size });
        }
        let base = base_primes_for(hi);
        Ok(Segment::sieve_with(lo, hi, base.up_to(hi.isqrt())))
    }

    /// Number of primes in the closed range `[lo, hi]`, segment by segment.
    pub fn count_closed(&self, lo: u64, hi: u64) -> u64 {
        let lo = lo.max(2);
        if lo > hi {
            return 0;
        }
        assert!(hi < VALUE_LIMIT, "{hi} is not below 2^63");
        let base = base_primes_for(hi);
        let mut total = 0;
        let mut a = lo;
        loop {
            let b = hi.min(a.saturating_add(self.segment_size - 1));
            total += Segment::sieve_with(a, b, base.up_to(b.isqrt())).count();
            if b == hi {
                return total;
            }
            a = b + 1;
        }
    }

    pub fn count_primes_open(&self, a: u64, b: u64) -> u64 {
        if b <= a.saturating_add(1) {
            return 0;
        }
        self.count_closed(a + 1, b - 1)
    }

    pub fn prime_stream(&self, lo: u64, hi: u64, with_carry: bool) -> PrimeStream {
        assert!(hi < VALUE_LIMIT, "{hi} is not below 2^63");
        let carry_in = if with_carry { prev_prime(lo) } else { None };
        PrimeStream {
            sieve: *self,
            next_lo: lo.max(2),
            hi,
            segment: None,
            pos: 0,
            carry_in,
        }
    }
}

/// Sieves `[lo, hi]` with the default segment size.
pub fn sieve_segment(lo: u64, hi: u64) -> Result<Segment, SieveError> {
    Sieve::default().segment(lo, hi)
}

/// `#{p prime : a < p < b}`.
///
/// # Panics
/// If `b ≥ 2^63`.
pub fn count_primes_open(a: u64, b: u64) -> u64 {
    Sieve::default().count_primes_open(a, b)
}

/// Primes in `[lo, hi]`, optionally carrying the largest prime below `lo`.
pub fn prime_stream(lo: u64, hi: u64, with_carry: bool) -> PrimeStream {
    Sieve::default().prime_stream(lo, hi, with_carry)
}

/// Lazily sieved, strictly increasing primes of a closed range.
#[derive(Debug)]
pub struct PrimeStream {
    sieve: Sieve,
    next_lo: u64,
    hi: u64,
    segment: Option<Vec<u64>>,
    pos: usize,
    carry_in: Option<u64>,
}

impl PrimeStream {
    /// Largest prime strictly below the range start, when requested and one exists.
    pub fn carry_in(&self) -> Option<u64> {
        self.carry_in
    }

    fn refill(&mut self) -> bool {
        while self.next_lo <= self.hi {
            let lo = self.next_lo;
            let hi = self.hi.min(lo.saturating_add(self.sieve.segment_size - 1));
            let base = base_primes_for(hi);
            let primes: Vec<u64> = Segment::sieve_with(lo, hi, base.up_to(hi.isqrt())).primes().collect();
            self.next_lo = hi + 1;
            if !primes.is_empty() {
                self.segment = Some(primes);
                self.pos = 0;
                return true;
            }
        }
        false
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if let Some(primes) = &self.segment {
                if let Some(&p) = primes.get(self.pos) {
                    self.pos += 1;
                    return Some(p);
                }
                self.segment = None;
            }
            if !self.refill() {
                return None;
            }
        }
    }
}

const MR_BASES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Exact primality for any `u64`: small trial division, then a strong
/// probable-prime test with a base set that is deterministic below 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'bases: for &a in &MR_BASES {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Largest prime strictly below `n`.
pub fn prev_prime(n: u64) -> Option<u64> {
    (2..n).rev().find(|&m| is_prime(m))
}

/// Smallest prime strictly above `n`, if one exists below 2^63.
pub fn next_prime(n: u64) -> Option<u64> {
    (n.checked_add(1)?..VALUE_LIMIT).find(|&m| is_prime(m))
}
