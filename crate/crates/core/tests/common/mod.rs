//! Independent oracles: plain Eratosthenes, trial division, big-integer
//! bisection and 60-digit decimal arithmetic. None of them share code with
//! the library.

#![allow(dead_code)]

use dashu_float::DBig;
use num_bigint::BigUint;

pub fn trial_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `flags[i]` is whether `i` is prime, for `i ≤ limit`; one byte per integer.
pub fn plain_sieve(limit: u64) -> Vec<bool> {
    let n = limit as usize;
    let mut flags = vec![true; n + 1];
    flags[0] = false;
    if n >= 1 {
        flags[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if flags[i] {
            let mut j = i * i;
            while j <= n {
                flags[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    flags
}

pub struct Oracle {
    pub flags: Vec<bool>,
    /// `pi[i]` = number of primes ≤ i.
    pub pi: Vec<u32>,
}

impl Oracle {
    pub fn new(limit: u64) -> Oracle {
        let flags = plain_sieve(limit);
        let mut pi = Vec::with_capacity(flags.len());
        let mut c = 0u32;
        for &f in &flags {
            c += u32::from(f);
            pi.push(c);
        }
        Oracle { flags, pi }
    }

    pub fn limit(&self) -> u64 {
        self.flags.len() as u64 - 1
    }

    /// Primes strictly between `a` and `b`.
    pub fn count_open(&self, a: u64, b: u64) -> u64 {
        if b <= a + 1 {
            return 0;
        }
        u64::from(self.pi[b as usize - 1] - self.pi[a as usize])
    }

    pub fn primes(&self) -> Vec<u64> {
        (0..self.flags.len() as u64).filter(|&i| self.flags[i as usize]).collect()
    }

    /// Consecutive prime pairs with `p_next ≤ limit`.
    pub fn gaps(&self) -> Vec<(u64, u64)> {
        self.primes().windows(2).map(|w| (w[0], w[1])).collect()
    }
}

/// `⌊x^(p/q)⌋` by bisection on big integers.
pub fn bisect_pow_ratio(x: u64, p: u32, q: u32) -> u64 {
    let t = BigUint::from(x).pow(p);
    let (mut lo, mut hi) = (0u64, 1u64 << 32);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if BigUint::from(mid).pow(q) <= t {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// `⌊(k/4)√(2n)⌋` as the largest `m` with `16m² ≤ 2n·k²`.
pub fn oracle_prop1(n: u64, k: u32) -> u64 {
    let t = BigUint::from(2 * n) * BigUint::from(k) * BigUint::from(k);
    let (mut lo, mut hi) = (0u64, 1u64 << 40);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if BigUint::from(16u8) * BigUint::from(mid) * BigUint::from(mid) <= t {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// `⌊½(2n)^0.475⌋`
pub fn oracle_prop3(n: u64) -> u64 {
    bisect_pow_ratio(2 * n, 19, 40) / 2
}

fn d(n: u64) -> DBig {
    DBig::from(n).with_precision(60).value()
}

/// `⌊n / (k ln²(2n))⌋` at 60 digits.
pub fn oracle_prop2(n: u64, k: u32) -> u64 {
    let l = d(2 * n).ln();
    let q = d(n) / (d(u64::from(k)) * &l * &l);
    u64::try_from(q.floor().to_int().value()).unwrap()
}

/// `√b − √a ≥ 1/k` decided at 60 digits.
pub fn oracle_sqrt_reaches(a: u64, b: u64, k: u32) -> bool {
    let diff = d(b).sqrt() - d(a).sqrt();
    diff * d(u64::from(k)) >= d(1)
}

/// `n/(3 ln 2n) < c < 7n/(5 ln n)` at 60 digits.
pub fn oracle_trost(n: u64, c: u64) -> bool {
    let lower = d(3) * d(c) * d(2 * n).ln() > d(n);
    let upper = d(5) * d(c) * d(n).ln() < d(7) * d(n);
    lower && upper
}

/// Last gap with `√p_next − √p_prev ≥ 1/k` among `gaps`, and `N_k`.
pub fn oracle_threshold(gaps: &[(u64, u64)], k: u32) -> (Option<(u64, u64)>, u64) {
    let pos = gaps.iter().rposition(|&(a, b)| oracle_sqrt_reaches(a, b, k));
    match pos {
        Some(i) => (Some(gaps[i]), gaps.get(i + 1).map(|g| g.1).expect("scan past the last violation")),
        None => (None, 2),
    }
}

const TABLE_DIGITS: usize = 70;

fn t(n: u64) -> DBig {
    DBig::from(n).with_precision(TABLE_DIGITS).value()
}

/// `atanh(1/q) = Σ 1/((2j+1)·q^(2j+1))`
fn atanh_inv(q: u64) -> DBig {
    let eps: DBig = "1e-80".parse::<DBig>().unwrap().with_precision(TABLE_DIGITS).value();
    let q2 = t(q) * t(q);
    let mut pow = t(q);
    let mut sum = t(0);
    let mut j = 0u64;
    loop {
        let term = t(1) / (&pow * t(2 * j + 1));
        if term < eps {
            return sum;
        }
        sum += term;
        pow *= &q2;
        j += 1;
    }
}

/// Natural logarithms of `1..=limit` at 70 digits, built from
/// `ln p = ln(p−1) + 2·atanh(1/(2p−1))` for primes and `ln(ab) = ln a + ln b`.
pub struct LnTable {
    ln: Vec<DBig>,
}

impl LnTable {
    pub fn new(limit: u64) -> LnTable {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        let mut ln = vec![t(0); n + 1];
        for m in 2..=n {
            let p = spf[m] as usize;
            ln[m] = if p == m {
                &ln[m - 1] + t(2) * atanh_inv(2 * m as u64 - 1)
            } else {
                &ln[p] + &ln[m / p]
            };
        }
        LnTable { ln }
    }

    pub fn ln(&self, m: u64) -> &DBig {
        &self.ln[m as usize]
    }

    /// `n/(3 ln 2n)` and `7n/(5 ln n)`.
    pub fn trost(&self, n: u64) -> (DBig, DBig) {
        (t(n) / (t(3) * self.ln(2 * n)), t(7) * t(n) / (t(5) * self.ln(n)))
    }

    /// `n/(3 ln 2n) < c < 7n/(5 ln n)`
    pub fn trost_holds(&self, n: u64, c: u64) -> bool {
        let (lo, hi) = self.trost(n);
        t(c) > lo && t(c) < hi
    }

    /// `⌊n / (k ln²(2n))⌋`
    pub fn prop2(&self, n: u64, k: u32) -> u64 {
        let l = self.ln(2 * n);
        let q = t(n) / (t(u64::from(k)) * l * l);
        u64::try_from(q.floor().to_int().value()).unwrap()
    }
}

pub fn to_f64(x: &DBig) -> f64 {
    x.to_f64().value()
}
