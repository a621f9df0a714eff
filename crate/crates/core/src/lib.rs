//! Prime-gap analysis and exhaustive verification of lower and upper bounds
//! on the number of primes in `(n, 2n)`.
//!
//! * [`sieve`] – segmented sieve, exact primality, open-interval prime counts.
//! * [`gaps`] – gap streams, merits, records, `N_k` thresholds, Cramér calibration.
//! * [`bounds`] – the closed-form bounds, evaluated with exact floors.
//! * [`verifier`] – per-`n` and per-gap verification campaigns and their reports.
//! * [`cli`] – the `gaplab` command-line front end.

pub mod bounds;
pub mod cli;
pub mod exact;
pub mod gaps;
pub mod scan;
pub mod sieve;
pub mod verifier;

pub use bounds::{bound_cor2, bound_prop1, bound_prop2, bound_prop3, trost_lower, trost_upper, BoundKind, BoundValue};
pub use gaps::{
    calibrate_cramer, check_bhp_window, find_threshold, gap_stream, max_merit, merit_of, GapRecord, MeritKind,
    PrimeGap, ThresholdResult,
};
pub use scan::ScanConfig;
pub use sieve::{count_primes_open, is_prime, prime_stream, sieve_segment, PrimeStream, Segment, Sieve};
pub use verifier::{find_minimal_n, verify_claim, verify_gap_condition, BoundCheckRow, Claim, VerificationReport};
