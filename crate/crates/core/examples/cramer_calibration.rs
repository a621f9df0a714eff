// Largest gap / ln²(p_next) seen, and the smallest integer constant above it.
//
// $ cargo run --release --example cramer_calibration -- 100000000

use gaplab::gaps::format_sig17;
use gaplab::calibrate_cramer;

fn main() {
    let limit: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000_000);
    let c = calibrate_cramer(limit).unwrap();
    println!("max ratio {} at {}", format_sig17(c.max_ratio), c.at);
    println!("gap < {} · ln²(p_next) for every gap with p_next ≤ {limit}", c.min_integer_k);
}
