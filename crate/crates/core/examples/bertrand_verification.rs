// Exhaustive check that (n, 2n − 2) holds two primes, and where that starts.
//
// $ cargo run --release --example bertrand_verification -- 10000000

use gaplab::{find_minimal_n, verify_claim, Claim};

fn main() {
    let n_hi: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000_000);

    let small = verify_claim(Claim::Bertrand, 2, 20).unwrap();
    for row in &small.violations {
        println!("n = {:>2}: {} prime(s) in ({}, {})", row.n, row.actual, row.n, 2 * row.n - 2);
    }

    let report = verify_claim(Claim::Bertrand, 8, n_hi).unwrap();
    println!("checked {} values of n in [8, {n_hi}], {} violations", report.rows_checked, report.violations.len());
    println!("minimal valid n: {:?}", find_minimal_n(Claim::Bertrand, 10_000).unwrap());
}
