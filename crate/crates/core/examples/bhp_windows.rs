// Windows [x − ⌊x^0.525⌋, x] that miss every prime.
//
// $ cargo run --release --example bhp_windows -- 1000000

use gaplab::gaps::{bhp_window_width, bhp_witness};
use gaplab::{verify_claim, Claim};

fn main() {
    let x_hi: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1_000_000);

    let report = verify_claim(Claim::BhpWindow, 2, x_hi).unwrap();
    for row in &report.violations {
        let x = row.n;
        assert_eq!(bhp_witness(x), None);
        println!("x = {x}: window [{}, {x}] has no prime", x - bhp_window_width(x));
    }
    if let Some(x0) = report.minimal_valid_n {
        println!("every x in [{x0}, {x_hi}] has a prime in its window");
    }
}
