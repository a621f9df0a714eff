// Largest gap merits below a limit, for each merit kind.
//
// $ cargo run --release --example gap_merits -- 10000000

use gaplab::gaps::{merit_scan_with, DEFAULT_ULTRA_EPSILONS};
use gaplab::{max_merit, MeritKind, ScanConfig};

fn main() {
    let limit: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000_000);

    let mut kinds = vec![MeritKind::SqrtDiff, MeritKind::Cramer, MeritKind::Bhp];
    kinds.extend(DEFAULT_ULTRA_EPSILONS.iter().map(|&e| MeritKind::Ultra(e)));
    for kind in kinds {
        let best = max_merit(limit, kind).expect("valid kind");
        println!("{:<11} {:<24} {:.12}", kind.to_string(), best.best_gap.to_string(), best.best_value);
    }

    // ULTRA with ε = 1 is the Cramér ratio.
    let ultra = max_merit(limit, MeritKind::Ultra(1.0)).unwrap();
    assert_eq!(ultra.best_value.to_bits(), max_merit(limit, MeritKind::Cramer).unwrap().best_value.to_bits());

    let scan = merit_scan_with(&ScanConfig::default(), limit, MeritKind::Cramer, 5).unwrap();
    println!("\nCramér records:");
    for (gap, v) in &scan.records {
        println!("  {gap:<24} gap {:>4}  {v:.6}", gap.gap);
    }
}
