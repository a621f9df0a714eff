// A full verification campaign written as JSON and CSV, as the CLI does.
//
// $ cargo run --release --example campaign_report -- 1000000

use std::num::NonZeroU32;

use gaplab::{find_threshold, verify_claim, Claim, ScanConfig};
use gaplab::verifier::verify_claim_with;

fn main() {
    let n_hi: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1_000_000);

    let k = NonZeroU32::new(2).unwrap();
    let n_k = find_threshold(k, 2 * n_hi).unwrap().n_k;
    let claims = [Claim::Trost, Claim::Cor2, Claim::Prop1 { k, n_k }, Claim::Prop2 { k, n: 2 }, Claim::Prop3 { c: 0 }];
    for claim in claims {
        let r = verify_claim(claim, 2, n_hi).unwrap();
        println!(
            "{:<8} rows {:>8}  violations {:>3}  out of premise {:>3}  minimal n {:?}  {} ms",
            claim.name(),
            r.rows_checked,
            r.violations.len(),
            r.out_of_premise.len(),
            r.minimal_valid_n,
            r.wall_time_ms
        );
    }

    // One thread or eight, the report is the same.
    let one = verify_claim_with(&ScanConfig::default().with_parallelism(1), Claim::Prop2 { k, n: 2 }, 2, 10_000).unwrap();
    let mut eight = verify_claim_with(&ScanConfig::default().with_parallelism(8), Claim::Prop2 { k, n: 2 }, 2, 10_000).unwrap();
    eight.wall_time_ms = one.wall_time_ms;
    assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&eight).unwrap());

    print!("{}", serde_json::to_string_pretty(&one).unwrap().lines().take(12).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    one.write_csv(std::io::stdout().lock()).unwrap();
}
