// N_k: beyond it every gap has √p_next − √p_prev < 1/k.
//
// $ cargo run --release --example andrica_threshold -- 10000000

use std::num::NonZeroU32;

use gaplab::find_threshold;

fn main() {
    let limit: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000_000);

    for k in 1..=6 {
        let t = find_threshold(NonZeroU32::new(k).unwrap(), limit).unwrap();
        match t.last_violation {
            Some(g) => println!("N_{k} = {:>8}   last violation {g}", t.n_k),
            None => println!("N_{k} = {:>8}   no violation", t.n_k),
        }
    }
}
