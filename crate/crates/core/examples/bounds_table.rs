// Every bound next to the true count, for a few n.
//
// $ cargo run --release --example bounds_table

use std::num::NonZeroU32;

use gaplab::{count_primes_open, BoundKind, BoundValue};

fn main() {
    let k = NonZeroU32::new(2).unwrap();
    let kinds = BoundKind::all(k);

    print!("{:>10} {:>8}", "n", "actual");
    for b in &kinds {
        print!(" {:>12}", b.name());
    }
    println!();
    for n in [10u64, 131, 1_000, 100_000, 10_000_000] {
        print!("{n:>10} {:>8}", count_primes_open(n, 2 * n));
        for b in &kinds {
            match b.evaluate(n).unwrap() {
                BoundValue::Count(c) => print!(" {c:>12}"),
                BoundValue::Real(x) => print!(" {x:>12.3}"),
            }
        }
        println!();
    }
}
