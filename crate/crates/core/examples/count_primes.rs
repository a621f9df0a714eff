// Prime counts on open intervals (n, 2n).
//
// $ cargo run --release --example count_primes -- 1000000

use gaplab::{count_primes_open, prime_stream, Sieve};

fn main() {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1_000_000);

    println!("primes in ({n}, {}): {}", 2 * n, count_primes_open(n, 2 * n));

    // Smaller segments give the same answer.
    let small = Sieve::new(1 << 12);
    assert_eq!(small.count_primes_open(n, 2 * n), count_primes_open(n, 2 * n));

    let mut stream = prime_stream(n, 2 * n, true);
    let first: Vec<u64> = stream.by_ref().take(6).collect();
    println!("largest prime below {n}: {:?}", stream.carry_in());
    println!("first primes after it: {first:?}");
}
