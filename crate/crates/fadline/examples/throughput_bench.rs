//! Quick throughput sweep of the three kernels across buffer sizes.
//! The full methodology (2^10..2^22 at ten million ticks per
//! repetition) runs via `fadline bench`; this trims the workload for a
//! fast look at the curve shapes.
//!
//!     cargo run --release --example throughput_bench

use fadline::bench::{run_sweep, REPETITIONS};

fn main() {
    let sizes: Vec<usize> = (10..=20).map(|p| 1usize << p).collect();
    let results = run_sweep(&sizes, 400_000, false).unwrap();

    println!("fastest of {REPETITIONS} repetitions, ns per sample:");
    println!(
        "{:>9} {:>8} {:>8} {:>10} {:>9}",
        "buffer", "fad", "fir", "fir-fixed", "cache %"
    );
    for r in &results {
        println!(
            "{:>9} {:>8.2} {:>8.2} {:>10.2} {:>9.2}",
            r.buffer_size, r.fad_ns, r.fir_ns, r.fir_no_inc_ns, r.caching_cost_pct
        );
    }
    println!("\nthe fixed-pointer kernel never streams the buffer, so the");
    println!("last column is what the memory hierarchy charges for delaying.");
}
