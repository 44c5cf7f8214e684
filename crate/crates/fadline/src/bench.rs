//! Throughput benchmark: time the two line kinds across buffer sizes.
//!
//! For each size, three kernels tick over pre-generated noise: the
//! fractionally-addressed line, the two-pointer line, and the
//! two-pointer line with its pointer frozen. The frozen variant does
//! strictly less work and touches only a handful of cells, so the gap
//! between the two lower curves is the cost of streaming the whole
//! buffer through the cache hierarchy. Timing takes the fastest of 14
//! repetitions after one untimed warmup pass, which filters scheduler
//! noise without averaging in cold caches.

use crate::fad::FadLine;
use crate::fir::FirLine;
use crate::{Error, Result};
use std::fmt::Write as _;
use std::hint::black_box;
use std::path::Path;
use std::time::Instant;

/// Fastest-of-N repetitions.
pub const REPETITIONS: usize = 14;

/// Default workload per repetition, in ticks.
pub const DEFAULT_TICKS: u64 = 10_000_000;

pub const BENCH_CSV_HEADER: &str =
    "buffer_size,fad_ns_per_sample,fir_ns_per_sample,fir_no_increment_ns_per_sample,caching_cost_pct";

/// Timing for one buffer size, minimum over repetitions.
#[derive(Debug, Clone, Copy)]
pub struct BenchResult {
    pub buffer_size: usize,
    pub fad_ns: f64,
    pub fir_ns: f64,
    pub fir_no_inc_ns: f64,
    /// `(fir - fir_no_increment) / fir`, in percent: what following the
    /// pointers through memory costs over hitting hot cells.
    pub caching_cost_pct: f64,
}

/// The default sweep: power-of-two buffer sizes from 2^10 to 2^22.
pub fn default_sizes() -> Vec<usize> {
    (10..=22).map(|p| 1usize << p).collect()
}

/// Time all kernels over `sizes` (ascending, each at least 64).
pub fn run_sweep(sizes: &[usize], ticks: u64, fast_floor: bool) -> Result<Vec<BenchResult>> {
    for w in sizes.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Usage(format!(
                "buffer sizes must be ascending, got {} after {}",
                w[1], w[0]
            )));
        }
    }
    if sizes.iter().any(|&s| s < 64) {
        return Err(Error::OutOfRange {
            what: "buffer size",
            value: *sizes.iter().min().unwrap() as f64,
            min: 64.0,
            max: f64::INFINITY,
        });
    }

    sizes
        .iter()
        .map(|&size| {
            let fad_ns = time_kernel(ticks, || {
                let fs = 44100.0;
                let mut line = FadLine::new(size, fs, size as f64 / (1.5 * fs))
                    .expect("sweep sizes are valid");
                line.set_fast_floor(fast_floor);
                move |x| line.tick(x)
            });
            let fir_ns = time_kernel(ticks, || {
                let mut line = FirLine::new(size, size as f64 / 2.0 - 0.25, false).expect("valid");
                move |x| line.tick(x)
            });
            let fir_no_inc_ns = time_kernel(ticks, || {
                let mut line = FirLine::new(size, size as f64 / 2.0 - 0.25, false).expect("valid");
                move |x| line.tick_no_advance(x)
            });
            Ok(BenchResult {
                buffer_size: size,
                fad_ns,
                fir_ns,
                fir_no_inc_ns,
                caching_cost_pct: 100.0 * (fir_ns - fir_no_inc_ns) / fir_ns,
            })
        })
        .collect()
}

/// Minimum ns/tick over [`REPETITIONS`] timed runs of a fresh kernel,
/// after one untimed warmup repetition. The input is a small noise
/// block cycled in place, kept well under cache size so the delay
/// buffer dominates the memory traffic.
fn time_kernel<K, F>(ticks: u64, mut make: K) -> f64
where
    K: FnMut() -> F,
    F: FnMut(f64) -> f64,
{
    let noise = noise_block(4096);
    let mask = noise.len() - 1;
    let mut best = f64::INFINITY;
    for rep in 0..=REPETITIONS {
        let mut kernel = make();
        let mut acc = 0.0;
        let start = Instant::now();
        for n in 0..ticks {
            acc += kernel(noise[(n as usize) & mask]);
        }
        let elapsed = start.elapsed().as_nanos() as f64;
        black_box(acc);
        if rep > 0 {
            // First run only loads code and data into the caches.
            best = best.min(elapsed / ticks as f64);
        }
    }
    best
}

fn noise_block(len: usize) -> Vec<f64> {
    // Small xorshift; quality is irrelevant, repeatability is not.
    let mut state = 0x9e3779b97f4a7c15u64;
    (0..len)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

/// Write the sweep as CSV.
pub fn write_csv(results: &[BenchResult], path: &Path) -> Result<()> {
    let mut out = String::from(BENCH_CSV_HEADER);
    out.push('\n');
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.buffer_size, r.fad_ns, r.fir_ns, r.fir_no_inc_ns, r.caching_cost_pct
        );
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_validates_sizes() {
        assert!(run_sweep(&[1024, 512], 1000, false).is_err());
        assert!(run_sweep(&[32], 1000, false).is_err());
    }

    #[test]
    fn small_sweep_produces_sane_timings() {
        let results = run_sweep(&[1024, 4096], 20_000, false).unwrap();
        assert_eq!(results.len(), 2);
        for r in &results {
            assert!(r.fad_ns > 0.0 && r.fir_ns > 0.0 && r.fir_no_inc_ns > 0.0);
            assert!(r.fad_ns < 10_000.0, "implausible timing {}", r.fad_ns);
        }
    }

    #[test]
    fn frozen_pointer_output_is_plausible() {
        // The frozen kernel reads the same cells every tick; it exists
        // for timing, but its output must still be finite.
        let mut line = FirLine::new(256, 127.75, false).unwrap();
        for n in 0..1000 {
            let y = line.tick_no_advance((n as f64).sin());
            assert!(y.is_finite());
        }
    }
}
