//! Fractionally-addressed delay line.
//!
//! One fractional pointer sweeps a circular buffer at a per-tick
//! increment `I`. Each tick performs a quadratic interpolated read just
//! ahead of the pointer (the oldest stored signal) and one or more
//! deinterpolating writes behind it, so that every cell is rewritten
//! exactly once per pointer lap and no holes are left. With a buffer of
//! `B` samples at rate `Fs`, the delay in seconds is
//!
//! ```text
//! T = B / (I * Fs)        with I in [1, 2],
//! ```
//!
//! covering delays from `B/2` to `B` samples. Increments below one are
//! not supported: the writes would store a band-limited signal and the
//! high frequencies could never be recovered on the following read.
//!
//! Reducing the delay does not shift the pitch instantaneously the way
//! the two-pointer line does; under a delay ramp of `k` seconds per
//! second the line settles on a pitch ratio of `e^k` after a transient
//! `tau_i = (tau0 / k) (1 - e^{-k})` — the behavior of a propagation
//! medium whose wave speed changes, rather than of a moving pickup.

use crate::buffer::DelayBuffer;
use crate::interp::Lagrange2;
use crate::{DelayLine, Error, Result, Sample};

/// Pointer increment bounds; see the module notes.
pub const MIN_INCREMENT: f64 = 1.0;
pub const MAX_INCREMENT: f64 = 2.0;
// Tolerance for increments computed from a delay in seconds; rounding
// in B/(T*Fs) may land a hair outside [1, 2].
const INCREMENT_EPS: f64 = 1e-9;

/// The single pointer of the line: an integer cell index plus a
/// fractional part in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalPhase(f64);

impl FractionalPhase {
    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Integer cell index, `floor(phase)`.
    #[inline]
    pub fn cell(self) -> usize {
        self.0 as usize // phase is non-negative by construction
    }

    /// Fractional part in `[0, 1)`.
    #[inline]
    pub fn frac(self) -> f64 {
        self.0 - self.0.floor()
    }
}

/// Single-pointer delay line with interpolated read and deinterpolated
/// write access to a circular buffer.
#[derive(Debug, Clone)]
pub struct FadLine {
    buf: DelayBuffer,
    phase: f64,
    /// `floor(phase)` at the previous tick; the cells in
    /// `(phase_old, floor(phase)]` get written this tick.
    phase_old: usize,
    increment: f64,
    /// Cached 1/increment for the write-offset rescale; a division per
    /// fill write would dominate the tick otherwise.
    inv_increment: f64,
    fs: f64,
    /// Last two raw input samples; the write interpolator combines them
    /// with the current input instead of touching extra buffer cells.
    prev_in: [Sample; 2],
    total_writes: u64,
    laps: u64,
    fast_floor: bool,
}

impl FadLine {
    /// Build a line of `capacity` cells whose delay is `delay_seconds`,
    /// i.e. with increment `I = capacity / (delay_seconds * fs)`.
    /// Fails unless the increment lands in `[1, 2]`.
    pub fn new(capacity: usize, fs: f64, delay_seconds: f64) -> Result<Self> {
        Self::with_initial_phase(capacity, fs, delay_seconds, 0.0)
    }

    /// Same as [`new`](FadLine::new) with an explicit initial pointer
    /// phase in `[0, 1)`. The output of the line depends (mildly) on
    /// it: with increment 1 and phase 0 the pointer always falls on
    /// cells and the line degenerates to an exact delay, while phase
    /// 0.5 keeps it between cells.
    pub fn with_initial_phase(
        capacity: usize,
        fs: f64,
        delay_seconds: f64,
        initial_phase: f64,
    ) -> Result<Self> {
        if capacity < 8 {
            return Err(Error::OutOfRange {
                what: "capacity",
                value: capacity as f64,
                min: 8.0,
                max: f64::INFINITY,
            });
        }
        if !(0.0..1.0).contains(&initial_phase) {
            return Err(Error::OutOfRange {
                what: "initial phase",
                value: initial_phase,
                min: 0.0,
                max: 1.0,
            });
        }
        let increment = increment_for(capacity, fs, delay_seconds)?;
        Ok(Self {
            buf: DelayBuffer::new(capacity)?,
            phase: initial_phase,
            phase_old: capacity - 1, // first tick writes cell 0
            increment,
            inv_increment: 1.0 / increment,
            fs,
            prev_in: [0.0; 2],
            total_writes: 0,
            laps: 0,
            fast_floor: false,
        })
    }

    /// Update the delay by recomputing the increment from
    /// `T = B / (I * Fs)`; takes effect on the next tick. The line does
    /// not respond with an instantaneous pitch shift — see the module
    /// notes for the ramp laws.
    pub fn set_delay_seconds(&mut self, delay_seconds: f64) -> Result<()> {
        self.increment = increment_for(self.buf.len(), self.fs, delay_seconds)?;
        self.inv_increment = 1.0 / self.increment;
        Ok(())
    }

    /// Set the pointer increment directly.
    pub fn set_increment(&mut self, increment: f64) -> Result<()> {
        if !(MIN_INCREMENT..=MAX_INCREMENT).contains(&increment) {
            return Err(Error::OutOfRange {
                what: "increment",
                value: increment,
                min: MIN_INCREMENT,
                max: MAX_INCREMENT,
            });
        }
        self.increment = increment;
        self.inv_increment = 1.0 / increment;
        Ok(())
    }

    pub fn increment(&self) -> f64 {
        self.increment
    }

    pub fn capacity(&self) -> usize {
        self.buf.len()
    }

    pub fn sample_rate(&self) -> f64 {
        self.fs
    }

    pub fn delay_seconds(&self) -> f64 {
        self.buf.len() as f64 / (self.increment * self.fs)
    }

    pub fn delay_samples(&self) -> f64 {
        self.buf.len() as f64 / self.increment
    }

    pub fn phase(&self) -> FractionalPhase {
        FractionalPhase(self.phase)
    }

    /// Total deinterpolating writes performed since construction.
    /// Over `N` ticks this is `round(sum of increments) +- 1`; at
    /// `I = 1.5` three writes happen for every couple of reads.
    pub fn total_writes(&self) -> u64 {
        self.total_writes
    }

    /// Completed pointer laps around the buffer.
    pub fn laps(&self) -> u64 {
        self.laps
    }

    /// Use bit-manipulation float-to-integer conversion in the tick
    /// loop instead of `f64::floor`. Output is identical; see
    /// [`fast_floor`].
    pub fn set_fast_floor(&mut self, on: bool) {
        self.fast_floor = on;
    }

    /// Read the current output without consuming input: the
    /// interpolated value just ahead of the pointer. `peek` followed by
    /// [`tick`](FadLine::tick) returns the identical value, since the
    /// tick's writes happen after its read.
    pub fn peek(&self) -> Sample {
        let fph = self.floor_phase();
        self.read_at(fph, self.phase - fph as f64)
    }

    /// One sample in, one sample out.
    pub fn tick(&mut self, input: Sample) -> Sample {
        self.tick_inner(input, |_| {})
    }

    /// [`tick`](FadLine::tick) with an observer called with each cell
    /// index written this tick, for write-discipline instrumentation.
    pub fn tick_probed(&mut self, input: Sample, probe: impl FnMut(usize)) -> Sample {
        self.tick_inner(input, probe)
    }

    #[inline]
    fn floor_phase(&self) -> usize {
        if self.fast_floor {
            fast_floor(self.phase) as usize
        } else {
            self.phase.floor() as usize
        }
    }

    /// Interpolated read over the cells `{fph, fph+1, fph+2}`, the
    /// samples following the pointer, at fractional offset `frac`.
    /// Higher cells hold signal written later in the previous lap, so
    /// the value at `fph + frac` has offset `frac - 1` relative to the
    /// middle tap.
    #[inline]
    fn read_at(&self, fph: usize, frac: f64) -> Sample {
        let b = self.buf.len();
        let i1 = if fph + 1 >= b { fph + 1 - b } else { fph + 1 };
        let i2 = if i1 + 1 >= b { i1 + 1 - b } else { i1 + 1 };
        let c = Lagrange2::from_raw(frac - 1.0);
        c.apply(
            self.buf.get_at(i2),
            self.buf.get_at(i1),
            self.buf.get_at(fph),
        )
    }

    #[inline]
    fn tick_inner(&mut self, input: Sample, mut probe: impl FnMut(usize)) -> Sample {
        let b = self.buf.len();
        let fph = self.floor_phase();
        let frac = self.phase - fph as f64;

        // Read ahead of the pointer before any write of this tick; the
        // cell at fph still holds the previous lap's sample.
        let out = self.read_at(fph, frac);

        // Fill every cell in (phase_old, fph], resampling the input
        // stream onto the cell grid: the pointer crossed a cell sitting
        // `delta` positions behind it `delta / I` ticks ago, so the
        // cell takes the input interpolated at that fractional time.
        // Cells one step further behind the pointer shift `delta` by
        // one, with the coefficients recomputed from the rescaled
        // argument. The buffer therefore holds the input waveform
        // upsampled by I, which the read resamples back down.
        let mut fill = fph + b - self.phase_old;
        if fill >= b {
            fill -= b;
        }
        debug_assert!((1..=2).contains(&fill), "fill count {fill} escaped 1..=2");
        let mut cell = self.phase_old;
        for k in 0..fill {
            cell += 1;
            if cell == b {
                cell = 0;
            }
            let delta = frac + (fill - 1 - k) as f64;
            let c = Lagrange2::from_raw(1.0 - delta * self.inv_increment);
            let value = c.apply(input, self.prev_in[0], self.prev_in[1]);
            self.buf.set_at(cell, value);
            probe(cell);
        }
        self.total_writes += fill as u64;

        self.phase_old = fph;
        self.phase += self.increment;
        if self.phase >= b as f64 {
            // The increment never exceeds 2 and B is at least 8, so a
            // single subtraction wraps. `>=` matters: a phase landing
            // exactly on B must fold to 0 before the next floor.
            self.phase -= b as f64;
            self.laps += 1;
        }
        self.prev_in = [input, self.prev_in[0]];
        debug_assert!(out.is_finite(), "non-finite output {out}");
        out
    }
}

impl DelayLine for FadLine {
    fn tick(&mut self, input: Sample) -> Sample {
        FadLine::tick(self, input)
    }

    fn nominal_delay_samples(&self) -> f64 {
        self.delay_samples()
    }
}

fn increment_for(capacity: usize, fs: f64, delay_seconds: f64) -> Result<f64> {
    if !fs.is_finite() || fs <= 0.0 || !delay_seconds.is_finite() || delay_seconds <= 0.0 {
        return Err(Error::OutOfRange {
            what: "delay in seconds",
            value: delay_seconds,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }
    let increment = capacity as f64 / (delay_seconds * fs);
    if !(MIN_INCREMENT - INCREMENT_EPS..=MAX_INCREMENT + INCREMENT_EPS).contains(&increment) {
        return Err(Error::OutOfRange {
            what: "increment B/(T*Fs)",
            value: increment,
            min: MIN_INCREMENT,
            max: MAX_INCREMENT,
        });
    }
    Ok(increment.clamp(MIN_INCREMENT, MAX_INCREMENT))
}

/// Floor of a non-negative `x` below 2^51 by round-trip through the
/// floating-point mantissa, avoiding an explicit `floor` call: adding
/// 1.5 * 2^52 forces rounding to an integer, and one compare repairs
/// the round-up case.
#[inline]
pub fn fast_floor(x: f64) -> i64 {
    const MAGIC: f64 = 6_755_399_441_055_744.0; // 1.5 * 2^52
    let rounded = (x + MAGIC) - MAGIC;
    rounded as i64 - (rounded > x) as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn increment_from_delay_seconds() {
        // One second of buffer at the same sample rate: T = 2/3 s is I = 1.5.
        let line = FadLine::new(44100, 44100.0, 2.0 / 3.0).unwrap();
        assert!((line.increment() - 1.5).abs() < 1e-9);
        let line = FadLine::new(44100, 44100.0, 1.0).unwrap();
        assert_eq!(line.increment(), 1.0);
        // I = 2.5 is out of range.
        assert!(FadLine::new(1000, 1000.0, 0.4).is_err());
    }

    #[test]
    fn unit_increment_is_a_bit_exact_delay() {
        let b = 512;
        let mut line = FadLine::new(b, 48000.0, b as f64 / 48000.0).unwrap();
        assert_eq!(line.increment(), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let input: Vec<f64> = (0..10_000).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for (n, &x) in input.iter().enumerate() {
            let y = line.tick(x);
            let expect = if n >= b { input[n - b] } else { 0.0 };
            assert_eq!(y, expect, "sample {n} not bit-exact");
        }
    }

    #[test]
    fn increment_two_passes_dc() {
        let b = 1024;
        let mut line = FadLine::new(b, 48000.0, b as f64 / (2.0 * 48000.0)).unwrap();
        assert_eq!(line.increment(), 2.0);
        let mut y = 0.0;
        for _ in 0..(2 * b) {
            y = line.tick(1.0);
        }
        assert!((y - 1.0).abs() < 1e-9, "DC gain {y}");
    }

    #[test]
    fn three_writes_for_every_couple_of_reads() {
        let mut line = FadLine::new(600, 600.0, 1.0 / 1.5).unwrap();
        assert!((line.increment() - 1.5).abs() < 1e-12);
        let before = line.total_writes();
        for _ in 0..200 {
            line.tick(0.25);
        }
        let writes = line.total_writes() - before;
        assert!(
            (writes as i64 - 300).unsigned_abs() <= 1,
            "expected about 300 writes over 200 ticks, got {writes}"
        );
    }

    #[test]
    fn write_count_matches_increment_sum() {
        let mut line = FadLine::new(4096, 44100.0, 4096.0 / (1.3 * 44100.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut sum = 0.0;
        for _ in 0..50_000 {
            let i = rng.gen_range(1.0..=2.0);
            line.set_increment(i).unwrap();
            sum += i;
            line.tick(rng.gen_range(-1.0f64..1.0));
        }
        let writes = line.total_writes() as f64;
        assert!(
            (writes - sum.round()).abs() <= 1.0,
            "writes {writes} vs increment sum {sum}"
        );
        assert!((50_000.0..=100_000.0).contains(&writes));
    }

    #[test]
    fn every_cell_written_once_per_lap_under_random_modulation() {
        // "Exactly one write per cell per lap" is equivalent to the
        // write sequence visiting strictly consecutive cells.
        let b = 1024;
        let mut line = FadLine::new(b, 48000.0, b as f64 / (1.5 * 48000.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut prev_cell = b - 1; // the first write must land on cell 0
        let mut writes = 0u64;
        for _ in 0..1_000_000u64 {
            line.set_increment(rng.gen_range(1.0..=2.0)).unwrap();
            line.tick_probed(rng.gen_range(-1.0f64..1.0), |cell| {
                assert_eq!(
                    cell,
                    (prev_cell + 1) % b,
                    "write skipped or repeated a cell"
                );
                prev_cell = cell;
                writes += 1;
            });
        }
        assert!(writes >= 1_000_000);
    }

    #[test]
    fn static_delay_matches_cross_correlation_lag() {
        // A band-limited noise burst comes back B/I samples later.
        for increment in [1.0, 1.25, 1.5, 2.0] {
            let b = 2400;
            let fs = 48000.0;
            let mut line = FadLine::new(b, fs, b as f64 / (increment * fs)).unwrap();
            let expect = (b as f64 / increment).round() as usize;

            // Smooth burst: white noise through a short moving average.
            let mut rng = ChaCha8Rng::seed_from_u64(31);
            let raw: Vec<f64> = (0..600).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let burst: Vec<f64> = (0..raw.len())
                .map(|n| {
                    let lo = n.saturating_sub(3);
                    raw[lo..=n].iter().sum::<f64>() / (n - lo + 1) as f64
                })
                .collect();

            let total = expect + burst.len() + 400;
            let mut out = Vec::with_capacity(total);
            for n in 0..total {
                let x = burst.get(n).copied().unwrap_or(0.0);
                out.push(line.tick(x));
            }

            let mut best = (0usize, f64::NEG_INFINITY);
            for lag in (expect.saturating_sub(20))..(expect + 20) {
                let mut acc = 0.0;
                for (n, &s) in burst.iter().enumerate() {
                    if n + lag < out.len() {
                        acc += s * out[n + lag];
                    }
                }
                if acc > best.1 {
                    best = (lag, acc);
                }
            }
            assert!(
                (best.0 as i64 - expect as i64).abs() <= 1,
                "I = {increment}: lag {} vs expected {expect}",
                best.0
            );
        }
    }

    #[test]
    fn initial_phase_must_be_fractional() {
        assert!(FadLine::with_initial_phase(64, 48000.0, 64.0 / 48000.0, 0.5).is_ok());
        assert!(FadLine::with_initial_phase(64, 48000.0, 64.0 / 48000.0, 1.0).is_err());
        assert!(FadLine::with_initial_phase(64, 48000.0, 64.0 / 48000.0, -0.1).is_err());
    }

    #[test]
    fn half_phase_unit_increment_is_not_exact_but_close() {
        let b = 256;
        let mut line = FadLine::with_initial_phase(b, 48000.0, b as f64 / 48000.0, 0.5).unwrap();
        let mut max_err = 0.0f64;
        for n in 0..4096 {
            let x = (std::f64::consts::TAU * n as f64 / 64.0).sin();
            let y = line.tick(x);
            if n >= b + 64 {
                let aligned = (std::f64::consts::TAU * (n - b) as f64 / 64.0).sin();
                max_err = max_err.max((y - aligned).abs());
            }
        }
        assert!(max_err > 0.0, "between-cells pointer cannot be exact");
        assert!(max_err < 0.02, "interpolation error too large: {max_err}");
    }

    #[test]
    fn fast_floor_agrees_with_floor() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..1_000_000 {
            let x: f64 = rng.gen_range(0.0..1_000_000.0);
            assert_eq!(fast_floor(x), x.floor() as i64, "x = {x}");
        }
        for k in 0..1000 {
            let x = k as f64;
            assert_eq!(fast_floor(x), k, "integer {x}");
            assert_eq!(fast_floor(x + 0.5), k);
        }
    }

    #[test]
    fn fast_floor_stream_is_identical() {
        let b = 777;
        let fs = 44100.0;
        let make = || FadLine::new(b, fs, b as f64 / (1.37 * fs)).unwrap();
        let mut reference = make();
        let mut optimized = make();
        optimized.set_fast_floor(true);
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..100_000 {
            let x = rng.gen_range(-1.0f64..1.0);
            assert_eq!(reference.tick(x), optimized.tick(x));
        }
    }

    #[test]
    fn peek_matches_tick() {
        let b = 512;
        let mut line = FadLine::new(b, 48000.0, b as f64 / (1.5 * 48000.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..2048 {
            let x = rng.gen_range(-1.0f64..1.0);
            let peeked = line.peek();
            assert_eq!(peeked, line.tick(x));
        }
    }
}
