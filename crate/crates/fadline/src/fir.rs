//! Classic variable-length delay line: a circular buffer accessed by a
//! writing pointer followed by an interpolated reading pointer.

use crate::buffer::DelayBuffer;
use crate::interp::Lagrange2;
use crate::{DelayLine, Error, Result, Sample};

/// Two-pointer delay line with quadratic Lagrange interpolation at the
/// reading point.
///
/// The delay may be fractional and can be changed sample by sample; no
/// smoothing is applied by the line itself, modulation is the caller's
/// signal. The delay is split as `delay = M - d` with `M = round(delay)`
/// and `d in [-0.5, 0.5]`, which keeps the interpolator on the flattest
/// part of its range.
///
/// With `erase_after_read` enabled, cells the reading pointer has passed
/// are zeroed (one cell of guard is kept so in-flight reads are never
/// clipped), so lengthening the delay re-exposes silence instead of
/// already-played signal.
#[derive(Debug, Clone)]
pub struct FirLine {
    buf: DelayBuffer,
    write_idx: usize,
    delay: f64,
    erase_after_read: bool,
    /// Tick counter; the unwrapped reading position is `ticks - delay`.
    ticks: u64,
    /// Unwrapped reading position at the previous tick, for erase.
    last_read_pos: f64,
}

/// Smallest legal delay: the interpolator needs one cell of guard on
/// each side of the reading point.
pub const MIN_DELAY: f64 = 2.0;

impl FirLine {
    /// `capacity` is the buffer length in samples (at least 8);
    /// `initial_delay` may be fractional, in `[2, capacity - 2]`.
    pub fn new(capacity: usize, initial_delay: f64, erase_after_read: bool) -> Result<Self> {
        if capacity < 8 {
            return Err(Error::OutOfRange {
                what: "capacity",
                value: capacity as f64,
                min: 8.0,
                max: f64::INFINITY,
            });
        }
        let buf = DelayBuffer::new(capacity)?;
        let mut line = Self {
            buf,
            write_idx: 0,
            delay: MIN_DELAY,
            erase_after_read,
            ticks: 0,
            last_read_pos: 0.0,
        };
        line.set_delay(initial_delay)?;
        line.last_read_pos = -1.0 - initial_delay;
        Ok(line)
    }

    /// Change the delay; takes effect on the next tick.
    pub fn set_delay(&mut self, delay: f64) -> Result<()> {
        let max = self.buf.len() as f64 - 2.0;
        if !(MIN_DELAY..=max).contains(&delay) || delay.is_nan() {
            return Err(Error::OutOfRange {
                what: "delay",
                value: delay,
                min: MIN_DELAY,
                max,
            });
        }
        self.delay = delay;
        Ok(())
    }

    pub fn delay(&self) -> f64 {
        self.delay
    }

    pub fn capacity(&self) -> usize {
        self.buf.len()
    }

    pub fn erase_after_read(&self) -> bool {
        self.erase_after_read
    }

    /// Read the current output without consuming an input sample. The
    /// output never depends on the sample written in the same tick
    /// (the delay is at least two), so `peek` followed by [`tick`]
    /// returns the identical value.
    ///
    /// [`tick`]: FirLine::tick
    pub fn peek(&self) -> Sample {
        self.read_taps(self.write_idx)
    }

    /// Interpolated read around `write - round(delay)`. The wraps are
    /// conditional subtractions, never divisions; the delay bounds keep
    /// every intermediate inside `[0, 2B)`.
    #[inline]
    fn read_taps(&self, write_idx: usize) -> Sample {
        let b = self.buf.len();
        let m = self.delay.round();
        let d = m - self.delay; // in [-0.5, 0.5]
        let c = Lagrange2::from_raw(d);

        let mut mid = write_idx + b - m as usize;
        if mid >= b {
            mid -= b;
        }
        let newer = if mid + 1 == b { 0 } else { mid + 1 };
        let older = if mid == 0 { b - 1 } else { mid - 1 };
        c.apply(
            self.buf.get_at(newer),
            self.buf.get_at(mid),
            self.buf.get_at(older),
        )
    }

    /// Write the input, read behind the writing pointer, advance.
    pub fn tick(&mut self, input: Sample) -> Sample {
        self.buf.set_at(self.write_idx, input);
        let out = self.peek();

        if self.erase_after_read {
            self.erase_passed_cells();
        }

        self.write_idx += 1;
        if self.write_idx == self.buf.len() {
            self.write_idx = 0;
        }
        self.ticks += 1;
        debug_assert!(out.is_finite(), "non-finite output {out}");
        out
    }

    /// Benchmark kernel variant: identical write and interpolated read,
    /// but the pointer never advances, so every tick touches the same
    /// handful of cells. Removing the pointer update cannot add work;
    /// comparing against [`tick`](FirLine::tick) isolates what walking
    /// the whole buffer costs in the memory hierarchy. The index goes
    /// through `black_box` so the fixed cells stay genuine memory
    /// accesses instead of being promoted to registers.
    pub(crate) fn tick_no_advance(&mut self, input: Sample) -> Sample {
        let w = std::hint::black_box(self.write_idx);
        self.buf.set_at(w, input);
        self.read_taps(w)
    }

    /// Zero every cell the reading pointer has passed since the last
    /// tick, lagging one cell behind the pointer so the interpolator's
    /// oldest tap is never clipped. When the delay grows the pointer
    /// moves backwards and nothing is erased; the re-exposed region
    /// then holds whatever survived, which for this mode is silence.
    fn erase_passed_cells(&mut self) {
        let pos = self.ticks as f64 - self.delay;
        let from = (self.last_read_pos - 1.0).floor() as i64;
        let to = (pos - 1.0).floor() as i64;
        if to > from {
            let count = ((to - from) as usize).min(self.buf.len());
            for k in 1..=count {
                self.buf.set(from + k as i64, 0.0);
            }
        }
        if pos > self.last_read_pos {
            self.last_read_pos = pos;
        }
    }
}

impl DelayLine for FirLine {
    fn tick(&mut self, input: Sample) -> Sample {
        FirLine::tick(self, input)
    }

    fn nominal_delay_samples(&self) -> f64 {
        self.delay
    }
}
