//! Ideal string built from two delay lines in a feedback loop.
//!
//! Each line carries waves traveling one direction; the terminations
//! reflect with gain -1, so an injected packet shuttles back and forth
//! indefinitely, flipping sign at each end. The three line kinds react
//! differently when the pitch is lowered mid-flight:
//!
//! * a plain two-pointer line re-exposes the packet it just played
//!   when the reading pointer moves backwards, changing the waveform's
//!   duty cycle and adding a ghost copy;
//! * the erase-after-read variant changes the recirculation period
//!   while keeping the packet shape intact;
//! * the fractionally-addressed line changes its increment instead,
//!   which time-dilates the whole waveform — period and packet width
//!   scale together, like a string whose tension dropped.

use crate::fad::FadLine;
use crate::fir::FirLine;
use crate::{Error, Result, Sample};
use std::collections::VecDeque;

/// Which delay line implementation carries the traveling waves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StringKind {
    Fir,
    FirErase,
    /// Fractionally-addressed lines running at the given increment;
    /// the buffer is sized `length * increment` so the one-way delay
    /// comes out at `length` samples.
    Fad {
        increment: f64,
    },
}

enum WgLine {
    Fir(FirLine),
    Fad(FadLine),
}

impl WgLine {
    fn peek(&self) -> Sample {
        match self {
            WgLine::Fir(l) => l.peek(),
            WgLine::Fad(l) => l.peek(),
        }
    }

    fn tick(&mut self, input: Sample) -> Sample {
        match self {
            WgLine::Fir(l) => l.tick(input),
            WgLine::Fad(l) => l.tick(input),
        }
    }
}

/// Two same-kind delay lines with perfectly reflecting terminations.
pub struct WaveguideString {
    right: WgLine,
    left: WgLine,
    kind: StringKind,
    fs: f64,
    /// Termination gain at both ends; -1 for a fixed (displacement
    /// inverting) end. The period and duty-cycle behavior does not
    /// depend on the sign.
    pub reflection_gain: f64,
    /// Ticks between [`inject_packet`](Self::inject_packet) and the
    /// packet entering the right-going line, emulating an excitation
    /// point away from the left end.
    pub excitation_point: usize,
    pending: VecDeque<Sample>,
}

impl WaveguideString {
    /// Build a lossless string whose one-way propagation takes
    /// `length_samples` ticks (round-trip period: twice that).
    pub fn string_new(kind: StringKind, length_samples: usize, fs: f64) -> Result<Self> {
        if length_samples < 16 {
            return Err(Error::OutOfRange {
                what: "string length",
                value: length_samples as f64,
                min: 16.0,
                max: f64::INFINITY,
            });
        }
        let make = || -> Result<WgLine> {
            Ok(match kind {
                // Twice the length of headroom so the pitch can drop a
                // full octave by lengthening.
                StringKind::Fir => WgLine::Fir(FirLine::new(
                    2 * length_samples + 4,
                    length_samples as f64,
                    false,
                )?),
                StringKind::FirErase => WgLine::Fir(FirLine::new(
                    2 * length_samples + 4,
                    length_samples as f64,
                    true,
                )?),
                StringKind::Fad { increment } => {
                    let b = (length_samples as f64 * increment).round();
                    if (b - length_samples as f64 * increment).abs() > 1e-9 {
                        return Err(Error::OutOfRange {
                            what: "length * increment (must be a whole number of cells)",
                            value: length_samples as f64 * increment,
                            min: 16.0,
                            max: f64::INFINITY,
                        });
                    }
                    let b = b as usize;
                    let mut line = FadLine::new(b, fs, b as f64 / fs)?;
                    line.set_increment(increment)?;
                    WgLine::Fad(line)
                }
            })
        };
        Ok(Self {
            right: make()?,
            left: make()?,
            kind,
            fs,
            reflection_gain: -1.0,
            excitation_point: 0,
            pending: VecDeque::new(),
        })
    }

    pub fn kind(&self) -> StringKind {
        self.kind
    }

    /// Queue `cycles` periods of a sine at `freq_hz` for injection into
    /// the right-going line. The packet must be shorter than the line.
    pub fn inject_packet(&mut self, cycles: usize, freq_hz: f64) -> Result<()> {
        let period = self.fs / freq_hz;
        let len = (cycles as f64 * period).round() as usize;
        let line_len = match &self.right {
            WgLine::Fir(l) => l.delay(),
            WgLine::Fad(l) => l.delay_samples(),
        };
        if (len as f64) >= line_len {
            return Err(Error::OutOfRange {
                what: "packet length",
                value: len as f64,
                min: 1.0,
                max: line_len - 1.0,
            });
        }
        for _ in 0..self.excitation_point {
            self.pending.push_back(0.0);
        }
        for n in 0..len {
            self.pending
                .push_back((std::f64::consts::TAU * n as f64 / period).sin());
        }
        Ok(())
    }

    /// Advance the loop one tick; returns the waves arriving at the
    /// right and left terminations. Both lines are peeked before either
    /// is fed, so the loop delay is exactly twice the line length.
    pub fn step(&mut self) -> (Sample, Sample) {
        let right_out = self.right.peek();
        let left_out = self.left.peek();
        let inject = self.pending.pop_front().unwrap_or(0.0);
        self.right.tick(inject + self.reflection_gain * left_out);
        self.left.tick(self.reflection_gain * right_out);
        (right_out, left_out)
    }

    /// Run `n` ticks collecting the right-termination arrivals.
    pub fn run(&mut self, n: usize) -> Vec<Sample> {
        (0..n).map(|_| self.step().0).collect()
    }

    /// Lower the pitch. For the two-pointer kinds the argument is the
    /// new one-way length in samples (the reading pointers move
    /// backwards); for the fractionally-addressed kind it is the new,
    /// smaller increment (the medium slows down). Apply right after a
    /// reflection at the left end; see
    /// [`run_until_left_reflection`](Self::run_until_left_reflection).
    pub fn lower_pitch(&mut self, new_length_or_increment: f64) -> Result<()> {
        match (&mut self.right, &mut self.left) {
            (WgLine::Fir(r), WgLine::Fir(l)) => {
                r.set_delay(new_length_or_increment)?;
                l.set_delay(new_length_or_increment)
            }
            (WgLine::Fad(r), WgLine::Fad(l)) => {
                r.set_increment(new_length_or_increment)?;
                l.set_increment(new_length_or_increment)
            }
            _ => unreachable!("lines are constructed with matching kinds"),
        }
    }

    /// Step until the wave packet has just finished reflecting at the
    /// left end: waits for the left arrival's envelope to rise above
    /// half its running peak and then fall back under a tenth of it.
    /// Returns the collected right-termination samples.
    pub fn run_until_left_reflection(&mut self, max_ticks: usize) -> Result<Vec<Sample>> {
        let mut out = Vec::new();
        let mut env = 0.0;
        let mut peak: f64 = 0.0;
        let mut seen_packet = false;
        for _ in 0..max_ticks {
            let (right, left) = self.step();
            out.push(right);
            env = 0.875 * env + 0.125 * left.abs();
            peak = peak.max(env);
            if !seen_packet && peak > 0.0 && env > 0.5 * peak {
                seen_packet = true;
            }
            if seen_packet && env < 0.1 * peak {
                return Ok(out);
            }
        }
        Err(Error::SignalTooShort {
            needed: max_ticks + 1,
            got: max_ticks,
        })
    }
}
