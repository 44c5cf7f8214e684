//! Variable-length delay lines for audio DSP, in two flavors:
//!
//! * [`FirLine`] — the classic circular buffer accessed by a writing
//!   pointer followed by a quadratically interpolated reading pointer,
//!   with an optional erase-after-read mode.
//! * [`FadLine`] — a fractionally-addressed delay line: a single
//!   fractional pointer performs an interpolated read ahead of itself
//!   and one or more deinterpolating writes behind itself each tick.
//!   The delay is set by the pointer increment: `T = B / (I * Fs)`.
//!
//! Around the lines sits an analysis toolkit: the quadratic Lagrange
//! interpolator and its frequency response ([`interp`]), an analytical
//! sideband/SNR model for length-modulated lines ([`modmodel`]), an
//! experimental harness for SNR, attenuation, pitch tracking and
//! sonograms ([`measure`]), a waveguide string built from a pair of
//! lines ([`waveguide`]), WAV streaming effects ([`effects`]), CSV
//! experiment runners ([`experiments`]) and a throughput benchmark
//! ([`bench`]).
//!
//! Every runnable capability has a corresponding file under
//! `examples/`; the thin `fadline` binary exposes the same runners as
//! `fadline delay|experiment|bench`.

use std::fmt;

pub mod bench;
pub mod buffer;
pub mod effects;
pub mod experiments;
pub mod fad;
pub mod fir;
pub mod interp;
pub mod measure;
pub mod modmodel;
pub mod wav;
pub mod waveguide;

pub use buffer::DelayBuffer;
pub use fad::FadLine;
pub use fir::FirLine;
pub use interp::{FracOffset, FreqResponse, Lagrange2};

/// Signal samples are plain `f64` everywhere inside the library;
/// 16-bit integers appear only at the WAV file boundary.
pub type Sample = f64;

/// Common interface of the two delay line kinds, used by the
/// measurement harness.
pub trait DelayLine {
    /// Feed one input sample, get one output sample.
    fn tick(&mut self, input: Sample) -> Sample;

    /// The delay the line is configured for, in samples. May be
    /// fractional; for the fractionally-addressed line this is `B / I`.
    fn nominal_delay_samples(&self) -> f64;
}

/// Errors reported by constructors, setters and the harness.
#[derive(Debug)]
pub enum Error {
    /// A numeric parameter is outside its legal range.
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    /// An interval parameter is empty or inverted.
    EmptyRange(&'static str),
    /// The requested test frequency does not fit a whole number of
    /// periods into the line's nominal delay.
    NonCommensurate {
        freq_hz: f64,
        delay_samples: f64,
    },
    /// A signal is too short for the requested analysis.
    SignalTooShort {
        needed: usize,
        got: usize,
    },
    /// An effect configuration left the line's legal range mid-run.
    Config {
        sample_index: usize,
        message: String,
    },
    /// A WAV file could not be parsed or has an unsupported format.
    WavFormat(String),
    Io(std::io::Error),
    /// Unknown experiment or malformed argument.
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfRange {
                what,
                value,
                min,
                max,
            } => write!(f, "{what} = {value} is outside [{min}, {max}]"),
            Error::EmptyRange(what) => write!(f, "{what} is empty"),
            Error::NonCommensurate {
                freq_hz,
                delay_samples,
            } => write!(
                f,
                "frequency {freq_hz} Hz is not commensurate with a delay of {delay_samples} samples"
            ),
            Error::SignalTooShort { needed, got } => {
                write!(f, "signal too short: need {needed} samples, got {got}")
            }
            Error::Config {
                sample_index,
                message,
            } => write!(f, "configuration error at sample {sample_index}: {message}"),
            Error::WavFormat(msg) => write!(f, "unsupported or malformed WAV: {msg}"),
            Error::Io(e) => write!(f, "I/O error: {e}"),
            Error::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
