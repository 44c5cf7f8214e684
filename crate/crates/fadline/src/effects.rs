//! Delay-modulation effects: stream a signal through a configured line
//! while a modulation program drives the delay sample by sample.

use crate::fad::FadLine;
use crate::fir::FirLine;
use crate::wav::{read_wav_mono16, write_wav_mono16};
use crate::{Error, Result, Sample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;

/// Which delay line implementation processes the stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    Fir,
    FirErase,
    Fad,
}

/// New random-walk target every this many samples.
pub const WALK_STEP_SAMPLES: usize = 100;

/// Delay modulation program, in seconds of delay.
#[derive(Debug, Clone, Copy)]
pub enum Modulation {
    /// Constant delay.
    None,
    /// `T(t) = tau0 - k t` for `duration_s`, then hold.
    Ramp {
        tau0_s: f64,
        k: f64,
        duration_s: f64,
    },
    /// `T(t) = base + depth sin(2 pi rate t)`.
    Sine { depth_s: f64, rate_hz: f64 },
    /// A new target in `base +- depth` drawn every
    /// [`WALK_STEP_SAMPLES`] samples, with linear interpolation
    /// between targets. Smooth enough that the output partials float
    /// around without sudden jumps.
    RandomWalk { depth_s: f64 },
}

/// Full configuration of one effect run.
#[derive(Debug, Clone, Copy)]
pub struct EffectConfig {
    pub kind: LineKind,
    pub base_delay_s: f64,
    pub modulation: Modulation,
    pub fs: f64,
    /// Buffer length in samples.
    pub buffer: usize,
    /// Seed for the random-walk draw; runs with equal seeds produce
    /// byte-identical output.
    pub seed: u64,
    /// Use the bit-manipulation float-to-integer conversion in the
    /// fractionally-addressed line.
    pub fast_floor: bool,
}

impl EffectConfig {
    /// Delay target in seconds at sample index `n`.
    fn delay_at(&self, n: usize, walk: &mut Walk) -> f64 {
        let t = n as f64 / self.fs;
        match self.modulation {
            Modulation::None => self.base_delay_s,
            Modulation::Ramp {
                tau0_s,
                k,
                duration_s,
            } => tau0_s - k * t.min(duration_s),
            Modulation::Sine { depth_s, rate_hz } => {
                self.base_delay_s + depth_s * (std::f64::consts::TAU * rate_hz * t).sin()
            }
            Modulation::RandomWalk { depth_s } => walk.value_at(n, self.base_delay_s, depth_s),
        }
    }
}

/// Piecewise-linear random walk state.
struct Walk {
    rng: ChaCha8Rng,
    current: f64,
    next: f64,
    segment: usize,
    initialized: bool,
}

impl Walk {
    fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            current: 0.0,
            next: 0.0,
            segment: 0,
            initialized: false,
        }
    }

    fn value_at(&mut self, n: usize, base: f64, depth: f64) -> f64 {
        if !self.initialized {
            self.current = base;
            self.next = base + self.rng.gen_range(-depth..=depth);
            self.segment = 0;
            self.initialized = true;
        }
        let seg = n / WALK_STEP_SAMPLES;
        while self.segment < seg {
            self.current = self.next;
            self.next = base + self.rng.gen_range(-depth..=depth);
            self.segment += 1;
        }
        let frac = (n % WALK_STEP_SAMPLES) as f64 / WALK_STEP_SAMPLES as f64;
        self.current + (self.next - self.current) * frac
    }
}

enum AnyLine {
    Fir(FirLine),
    Fad(FadLine),
}

/// Stream `input` through the configured line. The modulation program
/// is evaluated per sample; a target outside the line's legal range
/// aborts with the first offending sample index.
pub fn process(cfg: &EffectConfig, input: &[Sample]) -> Result<Vec<Sample>> {
    let mut line = match cfg.kind {
        LineKind::Fir | LineKind::FirErase => {
            let erase = cfg.kind == LineKind::FirErase;
            AnyLine::Fir(FirLine::new(
                cfg.buffer,
                initial_delay_samples(cfg)?,
                erase,
            )?)
        }
        LineKind::Fad => {
            let mut l = FadLine::new(cfg.buffer, cfg.fs, initial_delay_seconds(cfg))?;
            l.set_fast_floor(cfg.fast_floor);
            AnyLine::Fad(l)
        }
    };

    let mut walk = Walk::new(cfg.seed);
    let mut out = Vec::with_capacity(input.len());
    for (n, &x) in input.iter().enumerate() {
        let target_s = cfg.delay_at(n, &mut walk);
        let set = match &mut line {
            AnyLine::Fir(l) => l.set_delay(target_s * cfg.fs),
            AnyLine::Fad(l) => l.set_delay_seconds(target_s),
        };
        set.map_err(|e| Error::Config {
            sample_index: n,
            message: e.to_string(),
        })?;
        out.push(match &mut line {
            AnyLine::Fir(l) => l.tick(x),
            AnyLine::Fad(l) => l.tick(x),
        });
    }
    Ok(out)
}

fn initial_delay_seconds(cfg: &EffectConfig) -> f64 {
    match cfg.modulation {
        Modulation::Ramp { tau0_s, .. } => tau0_s,
        _ => cfg.base_delay_s,
    }
}

fn initial_delay_samples(cfg: &EffectConfig) -> Result<f64> {
    Ok(initial_delay_seconds(cfg) * cfg.fs)
}

/// Read a 16-bit PCM mono WAV, process it, write the result with
/// saturating conversion back to 16 bits.
pub fn run_wav(cfg: &EffectConfig, input: &Path, output: &Path) -> Result<()> {
    let wav = read_wav_mono16(input)?;
    if (wav.fs as f64 - cfg.fs).abs() > 1e-9 {
        return Err(Error::Usage(format!(
            "input file is {} Hz but the configuration says {} Hz",
            wav.fs, cfg.fs
        )));
    }
    let out = process(cfg, &wav.samples)?;
    write_wav_mono16(output, &out, wav.fs)
}
