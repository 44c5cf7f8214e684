//! Named experiment runners. Each regenerates one dataset as CSV:
//! SNR and attenuation curves of the fractionally-addressed line,
//! analytic sideband curves, delay-dithering sonograms, ramp pitch
//! tracks for both line kinds, and the waveguide timbre comparison.

use crate::effects::{process, EffectConfig, LineKind, Modulation};
use crate::fad::FadLine;
use crate::fir::FirLine;
use crate::measure::{
    measure_attenuation, measure_snr, packet_events, pitch_track, sonogram, AttenuationResult,
    PitchPoint, SnrResult, SonogramFrame,
};
use crate::modmodel::sideband_spectrum_curve;
use crate::waveguide::{StringKind, WaveguideString};
use crate::{DelayLine, Error, Result, Sample};
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Default sample rate shared by the experiment defaults.
pub const DEFAULT_FS: f64 = 44100.0;
/// Default buffer length: one second at the default rate.
pub const DEFAULT_BUFFER: usize = 44100;
/// Default increment: delay of two thirds of the buffer.
pub const DEFAULT_INCREMENT: f64 = 1.5;

pub const SNR_CSV_HEADER: &str = "freq_hz,snr_db,phase";
pub const ATT_CSV_HEADER: &str = "freq_hz,min_db,max_db,mean_db";
pub const SONOGRAM_CSV_HEADER: &str = "frame,bin,db";
pub const PITCH_CSV_HEADER: &str = "t_s,hz";
pub const SIDEBANDS_CSV_HEADER: &str = "frequency_hz,A0,A1,A2,snr_db";

/// The experiments the command line can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentName {
    Snr,
    Attenuation,
    Sidebands,
    DitherSonogram,
    RampPitch,
    Waveguide,
}

impl FromStr for ExperimentName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "snr" => Ok(Self::Snr),
            "attenuation" => Ok(Self::Attenuation),
            "sidebands" => Ok(Self::Sidebands),
            "dither_sonogram" => Ok(Self::DitherSonogram),
            "ramp_pitch" => Ok(Self::RampPitch),
            "waveguide" => Ok(Self::Waveguide),
            other => Err(Error::Usage(format!(
                "unknown experiment {other:?}; expected one of snr, attenuation, \
                 sidebands, dither_sonogram, ramp_pitch, waveguide"
            ))),
        }
    }
}

/// Run one experiment, writing its CSV files plus a `manifest.txt` of
/// key=value parameters into `out_dir`. Returns the files written.
pub fn run(name: ExperimentName, out_dir: &Path, seed: u64) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut manifest = String::new();
    let _ = writeln!(manifest, "experiment={name:?}");
    let _ = writeln!(manifest, "fs={DEFAULT_FS}");
    let _ = writeln!(manifest, "seed={seed}");
    let mut files = Vec::new();

    match name {
        ExperimentName::Snr => {
            let _ = writeln!(manifest, "buffer={DEFAULT_BUFFER}");
            let _ = writeln!(manifest, "increment={DEFAULT_INCREMENT}");
            let results = snr_experiment()?;
            let mut rows = String::new();
            for r in &results {
                let _ = writeln!(rows, "{},{},{}", r.freq_hz, r.csv_db(), r.initial_phase);
            }
            files.push(write_csv(out_dir, "snr.csv", SNR_CSV_HEADER, &rows)?);
        }
        ExperimentName::Attenuation => {
            let _ = writeln!(manifest, "buffer={DEFAULT_BUFFER}");
            let _ = writeln!(manifest, "increment={DEFAULT_INCREMENT}");
            let results = attenuation_experiment()?;
            let mut rows = String::new();
            for a in &results {
                let _ = writeln!(
                    rows,
                    "{},{},{},{}",
                    a.freq_hz, a.min_gain_db, a.max_gain_db, a.mean_gain_db
                );
            }
            files.push(write_csv(out_dir, "att.csv", ATT_CSV_HEADER, &rows)?);
        }
        ExperimentName::Sidebands => {
            let _ = writeln!(manifest, "d_interval=[-0.5,0.5]");
            let grid: Vec<f64> = (0..=128)
                .map(|k| DEFAULT_FS / 2.0 * k as f64 / 128.0)
                .collect();
            let curve = sideband_spectrum_curve(-0.5, 0.5, DEFAULT_FS, &grid)?;
            let mut rows = String::new();
            for p in &curve {
                let _ = writeln!(
                    rows,
                    "{},{},{},{},{}",
                    p.freq_hz,
                    p.a0,
                    p.a1,
                    p.a2,
                    p.snr_db.min(crate::measure::SNR_UNBOUNDED_CAP_DB)
                );
            }
            files.push(write_csv(
                out_dir,
                "sidebands.csv",
                SIDEBANDS_CSV_HEADER,
                &rows,
            )?);
        }
        ExperimentName::DitherSonogram => {
            let d = dither_experiment(seed)?;
            let _ = writeln!(manifest, "pulse_period={DITHER_PULSE_PERIOD}");
            let _ = writeln!(manifest, "dispersion_plain={}", d.plain_stats.dispersion);
            let _ = writeln!(
                manifest,
                "dispersion_dithered={}",
                d.dithered_stats.dispersion
            );
            files.push(write_csv(
                out_dir,
                "sonogram_plain.csv",
                SONOGRAM_CSV_HEADER,
                &sonogram_rows(&d.plain),
            )?);
            files.push(write_csv(
                out_dir,
                "sonogram_dithered.csv",
                SONOGRAM_CSV_HEADER,
                &sonogram_rows(&d.dithered),
            )?);
        }
        ExperimentName::RampPitch => {
            let outcome = ramp_pitch_experiment(200.0)?;
            let _ = writeln!(manifest, "tau0_s={RAMP_TAU0_S}");
            let _ = writeln!(manifest, "ramp_k={}", ramp_k());
            let _ = writeln!(manifest, "duration_s={RAMP_DURATION_S}");
            files.push(write_csv(
                out_dir,
                "pitch_fir.csv",
                PITCH_CSV_HEADER,
                &pitch_rows(&outcome.fir_points),
            )?);
            files.push(write_csv(
                out_dir,
                "pitch_fad.csv",
                PITCH_CSV_HEADER,
                &pitch_rows(&outcome.fad_points),
            )?);
        }
        ExperimentName::Waveguide => {
            for kind in [
                StringKind::Fir,
                StringKind::FirErase,
                StringKind::Fad {
                    increment: DEFAULT_INCREMENT,
                },
            ] {
                let t = waveguide_timbre_experiment(kind)?;
                let tag = match kind {
                    StringKind::Fir => "fir",
                    StringKind::FirErase => "fir_erase",
                    StringKind::Fad { .. } => "fad",
                };
                let mut rows = String::new();
                for (n, y) in t.wave.iter().enumerate() {
                    let _ = writeln!(rows, "{n},{y}");
                }
                files.push(write_csv(
                    out_dir,
                    &format!("wave_{tag}.csv"),
                    "n,amplitude",
                    &rows,
                )?);
                let mut events = String::new();
                let _ = writeln!(events, "period_before,{}", t.period_before);
                let _ = writeln!(events, "period_after,{}", t.period_after);
                let _ = writeln!(events, "width_before,{}", t.width_before);
                let _ = writeln!(events, "width_after,{}", t.width_after);
                let _ = writeln!(events, "events_per_period,{}", t.events_per_period);
                files.push(write_csv(
                    out_dir,
                    &format!("events_{tag}.csv"),
                    "metric,value",
                    &events,
                )?);
            }
        }
    }

    let manifest_path = out_dir.join("manifest.txt");
    fs::write(&manifest_path, manifest)?;
    files.push(manifest_path);
    Ok(files)
}

fn write_csv(dir: &Path, name: &str, header: &str, rows: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, format!("{header}\n{rows}"))?;
    Ok(path)
}

fn sonogram_rows(frames: &[SonogramFrame]) -> String {
    let mut rows = String::new();
    for f in frames {
        for (bin, db) in f.bins_db.iter().enumerate() {
            let _ = writeln!(rows, "{},{},{}", f.time_index, bin, db);
        }
    }
    rows
}

fn pitch_rows(points: &[PitchPoint]) -> String {
    let mut rows = String::new();
    for p in points {
        if let Some(hz) = p.hz {
            let _ = writeln!(rows, "{},{}", p.t_s, hz);
        }
    }
    rows
}

/// Test-sine periods commensurate with a delay: integer periods in
/// `[min_period, max_period]` samples dividing the delay length.
pub fn commensurate_periods(
    delay_samples: usize,
    min_period: usize,
    max_period: usize,
) -> Vec<usize> {
    (min_period..=max_period)
        .filter(|n| delay_samples.is_multiple_of(*n))
        .collect()
}

/// Initial pointer phases used by the SNR/attenuation sweeps.
pub fn phase_grid() -> Vec<f64> {
    (0..8).map(|k| k as f64 / 8.0).collect()
}

fn default_fad(phase: f64) -> Result<FadLine> {
    let delay_s = DEFAULT_BUFFER as f64 / (DEFAULT_INCREMENT * DEFAULT_FS);
    FadLine::with_initial_phase(DEFAULT_BUFFER, DEFAULT_FS, delay_s, phase)
}

/// SNR of the default line over every commensurate period from 8 to
/// 512 samples, for each initial phase in the grid.
pub fn snr_experiment() -> Result<Vec<SnrResult>> {
    let delay = DEFAULT_BUFFER as f64 / DEFAULT_INCREMENT; // 29400 samples
    let periods = commensurate_periods(delay as usize, 8, 512);
    let mut results = Vec::new();
    for &n in periods.iter().rev() {
        let freq = DEFAULT_FS / n as f64;
        for phase in phase_grid() {
            let mut line = default_fad(phase)?;
            results.push(measure_snr(&mut line, freq, DEFAULT_FS, phase)?);
        }
    }
    Ok(results)
}

/// Attenuation (min/max/mean over initial phase) on the same grid.
pub fn attenuation_experiment() -> Result<Vec<AttenuationResult>> {
    let delay = DEFAULT_BUFFER as f64 / DEFAULT_INCREMENT;
    let periods = commensurate_periods(delay as usize, 8, 512);
    let phases = phase_grid();
    let mut results = Vec::new();
    for &n in periods.iter().rev() {
        let freq = DEFAULT_FS / n as f64;
        let mut make = |phase: f64| -> Box<dyn DelayLine> {
            Box::new(default_fad(phase).expect("default line parameters are valid"))
        };
        results.push(measure_attenuation(&mut make, freq, DEFAULT_FS, &phases)?);
    }
    Ok(results)
}

// Paper-style delay ramp: 0.99 s down to 0.5 s over 1.11 s.
pub const RAMP_TAU0_S: f64 = 0.99;
pub const RAMP_END_S: f64 = 0.5;
pub const RAMP_DURATION_S: f64 = 1.11;

/// Ramp rate in seconds of delay per second.
pub fn ramp_k() -> f64 {
    (RAMP_TAU0_S - RAMP_END_S) / RAMP_DURATION_S
}

/// Pitch-law outcome of the delay ramp on both line kinds.
pub struct RampPitchOutcome {
    pub fir_points: Vec<PitchPoint>,
    pub fad_points: Vec<PitchPoint>,
    /// Mean measured ratio over the whole FIR ramp.
    pub fir_ratio: f64,
    /// Index of the first FIR analysis frame within 1% of the expected
    /// shifted pitch.
    pub fir_onset_frame: usize,
    /// Mean measured ratio over the FAD plateau (after the transient).
    pub fad_steady_ratio: f64,
}

const PITCH_FRAME: usize = 4096;
const PITCH_HOP: usize = 512;

/// Run the delay ramp on a flushed line and pitch-track the output
/// captured from ramp start to ramp end.
fn ramp_output(kind: LineKind, f0: f64) -> Result<Vec<Sample>> {
    let fs = DEFAULT_FS;
    let k = ramp_k();
    let flush = (RAMP_TAU0_S * fs) as usize + 8192;
    let ramp_len = (RAMP_DURATION_S * fs) as usize;

    let buffer = match kind {
        LineKind::Fad => DEFAULT_BUFFER,
        _ => (RAMP_TAU0_S * fs) as usize + 64,
    };
    enum L {
        Fir(FirLine),
        Fad(FadLine),
    }
    let mut line = match kind {
        LineKind::Fad => L::Fad(FadLine::new(buffer, fs, RAMP_TAU0_S)?),
        LineKind::Fir => L::Fir(FirLine::new(buffer, RAMP_TAU0_S * fs, false)?),
        LineKind::FirErase => L::Fir(FirLine::new(buffer, RAMP_TAU0_S * fs, true)?),
    };

    let mut out = Vec::with_capacity(ramp_len);
    for n in 0..(flush + ramp_len) {
        let x = (TAU * f0 * n as f64 / fs).sin();
        if n >= flush {
            let t = (n - flush) as f64 / fs;
            let target = (RAMP_TAU0_S - k * t).max(RAMP_END_S);
            match &mut line {
                L::Fir(l) => l.set_delay(target * fs)?,
                L::Fad(l) => l.set_delay_seconds(target)?,
            }
        }
        let y = match &mut line {
            L::Fir(l) => l.tick(x),
            L::Fad(l) => l.tick(x),
        };
        if n >= flush {
            out.push(y);
        }
    }
    Ok(out)
}

/// The two pitch laws under the standard ramp: the two-pointer line
/// shifts immediately to `1 + k`, the fractionally-addressed line
/// settles on `e^k` after a transient.
pub fn ramp_pitch_experiment(f0: f64) -> Result<RampPitchOutcome> {
    let fs = DEFAULT_FS;
    let k = ramp_k();

    let fir_out = ramp_output(LineKind::Fir, f0)?;
    let fir_points = pitch_track(&fir_out, fs, PITCH_FRAME, PITCH_HOP)?;
    let fir_expected = (1.0 + k) * f0;
    let fir_hz: Vec<f64> = fir_points.iter().filter_map(|p| p.hz).collect();
    let fir_ratio = mean(&fir_hz) / f0;
    let fir_onset_frame = fir_points
        .iter()
        .position(|p| {
            p.hz.map(|hz| ((hz - fir_expected) / fir_expected).abs() < 0.01)
                .unwrap_or(false)
        })
        .unwrap_or(usize::MAX);

    let fad_out = ramp_output(LineKind::Fad, f0)?;
    let fad_points = pitch_track(&fad_out, fs, PITCH_FRAME, PITCH_HOP)?;
    // Plateau window: after the transient, before the ramp stops.
    let t_transient = (RAMP_TAU0_S / k) * (1.0 - (-k).exp());
    let lo = t_transient + 0.05;
    let hi = RAMP_DURATION_S - 0.02;
    let plateau: Vec<f64> = fad_points
        .iter()
        .filter(|p| p.t_s >= lo && p.t_s <= hi)
        .filter_map(|p| p.hz)
        .collect();
    if plateau.is_empty() {
        return Err(Error::SignalTooShort { needed: 1, got: 0 });
    }
    let fad_steady_ratio = mean(&plateau) / f0;

    Ok(RampPitchOutcome {
        fir_points,
        fad_points,
        fir_ratio,
        fir_onset_frame,
        fad_steady_ratio,
    })
}

/// Feed an impulse into an empty fractionally-addressed line at ramp
/// start; returns the time in seconds at which it comes out (the
/// envelope peak of the output).
pub fn fad_impulse_exit_seconds() -> Result<f64> {
    let fs = DEFAULT_FS;
    let k = ramp_k();
    let mut line = FadLine::new(DEFAULT_BUFFER, fs, RAMP_TAU0_S)?;
    let total = (RAMP_DURATION_S * fs) as usize;
    let mut best = (0usize, 0.0f64);
    for n in 0..total {
        let t = n as f64 / fs;
        line.set_delay_seconds((RAMP_TAU0_S - k * t).max(RAMP_END_S))?;
        let y = line.tick(if n == 0 { 1.0 } else { 0.0 });
        if y.abs() > best.1 {
            best = (n, y.abs());
        }
    }
    Ok(best.0 as f64 / fs)
}

// Delay-dithering experiment: a pulse train through a two-pointer line
// whose length rises slowly through several fractional cycles, with
// and without a small slow modulation on top. The pulse period equals
// the analysis hop so frame energy does not jitter with alignment.
pub const DITHER_PULSE_PERIOD: usize = 128;
const DITHER_SECONDS: f64 = 4.0;
const DITHER_BASE_DELAY: f64 = 64.0;
const DITHER_SWEEP: f64 = 8.0;
const DITHER_DEPTH: f64 = 0.6;
const DITHER_RATE_HZ: f64 = 60.0;

/// Distribution of the dark (attenuated) regions along the time axis.
#[derive(Debug, Clone, Copy)]
pub struct DitherStats {
    /// Valley-position dispersion: the participation ratio
    /// `(sum w)^2 / sum w^2` of the per-frame darkness weights, i.e.
    /// the effective number of frames the darkness is spread across.
    /// Maximal when the dark areas cover the axis uniformly, small
    /// when they cluster into a few deep valleys.
    pub dispersion: f64,
    /// Variance over frames of the per-frame high-frequency level;
    /// large when darkness clusters into a few deep valleys.
    pub darkness_variance: f64,
}

pub struct DitherOutcome {
    pub plain: Vec<SonogramFrame>,
    pub dithered: Vec<SonogramFrame>,
    pub plain_stats: DitherStats,
    pub dithered_stats: DitherStats,
}

/// Run the pulse train through the slowly lengthening line twice: once
/// plain, once with the small sine dither added to the delay target.
pub fn dither_experiment(_seed: u64) -> Result<DitherOutcome> {
    let plain = dither_run(0.0)?;
    let dithered = dither_run(DITHER_DEPTH)?;
    let plain_stats = dither_stats(&plain);
    let dithered_stats = dither_stats(&dithered);
    Ok(DitherOutcome {
        plain,
        dithered,
        plain_stats,
        dithered_stats,
    })
}

fn dither_run(depth_samples: f64) -> Result<Vec<SonogramFrame>> {
    let fs = DEFAULT_FS;
    let total = (DITHER_SECONDS * fs) as usize;
    let mut line = FirLine::new(256, DITHER_BASE_DELAY, false)?;
    let mut out = Vec::with_capacity(total);
    for n in 0..total {
        let t = n as f64 / fs;
        let ramp = DITHER_BASE_DELAY + DITHER_SWEEP * n as f64 / total as f64;
        let dither = depth_samples * (TAU * DITHER_RATE_HZ * t).sin();
        line.set_delay(ramp + dither)?;
        let x = if n % DITHER_PULSE_PERIOD == 0 {
            1.0
        } else {
            0.0
        };
        out.push(line.tick(x));
    }
    sonogram(&out, fs)
}

/// Per-frame level in dB of the top quarter of the band (bins 96 and
/// up), where the interpolator valleys bite hardest.
fn hf_levels(frames: &[SonogramFrame]) -> Vec<f64> {
    frames
        .iter()
        .map(|f| {
            let power: f64 = f.bins_db[96..].iter().map(|db| 10f64.powf(db / 10.0)).sum();
            10.0 * power.log10()
        })
        .collect()
}

/// Darkness statistics of a run. Weights measure how far each frame
/// sits below the run's bright level (90th percentile); their
/// participation ratio is the dispersion of the dark areas over time.
pub fn dither_stats(frames: &[SonogramFrame]) -> DitherStats {
    let levels = hf_levels(frames);
    let mut sorted = levels.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let bright = sorted[(sorted.len() * 9) / 10];
    let weights: Vec<f64> = levels.iter().map(|&v| (bright - v).max(0.0)).collect();
    let sum: f64 = weights.iter().sum();
    let sum_sq: f64 = weights.iter().map(|w| w * w).sum();
    let dispersion = if sum_sq > 0.0 {
        sum * sum / sum_sq
    } else {
        0.0
    };
    let m = mean(&levels);
    let darkness_variance =
        levels.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / levels.len() as f64;
    DitherStats {
        dispersion,
        darkness_variance,
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

// Waveguide timbre experiment: lower the pitch of a recirculating
// packet by a factor 1.25 and compare how period and packet width move.
const WG_LENGTH: usize = 1200;
const WG_NEW_LENGTH: f64 = 1500.0;
const WG_FAD_NEW_INCREMENT: f64 = 1.2;
const WG_PACKET_FREQ: f64 = 1102.5; // 3 cycles = 120 samples

/// Measured behavior of one string kind across the pitch change.
pub struct TimbreOutcome {
    pub kind: StringKind,
    pub period_before: f64,
    pub period_after: f64,
    pub width_before: f64,
    pub width_after: f64,
    /// Distinct packet arrivals per recirculation period after the
    /// change; 1 for a clean string, 2 when a ghost copy circulates.
    pub events_per_period: f64,
    /// Right-termination waveform across the whole run.
    pub wave: Vec<Sample>,
}

/// Inject a three-cycle packet, measure period and width, lower the
/// pitch right after a left-end reflection, and measure again.
pub fn waveguide_timbre_experiment(kind: StringKind) -> Result<TimbreOutcome> {
    let fs = DEFAULT_FS;
    let mut s = WaveguideString::string_new(kind, WG_LENGTH, fs)?;
    s.inject_packet(3, WG_PACKET_FREQ)?;

    let period0 = 2 * WG_LENGTH;
    let mut wave = s.run(5 * period0);
    let before = packet_events(&wave);
    if before.len() < 3 {
        return Err(Error::SignalTooShort {
            needed: 3,
            got: before.len(),
        });
    }
    let period_before = median_diff(&before.iter().map(|e| e.start).collect::<Vec<_>>());
    let width_before = median(&before.iter().map(|e| e.width() as f64).collect::<Vec<_>>());

    // Wait for the packet to clear the left termination, then change.
    wave.extend(s.run_until_left_reflection(4 * period0)?);
    match kind {
        StringKind::Fad { .. } => s.lower_pitch(WG_FAD_NEW_INCREMENT)?,
        _ => s.lower_pitch(WG_NEW_LENGTH)?,
    }

    let period1_expect = (2.0 * WG_NEW_LENGTH) as usize;
    // Let the change settle for two laps, then observe five periods.
    wave.extend(s.run(2 * period1_expect));
    let observed = s.run(5 * period1_expect);
    let after = packet_events(&observed);
    if after.len() < 3 {
        return Err(Error::SignalTooShort {
            needed: 3,
            got: after.len(),
        });
    }
    let period_after = envelope_period(&observed, period1_expect);
    let width_after = median(&after.iter().map(|e| e.width() as f64).collect::<Vec<_>>());
    let events_per_period = after.len() as f64 / (observed.len() as f64 / period_after);
    wave.extend_from_slice(&observed);

    Ok(TimbreOutcome {
        kind,
        period_before,
        period_after,
        width_before,
        width_after,
        events_per_period,
        wave,
    })
}

/// Fundamental recirculation period from the envelope autocorrelation,
/// searched around the expected value. The envelope ignores the sign
/// flips the reflections apply.
fn envelope_period(signal: &[Sample], expect: usize) -> f64 {
    let env = crate::measure::envelope(signal);
    let lo = expect * 4 / 5;
    let hi = (expect * 6 / 5).min(env.len() / 2);
    let mut best = (lo, f64::NEG_INFINITY);
    for lag in lo..hi {
        let mut acc = 0.0;
        for n in 0..(env.len() - lag) {
            acc += env[n] * env[n + lag];
        }
        if acc > best.1 {
            best = (lag, acc);
        }
    }
    best.0 as f64
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s[s.len() / 2]
}

fn median_diff(starts: &[usize]) -> f64 {
    let diffs: Vec<f64> = starts.windows(2).map(|w| (w[1] - w[0]) as f64).collect();
    median(&diffs)
}

/// Random-walk smoothness check used by the effect front end's tests:
/// largest frame-to-frame pitch jump of a walked line, in relative
/// terms.
pub fn walk_pitch_jump(seed: u64) -> Result<f64> {
    let fs = DEFAULT_FS;
    let cfg = EffectConfig {
        kind: LineKind::Fad,
        base_delay_s: DEFAULT_BUFFER as f64 / (1.5 * fs),
        modulation: Modulation::RandomWalk { depth_s: 0.02 },
        fs,
        buffer: DEFAULT_BUFFER,
        seed,
        fast_floor: false,
    };
    let f0 = 441.0;
    let input: Vec<f64> = (0..(3 * 44100))
        .map(|n| (TAU * f0 * n as f64 / fs).sin())
        .collect();
    let out = process(&cfg, &input)?;
    // Skip the initial fill of the line.
    let settled = &out[DEFAULT_BUFFER..];
    let points = pitch_track(settled, fs, 4096, 1024)?;
    let hz: Vec<f64> = points.iter().filter_map(|p| p.hz).collect();
    let mut worst = 0.0f64;
    for w in hz.windows(2) {
        worst = worst.max(((w[1] - w[0]) / w[0]).abs());
    }
    Ok(worst)
}
