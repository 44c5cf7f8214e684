//! Analytical model of length-modulated delay lines.
//!
//! Sweeping the fractional offset `d` applies both amplitude and phase
//! modulation to a sine passing through the interpolator. Assuming the
//! magnitude and phase delay vary sinusoidally — the magnitude at twice
//! the rate `omega_M` of the delay, since the magnitude curve has two
//! minima per `d` sweep where the delay curve has one — a carrier at
//! `omega_0` comes out as
//!
//! ```text
//! v = A_m (1 + m cos 2 omega_M t) cos(omega_0 t + tau_max omega_0 sin omega_M t)
//! ```
//!
//! with `m = (1 - A_min)/(1 + A_min)` and `A_m = (1 + A_min)/2`.
//! Expanding the phase modulation in Bessel functions and dropping
//! sidebands above second order (they are negligible in practice)
//! leaves a carrier `A0` and sideband pairs `A1`, `A2` whose amplitudes
//! are in [`sideband_amplitudes`]. From those, [`predicted_snr`] gives
//! a signal-to-error-noise ratio that lower-bounds what a
//! fractionally-addressed line measures in simulation.

use crate::interp::response_extrema;
use crate::{Error, Result};
use std::f64::consts::TAU;

/// Inputs of the sideband model for one carrier frequency.
#[derive(Debug, Clone, Copy)]
pub struct ModulationParams {
    /// Minimum interpolator magnitude over the swept `d` interval.
    pub a_min: f64,
    /// Maximum excess phase delay over the interval, in samples, so
    /// zero means ideal linear phase.
    pub tau_max: f64,
    /// Carrier frequency in radians per sample.
    pub omega0: f64,
    /// Modulating frequency in radians per second.
    pub omega_m: f64,
}

impl ModulationParams {
    pub fn new(a_min: f64, tau_max: f64, omega0: f64, omega_m: f64) -> Result<Self> {
        if a_min.is_nan() || a_min <= 0.0 || a_min > 1.0 {
            return Err(Error::OutOfRange {
                what: "minimum magnitude",
                value: a_min,
                min: f64::MIN_POSITIVE,
                max: 1.0,
            });
        }
        if tau_max.is_nan() || tau_max < 0.0 {
            return Err(Error::OutOfRange {
                what: "maximum excess delay",
                value: tau_max,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        Ok(Self {
            a_min,
            tau_max,
            omega0,
            omega_m,
        })
    }
}

/// Carrier and sideband amplitudes of the modulated carrier.
#[derive(Debug, Clone, Copy)]
pub struct SidebandModel {
    /// Amplitude-modulation index `(1 - A_min) / (1 + A_min)`.
    pub modulation_index: f64,
    /// Mean gain `(1 + A_min) / 2`.
    pub mean_gain: f64,
    /// Carrier amplitude.
    pub a0: f64,
    /// First-order sideband amplitude (magnitude; the lower sideband
    /// carries a negative sign in the expansion, which no power
    /// measure sees).
    pub a1: f64,
    /// Second-order sideband amplitude.
    pub a2: f64,
}

/// Bessel function of the first kind, orders 0 to 3, by ascending
/// series. Terms are added until they stop contributing, which keeps
/// the truncation error below 1e-12 over the supported range.
pub fn bessel_j(order: usize, x: f64) -> Result<f64> {
    if order > 3 {
        return Err(Error::OutOfRange {
            what: "Bessel order",
            value: order as f64,
            min: 0.0,
            max: 3.0,
        });
    }
    if !(0.0..=20.0).contains(&x) {
        return Err(Error::OutOfRange {
            what: "Bessel argument",
            value: x,
            min: 0.0,
            max: 20.0,
        });
    }
    let half = x / 2.0;
    // term_0 = (x/2)^n / n!
    let mut term = 1.0;
    for k in 1..=order {
        term *= half / k as f64;
    }
    let mut sum = term;
    for k in 1..=60 {
        term *= -(half * half) / (k as f64 * (k + order) as f64);
        sum += term;
        if term.abs() < 1e-20 {
            break;
        }
    }
    Ok(sum)
}

/// Evaluate the sideband table at `x = tau_max * omega0`:
///
/// ```text
/// A0 = A_m J0 + m A_m J2
/// A1 = A_m J1 - (m A_m / 2) J1
/// A2 = A_m J2 + (m A_m / 2) J0
/// ```
pub fn sideband_amplitudes(p: &ModulationParams) -> Result<SidebandModel> {
    let m = (1.0 - p.a_min) / (1.0 + p.a_min);
    let a_m = (1.0 + p.a_min) / 2.0;
    let x = p.tau_max * p.omega0;
    let j0 = bessel_j(0, x)?;
    let j1 = bessel_j(1, x)?;
    let j2 = bessel_j(2, x)?;
    Ok(SidebandModel {
        modulation_index: m,
        mean_gain: a_m,
        a0: a_m * j0 + m * a_m * j2,
        a1: a_m * j1 - m * a_m / 2.0 * j1,
        a2: a_m * j2 + m * a_m / 2.0 * j0,
    })
}

/// Signal-to-error-noise ratio implied by the sideband amplitudes,
///
/// ```text
/// SNR = A0^2 / (2 sqrt(2) sqrt(A1^2 + A2^2))
/// ```
///
/// in dB. A pure delay has no sidebands and an unbounded ratio, which
/// is reported as `f64::INFINITY` (capped to 200 dB at the CSV
/// boundary).
pub fn predicted_snr(s: &SidebandModel) -> f64 {
    if s.a1.abs() < 1e-15 && s.a2.abs() < 1e-15 {
        return f64::INFINITY;
    }
    let err = (s.a1 * s.a1 + s.a2 * s.a2).sqrt();
    20.0 * (s.a0 * s.a0 / (2.0 * 2.0_f64.sqrt() * err)).log10()
}

/// Where interpolation error lands in the spectrum for a given pointer
/// increment.
#[derive(Debug, Clone, Copy)]
pub struct ModulationFrequency {
    /// `omega_M = 2 pi I_f Fs`, radians per second.
    pub rad_per_s: f64,
    /// The same modulator folded into the baseband `[0, Fs/2]`, in Hz:
    /// sidebands of a carrier show up offset by this amount.
    pub folded_hz: f64,
}

/// The fractional part `I_f` of the increment sets the modulating
/// frequency: `omega_M = 2 pi I_f Fs`. An integer increment does not
/// modulate at all.
pub fn modulation_frequency(increment: f64, fs: f64) -> Result<ModulationFrequency> {
    if !(1.0..=2.0).contains(&increment) {
        return Err(Error::OutOfRange {
            what: "increment",
            value: increment,
            min: 1.0,
            max: 2.0,
        });
    }
    let i_f = increment.fract();
    Ok(ModulationFrequency {
        rad_per_s: TAU * i_f * fs,
        folded_hz: i_f.min(1.0 - i_f) * fs,
    })
}

/// One row of the analytic sideband curve.
#[derive(Debug, Clone, Copy)]
pub struct SidebandPoint {
    pub freq_hz: f64,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub snr_db: f64,
}

/// Sweep the carrier over `f_grid` for a line whose offset covers
/// `[d_lo, d_hi]`: extrema of the interpolator response feed the
/// sideband table at each frequency. Modulation acts as a lowpass on
/// the carrier and roughly a highpass on the side components.
pub fn sideband_spectrum_curve(
    d_lo: f64,
    d_hi: f64,
    fs: f64,
    f_grid: &[f64],
) -> Result<Vec<SidebandPoint>> {
    f_grid
        .iter()
        .map(|&freq_hz| {
            let s = sidebands_at(freq_hz, fs, d_lo, d_hi)?;
            Ok(SidebandPoint {
                freq_hz,
                a0: s.a0,
                a1: s.a1,
                a2: s.a2,
                snr_db: predicted_snr(&s),
            })
        })
        .collect()
}

/// Full chain for one frequency: response extrema over the offset
/// interval, then the sideband table.
pub fn sidebands_at(freq_hz: f64, fs: f64, d_lo: f64, d_hi: f64) -> Result<SidebandModel> {
    let ext = response_extrema(freq_hz, fs, d_lo, d_hi)?;
    let omega0 = TAU * freq_hz / fs;
    let p = ModulationParams::new(ext.a_min, ext.tau_max.max(0.0), omega0, 0.0)?;
    sideband_amplitudes(&p)
}

/// Predicted SNR in dB for one frequency; the lower bound used to
/// check measured line SNR.
pub fn predicted_snr_at(freq_hz: f64, fs: f64, d_lo: f64, d_hi: f64) -> Result<f64> {
    Ok(predicted_snr(&sidebands_at(freq_hz, fs, d_lo, d_hi)?))
}
