//! Quadratic Lagrange interpolation and its frequency response.
//!
//! The interpolator realizes the FIR transfer function
//! `H(z) = h0 + h1 z^-1 + h2 z^-2` with
//!
//! ```text
//! h0 = d (1 + d) / 2
//! h1 = (1 + d) (1 - d)
//! h2 = -d (1 - d) / 2
//! ```
//!
//! so the nominal delay is `D = 1 - d` samples, `d in [-1, 1]`. On that
//! interval the magnitude response never exceeds unity, which is what
//! makes the interpolator safe inside feedback structures, and the
//! phase delay deviates from the straight `D` line by an excess that is
//! ideally zero.

use crate::{Error, Result};
use std::f64::consts::TAU;

/// Fractional part of a delay, restricted to the interval where the
/// quadratic interpolator is valid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOffset(f64);

impl FracOffset {
    pub fn new(d: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&d) || d.is_nan() {
            return Err(Error::OutOfRange {
                what: "fractional offset d",
                value: d,
                min: -1.0,
                max: 1.0,
            });
        }
        Ok(Self(d))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Coefficient triple of the quadratic interpolator at a given
/// fractional offset. Sums to one, so DC passes with unit gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lagrange2 {
    pub h0: f64,
    pub h1: f64,
    pub h2: f64,
}

impl Lagrange2 {
    pub fn new(d: FracOffset) -> Self {
        Self::from_raw(d.value())
    }

    /// Internal constructor for hot paths where the offset is already
    /// known to lie in [-1, 1] by construction.
    #[inline]
    pub(crate) fn from_raw(d: f64) -> Self {
        debug_assert!((-1.0..=1.0).contains(&d), "offset {d} escaped [-1, 1]");
        Self {
            h0: d * (1.0 + d) * 0.5,
            h1: (1.0 + d) * (1.0 - d),
            h2: -d * (1.0 - d) * 0.5,
        }
    }

    /// Apply to three samples ordered newest to oldest; approximates
    /// the value one sample behind `newest`, advanced by `d`.
    #[inline]
    pub fn apply(&self, newest: f64, middle: f64, oldest: f64) -> f64 {
        self.h0 * newest + self.h1 * middle + self.h2 * oldest
    }
}

/// Convenience wrapper matching the coefficient formulas above.
pub fn lagrange2_coeffs(d: FracOffset) -> Lagrange2 {
    Lagrange2::new(d)
}

/// Magnitude (linear) and phase delay (samples) of the interpolator at
/// one frequency.
#[derive(Debug, Clone, Copy)]
pub struct FreqResponse {
    pub magnitude: f64,
    pub phase_delay: f64,
}

impl FreqResponse {
    /// Phase delay minus the nominal delay `D = 1 - d`; zero for an
    /// ideal fractional delay.
    pub fn excess_delay(&self, d: FracOffset) -> f64 {
        self.phase_delay - (1.0 - d.value())
    }
}

/// Evaluate `H(e^{j 2 pi f / fs})` of the interpolator at offset `d`.
///
/// At `f = 0` the phase delay is defined by continuity as `1 - d`.
pub fn lagrange2_response(d: FracOffset, freq_hz: f64, fs_hz: f64) -> Result<FreqResponse> {
    if !(0.0..=fs_hz / 2.0).contains(&freq_hz) {
        return Err(Error::OutOfRange {
            what: "frequency",
            value: freq_hz,
            min: 0.0,
            max: fs_hz / 2.0,
        });
    }
    let c = Lagrange2::new(d);
    let w = TAU * freq_hz / fs_hz;
    // H = h0 + h1 e^{-jw} + h2 e^{-2jw}
    let re = c.h0 + c.h1 * w.cos() + c.h2 * (2.0 * w).cos();
    let im = -c.h1 * w.sin() - c.h2 * (2.0 * w).sin();
    let magnitude = re.hypot(im);
    let phase_delay = if freq_hz == 0.0 {
        1.0 - d.value()
    } else {
        // atan2 only yields the principal phase; a delay close to two
        // samples walks past -pi within the band. Unwrap by taking the
        // 2*pi branch whose delay lies nearest the nominal 1 - d.
        let raw = -im.atan2(re) / w;
        let period = TAU / w;
        raw + period * (((1.0 - d.value()) - raw) / period).round()
    };
    Ok(FreqResponse {
        magnitude,
        phase_delay,
    })
}

/// Extremal magnitude and excess phase delay over an offset interval.
#[derive(Debug, Clone, Copy)]
pub struct ResponseExtrema {
    pub a_min: f64,
    pub a_max: f64,
    pub tau_min: f64,
    pub tau_max: f64,
}

/// Grid step used by [`response_extrema`]; dense enough that the
/// extrema are located to well under 1e-4 in magnitude.
pub const EXTREMA_GRID_STEP: f64 = 1.0 / 1024.0;

/// Scan `d` over `[d_lo, d_hi]` and report the extrema of magnitude
/// and excess phase delay at one frequency. No closed form exists for
/// the extrema, so they are found by dense sampling.
pub fn response_extrema(freq_hz: f64, fs_hz: f64, d_lo: f64, d_hi: f64) -> Result<ResponseExtrema> {
    if d_lo > d_hi {
        return Err(Error::EmptyRange("offset interval"));
    }
    // Validate the endpoints once; the grid stays inside them.
    let lo = FracOffset::new(d_lo)?;
    let hi = FracOffset::new(d_hi)?;
    let span = hi.value() - lo.value();
    let steps = ((span / EXTREMA_GRID_STEP).ceil() as usize).max(1);

    let mut ext = ResponseExtrema {
        a_min: f64::INFINITY,
        a_max: f64::NEG_INFINITY,
        tau_min: f64::INFINITY,
        tau_max: f64::NEG_INFINITY,
    };
    for i in 0..=steps {
        let d = lo.value() + span * (i as f64) / (steps as f64);
        let d = FracOffset::new(d.clamp(-1.0, 1.0))?;
        let r = lagrange2_response(d, freq_hz, fs_hz)?;
        let excess = r.excess_delay(d);
        ext.a_min = ext.a_min.min(r.magnitude);
        ext.a_max = ext.a_max.max(r.magnitude);
        ext.tau_min = ext.tau_min.min(excess);
        ext.tau_max = ext.tau_max.max(excess);
    }
    Ok(ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn coeffs_of(d: f64) -> Lagrange2 {
        lagrange2_coeffs(FracOffset::new(d).unwrap())
    }

    #[test]
    fn exact_delay_coefficients() {
        // d = 0: pure one-sample delay
        let c = coeffs_of(0.0);
        assert_eq!((c.h0, c.h1, c.h2), (0.0, 1.0, 0.0));
        // d = 1: zero delay
        let c = coeffs_of(1.0);
        assert_eq!((c.h0, c.h1, c.h2), (1.0, 0.0, 0.0));
        // d = -1: two-sample delay
        let c = coeffs_of(-1.0);
        assert_eq!((c.h0, c.h1, c.h2), (0.0, 0.0, 1.0));
    }

    #[test]
    fn half_sample_coefficients() {
        let c = coeffs_of(0.5);
        assert!((c.h0 - 0.375).abs() < 1e-15);
        assert!((c.h1 - 0.75).abs() < 1e-15);
        assert!((c.h2 + 0.125).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range_offset() {
        assert!(FracOffset::new(1.0 + 1e-9).is_err());
        assert!(FracOffset::new(-1.1).is_err());
        assert!(FracOffset::new(f64::NAN).is_err());
    }

    #[test]
    fn coefficient_sum_is_unity_for_a_million_offsets() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1a6);
        for _ in 0..1_000_000 {
            let d: f64 = rng.gen_range(-1.0..=1.0);
            let c = Lagrange2::from_raw(d);
            assert!(
                (c.h0 + c.h1 + c.h2 - 1.0).abs() <= 1e-12,
                "sum off at d = {d}"
            );
        }
    }

    #[test]
    fn pure_delays_have_flat_response() {
        for f in [0.0, 1000.0, 11025.0, 22050.0] {
            let r = lagrange2_response(FracOffset::new(0.0).unwrap(), f, 44100.0).unwrap();
            assert!((r.magnitude - 1.0).abs() < 1e-12);
            assert!((r.phase_delay - 1.0).abs() < 1e-9);
            let r = lagrange2_response(FracOffset::new(1.0).unwrap(), f, 44100.0).unwrap();
            assert!((r.magnitude - 1.0).abs() < 1e-12);
            assert!(
                (r.phase_delay - 0.0).abs() < 1e-9,
                "zero-delay phase at {f} Hz: {}",
                r.phase_delay
            );
        }
    }

    #[test]
    fn response_at_quarter_band_half_sample() {
        // Frozen from a straight complex-arithmetic evaluation of
        // H(e^{j pi/2}) = 0.375 - 0.75 j - 0.125 e^{-j pi}.
        let r = lagrange2_response(FracOffset::new(0.5).unwrap(), 11025.0, 44100.0).unwrap();
        assert!((r.magnitude - 0.9013878188659973).abs() < 1e-12);
        assert!((r.phase_delay - 0.6256659163780024).abs() < 1e-12);
    }

    #[test]
    fn exact_delays_at_every_frequency() {
        for d in [-1.0, 0.0, 1.0] {
            let off = FracOffset::new(d).unwrap();
            for k in 0..64 {
                let f = 22050.0 * (k as f64) / 63.0;
                let r = lagrange2_response(off, f, 44100.0).unwrap();
                assert!(
                    (r.phase_delay - (1.0 - d)).abs() < 1e-9,
                    "d = {d}, f = {f}: phase delay {}",
                    r.phase_delay
                );
            }
        }
    }

    #[test]
    fn magnitude_bound_on_dense_grid() {
        // 256 x 256 grid over d in [-1, 1], f in [0, Fs/2].
        let fs = 44100.0;
        for i in 0..256 {
            let d = -1.0 + 2.0 * (i as f64) / 255.0;
            let off = FracOffset::new(d).unwrap();
            for j in 0..256 {
                let f = fs / 2.0 * (j as f64) / 255.0;
                let r = lagrange2_response(off, f, fs).unwrap();
                assert!(
                    r.magnitude <= 1.0 + 1e-9,
                    "gain {} exceeds unity at d = {d}, f = {f}",
                    r.magnitude
                );
            }
        }
    }

    #[test]
    fn maximally_flat_near_dc() {
        let fs = 44100.0;
        let f = fs / 1024.0;
        for i in 0..=200 {
            let d = -0.5 + (i as f64) / 200.0;
            let r = lagrange2_response(FracOffset::new(d).unwrap(), f, fs).unwrap();
            assert!(
                r.magnitude >= 0.9999,
                "low-frequency droop {} at d = {d}",
                r.magnitude
            );
        }
    }

    #[test]
    fn extrema_single_point_is_pure_delay() {
        let e = response_extrema(11025.0, 44100.0, 0.0, 0.0).unwrap();
        assert_eq!(e.a_min, 1.0);
        assert_eq!(e.a_max, 1.0);
        assert!(e.tau_min.abs() < 1e-12 && e.tau_max.abs() < 1e-12);
    }

    #[test]
    fn extrema_over_centered_interval() {
        let e = response_extrema(11025.0, 44100.0, -0.5, 0.5).unwrap();
        // The maximum is reached at d = 0 where the filter degenerates
        // to a pure delay.
        assert!((e.a_max - 1.0).abs() < 1e-12);
        // Frozen grid-scan value: the minimum sits at the interval ends.
        assert!((e.a_min - 0.9013878188659973).abs() < 1e-9);
        // Excess delay is odd in d, so the interval is symmetric.
        assert!((e.tau_max - 0.1256659163780024).abs() < 1e-9);
        assert!((e.tau_min + e.tau_max).abs() < 1e-9);
    }

    #[test]
    fn extrema_rejects_inverted_interval() {
        assert!(matches!(
            response_extrema(1000.0, 44100.0, 0.5, -0.5),
            Err(Error::EmptyRange(_))
        ));
    }

    proptest! {
        #[test]
        fn prop_magnitude_never_exceeds_unity(d in -1.0f64..=1.0, f in 0.0f64..=22050.0) {
            let r = lagrange2_response(FracOffset::new(d).unwrap(), f, 44100.0).unwrap();
            prop_assert!(r.magnitude <= 1.0 + 1e-9);
            prop_assert!(r.magnitude.is_finite() && r.phase_delay.is_finite());
        }

        #[test]
        fn prop_coefficients_sum_to_one(d in -1.0f64..=1.0) {
            let c = Lagrange2::from_raw(d);
            prop_assert!((c.h0 + c.h1 + c.h2 - 1.0).abs() <= 1e-12);
        }
    }
}
