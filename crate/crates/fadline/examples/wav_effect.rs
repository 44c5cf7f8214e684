//! Chorus-style effect: a short test tone through a
//! fractionally-addressed line whose delay takes a seeded random walk,
//! drawing a new target every hundred samples. Writes `chorus_in.wav`
//! and `chorus_out.wav` to the directory given as the first argument
//! (default `.`).
//!
//!     cargo run --release --example wav_effect -- /tmp/out

use fadline::effects::{run_wav, EffectConfig, LineKind, Modulation};
use fadline::wav::write_wav_mono16;
use std::f64::consts::TAU;
use std::path::PathBuf;

fn main() {
    let out_dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let fs = 44100.0;

    // Two seconds of a plucked-ish tone: a few harmonics with decay.
    let samples: Vec<f64> = (0..(2.0 * fs) as usize)
        .map(|n| {
            let t = n as f64 / fs;
            let env = (-2.0 * t).exp();
            0.4 * env
                * ((TAU * 220.0 * t).sin()
                    + 0.5 * (TAU * 440.0 * t).sin()
                    + 0.25 * (TAU * 660.0 * t).sin())
        })
        .collect();
    let input = out_dir.join("chorus_in.wav");
    write_wav_mono16(&input, &samples, fs as u32).unwrap();

    let cfg = EffectConfig {
        kind: LineKind::Fad,
        base_delay_s: 0.03,
        modulation: Modulation::RandomWalk { depth_s: 0.004 },
        fs,
        buffer: (0.03 * fs * 1.5) as usize,
        seed: 2024,
        fast_floor: false,
    };
    let output = out_dir.join("chorus_out.wav");
    run_wav(&cfg, &input, &output).unwrap();
    println!("wrote {}", input.display());
    println!("wrote {}", output.display());
    println!("mix the two for a chorus; the walked line floats its pitch smoothly.");
}
