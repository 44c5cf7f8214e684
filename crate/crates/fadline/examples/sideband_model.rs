//! Analytic sideband model of a length-modulated line: carrier and
//! side-component amplitudes and the predicted SNR curve, written as
//! CSV to the directory given as the first argument (default `.`).
//!
//!     cargo run --release --example sideband_model -- /tmp/out

use fadline::modmodel::{predicted_snr, sideband_spectrum_curve, sidebands_at};
use std::path::PathBuf;

fn main() {
    let out_dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let fs = 44100.0;

    let s = sidebands_at(fs / 64.0, fs, -0.5, 0.5).unwrap();
    println!(
        "at Fs/64: m = {:.3e}, A_m = {:.9}",
        s.modulation_index, s.mean_gain
    );
    println!(
        "  A0 = {:.9}  A1 = {:.3e}  A2 = {:.3e}  predicted SNR = {:.2} dB",
        s.a0,
        s.a1,
        s.a2,
        predicted_snr(&s)
    );

    let grid: Vec<f64> = (0..=128).map(|k| fs / 2.0 * k as f64 / 128.0).collect();
    let curve = sideband_spectrum_curve(-0.5, 0.5, fs, &grid).unwrap();
    let mut csv = String::from("frequency_hz,A0,A1,A2,snr_db\n");
    for p in &curve {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            p.freq_hz,
            p.a0,
            p.a1,
            p.a2,
            p.snr_db.min(200.0)
        ));
    }
    let path = out_dir.join("sidebands.csv");
    std::fs::write(&path, csv).unwrap();
    println!("wrote {} ({} rows)", path.display(), curve.len());
    println!("the carrier falls off with frequency while the side products grow:");
    for p in curve.iter().step_by(32) {
        println!(
            "  {:8.1} Hz: A0 = {:.4}, A1 = {:.4}, A2 = {:.4}",
            p.freq_hz, p.a0, p.a1, p.a2
        );
    }
}
