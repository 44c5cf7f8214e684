//! Attenuation of the main spectral peak through the
//! fractionally-addressed line, swept over initial pointer phases.
//!
//!     cargo run --release --example attenuation_curve

use fadline::experiments::{commensurate_periods, phase_grid, DEFAULT_BUFFER, DEFAULT_FS};
use fadline::measure::measure_attenuation;
use fadline::{DelayLine, FadLine};

fn main() {
    let fs = DEFAULT_FS;
    let b = DEFAULT_BUFFER;
    let increment = 1.5;
    let delay_s = b as f64 / (increment * fs);
    let delay_samples = (b as f64 / increment) as usize;
    let phases = phase_grid();

    println!(
        "{:>10}  {:>8}  {:>8}  {:>8}",
        "freq (Hz)", "min dB", "mean dB", "max dB"
    );
    for &period in commensurate_periods(delay_samples, 8, 512)
        .iter()
        .rev()
        .step_by(2)
    {
        let freq = fs / period as f64;
        let mut make = |phase: f64| -> Box<dyn DelayLine> {
            Box::new(FadLine::with_initial_phase(b, fs, delay_s, phase).unwrap())
        };
        let a = measure_attenuation(&mut make, freq, fs, &phases).unwrap();
        println!(
            "{freq:10.2}  {:8.4}  {:8.4}  {:8.4}",
            a.min_gain_db, a.mean_gain_db, a.max_gain_db
        );
    }
    println!("\nlow frequencies pass essentially untouched; the spread over");
    println!("initial phase stays narrow even at the top of the band.");
}
