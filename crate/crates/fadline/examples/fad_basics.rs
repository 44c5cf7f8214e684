//! The fractionally-addressed line up close: the delay law
//! `T = B / (I * Fs)`, the write discipline, and the degenerate exact
//! path at increment 1.
//!
//!     cargo run --release --example fad_basics

use fadline::FadLine;

fn main() {
    let fs = 44100.0;
    let b = 44100;

    // One second of buffer: delays from half a second (I = 2) up to a
    // full second (I = 1).
    for delay_s in [1.0, 2.0 / 3.0, 0.5] {
        let line = FadLine::new(b, fs, delay_s).unwrap();
        println!(
            "T = {delay_s:.4} s  ->  I = {:.4}  (delay {} samples)",
            line.increment(),
            line.delay_samples()
        );
    }

    // At I = 1.5, three cells are written for every couple of reads.
    let mut line = FadLine::new(b, fs, 2.0 / 3.0).unwrap();
    for _ in 0..1000 {
        line.tick(0.1);
    }
    println!(
        "\nI = 1.5: {} writes over 1000 ticks (3 per couple of reads)",
        line.total_writes()
    );

    // Unit increment from phase zero degenerates to a bit-exact delay.
    let b = 1024;
    let mut exact = FadLine::new(b, fs, b as f64 / fs).unwrap();
    let input: Vec<f64> = (0..4096)
        .map(|n| (std::f64::consts::TAU * n as f64 / 64.0).sin())
        .collect();
    let mut worst = 0.0f64;
    for (n, &x) in input.iter().enumerate() {
        let y = exact.tick(x);
        if n >= b {
            worst = worst.max((y - input[n - b]).abs());
        }
    }
    println!("\nI = 1: worst deviation from a pure {b}-sample delay = {worst:e}");

    // With the pointer between cells the line interpolates instead.
    let mut between = FadLine::with_initial_phase(b, fs, b as f64 / fs, 0.5).unwrap();
    let mut worst = 0.0f64;
    for (n, &x) in input.iter().enumerate() {
        let y = between.tick(x);
        if n >= b {
            worst = worst.max((y - input[n - b]).abs());
        }
    }
    println!("initial phase 0.5: worst deviation = {worst:.3e} (interpolated)");
}
