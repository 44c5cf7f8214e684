//! Quadratic Lagrange interpolator: coefficients, frequency response,
//! and response extrema over an offset interval.
//!
//!     cargo run --release --example lagrange_response

use fadline::interp::{lagrange2_coeffs, lagrange2_response, response_extrema, FracOffset};

fn main() {
    let fs = 44100.0;

    println!("coefficients h0, h1, h2 (delay D = 1 - d):");
    for d in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let c = lagrange2_coeffs(FracOffset::new(d).unwrap());
        println!("  d = {d:+.1}:  {:+.4}  {:+.4}  {:+.4}", c.h0, c.h1, c.h2);
    }

    println!("\nresponse at f = Fs/4 as the delay sweeps 0..2 samples:");
    println!("  D      magnitude  excess delay");
    for i in 0..=16 {
        let d = 1.0 - 2.0 * i as f64 / 16.0;
        let off = FracOffset::new(d).unwrap();
        let r = lagrange2_response(off, fs / 4.0, fs).unwrap();
        println!(
            "  {:4.2}   {:.6}   {:+.6}",
            1.0 - d,
            r.magnitude,
            r.excess_delay(off)
        );
    }

    println!("\nextrema over d in [-0.5, 0.5]:");
    for f in [fs / 64.0, fs / 16.0, fs / 8.0, fs / 4.0] {
        let e = response_extrema(f, fs, -0.5, 0.5).unwrap();
        println!(
            "  f = {f:8.1} Hz: A in [{:.6}, {:.6}], excess delay in [{:+.6}, {:+.6}]",
            e.a_min, e.a_max, e.tau_min, e.tau_max
        );
    }
}
