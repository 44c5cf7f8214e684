//! The two pitch laws under a delay ramp from 0.99 s to 0.5 s over
//! 1.11 s: the two-pointer line shifts instantly by 1 + k, the
//! fractionally-addressed line glides to e^k and an impulse fed at
//! ramp start exits at (tau0 / k)(1 - e^{-k}).
//!
//!     cargo run --release --example ramp_pitch

use fadline::experiments::{fad_impulse_exit_seconds, ramp_k, ramp_pitch_experiment};

fn main() {
    let k = ramp_k();
    println!("ramp rate k = {k:.6} seconds of delay per second\n");

    let outcome = ramp_pitch_experiment(200.0).unwrap();
    println!(
        "two-pointer line:             ratio {:.5}   (1 + k  = {:.5})",
        outcome.fir_ratio,
        1.0 + k
    );
    println!(
        "fractionally-addressed line:  ratio {:.5}   (e^k    = {:.5})",
        outcome.fad_steady_ratio,
        k.exp()
    );

    let tau_i = (0.99 / k) * (1.0 - (-k).exp());
    let exit = fad_impulse_exit_seconds().unwrap();
    println!("\nimpulse fed at ramp start exits at {exit:.4} s (formula: {tau_i:.4} s)");

    println!("\npitch track of the fractionally-addressed output:");
    for p in outcome.fad_points.iter().step_by(8) {
        if let Some(hz) = p.hz {
            let bar = "#".repeat(((hz - 190.0) / 4.0) as usize);
            println!("  t = {:5.3} s  {hz:7.2} Hz  {bar}", p.t_s);
        }
    }
}
