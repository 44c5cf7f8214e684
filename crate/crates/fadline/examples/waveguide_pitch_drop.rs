//! An ideal string dropping its pitch by a factor 1.25, built three
//! ways. Lengthening a plain two-pointer loop re-exposes the packet it
//! just played (a ghost); erase-after-read changes the period but not
//! the packet; lowering the increment of a fractionally-addressed loop
//! stretches period and packet together, like slackening the string.
//!
//!     cargo run --release --example waveguide_pitch_drop

use fadline::experiments::waveguide_timbre_experiment;
use fadline::waveguide::StringKind;

fn main() {
    println!(
        "{:<12} {:>8} {:>8} {:>7} {:>7} {:>7}",
        "kind", "period0", "period1", "width0", "width1", "ghosts"
    );
    for kind in [
        StringKind::Fir,
        StringKind::FirErase,
        StringKind::Fad { increment: 1.5 },
    ] {
        let t = waveguide_timbre_experiment(kind).unwrap();
        let name = match kind {
            StringKind::Fir => "plain",
            StringKind::FirErase => "erase",
            StringKind::Fad { .. } => "fractional",
        };
        println!(
            "{name:<12} {:>8.0} {:>8.0} {:>7.0} {:>7.0} {:>7.1}",
            t.period_before, t.period_after, t.width_before, t.width_after, t.events_per_period
        );
    }
    println!("\nperiod and width scale together only for the fractional line:");
    println!("its spectrum contracts wholesale, formants included.");
}
