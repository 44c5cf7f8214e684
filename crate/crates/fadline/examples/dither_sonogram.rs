//! Delay-length dithering: a pulse train through a slowly lengthening
//! two-pointer line, with and without a small fast modulation on top.
//! Without dither the high-frequency dropouts cluster where the
//! fractional offset crosses half a sample; with dither they spread
//! uniformly along the time axis. Sonogram CSVs land in the directory
//! given as the first argument (default `.`).
//!
//!     cargo run --release --example dither_sonogram -- /tmp/out

use fadline::experiments::{run, ExperimentName};
use std::path::PathBuf;

fn main() {
    let out_dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let files = run(ExperimentName::DitherSonogram, &out_dir, 7).unwrap();
    for f in &files {
        println!("wrote {}", f.display());
    }
    let manifest = std::fs::read_to_string(out_dir.join("manifest.txt")).unwrap();
    print!("\n{manifest}");
    println!("\nhigher dispersion = dark areas spread over more frames.");
}
