//! Thin command-line front end over the library: WAV delay effects,
//! experiment runners and the throughput benchmark.

use clap::{Args, Parser, Subcommand, ValueEnum};
use fadline::effects::{self, EffectConfig, Modulation};
use fadline::experiments::{self, ExperimentName};
use fadline::{bench, wav};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fadline",
    version,
    about = "Delay lines with one pointer or two"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stream a 16-bit PCM mono WAV through a modulated delay line.
    Delay(DelayArgs),
    /// Regenerate an experiment dataset as CSV files.
    Experiment(ExperimentArgs),
    /// Time the line kernels over a sweep of buffer sizes.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum LineArg {
    Fir,
    FirErase,
    Fad,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModArg {
    None,
    Ramp,
    Sine,
    Walk,
}

#[derive(Args)]
struct DelayArgs {
    /// Input WAV (16-bit PCM mono).
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "fad")]
    line: LineArg,
    /// Base delay in seconds.
    #[arg(long, default_value_t = 0.25)]
    delay_s: f64,
    /// Buffer length in samples; defaults to a size that centers the
    /// base delay in the line's legal range.
    #[arg(long)]
    buffer: Option<usize>,
    /// Expected sample rate; rejected if the file disagrees.
    #[arg(long)]
    fs: Option<f64>,
    #[arg(long = "mod", value_enum, default_value = "none")]
    modulation: ModArg,
    /// Ramp start delay in seconds (mod=ramp).
    #[arg(long, default_value_t = 0.99)]
    tau0: f64,
    /// Ramp rate in seconds of delay per second (mod=ramp).
    #[arg(long, default_value_t = 0.44144144)]
    k: f64,
    /// Ramp duration in seconds (mod=ramp).
    #[arg(long, default_value_t = 1.11)]
    dur: f64,
    /// Modulation depth in seconds (mod=sine|walk).
    #[arg(long, default_value_t = 0.002)]
    depth: f64,
    /// Modulation rate in Hz (mod=sine).
    #[arg(long, default_value_t = 0.5)]
    rate: f64,
    /// Random-walk seed; equal seeds give byte-identical output.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Convert pointer phases to cell indices by bit manipulation.
    #[arg(long)]
    fast_floor: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    /// One of: snr, attenuation, sidebands, dither_sonogram,
    /// ramp_pitch, waveguide.
    name: String,
    /// Output directory for the CSV files and manifest.
    #[arg(long, default_value = "experiment-out")]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated ascending buffer sizes; defaults to the
    /// power-of-two sweep from 2^10 to 2^22.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Ticks per repetition.
    #[arg(long, default_value_t = bench::DEFAULT_TICKS)]
    ticks: u64,
    #[arg(long, default_value = "bench.csv")]
    out: PathBuf,
    #[arg(long)]
    fast_floor: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> fadline::Result<()> {
    match cli.command {
        Command::Delay(a) => {
            let probe = wav::read_wav_mono16(&a.input)?;
            let fs = probe.fs as f64;
            if let Some(want) = a.fs {
                if (want - fs).abs() > 1e-9 {
                    return Err(fadline::Error::Usage(format!(
                        "input file is {fs} Hz, not the requested {want} Hz"
                    )));
                }
            }
            let kind = match a.line {
                LineArg::Fir => effects::LineKind::Fir,
                LineArg::FirErase => effects::LineKind::FirErase,
                LineArg::Fad => effects::LineKind::Fad,
            };
            let modulation = match a.modulation {
                ModArg::None => Modulation::None,
                ModArg::Ramp => Modulation::Ramp {
                    tau0_s: a.tau0,
                    k: a.k,
                    duration_s: a.dur,
                },
                ModArg::Sine => Modulation::Sine {
                    depth_s: a.depth,
                    rate_hz: a.rate,
                },
                ModArg::Walk => Modulation::RandomWalk { depth_s: a.depth },
            };
            let base = match modulation {
                Modulation::Ramp { tau0_s, .. } => tau0_s,
                _ => a.delay_s,
            };
            let buffer = a.buffer.unwrap_or_else(|| match kind {
                // 1.5 cells per delay sample puts the increment mid-range.
                effects::LineKind::Fad => (base * fs * 1.5).round() as usize,
                _ => (base * fs * 2.0).round() as usize + 16,
            });
            let cfg = EffectConfig {
                kind,
                base_delay_s: base,
                modulation,
                fs,
                buffer,
                seed: a.seed,
                fast_floor: a.fast_floor,
            };
            effects::run_wav(&cfg, &a.input, &a.out)?;
            println!("wrote {}", a.out.display());
            Ok(())
        }
        Command::Experiment(a) => {
            let name: ExperimentName = a.name.parse()?;
            let files = experiments::run(name, &a.out, a.seed)?;
            for f in files {
                println!("wrote {}", f.display());
            }
            Ok(())
        }
        Command::Bench(a) => {
            let sizes = if a.sizes.is_empty() {
                bench::default_sizes()
            } else {
                a.sizes.clone()
            };
            let results = bench::run_sweep(&sizes, a.ticks, a.fast_floor)?;
            println!("{}", bench::BENCH_CSV_HEADER);
            for r in &results {
                println!(
                    "{},{:.3},{:.3},{:.3},{:.2}",
                    r.buffer_size, r.fad_ns, r.fir_ns, r.fir_no_inc_ns, r.caching_cost_pct
                );
            }
            bench::write_csv(&results, &a.out)?;
            println!("wrote {}", a.out.display());
            Ok(())
        }
    }
}
