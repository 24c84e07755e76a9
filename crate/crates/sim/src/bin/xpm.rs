use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use xpm_core::{BlochConstants, BlochMethod};
use xpm_sim::{figure_preset, run_sweep, verify, write_csv, Figure, Suite, SweepSpec, VerifyOptions};

#[derive(Parser)]
#[command(name = "xpm", version, about = "XPM phase-noise model and parity-gate success probabilities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Overrides {
    /// Flat key = value config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Monte Carlo samples per grid point (0 = analytics only)
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Use the exact Gaussian average for f0 instead of the small-angle form
    #[arg(long)]
    exact: bool,
    /// Worker threads for Monte Carlo (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by --config
    Sweep(Overrides),
    /// Reproduce a figure (3, 4 or 5)
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(3..=5))]
        which: u8,
        /// Print the preset as a config file and exit
        #[arg(long)]
        emit_config: bool,
        #[command(flatten)]
        flags: Overrides,
    },
    /// Print the Bloch constants C and D
    Constants {
        #[arg(long, value_enum, default_value_t = Method::Quadrature)]
        method: Method,
        /// Nodes per axis (quadrature) or samples (Monte Carlo)
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run acceptance checks
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Quadrature,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Kernel,
    Analytics,
    Oracle,
    All,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn set_threads(threads: Option<usize>) -> Result<(), String> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Sweep(flags) => {
            let path = flags.config.as_ref().ok_or("sweep needs --config")?;
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let spec = SweepSpec::from_config_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            sweep(spec, &flags)
        }
        Command::Figure {
            which,
            emit_config,
            flags,
        } => {
            let spec = figure_preset(Figure::from_number(which).expect("range checked by clap"));
            if emit_config {
                print!("{}", spec.to_config_string());
                return Ok(ExitCode::SUCCESS);
            }
            if flags.config.is_some() {
                return Err("figure takes its parameters from the preset; use `sweep --config`".into());
            }
            sweep(spec, &flags)
        }
        Command::Constants {
            method,
            resolution,
            seed,
        } => {
            let (method, res) = match method {
                Method::Quadrature => (
                    BlochMethod::Quadrature2d,
                    resolution.unwrap_or(BlochConstants::DEFAULT_NODES),
                ),
                Method::Mc => (BlochMethod::MonteCarlo { seed }, resolution.unwrap_or(1_000_000)),
            };
            let t = Instant::now();
            let k = BlochConstants::compute(method, res).map_err(|e| e.to_string())?;
            eprintln!(
                "# method {:?}, resolution {}, error estimate {:.2e}, {:.3} s",
                k.method,
                k.resolution,
                k.error_estimate,
                t.elapsed().as_secs_f64()
            );
            println!("C = {}", k.c);
            println!("D = {}", k.d);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            samples,
            seed,
            threads,
        } => {
            set_threads(threads)?;
            let suite = match suite {
                SuiteArg::Kernel => Suite::Kernel,
                SuiteArg::Analytics => Suite::Analytics,
                SuiteArg::Oracle => Suite::Oracle,
                SuiteArg::All => Suite::All,
            };
            let mut opts = VerifyOptions::default();
            if let Some(s) = samples {
                opts.samples = s;
            }
            if let Some(s) = seed {
                opts.seed = s;
            }
            let report = verify(suite, &opts);
            println!("{report}");
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn sweep(mut spec: SweepSpec, flags: &Overrides) -> Result<ExitCode, String> {
    set_threads(flags.threads)?;
    if let Some(n) = flags.samples {
        spec.mc_samples = n;
    }
    if let Some(s) = flags.seed {
        spec.seed = s;
    }
    if flags.exact {
        spec.exact = true;
    }
    let t = Instant::now();
    let constants = BlochConstants::reference();
    eprintln!(
        "# Bloch constants C = {}, D = {} ({:?}, {} nodes, error estimate {:.1e}, {:.3} s)",
        constants.c,
        constants.d,
        constants.method,
        constants.resolution,
        constants.error_estimate,
        t.elapsed().as_secs_f64()
    );
    let rows = run_sweep(&spec, &constants).map_err(|e| e.to_string())?;
    match &flags.out {
        Some(p) => {
            let f = File::create(p).map_err(|e| format!("{}: {e}", p.display()))?;
            write_csv(BufWriter::new(f), &rows).map_err(|e| e.to_string())?;
        }
        None => {
            let stdout = io::stdout();
            write_csv(stdout.lock(), &rows).map_err(|e| e.to_string())?;
            io::stdout().flush().map_err(|e| e.to_string())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
