use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cavity_cascade::cli::{self, Command, ExperimentConfig, RunOptions};
use cavity_cascade::Error;

#[derive(Parser)]
#[command(name = "cavity-cascade", version, about = "Scattering and coupled-oscillator models of cascaded cavities")]
struct Args {
    #[command(subcommand)]
    command: Cmd,

    /// TOML configuration; defaults reproduce the zeta = 5, L_F = 5 L_C setup
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides output.dir)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Also write SVG plots
    #[arg(long, global = true)]
    svg: bool,

    /// Number of frequency grid points
    #[arg(long, global = true)]
    grid_points: Option<usize>,

    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Transmission spectra of both models
    Spectrum,
    /// Side-peak distance differences over a zeta grid
    Delta,
    /// Cavity intensities of both models
    Profile,
    /// Fiber intensity under two-sided drive versus frequency and phase
    Darkmode,
    /// Matched coupled-oscillator parameters
    Match,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let command = match args.command {
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Delta => Command::Delta,
        Cmd::Profile => Command::Profile,
        Cmd::Darkmode => Command::Darkmode,
        Cmd::Match => Command::Match,
    };
    let result = args
        .config
        .as_deref()
        .map(ExperimentConfig::from_path)
        .unwrap_or_else(|| Ok(ExperimentConfig::default()))
        .and_then(|config| {
            let options = RunOptions {
                out: args.out.clone(),
                svg: args.svg,
                grid_points: args.grid_points,
            };
            cli::run(command, &config, &options)
        });
    match result {
        Ok(report) => {
            if !args.quiet {
                for line in &report.summary {
                    println!("{line}");
                }
                for file in &report.files {
                    println!("wrote {}", file.display());
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::FitFailure { best, .. } = &e {
                eprintln!("best iterate: {best:?}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
