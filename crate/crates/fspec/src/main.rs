use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use fspec::config::{ExperimentConfig, Overrides};
use fspec::{experiments, write_outputs};
use fspec_core::spectral::fourier_oracle;

#[derive(Parser)]
#[command(name = "fspec", version, about = "Finsler-Laplacian spectra on flat tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML configuration file.
    Run {
        config: PathBuf,
        /// Output directory (default: the config's `output.dir`, else `out`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write SVG plots.
        #[arg(long)]
        plots: bool,
        /// Nodes per side of the grid.
        #[arg(long)]
        grid: Option<usize>,
        /// Initial fiber quadrature nodes.
        #[arg(long)]
        fiber_nodes: Option<usize>,
        /// Number of nonzero eigenvalues.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Print the flat-torus spectrum 4π²(A m² + B n²), lowest k+1 values.
    Oracle {
        #[arg(long = "A", allow_negative_numbers = true)]
        a: f64,
        #[arg(long = "B", allow_negative_numbers = true)]
        b: f64,
        #[arg(long)]
        k: usize,
    },
}

fn run() -> Result<bool> {
    match Cli::parse().command {
        Command::Run { config, out, plots, grid, fiber_nodes, k } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            cfg.apply(&Overrides { grid, fiber_nodes, k, out, plots })?;
            let dir = cfg.output.dir.clone().unwrap_or_else(|| PathBuf::from("out"));
            let result = experiments::run(&cfg)?;
            write_outputs(&result, &dir)?;
            result.report.summary(std::io::stdout().lock())?;
            println!("wrote {}", dir.display());
            Ok(result.report.all_passed())
        }
        Command::Oracle { a, b, k } => {
            let values = fourier_oracle(a, b, k)?;
            let mut out = std::io::stdout().lock();
            for (i, v) in values.iter().enumerate() {
                writeln!(out, "{i} {v:.17e}")?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
