use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use riskprio_cli::commands::{
    cmd_compare, cmd_matrix, cmd_plan, cmd_prioritize, cmd_simulate, ConfigOverrides,
    RiskSelection,
};
use riskprio_cli::report::OutputFormat;

/// Quantitative project-risk prioritization.
///
/// Takes a project document (activity network, category ladders, risk
/// register), runs seeded Monte Carlo simulations, and ranks every risk by
/// its absolute impact on project duration and cost at a chosen percentile.
///
/// Exit codes: 0 success, 2 usage, 3 document parse error, 4 validation
/// error, 5 runtime error.
#[derive(Parser)]
#[command(name = "riskprio", version, about, verbatim_doc_comment)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    /// Aligned, human-readable table.
    Text,
    /// Delimited values with a header row.
    Csv,
    /// Structured output that parses back losslessly.
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Deterministic plan: critical-path duration, planned cost, and the
    /// planned-value curve under most-likely durations.
    Plan {
        /// Project document (JSON).
        doc: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the planned-value curve here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Simulate one scenario and export its outcome histograms.
    Simulate {
        doc: PathBuf,
        /// Active risks: `none`, `all`, or a comma-separated id list.
        #[arg(long, default_value = "none")]
        risks: String,
        #[arg(long)]
        iterations: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        /// Percentile in (0, 1) used as the Value-at-Risk level.
        #[arg(long)]
        percentile: Option<f64>,
        /// Number of histogram bins.
        #[arg(long, default_value_t = 40)]
        bins: usize,
        /// Write the histograms here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rank every register risk by its duration and cost percentile deltas.
    Prioritize {
        doc: PathBuf,
        #[arg(long)]
        iterations: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        percentile: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Qualitative probability-impact matrix scoring of the register.
    Matrix {
        doc: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Side-by-side comparison of matrix and simulation rankings.
    Compare {
        doc: PathBuf,
        #[arg(long)]
        iterations: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        percentile: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();

    let result = match &cli.command {
        Command::Plan {
            doc,
            format,
            output,
        } => cmd_plan(doc, (*format).into(), output.as_ref(), &mut out),
        Command::Simulate {
            doc,
            risks,
            iterations,
            seed,
            percentile,
            bins,
            output,
        } => cmd_simulate(
            doc,
            &RiskSelection::parse(risks),
            ConfigOverrides {
                iterations: *iterations,
                seed: *seed,
                percentile: *percentile,
            },
            *bins,
            output.as_ref(),
            &mut out,
        ),
        Command::Prioritize {
            doc,
            iterations,
            seed,
            percentile,
            format,
            output,
        } => cmd_prioritize(
            doc,
            ConfigOverrides {
                iterations: *iterations,
                seed: *seed,
                percentile: *percentile,
            },
            (*format).into(),
            output.as_ref(),
            &mut out,
        ),
        Command::Matrix {
            doc,
            format,
            output,
        } => cmd_matrix(doc, (*format).into(), output.as_ref(), &mut out),
        Command::Compare {
            doc,
            iterations,
            seed,
            percentile,
            format,
            output,
        } => cmd_compare(
            doc,
            ConfigOverrides {
                iterations: *iterations,
                seed: *seed,
                percentile: *percentile,
            },
            (*format).into(),
            output.as_ref(),
            &mut out,
        ),
    };

    out.flush().ok();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
