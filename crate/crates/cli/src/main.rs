use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tilecohom::frequency::DEFAULT_SEED;
use tilecohom_cli::commands::{self, AnalyzeOptions, CliError, CliResult, Common};
use tilecohom_cli::report::ConvergenceCommandReport;

#[derive(Parser)]
#[command(
    name = "tilecohom",
    version,
    about = "Exact cohomology, regularity and frequencies of substitution tilings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Shared {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for window sampling.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Collar radius of the cohomology computation (raised to the longest patch if smaller).
    #[arg(long)]
    collar_radius: Option<usize>,
    /// Random windows per certificate.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

impl Shared {
    fn common(&self) -> Common {
        Common {
            seed: self.seed,
            collar_radius: self.collar_radius,
            samples: self.samples,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline on a rule file: Perron data, cohomology, controls, frequencies.
    Analyze {
        /// Rule file, one `letter -> image` per line.
        rules: PathBuf,
        #[command(flatten)]
        shared: Shared,
        /// Longest patch to tabulate.
        #[arg(long, default_value_t = 4)]
        max_patch_len: usize,
        /// Return length as an integer polynomial in the stretching factor, e.g. "L+1".
        #[arg(long)]
        return_length: Option<String>,
        /// Dimension used for the convergence exponent.
        #[arg(long, default_value_t = 1)]
        dim: u32,
        /// Window sizes for a convergence block on the first control patch.
        #[arg(long, num_args = 1..)]
        scales: Option<Vec<f64>>,
    },
    /// Counting-law coefficients of a patch and a sampled boundary certificate.
    Regularity {
        /// Rule file, one `letter -> image` per line.
        rules: PathBuf,
        #[command(flatten)]
        shared: Shared,
        #[arg(long)]
        patch: String,
        /// Control patches; searched for when omitted.
        #[arg(long, num_args = 1..)]
        controls: Vec<String>,
    },
    /// Perron data for a raw nonnegative integer matrix given as JSON.
    Matrix {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dim: Option<u32>,
    },
    /// Deviation of empirical patch frequencies over window scales.
    Convergence {
        /// Rule file, one `letter -> image` per line.
        rules: PathBuf,
        #[command(flatten)]
        shared: Shared,
        #[arg(long)]
        patch: String,
        /// Window sizes in natural length; at least eight.
        #[arg(long, num_args = 1..)]
        scales: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1)]
        dim: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError {
            code: 4,
            message: e.to_string(),
        })
}

fn csv(r: &ConvergenceCommandReport) -> String {
    let c = &r.convergence;
    let mut out = String::from("size,sup_deviation,samples\n");
    for row in &c.rows {
        out.push_str(&format!(
            "{},{},{}\n",
            row.size, row.sup_deviation, row.samples
        ));
    }
    let fit = c
        .fitted_exponent
        .map_or("none".to_string(), |x| x.to_string());
    out.push_str(&format!(
        "# patch={} gamma={} fitted_exponent={fit} envelope_constant={} seed={}\n",
        c.patch, c.theoretical_gamma, c.envelope_constant, c.seed
    ));
    out
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError {
                code: 4,
                message: e.to_string(),
            }),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analyze {
            rules,
            shared,
            max_patch_len,
            return_length,
            dim,
            scales,
        } => {
            let opts = AnalyzeOptions {
                common: shared.common(),
                max_patch_len,
                return_length,
                dim,
                scales,
            };
            emit(
                &json(&commands::analyze(&rules, &opts)?)?,
                shared.out.as_ref(),
            )
        }
        Command::Regularity {
            rules,
            shared,
            patch,
            controls,
        } => {
            let r = commands::regularity(&rules, &patch, &controls, &shared.common())?;
            emit(&json(&r)?, shared.out.as_ref())
        }
        Command::Matrix { input, out, dim } => {
            emit(&json(&commands::matrix(&input, dim)?)?, out.as_ref())
        }
        Command::Convergence {
            rules,
            shared,
            patch,
            scales,
            dim,
            format,
        } => {
            let r = commands::convergence(&rules, &patch, scales, dim, &shared.common())?;
            let text = match format {
                Format::Json => json(&r)?,
                Format::Csv => csv(&r),
            };
            emit(&text, shared.out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
