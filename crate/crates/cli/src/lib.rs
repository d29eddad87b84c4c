//! Command-line front end for the `alsm` crate: CSV ingestion, descriptive
//! statistics, single-model fits, comparison tables and simulation.

mod describe;
mod error;
mod ingest;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use alsm::alsm::alsm_sample;
use alsm::fit::{fit, FitConfig, Init};
use alsm::modelsel::{compare, scores_to_csv, scores_to_json, Candidate};
use alsm::{seeded_rng, ALSMParams, ModelTag};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use describe::{describe, DescriptiveStats};
pub use error::{CliError, Result};
pub use ingest::{ingest_csv, log_returns, InputFormat, ReturnSeries, SeriesKind};

pub const DEFAULT_SEED: u64 = 20240917;

const CAVEAT: &str = "note: AIC = 2k - 2 loglik and BIC = k ln n - 2 loglik (smaller is better); \
LR p-values use the plain chi-square reference although theta sits on the boundary under the AL null";

#[derive(Debug, Parser)]
#[command(
    name = "alsm",
    version,
    about = "Fit asymmetric Laplace scale mixtures to return series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// Column to read; defaults to the --input-format convention.
    #[arg(long)]
    pub column: Option<String>,
    /// Rows with a blank cell in this column are dropped.
    #[arg(long)]
    pub date_column: Option<String>,
    #[arg(long, value_enum, default_value_t = SeriesKind::Prices)]
    pub kind: SeriesKind,
    #[arg(long, value_enum)]
    pub input_format: Option<InputFormat>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, value_enum, default_value_t = InitKind::Default)]
    pub init: InitKind,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
    /// Relative log-likelihood change that stops EM.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitKind {
    Moments,
    Default,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summary statistics and the Jarque-Bera test.
    Describe {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit one model and write the result as JSON.
    Fit {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        model: ModelTag,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit several models and rank them by AIC, BIC and LR tests against the AL.
    Compare {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated model names; all models when omitted.
        #[arg(long, value_delimiter = ',')]
        models: Option<Vec<Candidate>>,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a sample and write it as a one-column CSV.
    Simulate {
        #[arg(long)]
        model: ModelTag,
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        kappa: f64,
        /// θ, or θ₁,θ₂ for tp-al.
        #[arg(long, value_delimiter = ',')]
        theta: Vec<f64>,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl FitArgs {
    fn config(&self) -> Result<FitConfig> {
        let cfg = FitConfig {
            max_iter: self.max_iter,
            loglik_rel_tol: self.tol,
            init: match self.init {
                InitKind::Moments => Init::Moments,
                InitKind::Default => Init::Default,
            },
            ..FitConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl InputArgs {
    pub fn load(&self) -> Result<ReturnSeries> {
        let column = match (&self.column, self.input_format) {
            (Some(c), _) => c.as_str(),
            (None, Some(f)) => f.value_column(),
            (None, None) => {
                return Err(CliError::Usage(
                    "--column is required without --input-format".into(),
                ))
            }
        };
        let date = self
            .date_column
            .as_deref()
            .or(self.input_format.map(|f| f.date_column()));
        ingest_csv(&self.input, column, self.kind, date)
    }
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, text: &str) -> Result<()> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    match out {
        Some(path) => fs::write(path, text).map_err(io_err(path)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

fn load_reported(input: &InputArgs, stderr: &mut dyn Write) -> Result<ReturnSeries> {
    let s = input.load()?;
    if s.dropped_rows > 0 {
        let _ = writeln!(
            stderr,
            "dropped {} rows with missing values",
            s.dropped_rows
        );
    }
    Ok(s)
}

/// Run one command. Returns the exit code for runs that produced output
/// (0, or 3 when a fit did not converge or a table row failed).
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<u8> {
    match &cli.command {
        Command::Describe { input, format, out } => {
            let s = load_reported(input, stderr)?;
            let d =
                describe(&s.values).ok_or_else(|| CliError::Usage("the series is empty".into()))?;
            let text = match format {
                ReportFormat::Text => d.to_text(),
                ReportFormat::Json => {
                    serde_json::to_string_pretty(&d).expect("stats serialize") + "\n"
                }
            };
            emit(out.as_deref(), stdout, &text)?;
            Ok(0)
        }
        Command::Fit {
            input,
            model,
            fit: args,
            out,
        } => {
            let cfg = args.config()?;
            let s = load_reported(input, stderr)?;
            let r = fit(*model, &s.values, &cfg)?;
            emit(out.as_deref(), stdout, &(r.to_json() + "\n"))?;
            if r.converged {
                Ok(0)
            } else {
                let _ = writeln!(
                    stderr,
                    "warning: {model} did not converge in {} iterations",
                    r.n_iter
                );
                Ok(3)
            }
        }
        Command::Compare {
            input,
            models,
            fit: args,
            format,
            out,
        } => {
            let cfg = args.config()?;
            let s = load_reported(input, stderr)?;
            let models = models.clone().unwrap_or_else(Candidate::all);
            let rows = compare(&s.values, &models, &cfg)?;
            let text = match format {
                TableFormat::Csv => scores_to_csv(&rows),
                TableFormat::Json => scores_to_json(&rows) + "\n",
            };
            emit(out.as_deref(), stdout, &text)?;
            let _ = writeln!(stderr, "{CAVEAT}");
            let mut code = 0;
            for r in &rows {
                if let Some(note) = &r.note {
                    let _ = writeln!(stderr, "{}: {note}", r.model);
                }
                if r.loglik.is_none() || !r.converged {
                    code = 3;
                }
            }
            Ok(code)
        }
        Command::Simulate {
            model,
            mu,
            beta,
            kappa,
            theta,
            n,
            seed,
            out,
        } => {
            let p = ALSMParams::from_tag(*model, *mu, *beta, *kappa, theta)?;
            let _ = writeln!(stderr, "seed: {seed}");
            let x = alsm_sample(&p, *n, &mut seeded_rng(*seed));
            let mut text = String::with_capacity(24 * (n + 1));
            text.push_str("x\n");
            for v in x {
                text.push_str(&v.to_string());
                text.push('\n');
            }
            emit(out.as_deref(), stdout, &text)?;
            Ok(0)
        }
    }
}
