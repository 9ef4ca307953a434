//! Batch front door: norm computations, transform pipelines and the named
//! verification suites, with machine-readable reports.
//!
//! Exit codes: 0 all assertions passed, 1 assertion failures, 2 parse or
//! validation errors, 3 solver non-convergence.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use herzschur::error::Error;

mod jobs;
mod report;
mod suites;

use report::Report;

#[derive(Parser)]
#[command(
    name = "herzschur",
    version,
    about = "Completely bounded multiplier norms on finite groups, windows and traced algebras"
)]
struct Cli {
    /// JSON config file; values given here override the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// solver tolerance, in (0, 1e-2]
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// seed for every randomized instance
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Completely bounded Schur norm of a matrix file
    SchurNorm {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Herz-Schur norm of a multiplier spec
    B2Norm {
        #[arg(long)]
        multiplier: PathBuf,
    },
    /// Fourier-algebra norm of a multiplier spec
    FourierNorm {
        #[arg(long)]
        multiplier: PathBuf,
    },
    /// Predual norm of a multiplier spec, with the maximizer certificate
    QNorm {
        #[arg(long)]
        multiplier: PathBuf,
    },
    /// Minimal section norm of a window cutoff
    Cutoff {
        /// window expression, e.g. "free(2) radius 2"
        #[arg(long)]
        window: String,
        #[arg(long)]
        inner: usize,
        #[arg(long)]
        outer: usize,
    },
    /// Run a multiplier through a list of named transform steps
    TransformPipeline {
        /// JSON pipeline description
        #[arg(long)]
        pipeline: PathBuf,
    },
    /// Run one named verification suite (or "all")
    VerifySuite {
        #[arg(long, default_value = "all")]
        suite: String,
        /// randomized instances per law
        #[arg(long)]
        instances: Option<usize>,
    },
    /// Group-algebra and trace checks
    VnCheck {
        #[arg(long)]
        group_expr: Option<String>,
        #[arg(long)]
        algebra: Option<PathBuf>,
    },
    /// Print the catalog of verification suites and their laws
    ListSuites,
}

/// Config file schema; any present field overrides the matching flag.
#[derive(Deserialize, Default)]
struct FileConfig {
    tol: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<String>,
    suite: Option<String>,
    instances: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SolverDidNotConverge { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let file_config: FileConfig = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("config: {e}")))?
        }
        None => FileConfig::default(),
    };

    // the config file overrides flags
    let tol = file_config
        .tol
        .or(cli.tol)
        .unwrap_or(herzschur::DEFAULT_TOL);
    if !(tol > 0.0 && tol <= 1e-2) {
        return Err(Error::Parse(format!(
            "tolerance must lie in (0, 1e-2], got {tol}"
        )));
    }
    let seed = file_config.seed.or(cli.seed).unwrap_or(42);
    let out = file_config.out.clone().or(cli.out.clone());
    let format = match file_config.format.as_deref() {
        Some("json") => Some(Format::Json),
        Some("csv") => Some(Format::Csv),
        Some(other) => {
            return Err(Error::Parse(format!(
                "unknown format '{other}' in config (expected json or csv)"
            )))
        }
        None => cli.format,
    };

    let report = match &cli.command {
        Command::SchurNorm { matrix } => jobs::schur_norm_job(matrix, tol, seed)?,
        Command::B2Norm { multiplier } => jobs::b2_norm_job(multiplier, tol, seed)?,
        Command::FourierNorm { multiplier } => jobs::fourier_norm_job(multiplier, tol, seed)?,
        Command::QNorm { multiplier } => jobs::q_norm_job(multiplier, tol, seed)?,
        Command::Cutoff {
            window,
            inner,
            outer,
        } => jobs::cutoff_job(window, *inner, *outer, tol, seed)?,
        Command::TransformPipeline { pipeline } => {
            jobs::transform_pipeline_job(pipeline, tol, seed)?
        }
        Command::VerifySuite { suite, instances } => {
            let suite = file_config.suite.as_deref().unwrap_or(suite);
            let instances = file_config.instances.or(*instances).unwrap_or(4);
            jobs::verify_suite_job(suite, seed, tol, instances)?
        }
        Command::VnCheck {
            group_expr,
            algebra,
        } => jobs::vn_check_job(group_expr.as_deref(), algebra.as_ref(), tol, seed)?,
        Command::ListSuites => jobs::list_suites_job(seed, tol),
    };

    emit(&report, out.as_deref(), format)?;
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn emit(
    report: &Report,
    out: Option<&std::path::Path>,
    format: Option<Format>,
) -> Result<(), Error> {
    let rendered = match format.unwrap_or(Format::Json) {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match out {
        Some(path) => std::fs::write(path, rendered.as_bytes())?,
        None => println!("{rendered}"),
    }
    Ok(())
}
