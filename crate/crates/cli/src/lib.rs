//! Batch runner for curve counting experiments: config parsing, pipelines and
//! atomic artifact writing. The `curvecount` binary is a thin clap front end.

pub mod artifacts;
pub mod config;
pub mod pipeline;

use std::path::{Path, PathBuf};

use serde_json::json;

use artifacts::{git_blob_hash, write_atomic};
use config::{ConfigError, ExperimentConfig, Pipeline};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PIPELINE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Core(#[from] curvecount::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0} validation check(s) failed")]
    ChecksFailed(usize),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) | RunError::Config(_) => EXIT_USAGE,
            RunError::Core(curvecount::Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            RunError::Core(_) | RunError::Io(_) | RunError::ChecksFailed(_) => EXIT_PIPELINE,
        }
    }

    fn status(&self) -> &'static str {
        match self.exit_code() {
            EXIT_BUDGET => "budget-exceeded",
            _ => "error",
        }
    }
}

/// Command-line overrides of config keys.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// Paths written by a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifacts {
    pub csv: Option<PathBuf>,
    pub summary: PathBuf,
}

/// Runs one experiment. Config problems are returned before anything is
/// written; pipeline failures still write a summary recording the error.
pub fn execute(command: &str, pipeline: Pipeline, config_path: &Path, ov: &Overrides) -> Result<Artifacts, RunError> {
    let bytes = std::fs::read(config_path)
        .map_err(|e| RunError::Usage(format!("cannot read config {}: {e}", config_path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| RunError::Usage(format!("config {} is not UTF-8", config_path.display())))?;
    let cfg = ExperimentConfig::parse(&text)?;
    let out = ov.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let threads = ov.threads.or(cfg.threads);
    if threads == Some(0) {
        return Err(RunError::Usage("--threads must be positive".into()));
    }

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| RunError::Usage(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| pipeline::run(pipeline, &cfg));
    if let Err(e @ RunError::Config(_)) = outcome {
        return Err(e);
    }

    std::fs::create_dir_all(&out)?;
    let summary_path = out.join(format!("{command}.json"));
    let mut summary = json!({
        "command": command,
        "pipeline": pipeline.name(),
        "model": cfg.model,
        "config": cfg.raw,
        "input_hash": git_blob_hash(&bytes),
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp": chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
    });
    let result = match outcome {
        Ok(o) => {
            let mut csv_path = None;
            if let Some(csv) = &o.csv {
                let p = out.join(format!("{command}.csv"));
                write_atomic(&p, csv)?;
                csv_path = Some(p);
            }
            summary["results"] = o.results;
            if o.failed_checks > 0 {
                summary["status"] = json!("checks-failed");
                Err(RunError::ChecksFailed(o.failed_checks))
            } else {
                summary["status"] = json!("ok");
                Ok(Artifacts { csv: csv_path, summary: summary_path.clone() })
            }
        }
        Err(e) => {
            summary["status"] = json!(e.status());
            summary["error"] = json!(e.to_string());
            if let RunError::Core(curvecount::Error::BudgetExceeded { partial_l, .. }) = &e {
                summary["partial_l"] = json!(partial_l);
            }
            Err(e)
        }
    };
    let mut text = serde_json::to_string_pretty(&summary).expect("json values serialize");
    text.push('\n');
    write_atomic(&summary_path, text.as_bytes())?;
    result
}
