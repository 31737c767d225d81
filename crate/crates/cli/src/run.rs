//! `run`: one config in, CSV + JSON report + timings out.

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::{ExperimentConfig, Plan};
use crate::error::CliError;
use crate::ops::execute;
use crate::output::{file_names, to_json_bytes, write_atomic, RunReport, Timings, WrittenFiles};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

pub struct RunOutcome {
    pub report: RunReport,
    pub files: WrittenFiles,
}

pub fn cmd_run(path: &Path, options: &RunOptions) -> Result<RunOutcome, CliError> {
    run_config(ExperimentConfig::load(path)?, options)
}

pub fn run_config(mut config: ExperimentConfig, options: &RunOptions) -> Result<RunOutcome, CliError> {
    let started = Instant::now();
    if let Some(dir) = &options.out {
        config.output.dir = dir.clone();
    }
    if let Some(seed) = options.seed {
        config.seed = seed;
    }
    let plan = Plan::validate(config)?;
    let validated = Instant::now();
    let output = execute(&plan)?;
    let computed = Instant::now();

    let names = file_names(&plan.config.output.stem);
    let dir = &plan.config.output.dir;
    let files = WrittenFiles {
        csv: dir.join(&names.csv),
        json: dir.join(&names.json),
        timings: dir.join(&names.timings),
    };
    let report = RunReport {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config: plan.echo(),
        operation: plan.config.operation.name.clone(),
        result: output.result,
        files: names,
    };
    write_atomic(&files.csv, &output.table.to_csv()?)?;
    write_atomic(&files.json, &to_json_bytes(&report))?;
    let timings = Timings {
        validate_seconds: (validated - started).as_secs_f64(),
        compute_seconds: (computed - validated).as_secs_f64(),
        write_seconds: computed.elapsed().as_secs_f64(),
    };
    write_atomic(&files.timings, &to_json_bytes(&timings))?;
    Ok(RunOutcome { report, files })
}
