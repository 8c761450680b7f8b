//! Batch front end for `galhull-core`: JSON job files, one subcommand per
//! pipeline stage, and golden-file reproduction of the EAQECC table.

pub mod commands;
pub mod config;
pub mod error;
pub mod reference;
pub mod report;
pub mod schema;
pub mod table1;

use std::path::PathBuf;

use galhull_core::quantum::ReferenceTable;

use crate::config::Job;
use crate::error::AppError;
use crate::report::Render;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Decompose,
    Factor,
    Hull,
    Classify,
    Spectrum,
    Gray,
    Eaqecc,
    ReproduceTable1,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub config: Option<PathBuf>,
    pub json: bool,
    pub budget: Option<u64>,
    pub reference_table: Option<PathBuf>,
    pub golden: Option<PathBuf>,
}

/// Rendered output, plus the failure to report after printing it.
pub struct Outcome {
    pub stdout: String,
    pub failure: Option<AppError>,
}

fn load_job(opts: &Options) -> Result<Job, AppError> {
    let path = opts
        .config
        .as_ref()
        .ok_or_else(|| AppError::Config(vec!["--config PATH is required for this command".into()]))?;
    let mut job = Job::load(path)?;
    if let Some(b) = opts.budget {
        job.budgets.cap(b);
    }
    Ok(job)
}

fn reference_for(opts: &Options, job: Option<&Job>) -> Result<ReferenceTable, AppError> {
    match opts.reference_table.as_ref().or(job.and_then(|j| j.reference_table.as_ref())) {
        Some(p) => reference::load(p),
        None => Ok(reference::bundled()),
    }
}

pub fn run(cmd: Command, opts: &Options) -> Result<Outcome, AppError> {
    let ok = |stdout: String| Ok(Outcome { stdout, failure: None });
    if cmd == Command::ReproduceTable1 {
        let golden = match &opts.golden {
            Some(p) => table1::parse_golden(
                &std::fs::read_to_string(p).map_err(|e| AppError::Io(format!("{}: {e}", p.display())))?,
            )?,
            None => table1::golden(),
        };
        let reference = reference_for(opts, None)?;
        let report = table1::reproduce(&golden, &reference, opts.budget)?;
        let failure = (!report.mismatches.is_empty()).then(|| AppError::GoldenMismatch(report.mismatches.clone()));
        return Ok(Outcome { stdout: report.render(opts.json), failure });
    }
    let job = load_job(opts)?;
    match cmd {
        Command::Decompose => ok(commands::decompose(&job)?.render(opts.json)),
        Command::Factor => ok(commands::factor_cmd(&job)?.render(opts.json)),
        Command::Hull => ok(commands::hull(&job)?.render(opts.json)),
        Command::Classify => ok(commands::classify(&job)?.render(opts.json)),
        Command::Spectrum => ok(commands::spectrum(&job)?.render(opts.json)),
        Command::Gray => ok(commands::gray(&job)?.render(opts.json)),
        Command::Eaqecc => {
            let reference = reference_for(opts, Some(&job))?;
            ok(commands::eaqecc(&job, &reference)?.render(opts.json))
        }
        Command::ReproduceTable1 => unreachable!(),
    }
}
