use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;

use manifold_uncertainty::report::InequalityReport;
use manifold_uncertainty::{Error, Result};

use crate::options::{BatchCommand, RunOptions};
use crate::run::{self, Parsed};

/// A sweep manifest: one `[[run]]` table per check.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchFile {
    #[serde(default)]
    pub run: Vec<RunOptions>,
}

pub fn load(path: &Path) -> Result<BatchFile> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{}: {}", path.display(), e.message())))
}

/// Runs every entry, in parallel, and returns the reports in input order.
pub fn run(file: &BatchFile) -> Result<Vec<InequalityReport>> {
    // fail on a bad descriptor before any entry starts computing
    for (i, entry) in file.run.iter().enumerate() {
        if entry.command.is_none() {
            return Err(Error::InvalidArgument(format!("run {i}: missing `command`")));
        }
        Parsed::new(entry).map_err(|e| Error::InvalidArgument(format!("run {i}: {e}")))?;
    }
    let results: Vec<Result<Vec<InequalityReport>>> = file
        .run
        .par_iter()
        .map(|entry| match entry.command {
            Some(BatchCommand::Check) => run::check(entry),
            Some(BatchCommand::DonohoStark) => run::donoho_stark(entry),
            None => unreachable!("checked above"),
        })
        .collect();
    let mut reports = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        reports.extend(r.map_err(|e| Error::InvalidArgument(format!("run {i}: {e}")))?);
    }
    Ok(reports)
}
