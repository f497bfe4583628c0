//! Verification harness and file formats for [`igq_core`].
//!
//! Each suite in [`suites`] runs a family of seeded checks and yields one
//! [`report::CheckReport`] per check. [`verify`] writes them as JSON lines
//! followed by a summary line.

use std::io::Write;
use std::time::Instant;

pub mod config;
pub mod formats;
pub mod report;
pub mod suites;

use config::Settings;
use report::{write_stream, CheckReport, Summary};
use suites::Suite;

/// Runs `suite` and streams its report to `out`.
pub fn verify<W: Write>(suite: Suite, settings: &Settings, out: &mut W) -> std::io::Result<(Vec<CheckReport>, Summary)> {
    let start = Instant::now();
    let reports = suite.run(settings);
    let summary = Summary::of(&reports, settings.seed, start.elapsed().as_secs_f64());
    write_stream(out, &reports, &summary)?;
    Ok((reports, summary))
}
