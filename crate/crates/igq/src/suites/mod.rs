//! Verification suites, one per subcommand.

use std::thread;

use crate::config::Settings;
use crate::report::CheckReport;

pub mod born;
pub mod classify;
pub mod coin;
pub mod compose;
pub mod dynamics;
pub mod haar;
pub mod measure_solver;
pub mod metric;
pub mod simulate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Metric,
    MeasureSolver,
    Classify,
    Born,
    Simulate,
    Compose,
    Dynamics,
    Haar,
    Coin,
    All,
}

impl Suite {
    /// Every concrete suite, in report order.
    pub const EACH: [Suite; 9] = [
        Suite::Coin,
        Suite::Metric,
        Suite::MeasureSolver,
        Suite::Classify,
        Suite::Born,
        Suite::Simulate,
        Suite::Compose,
        Suite::Dynamics,
        Suite::Haar,
    ];

    pub fn run(self, s: &Settings) -> Vec<CheckReport> {
        match self {
            Suite::Metric => metric::run(s),
            Suite::MeasureSolver => measure_solver::run(s),
            Suite::Classify => classify::run(s),
            Suite::Born => born::run(s),
            Suite::Simulate => simulate::run(s),
            Suite::Compose => compose::run(s),
            Suite::Dynamics => dynamics::run(s),
            Suite::Haar => haar::run(s),
            Suite::Coin => coin::run(s),
            Suite::All => run_all(s),
        }
    }
}

/// Runs every suite on its own thread. Seeds are per check, so the reports
/// do not depend on scheduling; they are returned in [`Suite::EACH`] order.
fn run_all(s: &Settings) -> Vec<CheckReport> {
    thread::scope(|scope| {
        let handles: Vec<_> = Suite::EACH.iter().map(|&suite| scope.spawn(move || suite.run(s))).collect();
        handles.into_iter().flat_map(|h| h.join().expect("suite thread panicked")).collect()
    })
}
