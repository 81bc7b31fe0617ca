//! Reduced-size runs of every oracle suite with fixed seeds.

use modspace::Result;
use serde::Serialize;

use crate::suites::{self, DecompositionWorst, MetricStats, Suite};

#[derive(Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub decomposition: DecompositionWorst,
    pub metric: MetricStats,
    pub passed: bool,
}

pub fn run(seed: u64) -> Result<SelftestReport> {
    let (dec, worst) = suites::decomposition(seed ^ 5, 25)?;
    let (met, stats) = suites::metric(seed ^ 6, 60)?;
    let suites = vec![
        suites::transform_validity(seed ^ 1, 150, 512)?,
        suites::characterization(seed ^ 2, 40)?,
        suites::support_condition(seed ^ 3, 24, 1)?,
        suites::frame_bounds(seed ^ 4, 40)?,
        dec,
        met,
        suites::limits(seed ^ 7, 10)?,
        suites::fiberization(seed ^ 8, 40)?,
    ];
    let passed = suites.iter().all(|s| s.passed);
    Ok(SelftestReport {
        seed,
        suites,
        decomposition: worst,
        metric: stats,
        passed,
    })
}
