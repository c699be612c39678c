//! End-to-end analysis of one run: active periods, bottleneck series,
//! frequency and severity.

use crate::active_period::{
    classify_shifting, detect_bottlenecks, extract_active_periods, views_at, ActivePeriod,
    ApmMode, BottleneckSeries,
};
use crate::error::{Error, Result};
use crate::metrics::{relative_bottleneck_frequency, FrequencyReport, SeverityReport};
use crate::sim::{SimulationRun, StateTimeline};

#[derive(Debug, Clone)]
pub struct Diagnosis {
    pub periods: Vec<Vec<ActivePeriod>>,
    pub series: BottleneckSeries,
    pub frequency: FrequencyReport,
    pub severity: SeverityReport,
}

/// Analyzes timelines at the given non-decreasing sample instants.
///
/// Timelines must be ordered by station id starting at 0. Periods that
/// began before the first instant keep their true start.
pub fn diagnose(timelines: &[StateTimeline], instants: &[f64], mode: ApmMode) -> Result<Diagnosis> {
    for (i, tl) in timelines.iter().enumerate() {
        if tl.station_id() != i {
            return Err(Error::InvalidConfig(format!(
                "timeline at position {i} belongs to station {}",
                tl.station_id()
            )));
        }
    }
    let periods: Vec<Vec<ActivePeriod>> = timelines.iter().map(extract_active_periods).collect();
    let views = views_at(&periods, instants, mode);
    let bottlenecks = detect_bottlenecks(&views);
    let series = classify_shifting(&periods, instants, &bottlenecks);
    let frequency = relative_bottleneck_frequency(&series)?;
    let severity = SeverityReport::from_views(&views, &bottlenecks);
    Ok(Diagnosis {
        periods,
        series,
        frequency,
        severity,
    })
}

pub fn diagnose_run(run: &SimulationRun, mode: ApmMode) -> Result<Diagnosis> {
    let instants: Vec<f64> = run.config.sample_instants().collect();
    diagnose(&run.timelines, &instants, mode)
}

/// rbs of every station at every instant of the observation window.
pub fn severity_series(run: &SimulationRun) -> Result<SeverityReport> {
    diagnose_run(run, ApmMode::Elapsed).map(|d| d.severity)
}
