//! Serial flow line simulation and bottleneck diagnosis.
//!
//! The [`sim`] module produces per-station state timelines, [`active_period`]
//! turns them into momentary bottlenecks with the active period method, and
//! [`metrics`] scores stations by relative bottleneck frequency and severity.
//! [`scenarios`] bundles the reference experiments and [`export`] reads and
//! writes the CSV schemas.

pub mod active_period;
pub mod config;
pub mod diagnosis;
pub mod error;
pub mod export;
pub mod metrics;
pub mod scenarios;
pub mod sim;

pub use active_period::{
    bottleneck_at, classify_shifting, elapsed_active, extract_active_periods, ActivePeriod,
    ActivePeriodView, ApmMode, BottleneckSample, BottleneckSeries, Classification,
};
pub use config::{LineConfig, StationSpec, Variability};
pub use diagnosis::{diagnose, diagnose_run, severity_series, Diagnosis};
pub use error::{Error, Result};
pub use metrics::{
    aggregate_runs, bottleneck_frequency, relative_bottleneck_frequency,
    relative_bottleneck_severity, AggregateReport, FrequencyReport, Severity, SeverityReport,
};
pub use scenarios::{catalog, run_scenario, ScenarioFile, ScenarioResult, ScenarioSpec};
pub use sim::{
    run_simulation, sample_process_time, Interval, SimulationRun, StateTimeline, StationState,
};
