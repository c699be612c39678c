//! Relative bottleneck frequency (rbf) and relative bottleneck severity (rbs).
//!
//! `rbf_S = bf_S / n`, where `bf_S` counts the sample instants at which
//! station `S` is the bottleneck. `rbs_S = bs_S / bs_BN` compares a
//! station's active duration with the bottleneck's at one instant.

use serde::Serialize;

use crate::active_period::{bottleneck_at, ActivePeriodView, BottleneckSeries};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    /// Bottleneck counts per station.
    pub bf: Vec<u64>,
    pub rbf: Vec<f64>,
    pub n: usize,
}

impl FrequencyReport {
    pub fn num_stations(&self) -> usize {
        self.bf.len()
    }
}

pub fn bottleneck_frequency(series: &BottleneckSeries, station: usize) -> u64 {
    series.stations().filter(|&s| s == station).count() as u64
}

pub fn relative_bottleneck_frequency(series: &BottleneckSeries) -> Result<FrequencyReport> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut bf = vec![0u64; series.num_stations];
    for s in series.stations() {
        bf[s] += 1;
    }
    let n = series.len();
    let rbf = bf.iter().map(|&c| c as f64 / n as f64).collect();
    Ok(FrequencyReport { bf, rbf, n })
}

/// Severity of every station at one instant.
#[derive(Debug, Clone, PartialEq)]
pub enum Severity {
    Defined(Vec<f64>),
    /// Every station idle: the ratio has no denominator.
    NoActivity,
}

impl Severity {
    pub fn values(&self) -> Option<&[f64]> {
        match self {
            Severity::Defined(v) => Some(v),
            Severity::NoActivity => None,
        }
    }
}

pub fn relative_bottleneck_severity(view: &ActivePeriodView) -> Severity {
    let bottleneck = bottleneck_at(view, 0);
    let reference = view.durations[bottleneck];
    if reference > 0.0 {
        Severity::Defined(view.durations.iter().map(|&bs| bs / reference).collect())
    } else {
        Severity::NoActivity
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeverityPoint {
    pub t: f64,
    pub bottleneck: usize,
    pub bs: Vec<f64>,
    pub rbs: Severity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeverityReport {
    pub num_stations: usize,
    pub points: Vec<SeverityPoint>,
}

impl SeverityReport {
    /// Builds the report from views and the bottleneck chosen at each.
    pub fn from_views(views: &[ActivePeriodView], bottlenecks: &[usize]) -> Self {
        let num_stations = views.first().map_or(0, ActivePeriodView::num_stations);
        let points = views
            .iter()
            .zip(bottlenecks)
            .map(|(v, &bottleneck)| SeverityPoint {
                t: v.t,
                bottleneck,
                bs: v.durations.clone(),
                rbs: relative_bottleneck_severity(v),
            })
            .collect();
        SeverityReport {
            num_stations,
            points,
        }
    }

    /// Arithmetic mean of each station's rbs over instants where it is
    /// defined.
    pub fn time_mean(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.num_stations];
        let mut count = 0usize;
        for p in &self.points {
            if let Some(values) = p.rbs.values() {
                for (acc, v) in sums.iter_mut().zip(values) {
                    *acc += v;
                }
                count += 1;
            }
        }
        if count > 0 {
            sums.iter_mut().for_each(|s| *s /= count as f64);
        }
        sums
    }

    pub fn undefined_instants(&self) -> usize {
        self.points
            .iter()
            .filter(|p| p.rbs == Severity::NoActivity)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationAggregate {
    pub station_id: usize,
    pub rbf_mean: f64,
    pub rbf_std: f64,
    pub rbf_min: f64,
    pub rbf_max: f64,
    pub rbs_time_mean: f64,
    pub rbs_time_std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateReport {
    pub runs: usize,
    pub stations: Vec<StationAggregate>,
}

impl AggregateReport {
    pub fn rbf_means(&self) -> Vec<f64> {
        self.stations.iter().map(|s| s.rbf_mean).collect()
    }

    pub fn rbs_means(&self) -> Vec<f64> {
        self.stations.iter().map(|s| s.rbs_time_mean).collect()
    }
}

/// Mean and sample standard deviation. Values are summed in sorted order so
/// the result does not depend on run order.
fn mean_std(values: &mut [f64]) -> (f64, f64) {
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let mut sq: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
    sq.sort_by(f64::total_cmp);
    (mean, (sq.iter().sum::<f64>() / (n - 1.0)).sqrt())
}

/// Per-station statistics across runs. Severity is first averaged over time
/// within each run, then across runs.
pub fn aggregate_runs(
    frequencies: &[FrequencyReport],
    severities: &[SeverityReport],
) -> Result<AggregateReport> {
    let first = frequencies.first().ok_or(Error::NoReports)?;
    let stations = first.num_stations();
    for f in frequencies {
        if f.num_stations() != stations {
            return Err(Error::StationMismatch {
                expected: stations,
                found: f.num_stations(),
            });
        }
    }
    for s in severities {
        if s.num_stations != stations {
            return Err(Error::StationMismatch {
                expected: stations,
                found: s.num_stations,
            });
        }
    }
    let time_means: Vec<Vec<f64>> = severities.iter().map(SeverityReport::time_mean).collect();

    let stations = (0..stations)
        .map(|s| {
            let mut rbf: Vec<f64> = frequencies.iter().map(|f| f.rbf[s]).collect();
            let (rbf_mean, rbf_std) = mean_std(&mut rbf);
            let (rbs_time_mean, rbs_time_std) = if time_means.is_empty() {
                (0.0, 0.0)
            } else {
                mean_std(&mut time_means.iter().map(|m| m[s]).collect::<Vec<_>>())
            };
            StationAggregate {
                station_id: s,
                rbf_mean,
                rbf_std,
                rbf_min: rbf[0],
                rbf_max: rbf[rbf.len() - 1],
                rbs_time_mean,
                rbs_time_std,
            }
        })
        .collect();
    Ok(AggregateReport {
        runs: frequencies.len(),
        stations,
    })
}
