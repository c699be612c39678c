//! CSV schemas for simulation output and diagnosis results.
//!
//! All files are UTF-8 with a header row. Numbers use `.` as decimal
//! separator and never use exponent notation.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::Deserialize;

use crate::active_period::{ActivePeriod, BottleneckSeries};
use crate::error::{Error, Result};
use crate::metrics::{AggregateReport, FrequencyReport, SeverityReport};
use crate::sim::{Interval, StateTimeline, StationState};

pub const EVENT_LOG_HEADER: [&str; 5] = ["run_id", "station_id", "state", "start", "end"];
pub const ACTIVE_PERIODS_HEADER: [&str; 4] = ["run_id", "station_id", "start", "end"];
pub const BOTTLENECKS_HEADER: [&str; 4] = ["run_id", "t", "station_id", "classification"];
pub const RBF_HEADER: [&str; 5] = ["scenario", "run_id", "station_id", "bf", "rbf"];
pub const RBS_SERIES_HEADER: [&str; 6] = ["scenario", "run_id", "t", "station_id", "bs", "rbs"];
pub const AGGREGATE_HEADER: [&str; 5] = ["scenario", "station_id", "rbf_mean", "rbf_std", "rbs_time_mean"];

fn writer<W: Write>(w: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(header)?;
    Ok(w)
}

fn num(x: f64) -> String {
    format!("{x}")
}

pub fn write_event_log<W: Write>(w: W, run_id: usize, timelines: &[StateTimeline]) -> Result<()> {
    let mut w = writer(w, &EVENT_LOG_HEADER)?;
    append_event_log(&mut w, run_id, timelines)?;
    w.flush()?;
    Ok(())
}

fn append_event_log<W: Write>(
    w: &mut csv::Writer<W>,
    run_id: usize,
    timelines: &[StateTimeline],
) -> Result<()> {
    let run = run_id.to_string();
    for tl in timelines {
        let station = tl.station_id().to_string();
        for iv in tl.intervals() {
            w.write_record([
                run.as_str(),
                &station,
                iv.state.as_str(),
                &num(iv.start),
                &num(iv.end),
            ])?;
        }
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
struct EventRecord {
    run_id: usize,
    station_id: usize,
    state: String,
    start: f64,
    end: f64,
}

/// Timelines of one run recovered from an event log.
#[derive(Debug, Clone, PartialEq)]
pub struct LoggedRun {
    pub run_id: usize,
    pub timelines: Vec<StateTimeline>,
}

impl LoggedRun {
    pub fn end(&self) -> f64 {
        self.timelines.iter().map(StateTimeline::end).fold(f64::INFINITY, f64::min)
    }
}

/// Parses an event log and rebuilds contiguous timelines per run and station.
///
/// Rows of one station must appear in time order; stations of a run must be
/// numbered `0..n` without gaps.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn read_event_log<R: Read>(r: R) -> Result<Vec<LoggedRun>> {
    let mut reader = csv::Reader::from_reader(r);
    let header = reader.headers()?.clone();
    if header.iter().ne(EVENT_LOG_HEADER) {
        return Err(Error::Schema {
            record: 0,
            reason: format!("expected header `{}`", EVENT_LOG_HEADER.join(",")),
        });
    }
    let mut runs: BTreeMap<usize, BTreeMap<usize, Vec<Interval>>> = BTreeMap::new();
    for (i, rec) in reader.deserialize::<EventRecord>().enumerate() {
        let line = i as u64 + 1;
        let rec = rec.map_err(|e| Error::Schema {
            record: line,
            reason: e.to_string(),
        })?;
        let state: StationState = rec.state.parse().map_err(|reason| Error::Schema { record: line, reason })?;
        let intervals = runs.entry(rec.run_id).or_default().entry(rec.station_id).or_default();
        if let Some(prev) = intervals.last() {
            if prev.end != rec.start {
                return Err(Error::Schema {
                    record: line,
                    reason: format!(
                        "station {} interval starts at {} but previous ended at {}",
                        rec.station_id, rec.start, prev.end
                    ),
                });
            }
        } else if rec.start != 0.0 {
            return Err(Error::Schema {
                record: line,
                reason: format!("station {} timeline starts at {}, not 0", rec.station_id, rec.start),
            });
        }
        if !(rec.end > rec.start) {
            return Err(Error::Schema {
                record: line,
                reason: "interval end must exceed start".into(),
            });
        }
        intervals.push(Interval::new(state, rec.start, rec.end));
    }
    runs.into_iter()
        .map(|(run_id, stations)| {
            let timelines = stations
                .into_iter()
                .enumerate()
                .map(|(pos, (station_id, intervals))| {
                    if pos != station_id {
                        return Err(Error::Schema {
                            record: 0,
                            reason: format!("run {run_id}: station {pos} missing"),
                        });
                    }
                    StateTimeline::new(station_id, intervals)
                })
                .collect::<Result<Vec<_>>>()?;
            if timelines.len() < 2 {
                return Err(Error::Schema {
                    record: 0,
                    reason: format!("run {run_id}: need at least 2 stations"),
                });
            }
            Ok(LoggedRun { run_id, timelines })
        })
        .collect()
}

pub fn write_active_periods<W: Write>(w: W, run_id: usize, periods: &[Vec<ActivePeriod>]) -> Result<()> {
    let mut w = writer(w, &ACTIVE_PERIODS_HEADER)?;
    let run = run_id.to_string();
    for p in periods.iter().flatten() {
        w.write_record([run.as_str(), &p.station_id.to_string(), &num(p.start), &num(p.end)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_bottleneck_series<W: Write>(w: W, run_id: usize, series: &BottleneckSeries) -> Result<()> {
    let mut w = writer(w, &BOTTLENECKS_HEADER)?;
    let run = run_id.to_string();
    for s in &series.samples {
        w.write_record([
            run.as_str(),
            &num(s.t),
            &s.station_id.to_string(),
            s.classification.as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `rbf.csv` rows for several runs of one scenario.
pub fn write_rbf<'a, W, I>(w: W, scenario: &str, reports: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = (usize, &'a FrequencyReport)>,
{
    let mut w = writer(w, &RBF_HEADER)?;
    for (run_id, report) in reports {
        let run = run_id.to_string();
        for (s, (bf, rbf)) in report.bf.iter().zip(&report.rbf).enumerate() {
            w.write_record([scenario, &run, &s.to_string(), &bf.to_string(), &num(*rbf)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes `rbs_series.csv`; `rbs` is left empty where severity is undefined.
pub fn write_rbs_series<W: Write>(w: W, scenario: &str, run_id: usize, report: &SeverityReport) -> Result<()> {
    let mut w = writer(w, &RBS_SERIES_HEADER)?;
    let run = run_id.to_string();
    for p in &report.points {
        let t = num(p.t);
        let rbs = p.rbs.values();
        for (s, bs) in p.bs.iter().enumerate() {
            let rbs = rbs.map_or(String::new(), |v| num(v[s]));
            w.write_record([scenario, &run, &t, &s.to_string(), &num(*bs), &rbs])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_aggregate<W: Write>(w: W, scenario: &str, report: &AggregateReport) -> Result<()> {
    let mut w = writer(w, &AGGREGATE_HEADER)?;
    for s in &report.stations {
        w.write_record([
            scenario,
            &s.station_id.to_string(),
            &num(s.rbf_mean),
            &num(s.rbf_std),
            &num(s.rbs_time_mean),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct AggregateRow {
    pub scenario: String,
    pub station_id: usize,
    pub rbf_mean: f64,
    pub rbf_std: f64,
    pub rbs_time_mean: f64,
}

pub fn read_aggregate<R: Read>(r: R) -> Result<Vec<AggregateRow>> {
    let mut reader = csv::Reader::from_reader(r);
    Ok(reader.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct RbsRow {
    pub scenario: String,
    pub run_id: usize,
    pub t: f64,
    pub station_id: usize,
    pub bs: f64,
    pub rbs: Option<f64>,
}

pub fn read_rbs_series<R: Read>(r: R) -> Result<Vec<RbsRow>> {
    let mut reader = csv::Reader::from_reader(r);
    Ok(reader.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Per-station bars of one scenario group: `scenario,station_id,rbf_mean,rbf_std`.
pub fn write_fig_rbf<W: Write>(w: W, rows: &[AggregateRow]) -> Result<()> {
    let mut w = writer(w, &["scenario", "station_id", "rbf_mean", "rbf_std"])?;
    for r in rows {
        w.write_record([&r.scenario, &r.station_id.to_string(), &num(r.rbf_mean), &num(r.rbf_std)])?;
    }
    w.flush()?;
    Ok(())
}

/// Frequency next to time-averaged severity: `scenario,station_id,rbf,rbs`.
pub fn write_fig_rbf_vs_rbs<W: Write>(w: W, rows: &[AggregateRow]) -> Result<()> {
    let mut w = writer(w, &["scenario", "station_id", "rbf", "rbs"])?;
    for r in rows {
        w.write_record([
            &r.scenario,
            &r.station_id.to_string(),
            &num(r.rbf_mean),
            &num(r.rbs_time_mean),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Severity time series restricted to a window: `scenario,run_id,t,station_id,rbs`.
pub fn write_fig_rbs_window<W: Write>(w: W, rows: &[RbsRow]) -> Result<()> {
    let mut w = writer(w, &["scenario", "run_id", "t", "station_id", "rbs"])?;
    for r in rows {
        w.write_record([
            &r.scenario,
            &r.run_id.to_string(),
            &num(r.t),
            &r.station_id.to_string(),
            &r.rbs.map_or(String::new(), num),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{LineConfig, Variability};
    use crate::sim::run_simulation;
    use proptest::prelude::*;

    fn log_text(rows: &[&str]) -> String {
        let mut s = EVENT_LOG_HEADER.join(",");
        for r in rows {
            s.push('\n');
            s.push_str(r);
        }
        s.push('\n');
        s
    }

    #[test]
    fn event_log_round_trips_simulated_timelines() {
        let mut cfg = LineConfig::uniform(4, 2.0, Variability::High, 8);
        cfg.observation_length = 500;
        let run = run_simulation(&cfg).unwrap();
        let mut buf = Vec::new();
        write_event_log(&mut buf, 3, &run.timelines).unwrap();
        let parsed = read_event_log(buf.as_slice()).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0].run_id, 3);
        assert_eq!(parsed[0].timelines, run.timelines);
        assert_eq!(parsed[0].end(), cfg.horizon());
    }

    #[test]
    fn unknown_state_is_a_schema_error() {
        let text = log_text(&["0,0,active,0,5", "0,0,idle,5,8", "0,1,active,0,8"]);
        match read_event_log(text.as_bytes()) {
            Err(Error::Schema { record, .. }) => assert_eq!(record, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gaps_are_schema_errors() {
        let text = log_text(&["0,0,active,0,5", "0,0,starved,6,8", "0,1,active,0,8"]);
        assert!(matches!(read_event_log(text.as_bytes()), Err(Error::Schema { .. })));
        let text = log_text(&["0,0,active,1,5", "0,1,active,0,5"]);
        assert!(matches!(read_event_log(text.as_bytes()), Err(Error::Schema { .. })));
        let text = log_text(&["0,0,active,0,5", "0,2,active,0,5"]);
        assert!(matches!(read_event_log(text.as_bytes()), Err(Error::Schema { .. })));
    }

    #[test]
    fn wrong_header_is_rejected() {
        let text = "run,station,state,start,end\n0,0,active,0,1\n";
        assert!(matches!(read_event_log(text.as_bytes()), Err(Error::Schema { record: 0, .. })));
    }

    #[test]
    fn numbers_never_use_exponents() {
        assert_eq!(num(1e-7), "0.0000001");
        assert_eq!(num(12_080.0), "12080");
        assert_eq!(num(0.1 + 0.2), "0.30000000000000004");
    }

    proptest! {
        #[test]
        fn formatted_floats_parse_back_exactly(x in 0.0f64..1e7) {
            prop_assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
