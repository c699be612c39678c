use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StationState {
    /// Processing a part.
    Active,
    /// Waiting on an empty upstream buffer.
    Starved,
    /// Holding a finished part because the downstream buffer is full.
    Blocked,
}

impl StationState {
    pub fn as_str(self) -> &'static str {
        match self {
            StationState::Active => "active",
            StationState::Starved => "starved",
            StationState::Blocked => "blocked",
        }
    }
}

impl fmt::Display for StationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StationState {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "active" => Ok(StationState::Active),
            "starved" => Ok(StationState::Starved),
            "blocked" => Ok(StationState::Blocked),
            other => Err(format!("unknown station state `{other}`")),
        }
    }
}

/// Half-open span `[start, end)` spent in one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub state: StationState,
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn new(state: StationState, start: f64, end: f64) -> Self {
        Interval { state, start, end }
    }

    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t < self.end
    }
}

/// Chronological state history of one station.
///
/// Intervals are contiguous, start at 0 and have positive length.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTimeline {
    station_id: usize,
    intervals: Vec<Interval>,
}

impl StateTimeline {
    pub fn new(station_id: usize, intervals: Vec<Interval>) -> Result<Self> {
        check_contiguous(station_id, &intervals)?;
        Ok(StateTimeline {
            station_id,
            intervals,
        })
    }

    pub fn station_id(&self) -> usize {
        self.station_id
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn start(&self) -> f64 {
        self.intervals.first().map_or(0.0, |iv| iv.start)
    }

    pub fn end(&self) -> f64 {
        self.intervals.last().map_or(0.0, |iv| iv.end)
    }

    pub fn state_at(&self, t: f64) -> Result<StationState> {
        let idx = self.intervals.partition_point(|iv| iv.end <= t);
        match self.intervals.get(idx) {
            Some(iv) if iv.contains(t) => Ok(iv.state),
            _ => Err(Error::OutOfRange {
                t,
                start: self.start(),
                end: self.end(),
            }),
        }
    }

    /// Total time spent in `state`.
    pub fn time_in(&self, state: StationState) -> f64 {
        self.intervals
            .iter()
            .filter(|iv| iv.state == state)
            .map(|iv| iv.end - iv.start)
            .sum()
    }
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn check_contiguous(station_id: usize, intervals: &[Interval]) -> Result<()> {
    let fail = |reason: String| {
        Err(Error::InvalidConfig(format!(
            "station {station_id} timeline: {reason}"
        )))
    };
    let Some(first) = intervals.first() else {
        return fail("no intervals".into());
    };
    if first.start != 0.0 {
        return fail(format!("first interval starts at {}, not 0", first.start));
    }
    for (i, iv) in intervals.iter().enumerate() {
        if !(iv.end > iv.start) {
            return fail(format!("interval {i} has non-positive length"));
        }
        if i > 0 && intervals[i - 1].end != iv.start {
            return fail(format!("gap or overlap before interval {i}"));
        }
    }
    Ok(())
}

/// Builds a timeline from state changes reported in time order.
///
/// Several changes at the same instant collapse into the last one, so
/// zero-length intervals never appear and a station that leaves and
/// re-enters a state at the same instant keeps one uninterrupted interval.
#[derive(Debug)]
pub(crate) struct TimelineRecorder {
    closed: Vec<Interval>,
    state: StationState,
    since: f64,
}

impl TimelineRecorder {
    pub(crate) fn new(state: StationState) -> Self {
        TimelineRecorder {
            closed: Vec::new(),
            state,
            since: 0.0,
        }
    }

    pub(crate) fn set(&mut self, t: f64, state: StationState) {
        if state == self.state {
            return;
        }
        if t == self.since {
            match self.closed.last() {
                Some(prev) if prev.state == state => {
                    let prev = self.closed.pop().unwrap();
                    self.since = prev.start;
                }
                _ => {}
            }
            self.state = state;
            return;
        }
        debug_assert!(t > self.since, "state change at {t} precedes {}", self.since);
        self.closed.push(Interval::new(self.state, self.since, t));
        self.state = state;
        self.since = t;
    }

    pub(crate) fn finish(mut self, station_id: usize, end: f64) -> Result<StateTimeline> {
        if end > self.since {
            self.closed.push(Interval::new(self.state, self.since, end));
        }
        StateTimeline::new(station_id, self.closed)
    }
}
