//! Event-driven simulation of a serial line of stations separated by
//! finite buffers.
//!
//! The first station has an unlimited supply of parts and the last an
//! unlimited demand. Each station pulls a part from its upstream buffer,
//! processes it, then pushes it downstream. A station whose downstream
//! buffer is full keeps the finished part and stays blocked until space
//! frees up (blocking after service).

mod process_time;
mod timeline;

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rand_chacha::ChaCha8Rng;

pub use process_time::{sample_process_time, station_rng, ProcessTimeSampler};
pub(crate) use timeline::TimelineRecorder;
pub use timeline::{Interval, StateTimeline, StationState};

use crate::config::LineConfig;
use crate::error::Result;

/// Flow counters of one inter-station buffer over the whole run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BufferStats {
    pub entered: u64,
    pub left: u64,
    pub final_occupancy: usize,
    pub max_occupancy: usize,
}

#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub config: LineConfig,
    pub timelines: Vec<StateTimeline>,
    /// Parts leaving the last station inside the observation window.
    pub parts_produced: u64,
    /// One entry per buffer; buffer `i` sits between station `i` and `i + 1`.
    pub buffers: Vec<BufferStats>,
}

impl SimulationRun {
    pub fn num_stations(&self) -> usize {
        self.timelines.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EventKind {
    Push,
    Pull,
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    kind: EventKind,
    station: usize,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // Same-instant events: pushes before pulls, then upstream first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.kind.cmp(&other.kind))
            .then(self.station.cmp(&other.station))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Waiting,
    Processing,
    Holding,
}

struct Station {
    phase: Phase,
    sampler: ProcessTimeSampler,
    rng: ChaCha8Rng,
    recorder: TimelineRecorder,
}

struct Line {
    stations: Vec<Station>,
    buffers: Vec<usize>,
    stats: Vec<BufferStats>,
    capacity: usize,
    events: BinaryHeap<Reverse<Event>>,
    window_start: f64,
    produced: u64,
}

impl Line {
    fn new(config: &LineConfig) -> Self {
        let stations = config
            .stations
            .iter()
            .map(|spec| Station {
                phase: Phase::Waiting,
                sampler: ProcessTimeSampler::new(spec, config.variability),
                rng: station_rng(config.seed, spec.id),
                recorder: TimelineRecorder::new(StationState::Starved),
            })
            .collect::<Vec<_>>();
        let n_buffers = stations.len() - 1;
        Line {
            stations,
            buffers: vec![0; n_buffers],
            stats: vec![BufferStats::default(); n_buffers],
            capacity: config.buffer_capacity,
            events: BinaryHeap::new(),
            window_start: config.settling_time,
            produced: 0,
        }
    }

    fn schedule(&mut self, time: f64, kind: EventKind, station: usize) {
        self.events.push(Reverse(Event {
            time,
            kind,
            station,
        }));
    }

    fn is_last(&self, s: usize) -> bool {
        s + 1 == self.stations.len()
    }

    fn set_state(&mut self, s: usize, t: f64, state: StationState) {
        self.stations[s].recorder.set(t, state);
    }

    fn push(&mut self, t: f64, s: usize) {
        if self.stations[s].phase != Phase::Holding {
            return;
        }
        if self.is_last(s) {
            if t >= self.window_start {
                self.produced += 1;
            }
        } else if self.buffers[s] < self.capacity {
            self.buffers[s] += 1;
            let stats = &mut self.stats[s];
            stats.entered += 1;
            stats.max_occupancy = stats.max_occupancy.max(self.buffers[s]);
            if self.stations[s + 1].phase == Phase::Waiting {
                self.schedule(t, EventKind::Pull, s + 1);
            }
        } else {
            self.set_state(s, t, StationState::Blocked);
            return;
        }
        self.stations[s].phase = Phase::Waiting;
        self.set_state(s, t, StationState::Starved);
        self.schedule(t, EventKind::Pull, s);
    }

    fn pull(&mut self, t: f64, s: usize) {
        if self.stations[s].phase != Phase::Waiting {
            return;
        }
        if s > 0 {
            let up = s - 1;
            if self.buffers[up] == 0 {
                self.set_state(s, t, StationState::Starved);
                return;
            }
            self.buffers[up] -= 1;
            self.stats[up].left += 1;
            if self.stations[up].phase == Phase::Holding {
                self.schedule(t, EventKind::Push, up);
            }
        }
        let station = &mut self.stations[s];
        let duration = station.sampler.sample(&mut station.rng);
        station.phase = Phase::Processing;
        self.set_state(s, t, StationState::Active);
        // Completion is a push attempt.
        self.schedule(t + duration, EventKind::Push, s);
    }

    fn finish_processing(&mut self, s: usize) {
        if self.stations[s].phase == Phase::Processing {
            self.stations[s].phase = Phase::Holding;
        }
    }

    fn run(mut self, config: &LineConfig) -> Result<SimulationRun> {
        let horizon = config.horizon();
        for s in 0..self.stations.len() {
            self.schedule(0.0, EventKind::Pull, s);
        }
        while let Some(Reverse(ev)) = self.events.pop() {
            if ev.time >= horizon {
                break;
            }
            match ev.kind {
                EventKind::Push => {
                    self.finish_processing(ev.station);
                    self.push(ev.time, ev.station);
                }
                EventKind::Pull => self.pull(ev.time, ev.station),
            }
        }
        let mut buffers = self.stats;
        for (stats, &occ) in buffers.iter_mut().zip(&self.buffers) {
            stats.final_occupancy = occ;
        }
        let timelines = self
            .stations
            .into_iter()
            .enumerate()
            .map(|(id, st)| st.recorder.finish(id, horizon))
            .collect::<Result<Vec<_>>>()?;
        Ok(SimulationRun {
            config: config.clone(),
            timelines,
            parts_produced: self.produced,
            buffers,
        })
    }
}

/// Simulates the line over `[0, settling_time + observation_length * sample_interval)`.
pub fn run_simulation(config: &LineConfig) -> Result<SimulationRun> {
    config.validate()?;
    Line::new(config).run(config)
}
