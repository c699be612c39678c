//! Line description: stations, buffers, process-time variability and the
//! observation window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PROCESS_TIME: f64 = 2.0;
pub const DEFAULT_UPLIFT: f64 = 0.125;
pub const DEFAULT_BUFFER_CAPACITY: usize = 5;
pub const DEFAULT_SETTLING_TIME: f64 = 2_000.0;
/// One week of one-minute samples.
pub const DEFAULT_OBSERVATION_LENGTH: usize = 10_080;
pub const DEFAULT_SAMPLE_INTERVAL: f64 = 1.0;

/// Spread of the process-time distribution around its mean.
///
/// The level is the fraction `v` of the mean that is exponentially
/// distributed; the remaining `1 - v` is a fixed minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variability {
    /// No randomness; every part takes exactly the mean process time.
    Deterministic,
    Low,
    Medium,
    High,
}

impl Variability {
    pub fn fraction(self) -> f64 {
        match self {
            Variability::Deterministic => 0.0,
            Variability::Low => 0.25,
            Variability::Medium => 0.50,
            Variability::High => 0.75,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variability::Deterministic => "deterministic",
            Variability::Low => "low",
            Variability::Medium => "medium",
            Variability::High => "high",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationSpec {
    pub id: usize,
    pub base_process_time: f64,
    #[serde(default)]
    pub process_time_uplift: f64,
}

impl StationSpec {
    pub fn new(id: usize, base_process_time: f64) -> Self {
        StationSpec {
            id,
            base_process_time,
            process_time_uplift: 0.0,
        }
    }

    pub fn with_uplift(mut self, uplift: f64) -> Self {
        self.process_time_uplift = uplift;
        self
    }

    /// Expected process time including the uplift.
    pub fn mean_process_time(&self) -> f64 {
        self.base_process_time * (1.0 + self.process_time_uplift)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineConfig {
    pub stations: Vec<StationSpec>,
    pub buffer_capacity: usize,
    pub variability: Variability,
    pub settling_time: f64,
    pub observation_length: usize,
    pub sample_interval: f64,
    pub seed: u64,
}

impl LineConfig {
    /// A line of `n` identical stations with the default buffer, settling and
    /// observation parameters.
    pub fn uniform(n: usize, process_time: f64, variability: Variability, seed: u64) -> Self {
        LineConfig {
            stations: (0..n).map(|id| StationSpec::new(id, process_time)).collect(),
            buffer_capacity: DEFAULT_BUFFER_CAPACITY,
            variability,
            settling_time: DEFAULT_SETTLING_TIME,
            observation_length: DEFAULT_OBSERVATION_LENGTH,
            sample_interval: DEFAULT_SAMPLE_INTERVAL,
            seed,
        }
    }

    pub fn with_uplift(mut self, station: usize, uplift: f64) -> Self {
        self.stations[station].process_time_uplift = uplift;
        self
    }

    pub fn num_stations(&self) -> usize {
        self.stations.len()
    }

    /// End of the simulated span: settling plus the full observation window.
    pub fn horizon(&self) -> f64 {
        self.settling_time + self.observation_length as f64 * self.sample_interval
    }

    /// Sample instants `settling + i * interval` for `i` in `0..n`.
    pub fn sample_instants(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.observation_length).map(move |i| self.settling_time + i as f64 * self.sample_interval)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.stations.len() < 2 {
            return bad(format!("need at least 2 stations, got {}", self.stations.len()));
        }
        for (i, s) in self.stations.iter().enumerate() {
            if s.id != i {
                return bad(format!("station at position {i} has id {}", s.id));
            }
            if !(s.base_process_time > 0.0 && s.base_process_time.is_finite()) {
                return bad(format!("station {i}: base_process_time must be positive"));
            }
            if !(s.process_time_uplift >= 0.0 && s.process_time_uplift.is_finite()) {
                return bad(format!("station {i}: process_time_uplift must be non-negative"));
            }
        }
        if self.buffer_capacity < 1 {
            return bad("buffer_capacity must be at least 1".into());
        }
        if self.observation_length < 1 {
            return bad("observation_length must be at least 1".into());
        }
        if !(self.sample_interval > 0.0 && self.sample_interval.is_finite()) {
            return bad("sample_interval must be positive".into());
        }
        if !(self.settling_time >= 0.0 && self.settling_time.is_finite()) {
            return bad("settling_time must be non-negative".into());
        }
        Ok(())
    }
}
