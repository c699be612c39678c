//! The nine reference scenarios and the replicated-run orchestrator.
//!
//! Seven stations with a mean process time of 2.00, buffers of capacity 5,
//! a settling period of 2,000 units and 10,080 one-unit samples. Uplifted
//! stations run 12.5% slower on average. Stations are numbered S0 to S6.
//!
//! | name | uplifted | variability |
//! |------|----------|-------------|
//! | S1-1 | -        | low         |
//! | S1-2 | -        | medium      |
//! | S1-3 | -        | high        |
//! | S2-1 | 1        | medium      |
//! | S2-2 | 3        | medium      |
//! | S2-3 | 5        | medium      |
//! | S3-1 | 2, 4     | medium      |
//! | S3-2 | 1, 5     | medium      |
//! | S3-3 | 0, 6     | medium      |

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::active_period::ApmMode;
use crate::config::{self, LineConfig, StationSpec, Variability};
use crate::diagnosis::{diagnose_run, Diagnosis};
use crate::error::{Error, Result};
use crate::metrics::{aggregate_runs, AggregateReport};
use crate::sim::{run_simulation, SimulationRun};

pub const DEFAULT_REPLICATIONS: usize = 10;
pub const REFERENCE_STATIONS: usize = 7;

/// Line parameters shared by all stations of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineTemplate {
    pub stations: usize,
    pub base_process_time: f64,
    pub process_time_uplift: f64,
    pub buffer_capacity: usize,
    pub settling_time: f64,
    pub observation_length: usize,
    pub sample_interval: f64,
}

impl Default for LineTemplate {
    fn default() -> Self {
        LineTemplate {
            stations: REFERENCE_STATIONS,
            base_process_time: config::DEFAULT_PROCESS_TIME,
            process_time_uplift: config::DEFAULT_UPLIFT,
            buffer_capacity: config::DEFAULT_BUFFER_CAPACITY,
            settling_time: config::DEFAULT_SETTLING_TIME,
            observation_length: config::DEFAULT_OBSERVATION_LENGTH,
            sample_interval: config::DEFAULT_SAMPLE_INTERVAL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    #[serde(default)]
    pub uplifted_stations: Vec<usize>,
    pub variability: Variability,
    #[serde(default = "default_replications")]
    pub replication_count: usize,
    #[serde(default)]
    pub apm_mode: ApmMode,
    #[serde(default)]
    pub line: LineTemplate,
}

fn default_replications() -> usize {
    DEFAULT_REPLICATIONS
}

impl ScenarioSpec {
    pub fn new(name: &str, uplifted: &[usize], variability: Variability) -> Self {
        ScenarioSpec {
            name: name.to_string(),
            uplifted_stations: uplifted.to_vec(),
            variability,
            replication_count: DEFAULT_REPLICATIONS,
            apm_mode: ApmMode::Elapsed,
            line: LineTemplate::default(),
        }
    }

    /// Scenario group, e.g. `S2` for `S2-3`.
    pub fn group(&self) -> &str {
        self.name.split('-').next().unwrap_or(&self.name)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::InvalidConfig("scenario name is empty".into()));
        }
        if self.replication_count == 0 {
            return Err(Error::InvalidConfig(format!(
                "{}: replication_count must be at least 1",
                self.name
            )));
        }
        for &s in &self.uplifted_stations {
            if s >= self.line.stations {
                return Err(Error::InvalidConfig(format!(
                    "{}: uplifted station {s} outside a {}-station line",
                    self.name, self.line.stations
                )));
            }
        }
        self.line_config(0).validate()
    }

    pub fn line_config(&self, seed: u64) -> LineConfig {
        let t = &self.line;
        let stations = (0..t.stations)
            .map(|id| {
                let spec = StationSpec::new(id, t.base_process_time);
                if self.uplifted_stations.contains(&id) {
                    spec.with_uplift(t.process_time_uplift)
                } else {
                    spec
                }
            })
            .collect();
        LineConfig {
            stations,
            buffer_capacity: t.buffer_capacity,
            variability: self.variability,
            settling_time: t.settling_time,
            observation_length: t.observation_length,
            sample_interval: t.sample_interval,
            seed,
        }
    }
}

pub fn catalog() -> Vec<ScenarioSpec> {
    use Variability::*;
    vec![
        ScenarioSpec::new("S1-1", &[], Low),
        ScenarioSpec::new("S1-2", &[], Medium),
        ScenarioSpec::new("S1-3", &[], High),
        ScenarioSpec::new("S2-1", &[1], Medium),
        ScenarioSpec::new("S2-2", &[3], Medium),
        ScenarioSpec::new("S2-3", &[5], Medium),
        ScenarioSpec::new("S3-1", &[2, 4], Medium),
        ScenarioSpec::new("S3-2", &[1, 5], Medium),
        ScenarioSpec::new("S3-3", &[0, 6], Medium),
    ]
}

pub fn find<'a>(scenarios: &'a [ScenarioSpec], name: &str) -> Result<&'a ScenarioSpec> {
    scenarios
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownScenario(name.to_string()))
}

/// Collection of scenarios as stored in a TOML config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub scenario: Vec<ScenarioSpec>,
}

impl ScenarioFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text)?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, s) in self.scenario.iter().enumerate() {
            s.validate()?;
            if self.scenario[..i].iter().any(|o| o.name == s.name) {
                return Err(Error::InvalidConfig(format!("duplicate scenario `{}`", s.name)));
            }
        }
        Ok(())
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one replication, stable across platforms and releases.
pub fn derive_seed(base_seed: u64, scenario: &str, run_index: usize) -> u64 {
    let mut h = splitmix64(base_seed);
    h = splitmix64(h ^ fnv1a(scenario.as_bytes()));
    splitmix64(h ^ run_index as u64)
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub run_id: usize,
    pub seed: u64,
    pub simulation: SimulationRun,
    pub diagnosis: Diagnosis,
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub spec: ScenarioSpec,
    pub base_seed: u64,
    pub runs: Vec<RunOutcome>,
    pub aggregate: AggregateReport,
}

impl ScenarioResult {
    pub fn name(&self) -> &str {
        &self.spec.name
    }
}

pub fn run_replication(spec: &ScenarioSpec, base_seed: u64, run_id: usize) -> Result<RunOutcome> {
    let seed = derive_seed(base_seed, &spec.name, run_id);
    let simulation = run_simulation(&spec.line_config(seed))?;
    let diagnosis = diagnose_run(&simulation, spec.apm_mode)?;
    Ok(RunOutcome {
        run_id,
        seed,
        simulation,
        diagnosis,
    })
}

/// Runs every replication of a scenario in parallel; results keep run order.
pub fn run_scenario(spec: &ScenarioSpec, base_seed: u64) -> Result<ScenarioResult> {
    spec.validate()?;
    let runs = (0..spec.replication_count)
        .into_par_iter()
        .map(|run_id| run_replication(spec, base_seed, run_id))
        .collect::<Result<Vec<_>>>()?;
    let frequencies: Vec<_> = runs.iter().map(|r| r.diagnosis.frequency.clone()).collect();
    let severities: Vec<_> = runs.iter().map(|r| r.diagnosis.severity.clone()).collect();
    let aggregate = aggregate_runs(&frequencies, &severities)?;
    Ok(ScenarioResult {
        spec: spec.clone(),
        base_seed,
        runs,
        aggregate,
    })
}
