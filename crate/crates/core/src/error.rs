use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid line configuration: {0}")]
    InvalidConfig(String),

    #[error("time {t} is outside the timeline range [{start}, {end})")]
    OutOfRange { t: f64, start: f64, end: f64 },

    #[error("bottleneck series is empty")]
    EmptySeries,

    #[error("no reports to aggregate")]
    NoReports,

    #[error("reports cover different station sets ({expected} vs {found} stations)")]
    StationMismatch { expected: usize, found: usize },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("event log schema violation at record {record}: {reason}")]
    Schema { record: u64, reason: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    ConfigParse(#[from] toml::de::Error),

    #[error("config serialize error: {0}")]
    ConfigSerialize(#[from] toml::ser::Error),
}
