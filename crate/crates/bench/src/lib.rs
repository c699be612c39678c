//! Benchmarks for the simulation and diagnosis pipeline. See `benches/`.

use bottleneck_lab::{LineConfig, Variability};

/// Reference seven-station line with the uplift on station 3.
pub fn reference_line(seed: u64) -> LineConfig {
    LineConfig::uniform(7, 2.0, Variability::Medium, seed).with_uplift(3, 0.125)
}
