//! Shifted exponential process times.
//!
//! A draw is `m * (1 - v) + Exp(mean = m * v)` where `m` is the station's
//! mean process time (uplift included) and `v` the variability fraction.
//! The mean stays at `m` and the variance is `(m * v)^2`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::config::{StationSpec, Variability};

#[derive(Debug, Clone, Copy)]
pub struct ProcessTimeSampler {
    minimum: f64,
    tail: Option<Exp<f64>>,
}

impl ProcessTimeSampler {
    pub fn new(spec: &StationSpec, variability: Variability) -> Self {
        Self::from_mean(spec.mean_process_time(), variability.fraction())
    }

    pub fn from_mean(mean: f64, fraction: f64) -> Self {
        let spread = mean * fraction;
        let tail = (spread > 0.0).then(|| Exp::new(1.0 / spread).expect("positive rate"));
        ProcessTimeSampler {
            minimum: mean - spread,
            tail,
        }
    }

    /// Smallest possible draw.
    pub fn minimum(&self) -> f64 {
        self.minimum
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.minimum + self.tail.map_or(0.0, |exp| exp.sample(rng))
    }
}

pub fn sample_process_time<R: Rng + ?Sized>(
    spec: &StationSpec,
    variability: Variability,
    rng: &mut R,
) -> f64 {
    ProcessTimeSampler::new(spec, variability).sample(rng)
}

/// Independent random stream for one station.
///
/// Every station reads its own ChaCha stream of the run seed, so draws at
/// one station do not depend on how many other stations exist.
pub fn station_rng(seed: u64, station_id: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(station_id as u64);
    rng
}
