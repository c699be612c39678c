// Brute-force reference implementations over unit-discretized timelines.
//
// Timelines produced here have integer interval boundaries, so evaluating
// states at ticks 0, 1, ..., T-1 loses nothing. The oracles never call the
// library's period, view or classification code.

#![allow(dead_code)]

use bottleneck_lab::{Classification, Interval, StateTimeline, StationState};
use rand::Rng;

pub fn random_timeline<R: Rng>(rng: &mut R, station_id: usize, ticks: u32) -> StateTimeline {
    let mut intervals = Vec::new();
    let mut t = 0u32;
    while t < ticks {
        let len = rng.random_range(1..=6).min(ticks - t);
        let state = match rng.random_range(0..5) {
            0..=2 => StationState::Active,
            3 => StationState::Starved,
            _ => StationState::Blocked,
        };
        intervals.push(Interval::new(state, f64::from(t), f64::from(t + len)));
        t += len;
    }
    StateTimeline::new(station_id, intervals).expect("generated timeline is contiguous")
}

pub fn discretize(timeline: &StateTimeline, ticks: u32) -> Vec<bool> {
    (0..ticks)
        .map(|k| {
            let t = f64::from(k) + 0.5;
            timeline
                .intervals()
                .iter()
                .find(|iv| iv.start <= t && t < iv.end)
                .map(|iv| iv.state == StationState::Active)
                .unwrap_or(false)
        })
        .collect()
}

/// Groups consecutive active ticks into `(start, end)` spans.
pub fn brute_periods(active: &[bool]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut k = 0;
    while k < active.len() {
        if active[k] {
            let lo = k;
            while k < active.len() && active[k] {
                k += 1;
            }
            out.push((lo as f64, k as f64));
        } else {
            k += 1;
        }
    }
    out
}

/// The active span containing tick `k`, if any, by scanning neighbours.
fn span_at(active: &[bool], k: usize) -> Option<(usize, usize)> {
    if !active[k] {
        return None;
    }
    let mut lo = k;
    while lo > 0 && active[lo - 1] {
        lo -= 1;
    }
    let mut hi = k;
    while hi < active.len() && active[hi] {
        hi += 1;
    }
    Some((lo, hi))
}

fn elapsed(active: &[bool], k: usize) -> usize {
    span_at(active, k).map_or(0, |(lo, _)| k - lo)
}

/// Bottleneck at every tick: longest elapsed active span, lowest index on
/// ties, previous bottleneck kept when all are idle.
pub fn brute_bottlenecks(active: &[Vec<bool>]) -> Vec<usize> {
    let ticks = active[0].len();
    let mut prev = 0;
    (0..ticks)
        .map(|k| {
            let mut best = None;
            for (s, a) in active.iter().enumerate() {
                let e = elapsed(a, k);
                if e > 0 && !matches!(best, Some((_, b)) if e <= b) {
                    best = Some((s, e));
                }
            }
            if let Some((s, _)) = best {
                prev = s;
            }
            prev
        })
        .collect()
}

/// Shifting iff the tick lies in the overlap of the two spans around some
/// bottleneck change and belongs to one of the two adjacent runs.
pub fn brute_classes(active: &[Vec<bool>], bottlenecks: &[usize]) -> Vec<Classification> {
    let n = bottlenecks.len();
    (0..n)
        .map(|i| {
            for j in 0..n.saturating_sub(1) {
                if bottlenecks[j] == bottlenecks[j + 1] {
                    continue;
                }
                let mut lo_run = j;
                while lo_run > 0 && bottlenecks[lo_run - 1] == bottlenecks[j] {
                    lo_run -= 1;
                }
                let mut hi_run = j + 1;
                while hi_run + 1 < n && bottlenecks[hi_run + 1] == bottlenecks[j + 1] {
                    hi_run += 1;
                }
                if i < lo_run || i > hi_run {
                    continue;
                }
                let (Some(a), Some(b)) = (
                    span_at(&active[bottlenecks[j]], j),
                    span_at(&active[bottlenecks[j + 1]], j + 1),
                ) else {
                    continue;
                };
                let lo = a.0.max(b.0);
                let hi = a.1.min(b.1);
                if lo <= i && i < hi {
                    return Classification::Shifting;
                }
            }
            Classification::Sole
        })
        .collect()
}
