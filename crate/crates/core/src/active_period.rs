//! Active period method: the station that has been working the longest
//! without interruption is the momentary bottleneck.

use serde::{Deserialize, Serialize};

use crate::sim::{StateTimeline, StationState};

/// Maximal uninterrupted stretch `[start, end)` in which a station is active.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActivePeriod {
    pub station_id: usize,
    pub start: f64,
    pub end: f64,
}

impl ActivePeriod {
    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t < self.end
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

/// How a station's active duration is measured at a query instant.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApmMode {
    /// Time since the ongoing period started. Uses only the past.
    #[default]
    Elapsed,
    /// Full length of the ongoing period. Needs the whole timeline.
    Retrospective,
}

pub fn extract_active_periods(timeline: &StateTimeline) -> Vec<ActivePeriod> {
    let id = timeline.station_id();
    let mut periods: Vec<ActivePeriod> = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for iv in timeline.intervals() {
        if iv.state == StationState::Active {
            open = Some(match open {
                Some((start, _)) => (start, iv.end),
                None => (iv.start, iv.end),
            });
        } else if let Some((start, end)) = open.take() {
            periods.push(ActivePeriod {
                station_id: id,
                start,
                end,
            });
        }
    }
    if let Some((start, end)) = open {
        periods.push(ActivePeriod {
            station_id: id,
            start,
            end,
        });
    }
    periods
}

fn containing(periods: &[ActivePeriod], t: f64) -> Option<&ActivePeriod> {
    let idx = periods.partition_point(|p| p.end <= t);
    periods.get(idx).filter(|p| p.contains(t))
}

/// Time since the start of the period containing `t`, or 0 when the station
/// is idle at `t`.
pub fn elapsed_active(periods: &[ActivePeriod], t: f64) -> f64 {
    containing(periods, t).map_or(0.0, |p| t - p.start)
}

/// Length of the whole period containing `t`, or 0 when idle at `t`.
pub fn period_length_at(periods: &[ActivePeriod], t: f64) -> f64 {
    containing(periods, t).map_or(0.0, ActivePeriod::duration)
}

/// Active durations of every station at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivePeriodView {
    pub t: f64,
    pub durations: Vec<f64>,
}

impl ActivePeriodView {
    pub fn new(t: f64, durations: Vec<f64>) -> Self {
        ActivePeriodView { t, durations }
    }

    pub fn at(periods: &[Vec<ActivePeriod>], t: f64, mode: ApmMode) -> Self {
        let durations = periods
            .iter()
            .map(|p| match mode {
                ApmMode::Elapsed => elapsed_active(p, t),
                ApmMode::Retrospective => period_length_at(p, t),
            })
            .collect();
        ActivePeriodView { t, durations }
    }

    pub fn num_stations(&self) -> usize {
        self.durations.len()
    }

    pub fn max_duration(&self) -> f64 {
        self.durations.iter().copied().fold(0.0, f64::max)
    }
}

/// Views at a non-decreasing sequence of instants.
///
/// Walks each station's periods with a cursor instead of searching per
/// instant.
pub fn views_at(periods: &[Vec<ActivePeriod>], instants: &[f64], mode: ApmMode) -> Vec<ActivePeriodView> {
    let mut cursors = vec![0usize; periods.len()];
    instants
        .iter()
        .map(|&t| {
            let durations = periods
                .iter()
                .zip(cursors.iter_mut())
                .map(|(p, cur)| {
                    while *cur < p.len() && p[*cur].end <= t {
                        *cur += 1;
                    }
                    match p.get(*cur) {
                        Some(period) if period.contains(t) => match mode {
                            ApmMode::Elapsed => t - period.start,
                            ApmMode::Retrospective => period.duration(),
                        },
                        _ => 0.0,
                    }
                })
                .collect();
            ActivePeriodView { t, durations }
        })
        .collect()
}

/// Station with the longest active duration; the lowest index wins ties.
/// When every station is idle the `previous` bottleneck is kept.
pub fn bottleneck_at(view: &ActivePeriodView, previous: usize) -> usize {
    let mut best = previous;
    let mut best_value = 0.0;
    for (s, &d) in view.durations.iter().enumerate() {
        if d > best_value {
            best = s;
            best_value = d;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Sole,
    Shifting,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Sole => "sole",
            Classification::Shifting => "shifting",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BottleneckSample {
    pub t: f64,
    pub station_id: usize,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BottleneckSeries {
    pub num_stations: usize,
    pub samples: Vec<BottleneckSample>,
}

impl BottleneckSeries {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn stations(&self) -> impl Iterator<Item = usize> + '_ {
        self.samples.iter().map(|s| s.station_id)
    }
}

/// Raw bottleneck per view, carrying the last one forward over all-idle
/// instants. The line starts with station 0.
pub fn detect_bottlenecks(views: &[ActivePeriodView]) -> Vec<usize> {
    let mut previous = 0;
    views
        .iter()
        .map(|v| {
            previous = bottleneck_at(v, previous);
            previous
        })
        .collect()
}

/// Marks samples inside a bottleneck handover as shifting.
///
/// For every pair of consecutive runs of samples with bottlenecks `B1` then
/// `B2`, the ongoing period of `B1` (at its last sample) and of `B2` (at its
/// first sample) are intersected; samples of either run that fall inside the
/// overlap are shifting.
pub fn classify_shifting(
    periods: &[Vec<ActivePeriod>],
    instants: &[f64],
    bottlenecks: &[usize],
) -> BottleneckSeries {
    assert_eq!(instants.len(), bottlenecks.len(), "one bottleneck per instant");
    let mut classes = vec![Classification::Sole; instants.len()];

    // Maximal runs of equal bottleneck as half-open index ranges.
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=bottlenecks.len() {
        if i == bottlenecks.len() || bottlenecks[i] != bottlenecks[start] {
            runs.push((start, i));
            start = i;
        }
    }

    for pair in runs.windows(2) {
        let (a_lo, a_hi) = pair[0];
        let (b_lo, b_hi) = pair[1];
        let before = containing(&periods[bottlenecks[a_lo]], instants[a_hi - 1]);
        let after = containing(&periods[bottlenecks[b_lo]], instants[b_lo]);
        let (Some(before), Some(after)) = (before, after) else {
            continue;
        };
        let lo = before.start.max(after.start);
        let hi = before.end.min(after.end);
        if lo >= hi {
            continue;
        }
        for i in (a_lo..a_hi).chain(b_lo..b_hi) {
            if lo <= instants[i] && instants[i] < hi {
                classes[i] = Classification::Shifting;
            }
        }
    }

    BottleneckSeries {
        num_stations: periods.len(),
        samples: instants
            .iter()
            .zip(bottlenecks)
            .zip(classes)
            .map(|((&t, &station_id), classification)| BottleneckSample {
                t,
                station_id,
                classification,
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Interval;
    use StationState::*;

    fn tl(id: usize, ivs: &[(StationState, f64, f64)]) -> StateTimeline {
        StateTimeline::new(id, ivs.iter().map(|&(s, a, b)| Interval::new(s, a, b)).collect()).unwrap()
    }

    fn span(station_id: usize, start: f64, end: f64) -> ActivePeriod {
        ActivePeriod {
            station_id,
            start,
            end,
        }
    }

    #[test]
    fn idle_states_split_periods() {
        let p = extract_active_periods(&tl(0, &[(Active, 0.0, 5.0), (Starved, 5.0, 8.0), (Active, 8.0, 9.0)]));
        assert_eq!(p, vec![span(0, 0.0, 5.0), span(0, 8.0, 9.0)]);
    }

    #[test]
    fn adjacent_active_intervals_merge() {
        let p = extract_active_periods(&tl(2, &[(Active, 0.0, 3.0), (Active, 3.0, 7.0)]));
        assert_eq!(p, vec![span(2, 0.0, 7.0)]);
    }

    #[test]
    fn never_active_station_has_no_periods() {
        let p = extract_active_periods(&tl(1, &[(Starved, 0.0, 3.0), (Blocked, 3.0, 7.0)]));
        assert!(p.is_empty());
    }

    #[test]
    fn elapsed_examples() {
        assert_eq!(elapsed_active(&[span(0, 0.0, 5.0)], 3.0), 3.0);
        assert_eq!(elapsed_active(&[span(0, 0.0, 5.0)], 6.0), 0.0);
        assert_eq!(elapsed_active(&[span(0, 0.0, 5.0)], 5.0), 0.0);
        assert_eq!(elapsed_active(&[span(0, 2.0, 4.0), span(0, 6.0, 10.0)], 7.0), 1.0);
        assert_eq!(period_length_at(&[span(0, 2.0, 4.0), span(0, 6.0, 10.0)], 7.0), 4.0);
    }

    #[test]
    fn bottleneck_argmax_and_ties() {
        assert_eq!(bottleneck_at(&ActivePeriodView::new(0.0, vec![3.0, 7.5, 1.0]), 0), 1);
        assert_eq!(bottleneck_at(&ActivePeriodView::new(0.0, vec![4.0, 4.0, 1.0]), 2), 0);
        assert_eq!(bottleneck_at(&ActivePeriodView::new(0.0, vec![0.0, 0.0, 0.0]), 2), 2);
    }

    #[test]
    fn two_station_handover_geometry() {
        // M1 active on [0, 10), M2 on [6, 15): M1 leads until it stops.
        let periods = vec![vec![span(0, 0.0, 10.0)], vec![span(1, 6.0, 15.0)]];
        let instants: Vec<f64> = (0..15).map(f64::from).collect();
        let views = views_at(&periods, &instants, ApmMode::Elapsed);
        let raw = detect_bottlenecks(&views);
        assert_eq!(raw[..10], [0; 10]);
        assert_eq!(raw[10..], [1; 5]);
        let series = classify_shifting(&periods, &instants, &raw);
        for s in &series.samples {
            let expected = if (6.0..10.0).contains(&s.t) {
                Classification::Shifting
            } else {
                Classification::Sole
            };
            assert_eq!(s.classification, expected, "t = {}", s.t);
        }
    }

    #[test]
    fn longer_running_station_is_sole_bottleneck_before_overlap() {
        // M2 started earlier than M1, so M2 is the bottleneck at t = 3.
        let periods = vec![vec![span(0, 2.0, 9.0)], vec![span(1, 0.0, 5.0)]];
        let view = ActivePeriodView::at(&periods, 3.0, ApmMode::Elapsed);
        assert!(view.durations[1] > view.durations[0]);
        assert_eq!(bottleneck_at(&view, 0), 1);
    }

    #[test]
    fn disjoint_consecutive_periods_are_sole() {
        let periods = vec![vec![span(0, 0.0, 5.0)], vec![span(1, 5.0, 12.0)]];
        let instants: Vec<f64> = (0..12).map(f64::from).collect();
        let raw = detect_bottlenecks(&views_at(&periods, &instants, ApmMode::Elapsed));
        let series = classify_shifting(&periods, &instants, &raw);
        assert!(series
            .samples
            .iter()
            .all(|s| s.classification == Classification::Sole));
    }

    #[test]
    fn cursor_views_match_point_queries() {
        let periods = vec![
            vec![span(0, 0.0, 2.5), span(0, 3.0, 9.0)],
            vec![span(1, 1.0, 4.0), span(1, 4.5, 4.75), span(1, 6.0, 10.0)],
        ];
        let instants: Vec<f64> = (0..40).map(|i| i as f64 * 0.25).collect();
        for mode in [ApmMode::Elapsed, ApmMode::Retrospective] {
            let views = views_at(&periods, &instants, mode);
            for v in views {
                assert_eq!(v, ActivePeriodView::at(&periods, v.t, mode));
            }
        }
    }

    #[test]
    fn retrospective_mode_uses_full_length() {
        let periods = vec![vec![span(0, 0.0, 10.0)], vec![span(1, 6.0, 20.0)]];
        let v = ActivePeriodView::at(&periods, 7.0, ApmMode::Retrospective);
        assert_eq!(v.durations, vec![10.0, 14.0]);
        assert_eq!(bottleneck_at(&v, 0), 1);
    }
}
