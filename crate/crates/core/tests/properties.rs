use bottleneck_lab::active_period::{views_at, ActivePeriodView};
use bottleneck_lab::metrics::StationAggregate;
use bottleneck_lab::sim::station_rng;
use bottleneck_lab::*;
use proptest::prelude::*;

fn periods_strategy() -> impl Strategy<Value = Vec<ActivePeriod>> {
    prop::collection::vec((0.1f64..5.0, 0.1f64..5.0), 0..8).prop_map(|gaps| {
        let mut t = 0.0;
        gaps.into_iter()
            .map(|(idle, busy)| {
                let start = t + idle;
                t = start + busy;
                ActivePeriod {
                    station_id: 0,
                    start,
                    end: t,
                }
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn elapsed_grows_with_unit_slope_inside_periods(periods in periods_strategy(), probe in 0.0f64..60.0, dt in 0.0f64..0.05) {
        let a = elapsed_active(&periods, probe);
        let b = elapsed_active(&periods, probe + dt);
        prop_assert!(a >= 0.0);
        match periods.iter().find(|p| p.contains(probe)) {
            Some(p) if p.contains(probe + dt) => prop_assert!((b - a - dt).abs() < 1e-9),
            Some(p) => {
                prop_assert!((a - (probe - p.start)).abs() < 1e-12);
                // Reset once the period is over, unless the next one started.
                if !periods.iter().any(|q| q.contains(probe + dt)) {
                    prop_assert_eq!(b, 0.0);
                }
            }
            None => prop_assert_eq!(a, 0.0),
        }
    }

    #[test]
    fn bottleneck_is_scale_invariant(bs in prop::collection::vec(0.0f64..100.0, 2..9), scale in 0.01f64..100.0, prev in 0usize..2) {
        let view = ActivePeriodView::new(0.0, bs.clone());
        let scaled = ActivePeriodView::new(0.0, bs.iter().map(|x| x * scale).collect());
        prop_assert_eq!(bottleneck_at(&view, prev), bottleneck_at(&scaled, prev));
    }

    #[test]
    fn severity_is_scale_invariant_and_normalized(bs in prop::collection::vec(0.0f64..100.0, 2..9), scale in 0.01f64..100.0) {
        let view = ActivePeriodView::new(0.0, bs.clone());
        let scaled = ActivePeriodView::new(0.0, bs.iter().map(|x| x * scale).collect());
        match (relative_bottleneck_severity(&view), relative_bottleneck_severity(&scaled)) {
            (Severity::Defined(a), Severity::Defined(b)) => {
                let bn = bottleneck_at(&view, 0);
                prop_assert_eq!(a[bn], 1.0);
                prop_assert_eq!(a.iter().copied().fold(0.0, f64::max), 1.0);
                for (x, y) in a.iter().zip(&b) {
                    prop_assert!((0.0..=1.0).contains(x));
                    prop_assert!((x - y).abs() < 1e-12);
                }
            }
            (Severity::NoActivity, Severity::NoActivity) => prop_assert!(bs.iter().all(|&x| x == 0.0)),
            _ => prop_assert!(false, "scaling changed definedness"),
        }
    }

    #[test]
    fn frequencies_partition_the_series(stations in prop::collection::vec(0usize..7, 1..500)) {
        let series = BottleneckSeries {
            num_stations: 7,
            samples: stations.iter().enumerate().map(|(i, &s)| BottleneckSample {
                t: i as f64,
                station_id: s,
                classification: Classification::Sole,
            }).collect(),
        };
        let report = relative_bottleneck_frequency(&series).unwrap();
        let total: u64 = (0..7).map(|s| bottleneck_frequency(&series, s)).sum();
        prop_assert_eq!(total, stations.len() as u64);
        prop_assert_eq!(report.bf.iter().sum::<u64>(), stations.len() as u64);
        prop_assert!((report.rbf.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(report.rbf.iter().all(|r| (0.0..=1.0).contains(r)));
    }

    #[test]
    fn aggregation_ignores_run_order(rows in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 4), 1..12), rot in 0usize..12) {
        let reports: Vec<FrequencyReport> = rows.iter().map(|r| FrequencyReport { bf: vec![0; 4], rbf: r.clone(), n: 1 }).collect();
        let mut shuffled = reports.clone();
        let k = rot % shuffled.len();
        shuffled.rotate_left(k);
        shuffled.reverse();
        let a = aggregate_runs(&reports, &[]).unwrap();
        let b = aggregate_runs(&shuffled, &[]).unwrap();
        prop_assert_eq!(&a, &b);
        for StationAggregate { rbf_mean, rbf_min, rbf_max, .. } in &a.stations {
            prop_assert!(rbf_min <= rbf_mean && rbf_mean <= rbf_max);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn simulated_lines_keep_their_invariants(
        n in 2usize..7,
        cap in 1usize..6,
        level in prop_oneof![Just(Variability::Low), Just(Variability::Medium), Just(Variability::High)],
        uplifted in 0usize..7,
        seed in any::<u64>(),
    ) {
        let mut cfg = LineConfig::uniform(n, 2.0, level, seed);
        cfg.buffer_capacity = cap;
        cfg.settling_time = 100.0;
        cfg.observation_length = 1_000;
        if uplifted < n {
            cfg = cfg.with_uplift(uplifted, 0.125);
        }
        let run = run_simulation(&cfg).unwrap();
        prop_assert_eq!(run.timelines.len(), n);
        for tl in &run.timelines {
            let iv = tl.intervals();
            prop_assert_eq!(iv[0].start, 0.0);
            prop_assert_eq!(tl.end(), cfg.horizon());
            for w in iv.windows(2) {
                prop_assert_eq!(w[0].end, w[1].start);
                prop_assert!(w[0].state != w[1].state);
            }
            prop_assert!(iv.iter().all(|i| i.end > i.start));
        }
        for b in &run.buffers {
            prop_assert_eq!(b.entered, b.left + b.final_occupancy as u64);
            prop_assert!(b.max_occupancy <= cap);
        }

        // Every sample instant has an active station, so severity is defined
        // and elapsed durations are positive exactly for active stations.
        let periods: Vec<_> = run.timelines.iter().map(extract_active_periods).collect();
        let instants: Vec<f64> = cfg.sample_instants().collect();
        for v in views_at(&periods, &instants, ApmMode::Elapsed) {
            prop_assert!(v.max_duration() > 0.0);
            for (s, &d) in v.durations.iter().enumerate() {
                let active = run.timelines[s].state_at(v.t).unwrap() == StationState::Active;
                prop_assert!(d >= 0.0);
                if d > 0.0 {
                    prop_assert!(active);
                }
            }
        }

        let again = run_simulation(&cfg).unwrap();
        prop_assert_eq!(&run.timelines, &again.timelines);
        prop_assert_eq!(run.parts_produced, again.parts_produced);
    }
}

#[test]
fn uplifted_station_mean_over_a_million_draws() {
    let spec = StationSpec::new(0, 2.0).with_uplift(0.125);
    let mut rng = station_rng(10, 0);
    let n = 1_000_000;
    let mean = (0..n)
        .map(|_| sample_process_time(&spec, Variability::Medium, &mut rng))
        .sum::<f64>()
        / n as f64;
    assert!((mean - 2.25).abs() < 0.01, "mean {mean}");
}

#[test]
fn medium_variability_variance_over_a_million_draws() {
    // Shifted exponential with scale m * v = 1.0 has variance 1.0.
    let spec = StationSpec::new(0, 2.0);
    let mut rng = station_rng(11, 0);
    let draws: Vec<f64> = (0..1_000_000)
        .map(|_| sample_process_time(&spec, Variability::Medium, &mut rng))
        .collect();
    let n = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / n;
    let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((var - 1.0).abs() < 0.02, "variance {var}");
    assert!(draws.iter().all(|&d| d >= 1.0));
}
