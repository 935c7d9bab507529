use proptest::prelude::*;
use skytrace_core::geo::mercator::{project, tile_of, unproject, MAX_LATITUDE};
use skytrace_core::geo::*;
use skytrace_core::model::{get_series, AttributeRef, TimeSeries, TimeWindow};
use skytrace_core::ulog::parse_log;
use skytrace_testkit::{data_dir, oracle, read_fixture, scenarios, test_hierarchy};

#[test]
fn trajectory_matches_reference_fix_count() {
    let cfg = test_hierarchy();
    for name in skytrace_testkit::REAL_LOGS {
        let log = parse_log(&read_fixture(name)).unwrap();
        let dump = oracle::load(&data_dir().join(name).with_extension("oracle.json"));
        let expected = dump["gps"]["valid"].as_u64();
        let traj = build_trajectory(&log, &cfg.recorded[0]);
        match expected {
            Some(n) if n > 0 => {
                let traj = traj.unwrap();
                assert!(traj.len() as u64 <= n, "{name}");
                assert!(traj.windows(2).all(|w| w[0].timestamp_us < w[1].timestamp_us));
            }
            _ => assert!(traj.is_err(), "{name}"),
        }
    }
}

#[test]
fn rc_loss_trajectory() {
    let log = parse_log(&scenarios::rc_loss_log()).unwrap();
    let cfg = test_hierarchy();
    let traj = build_trajectory(&log, &cfg.recorded[0]).unwrap();
    assert_eq!(traj.len(), 296);
    let segs = segments(&traj).unwrap();
    assert_eq!(segs.len(), traj.len() - 1);
    assert!(segs.windows(2).all(|w| w[0].end == w[1].start));

    let lost = get_series(&log, &AttributeRef::parse("input_rc.rc_lost").unwrap(), None).unwrap();
    let aligned = align_attribute(&segs, &lost);
    let flips = aligned.windows(2).filter(|w| w[0].value != w[1].value).count();
    assert_eq!(flips, 1);

    assert!(matches!(build_trajectory(&log, &cfg.setpoints[0]), Err(GeoError::NoPosition)));
}

#[test]
fn degenerate_and_out_of_range() {
    let one = [GeoSample { timestamp_us: 0, lat: 0.0, lon: 0.0, alt_m: None }];
    assert!(matches!(segments(&one), Err(GeoError::DegenerateTrajectory)));
    assert!(matches!(project(91.0, 0.0), Err(GeoError::LatitudeOutOfRange(_))));
    assert_eq!(tile_of(47.397742, 8.545594, 16).unwrap(), (34323, 22944));
}

fn sample(t: u64) -> GeoSample {
    GeoSample { timestamp_us: t, lat: t as f64 * 1e-6, lon: 0.0, alt_m: None }
}

fn arb_segments() -> impl Strategy<Value = Vec<Segment>> {
    proptest::collection::btree_set(0u64..10_000, 2..80).prop_map(|ts| {
        let traj: Vec<_> = ts.into_iter().map(sample).collect();
        segments(&traj).unwrap()
    })
}

fn arb_series() -> impl Strategy<Value = TimeSeries> {
    proptest::collection::btree_map(0u64..10_000, prop_oneof![Just(f64::NAN), -9.0f64..9.0], 0..80)
        .prop_map(|m| {
            let (t, v) = m.into_iter().unzip();
            TimeSeries::new(AttributeRef::new("m", 0, "v"), t, v)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn alignment_is_last_observation(segs in arb_segments(), s in arb_series()) {
        let aligned = align_attribute(&segs, &s);
        for a in &aligned {
            let brute = s.timestamps.iter().zip(&s.values)
                .filter(|(t, _)| **t <= a.t_start_us)
                .last()
                .map(|(_, v)| *v)
                .filter(|v| !v.is_nan());
            prop_assert_eq!(a.value.map(f64::to_bits), brute.map(f64::to_bits));
        }
    }

    #[test]
    fn window_split_partitions(segs in arb_segments(), a in 0u64..11_000, b in 0u64..11_000) {
        let w = TimeWindow::new(a.min(b), a.max(b)).unwrap();
        let (inside, outside) = split_by_window(&segs, &w);
        prop_assert_eq!(inside.len() + outside.len(), segs.len());
        prop_assert!(inside.iter().all(|s| w.contains(s.t_start_us)));
        prop_assert!(outside.iter().all(|s| !w.contains(s.t_start_us)));
        let mut merged = inside.clone();
        merged.extend(outside);
        merged.sort_by_key(|s| s.t_start_us);
        prop_assert_eq!(merged, segs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn projection_round_trip(lat in -MAX_LATITUDE..MAX_LATITUDE, lon in -179.999f64..180.0) {
        let (x, y) = project(lat, lon).unwrap();
        let (lat2, lon2) = unproject(x, y);
        prop_assert!((lat - lat2).abs() < 1e-9 && (lon - lon2).abs() < 1e-9);
    }

    #[test]
    fn simplification_properties(
        steps in proptest::collection::vec((0.1f64..5.0, -5.0f64..5.0), 0..300),
        tol in 0.01f64..4.0,
    ) {
        let mut pts = Vec::with_capacity(steps.len());
        let mut x = 0.0;
        let mut y = 0.0;
        for (dx, dy) in steps {
            x += dx;
            y += dy;
            pts.push(Point::new(x, y));
        }
        prop_assert_eq!(simplify(&pts, 0.0, false), pts.clone());
        for hq in [false, true] {
            let idx = simplify_indices(&pts, tol, hq);
            if pts.is_empty() {
                prop_assert!(idx.is_empty());
                continue;
            }
            prop_assert_eq!(idx[0], 0);
            prop_assert_eq!(*idx.last().unwrap(), pts.len() - 1);
            prop_assert!(idx.windows(2).all(|w| w[0] < w[1]));
            if hq {
                let kept: Vec<Point> = idx.iter().map(|&i| pts[i]).collect();
                prop_assert_eq!(simplify(&kept, tol, true), kept);
                let coarser = simplify_indices(&pts, tol * 2.0, true);
                prop_assert!(coarser.len() <= idx.len());
                for w in idx.windows(2) {
                    for p in &pts[w[0]..w[1]] {
                        let d = sq_segment_dist(*p, pts[w[0]], pts[w[1]]);
                        prop_assert!(d <= tol * tol * (1.0 + 1e-9));
                    }
                }
            }
        }
    }
}

#[test]
fn high_rate_series_fits_chart_budget() {
    let log = parse_log(&read_fixture("px4_sample_small.ulg")).unwrap();
    let mut checked = 0;
    for s in log.series().values() {
        let ts = &s.timestamps;
        if ts.len() < 100 {
            continue;
        }
        let span = (ts[ts.len() - 1] - ts[0]) as f64 * 1e-6;
        if ts.len() as f64 / span < 60.0 {
            continue;
        }
        for col in &s.columns {
            let values = col.to_f64_vec();
            let kept = simplify_chart(ts, &values, &ChartBudget::new(800.0));
            assert!(kept.len() <= 2000);
            assert_eq!(kept[0], 0);
            assert_eq!(*kept.last().unwrap(), ts.len() - 1);
            checked += 1;
        }
    }
    assert!(checked > 0);

    let ts: Vec<u64> = (0..200_000).map(|i| i * 5_000).collect();
    let values: Vec<f64> = ts.iter().map(|t| (*t as f64 * 1e-6).sin() * 3.0).collect();
    let kept = simplify_chart(&ts, &values, &ChartBudget::new(1200.0));
    assert!(kept.len() <= 2000);
    let exact = ChartBudget { tolerance_px: 0.0, ..ChartBudget::new(1200.0) };
    assert_eq!(simplify_chart(&ts, &values, &exact).len(), ts.len());
}

#[test]
fn chart_gaps_are_kept() {
    let ts: Vec<u64> = (0..10).collect();
    let mut values = vec![1.0; 10];
    values[4] = f64::NAN;
    values[5] = f64::NAN;
    let kept = simplify_chart(&ts, &values, &ChartBudget::new(100.0));
    assert_eq!(kept, [0, 3, 4, 5, 6, 9]);
}
