//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if
//! any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant, SystemTime};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use skytrace::config::AnalysisConfig;
use skytrace::query::{self, TrajectoryQuery};
use skytrace::service::{self, ServiceConfig};
use skytrace_core::encoding::{cie_lightness, make_scale, map_value, palette, Domain, ScaleKind};
use skytrace_core::geo::{
    build_trajectory, segments, simplify_chart, simplify_indices, split_by_window, sq_segment_dist,
    ChartBudget, Point, Segment,
};
use skytrace_core::model::{extract_events, get_series, AttributeRef, LayerKind, TimeWindow};
use skytrace_core::ulog::{parse_log, FlightLog};
use skytrace_testkit::{data_dir, oracle, read_fixture, scenarios, synthetic_fixtures};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

/// Parse time limit for a log over 30 MB.
const LARGE_LOG_BYTES: usize = 30 * 1024 * 1024 + 1;
const LARGE_LOG_LIMIT: Duration = Duration::from_secs(5);
const FUZZ_INPUTS: usize = 100_000;
const POLYLINES: usize = 1000;
const CHART_POINT_BUDGET: usize = 2000;
const HIGH_RATE_HZ: f64 = 60.0;
const WINDOW_CASES: usize = 10_000;

fn main() {
    let criteria: [(&str, Check); 7] = [
        ("parser conformance", parser_conformance),
        ("fuzz totality", fuzz_totality),
        ("simplification suite", simplification_suite),
        ("windowing algebra", windowing_algebra),
        ("color invariants", color_invariants),
        ("rc-loss scenario replay", rc_loss_replay),
        ("zero persistence", zero_persistence),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(check).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.1} s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} [{secs:.1} s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn parser_conformance() -> Outcome {
    let mut logs = 0;
    for name in skytrace_testkit::REAL_LOGS {
        let log = parse_log(&read_fixture(name)).map_err(|e| format!("{name}: {e}"))?;
        let dump = oracle::load(&data_dir().join(name).with_extension("oracle.json"));
        let diffs = oracle::compare(&log, &dump);
        ensure(diffs.is_empty(), || format!("{name}: {} differences, first: {}", diffs.len(), diffs[0]))?;
        logs += 1;
    }
    let bytes = scenarios::large_log(LARGE_LOG_BYTES);
    let started = Instant::now();
    let log = parse_log(&bytes).map_err(|e| format!("large log: {e}"))?;
    let took = started.elapsed();
    let records: usize = log.series().values().map(|s| s.len()).sum();
    ensure(took < LARGE_LOG_LIMIT, || format!("{} byte log took {took:.2?}", bytes.len()))?;
    Ok(format!(
        "{logs} sample logs match the reference dump field for field; {:.1} MB ({records} records) parsed in {:.2} s",
        bytes.len() as f64 / 1e6,
        took.as_secs_f64()
    ))
}

fn mutate(rng: &mut ChaCha8Rng, seed: &[u8]) -> Vec<u8> {
    if rng.random_ratio(1, 10) {
        let mut v = vec![0u8; rng.random_range(0..4096)];
        rng.fill(&mut v[..]);
        if rng.random_bool(0.5) && v.len() >= 16 {
            v[..16].copy_from_slice(&seed[..16]);
        }
        return v;
    }
    let mut v = seed.to_vec();
    for _ in 0..rng.random_range(1..8) {
        let len = v.len().max(1);
        match rng.random_range(0..6) {
            0 => {
                let i = rng.random_range(0..len);
                if let Some(b) = v.get_mut(i) {
                    *b ^= 1 << rng.random_range(0..8);
                }
            }
            1 => {
                let i = rng.random_range(0..len);
                if let Some(b) = v.get_mut(i) {
                    *b = [0x00, 0xff, 0x7f, 0x80][rng.random_range(0..4)];
                }
            }
            2 => v.truncate(rng.random_range(0..len)),
            3 => {
                let i = rng.random_range(0..=v.len());
                let mut extra = vec![0u8; rng.random_range(1..64)];
                rng.fill(&mut extra[..]);
                v.splice(i..i, extra);
            }
            4 => {
                let a = rng.random_range(0..len);
                let b = (a + rng.random_range(1..256)).min(v.len());
                let chunk = v.get(a..b).map(<[u8]>::to_vec).unwrap_or_default();
                let at = rng.random_range(0..=v.len());
                v.splice(at..at, chunk);
            }
            _ => {
                // rewrite a record size field to something hostile
                let i = rng.random_range(0..len);
                if i + 1 < v.len() {
                    let size: u16 = rng.random();
                    v[i..i + 2].copy_from_slice(&size.to_le_bytes());
                }
            }
        }
    }
    v
}

fn fuzz_totality() -> Outcome {
    let mut seeds: Vec<Vec<u8>> = synthetic_fixtures().into_iter().map(|(_, b)| b).collect();
    seeds.push(read_fixture("short_list.ulg"));
    seeds.push(read_fixture("trig_stats.ulg"));
    // definitions and the first data records of a real log
    seeds.push(read_fixture("px4_sample_small.ulg")[..24 * 1024].to_vec());
    seeds.retain(|s| s.len() < 200_000);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut ok, mut err) = (0, 0);
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let mut crash = None;
    for i in 0..FUZZ_INPUTS {
        let seed = &seeds[rng.random_range(0..seeds.len())];
        let input = mutate(&mut rng, seed);
        match catch_unwind(AssertUnwindSafe(|| parse_log(&input).map(|log| consistent(&log)))) {
            Ok(Ok(true)) => ok += 1,
            Ok(Ok(false)) => {
                crash = Some(format!("input {i}: inconsistent log"));
                break;
            }
            Ok(Err(_)) => err += 1,
            Err(_) => {
                crash = Some(format!("input {i} ({} bytes) panicked", input.len()));
                break;
            }
        }
    }
    std::panic::set_hook(hook);
    if let Some(c) = crash {
        return Err(c);
    }
    Ok(format!("{FUZZ_INPUTS} mutated inputs: {ok} logs, {err} typed errors, 0 crashes"))
}

fn consistent(log: &FlightLog) -> bool {
    log.series().values().all(|s| {
        s.columns.len() == s.schema.fields.len()
            && s.columns.iter().all(|c| c.len() == s.timestamps.len())
            && s.timestamps.windows(2).all(|w| w[0] <= w[1])
    })
}

fn simplification_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..POLYLINES {
        let n = rng.random_range(0..600);
        let (mut x, mut y) = (0.0, 0.0);
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                x += rng.random_range(0.0..3.0);
                y += rng.random_range(-4.0..4.0);
                Point::new(x, y)
            })
            .collect();
        let tol = rng.random_range(0.01..6.0);
        let fail = |what: &str| format!("polyline {case} (n={n}, tol={tol:.3}): {what}");
        ensure(simplify_indices(&pts, 0.0, true).len() == n, || fail("tolerance 0 changed the line"))?;
        // served charts use the Douglas-Peucker pass alone
        let idx = simplify_indices(&pts, tol, true);
        ensure(idx.len() <= n, || fail("more points than input"))?;
        if n == 0 {
            continue;
        }
        ensure(idx[0] == 0 && idx[idx.len() - 1] == n - 1, || fail("endpoint dropped"))?;
        for w in idx.windows(2) {
            for p in &pts[w[0] + 1..w[1]] {
                let d = sq_segment_dist(*p, pts[w[0]], pts[w[1]]).sqrt();
                ensure(d <= tol * (1.0 + 1e-12), || fail(&format!("removed point {d} from chain")))?;
            }
        }
        let kept: Vec<Point> = idx.iter().map(|&i| pts[i]).collect();
        ensure(simplify_indices(&kept, tol, true).len() == kept.len(), || fail("not idempotent"))?;
        let coarser = tol * rng.random_range(1.0..4.0);
        ensure(simplify_indices(&pts, coarser, true).len() <= idx.len(), || fail("count grew with tolerance"))?;
    }

    let (mut columns, mut escalated, mut worst) = (0, 0, 0);
    for name in skytrace_testkit::REAL_LOGS {
        let log = parse_log(&read_fixture(name)).unwrap();
        for s in log.series().values() {
            let ts = &s.timestamps;
            if ts.len() < 2 || ts[ts.len() - 1] == ts[0] {
                continue;
            }
            let rate = ts.len() as f64 / ((ts[ts.len() - 1] - ts[0]) as f64 * 1e-6);
            if rate < HIGH_RATE_HZ || ts.len() <= CHART_POINT_BUDGET {
                continue;
            }
            for (f, col) in s.schema.fields.iter().zip(&s.columns) {
                let values = col.to_f64_vec();
                let budget = ChartBudget::new(1280.0);
                let kept = simplify_chart(ts, &values, &budget).len();
                ensure(kept <= CHART_POINT_BUDGET, || format!("{}.{}: {kept} points", s.schema.name, f.name))?;
                let exact = ChartBudget { tolerance_px: 0.0, ..budget };
                ensure(simplify_chart(ts, &values, &exact).len() == ts.len(), || {
                    format!("{}.{}: tolerance 0 dropped points", s.schema.name, f.name)
                })?;
                let plain = ChartBudget { max_points: None, ..budget };
                if simplify_chart(ts, &values, &plain).len() > CHART_POINT_BUDGET {
                    escalated += 1;
                }
                worst = worst.max(kept);
                columns += 1;
            }
        }
    }
    ensure(columns > 0, || "no series at 60+ Hz with more than 2000 records".into())?;
    Ok(format!(
        "{POLYLINES} polylines sound; {columns} columns at >= {HIGH_RATE_HZ} Hz drawn with <= {worst} points \
         ({escalated} needed tolerance above {} px to meet the {CHART_POINT_BUDGET}-point budget); tolerance 0 is the identity",
        ChartBudget::new(0.0).tolerance_px
    ))
}

fn windowing_algebra() -> Outcome {
    let log = parse_log(&read_fixture("px4_sample_small.ulg")).unwrap();
    let attrs: Vec<AttributeRef> = log
        .series()
        .values()
        .flat_map(|s| {
            s.schema
                .fields
                .iter()
                .step_by(3)
                .map(|f| AttributeRef::new(s.schema.name.clone(), s.schema.multi_id, f.name.clone()))
        })
        .collect();
    let cfg = AnalysisConfig::default();
    let samples = build_trajectory(&log, &cfg.hierarchy.estimated[0]).unwrap();
    let segs: Vec<Segment> = segments(&samples).unwrap();
    let (t0, t1) = (log.start_boot_us(), log.last_timestamp_us());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let window = |rng: &mut ChaCha8Rng| {
        let a = rng.random_range(t0.saturating_sub(1_000_000)..t1 + 1_000_000);
        let b = rng.random_range(t0.saturating_sub(1_000_000)..t1 + 1_000_000);
        TimeWindow::new(a.min(b), a.max(b)).unwrap()
    };
    for case in 0..WINDOW_CASES {
        let attr = &attrs[rng.random_range(0..attrs.len())];
        let full = get_series(&log, attr, None).map_err(|e| e.to_string())?;
        let (a, b) = (window(&mut rng), window(&mut rng));
        let fail = |what: &str| format!("case {case} {attr} {a:?} {b:?}: {what}");
        if let (Some(&first), Some(&last)) = (full.timestamps.first(), full.timestamps.last()) {
            let span = TimeWindow::new(first, last).unwrap();
            ensure(get_series(&log, attr, Some(&span)).unwrap() == full, || fail("identity"))?;
        }
        let in_a = get_series(&log, attr, Some(&a)).unwrap();
        let composed = in_a.window(&b);
        match a.intersect(&b) {
            Some(ab) => ensure(composed == get_series(&log, attr, Some(&ab)).unwrap(), || fail("composition"))?,
            None => ensure(composed.is_empty(), || fail("disjoint windows kept points"))?,
        }

        let (inside, outside) = split_by_window(&segs, &a);
        ensure(inside.len() + outside.len() == segs.len(), || fail("split lost segments"))?;
        ensure(inside.iter().all(|s| a.contains(s.t_start_us)), || fail("outside segment kept"))?;
        ensure(outside.iter().all(|s| !a.contains(s.t_start_us)), || fail("inside segment dropped"))?;
        let mut merged = [inside, outside].concat();
        merged.sort_by_key(|s| s.t_start_us);
        ensure(merged == segs, || fail("split is not a partition"))?;
    }
    Ok(format!(
        "{WINDOW_CASES} random cases over {} attributes and {} segments: identity, composition and partition hold",
        attrs.len(),
        segs.len()
    ))
}

fn color_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let min: f64 = rng.random_range(-1e6..1e6);
        let max = min + rng.random_range(1e-3..1e6);
        let s = make_scale(ScaleKind::Sequential, Domain::Continuous { min, max }).map_err(|e| e.to_string())?;
        let (lo, hi) = (map_value(&s, Some(min)).to_hex(), map_value(&s, Some(max)).to_hex());
        ensure(lo == "#f95e3f" && hi == "#16132e", || format!("[{min}, {max}] maps to {lo}..{hi}"))?;
        ensure(map_value(&s, None) == palette::NO_DATA, || "missing value not gray".into())?;
        ensure(map_value(&s, Some(f64::NAN)).to_hex() == "#9e9e9e", || "NaN not gray".into())?;
    }
    let l: Vec<f64> = palette::SEQUENTIAL.iter().map(|c| cie_lightness(*c)).collect();
    ensure(l.windows(2).all(|w| w[1] < w[0]), || format!("L* of stops {l:?}"))?;
    let shown: Vec<String> = l.iter().map(|v| format!("{v:.1}")).collect();
    Ok(format!(
        "min -> #f95e3f, max -> #16132e, no-data -> #9e9e9e over 1000 domains; stop L* {}",
        shown.join(" > ")
    ))
}

fn rc_loss_replay() -> Outcome {
    let log = parse_log(&scenarios::rc_loss_log()).map_err(|e| e.to_string())?;
    let cfg = AnalysisConfig::default();
    let q = TrajectoryQuery {
        attr: Some(AttributeRef::new("input_rc", 0, "rc_lost")),
        ..TrajectoryQuery::new(LayerKind::Recorded)
    };
    let view = query::trajectory(&log, &cfg, &q).map_err(|e| e.to_string())?;
    let values = view.segments.values.unwrap();
    let colors = view.segments.colors.unwrap();
    let flips: Vec<usize> = (1..values.len()).filter(|&i| values[i] != values[i - 1]).collect();
    let color_flips = (1..colors.len()).filter(|&i| colors[i] != colors[i - 1]).count();
    ensure(flips.len() == 1 && color_flips == 1, || {
        format!("{} value flips, {color_flips} color flips", flips.len())
    })?;
    let flip_us = view.points.timestamps[flips[0]];

    let events = extract_events(&log, &cfg.hierarchy);
    let failsafe = events
        .iter()
        .find(|e| e.failsafe && e.timestamp_us >= flip_us)
        .ok_or("no failsafe/land mode event at or after the flip")?;

    let setpoint = get_series(&log, &AttributeRef::new("position_setpoint_triplet", 0, "current.lat"), None)
        .map_err(|e| e.to_string())?;
    let path = query::trajectory(&log, &cfg, &TrajectoryQuery::new(LayerKind::Setpoints)).map_err(|e| e.to_string())?;
    ensure(setpoint.is_empty() && path.points.timestamps.is_empty(), || {
        format!("setpoint series has {} records", setpoint.len())
    })?;
    Ok(format!(
        "synthetic log: rc_lost flips once at {:.2} s over {} segments; '{}' entered at {:.2} s; setpoint series empty",
        flip_us as f64 * 1e-6,
        values.len(),
        failsafe.label,
        failsafe.timestamp_us as f64 * 1e-6
    ))
}

type Snapshot = BTreeMap<PathBuf, (u64, Option<SystemTime>)>;

fn snapshot(roots: &[PathBuf]) -> Snapshot {
    let mut files = Snapshot::new();
    for root in roots {
        let walk = walkdir::WalkDir::new(root)
            .into_iter()
            .filter_entry(|e| !matches!(e.file_name().to_str(), Some("target" | ".git")));
        for entry in walk.filter_map(Result::ok) {
            if let Ok(md) = entry.metadata() {
                if md.is_file() {
                    files.insert(entry.path().to_path_buf(), (md.len(), md.modified().ok()));
                }
            }
        }
    }
    files
}

async fn http(addr: std::net::SocketAddr, method: &str, path: &str, body: &[u8]) -> (u16, Vec<u8>) {
    use tokio::io::{AsyncReadExt, AsyncWriteExt};
    let mut stream = tokio::net::TcpStream::connect(addr).await.unwrap();
    let head = format!(
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    );
    stream.write_all(head.as_bytes()).await.unwrap();
    stream.write_all(body).await.unwrap();
    let mut raw = Vec::new();
    stream.read_to_end(&mut raw).await.unwrap();
    let split = raw.windows(4).position(|w| w == b"\r\n\r\n").unwrap();
    let status = std::str::from_utf8(&raw[9..12]).unwrap().parse().unwrap();
    (status, raw[split + 4..].to_vec())
}

fn zero_persistence() -> Outcome {
    let workspace = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap();
    let roots = [workspace, std::env::temp_dir()];
    let uploads: Vec<Vec<u8>> = skytrace_testkit::REAL_LOGS
        .iter()
        .map(|n| read_fixture(n))
        .chain([scenarios::rc_loss_log(), b"not a log at all".to_vec()])
        .collect();

    let before = snapshot(&roots);
    let rt = tokio::runtime::Runtime::new().unwrap();
    let requests = rt.block_on(async {
        let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
        let addr = listener.local_addr().unwrap();
        let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
        let server = tokio::spawn(service::run(listener, ServiceConfig::default(), async {
            let _ = stopped.await;
        }));
        let mut requests = 0;
        for bytes in &uploads {
            let (status, body) = http(addr, "POST", "/logs", bytes).await;
            requests += 1;
            if status != 200 {
                continue;
            }
            let id = serde_json::from_slice::<Value>(&body).unwrap()["id"].as_str().unwrap().to_string();
            for q in [
                "meta",
                "messages",
                "events",
                "overview",
                "trajectory?attr=battery&zoom=14",
                "trajectory?layer=estimated&start=0&end=20000000",
                "series?msg=vehicle_status&field=nav_state&px=600",
                "export.geojson?attr=battery",
            ] {
                http(addr, "GET", &format!("/logs/{id}/{q}"), b"").await;
                requests += 1;
            }
            let (status, _) = http(addr, "DELETE", &format!("/logs/{id}"), b"").await;
            assert_eq!(status, 204);
            requests += 1;
        }
        stop.send(()).unwrap();
        server.await.unwrap().unwrap();
        requests
    });
    let after = snapshot(&roots);
    let changed: Vec<_> = after
        .iter()
        .filter(|(p, meta)| before.get(*p) != Some(meta))
        .map(|(p, _)| p.display().to_string())
        .collect();
    ensure(changed.is_empty(), || format!("files created or modified: {changed:?}"))?;
    Ok(format!(
        "{requests} requests over TCP for {} uploads; {} files under {} roots unchanged",
        uploads.len(),
        before.len(),
        roots.len()
    ))
}
