use std::time::Duration;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use proptest::prelude::*;
use serde_json::Value;
use skytrace::service::{router, ServiceConfig};
use skytrace_core::ulog::parse_log;
use skytrace_testkit::{read_fixture, scenarios};
use tower::ServiceExt;

fn rt() -> tokio::runtime::Runtime {
    tokio::runtime::Builder::new_current_thread().enable_all().build().unwrap()
}

async fn call(app: &Router, method: Method, uri: &str, body: Vec<u8>) -> (StatusCode, Vec<u8>) {
    let req = Request::builder().method(method).uri(uri).body(Body::from(body)).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    (status, resp.into_body().collect().await.unwrap().to_bytes().to_vec())
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    let (s, b) = call(app, Method::GET, uri, Vec::new()).await;
    (s, serde_json::from_slice(&b).unwrap_or(Value::Null))
}

async fn open(app: &Router, bytes: Vec<u8>) -> (String, Value) {
    let (s, b) = call(app, Method::POST, "/logs", bytes).await;
    assert_eq!(s, StatusCode::OK, "{}", String::from_utf8_lossy(&b));
    let v: Value = serde_json::from_slice(&b).unwrap();
    (v["id"].as_str().unwrap().to_string(), v["meta"].clone())
}

fn app() -> Router {
    router(ServiceConfig::default()).0
}

#[test]
fn upload_and_meta() {
    rt().block_on(async {
        let app = app();
        let (id, meta) = open(&app, read_fixture("px4_sample_small.ulg")).await;
        assert_eq!(id.len(), 32);
        assert_eq!(meta["message_count"], 107);
        assert_eq!(meta["layers"]["recorded"]["source"], "vehicle_gps_position");
        let (s, again) = get(&app, &format!("/logs/{id}/meta")).await;
        assert_eq!(s, StatusCode::OK);
        assert_eq!(again, meta);

        let (s, msgs) = get(&app, &format!("/logs/{id}/messages")).await;
        assert_eq!(s, StatusCode::OK);
        assert_eq!(msgs.as_array().unwrap().len(), 107);
        let att = msgs.as_array().unwrap().iter().find(|m| m["name"] == "vehicle_attitude").unwrap();
        let roll = att["fields"].as_array().unwrap().iter().find(|f| f["name"] == "roll").unwrap();
        assert_eq!(roll["type"], "derived");
    });
}

#[test]
fn upload_errors() {
    rt().block_on(async {
        let app = app();
        let (s, b) = call(&app, Method::POST, "/logs", vec![7u8; 300]).await;
        assert_eq!(s, StatusCode::BAD_REQUEST);
        let v: Value = serde_json::from_slice(&b).unwrap();
        assert_eq!(v["error"], "MalformedHeader");

        let small = router(ServiceConfig { max_upload_bytes: 1024, ..Default::default() }).0;
        let (s, b) = call(&small, Method::POST, "/logs", read_fixture("trig_stats.ulg")).await;
        assert_eq!(s, StatusCode::PAYLOAD_TOO_LARGE);
        assert_eq!(serde_json::from_slice::<Value>(&b).unwrap()["error"], "TooLarge");

        let (s, v) = get(&app, "/logs/00000000000000000000000000000000/meta").await;
        assert_eq!(s, StatusCode::NOT_FOUND);
        assert_eq!(v["error"], "UnknownSession");
    });
}

#[test]
fn sessions_expire_and_close() {
    rt().block_on(async {
        let (app, state) = router(ServiceConfig { session_ttl: Duration::ZERO, ..Default::default() });
        let (id, _) = open(&app, read_fixture("trig_stats.ulg")).await;
        tokio::time::sleep(Duration::from_millis(5)).await;
        assert_eq!(get(&app, &format!("/logs/{id}/meta")).await.0, StatusCode::NOT_FOUND);
        assert_eq!(state.sessions.evict_idle(), 1);

        let app = self::app();
        let (id, _) = open(&app, read_fixture("trig_stats.ulg")).await;
        let uri = format!("/logs/{id}");
        assert_eq!(call(&app, Method::DELETE, &uri, vec![]).await.0, StatusCode::NO_CONTENT);
        assert_eq!(call(&app, Method::DELETE, &uri, vec![]).await.0, StatusCode::NOT_FOUND);
    });
}

#[test]
fn series_queries() {
    rt().block_on(async {
        let app = app();
        let bytes = read_fixture("px4_sample_small.ulg");
        let log = parse_log(&bytes).unwrap();
        let (id, _) = open(&app, bytes).await;

        let stored = log.get("vehicle_attitude", 0).unwrap();
        let q0 = stored.column("q[0]").unwrap().to_f64_vec();
        let (s, v) = get(&app, &format!("/logs/{id}/series?msg=vehicle_attitude&field=q[0]&tol=0")).await;
        assert_eq!(s, StatusCode::OK);
        let ts: Vec<u64> = v["timestamps"].as_array().unwrap().iter().map(|t| t.as_u64().unwrap()).collect();
        let vals: Vec<f64> = v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        assert_eq!(ts, stored.timestamps);
        assert_eq!(vals, q0);

        let (a, b) = (stored.timestamps[10], stored.timestamps[20]);
        let (_, v) = get(&app, &format!("/logs/{id}/series?msg=vehicle_attitude&field=q[0]&start={a}&end={b}&tol=0")).await;
        assert_eq!(v["total"], 11);

        let (_, v) = get(&app, &format!("/logs/{id}/series?msg=vehicle_attitude&field=q[0]&px=100")).await;
        assert!(v["timestamps"].as_array().unwrap().len() < stored.len());

        let (s, v) = get(&app, &format!("/logs/{id}/series?msg=vehicle_attitude&field=q[0]&start=9&end=3")).await;
        assert_eq!((s, v["error"].as_str()), (StatusCode::BAD_REQUEST, Some("InvalidWindow")));
        let (s, _) = get(&app, &format!("/logs/{id}/series?msg=vehicle_attitude&field=nope")).await;
        assert_eq!(s, StatusCode::NOT_FOUND);
        let (s, _) = get(&app, &format!("/logs/{id}/series?msg=vehicle_attitude")).await;
        assert_eq!(s, StatusCode::BAD_REQUEST);
    });
}

#[test]
fn trajectory_colors_span_the_palette() {
    rt().block_on(async {
        let app = app();
        let (id, _) = open(&app, read_fixture("px4_sample_small.ulg")).await;
        let (s, v) = get(&app, &format!("/logs/{id}/trajectory?layer=estimated&attr=vehicle_global_position.alt")).await;
        assert_eq!(s, StatusCode::OK);
        let values: Vec<f64> = v["segments"]["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        let colors = v["segments"]["colors"].as_array().unwrap();
        let n = v["points"]["timestamps"].as_array().unwrap().len();
        assert_eq!(values.len(), n - 1);
        let [min, max] = [v["domain"][0].as_f64().unwrap(), v["domain"][1].as_f64().unwrap()];
        let at = |x: f64| colors[values.iter().position(|v| *v == x).unwrap()].as_str().unwrap();
        assert_eq!(at(min), "#f95e3f");
        assert_eq!(at(max), "#16132e");

        let (_, z) = get(&app, &format!("/logs/{id}/trajectory?layer=estimated&zoom=10")).await;
        assert!(z["points"]["timestamps"].as_array().unwrap().len() < n);
        assert!(z.get("segments").unwrap().get("colors").is_none());

        let t = v["points"]["timestamps"].as_array().unwrap();
        let (a, b) = (t[3].as_u64().unwrap(), t[7].as_u64().unwrap());
        let (_, w) = get(&app, &format!("/logs/{id}/trajectory?layer=estimated&start={a}&end={b}")).await;
        let inside = w["segments"]["in_window"].as_array().unwrap().iter().filter(|f| f.as_bool().unwrap()).count();
        assert_eq!(inside, 5);

        assert_eq!(get(&app, &format!("/logs/{id}/trajectory?layer=sideways")).await.0, StatusCode::BAD_REQUEST);
        assert_eq!(get(&app, &format!("/logs/{id}/trajectory?attr=nope.x")).await.0, StatusCode::NOT_FOUND);
    });
}

#[test]
fn rc_loss_endpoints() {
    rt().block_on(async {
        let app = app();
        let (id, meta) = open(&app, scenarios::rc_loss_log()).await;
        assert_eq!(meta["layers"]["setpoints"]["records"], 0);

        let (_, ev) = get(&app, &format!("/logs/{id}/events")).await;
        let fs = ev.as_array().unwrap().iter().find(|e| e["failsafe"] == true).unwrap();
        assert_eq!(fs["label"], "Land");
        assert!(fs["timestamp_us"].as_u64().unwrap() >= scenarios::rc_loss::RC_LOST_US);

        let (s, sp) = get(&app, &format!("/logs/{id}/trajectory?layer=setpoints")).await;
        assert_eq!(s, StatusCode::OK);
        assert!(sp["points"]["timestamps"].as_array().unwrap().is_empty());

        let (_, ov) = get(&app, &format!("/logs/{id}/overview")).await;
        let titles: Vec<&str> = ov.as_array().unwrap().iter().map(|c| c["title"].as_str().unwrap()).collect();
        assert!(titles.contains(&"RC lost"), "{titles:?}");

        let (s, body) = call(&app, Method::GET, &format!("/logs/{id}/export.geojson?attr=input_rc.rc_lost"), vec![]).await;
        assert_eq!(s, StatusCode::OK);
        let doc: Value = serde_json::from_slice(&body).unwrap();
        assert_eq!(doc["type"], "FeatureCollection");
    });
}

#[test]
fn client_config() {
    rt().block_on(async {
        let (s, v) = get(&app(), "/config").await;
        assert_eq!(s, StatusCode::OK);
        assert_eq!(v["session_ttl_secs"], 1800);
        assert_eq!(v["max_upload_bytes"], 256 * 1024 * 1024);
        assert!(v["tile_url"].as_str().unwrap().contains("{z}"));
    });
}

const QUERIES: [&str; 6] = [
    "meta",
    "messages",
    "events",
    "overview",
    "trajectory?attr=battery",
    "series?msg=battery_status&field=voltage_v&px=300",
];

#[test]
fn identical_requests_give_identical_bodies() {
    rt().block_on(async {
        let app = app();
        let (a, _) = open(&app, read_fixture("px4_sample_small.ulg")).await;
        let (b, _) = open(&app, read_fixture("px4_sample_small.ulg")).await;
        for q in QUERIES {
            let first = call(&app, Method::GET, &format!("/logs/{a}/{q}"), vec![]).await;
            let again = call(&app, Method::GET, &format!("/logs/{a}/{q}"), vec![]).await;
            let other = call(&app, Method::GET, &format!("/logs/{b}/{q}"), vec![]).await;
            assert_eq!(first, again, "{q}");
            assert_eq!(first, other, "{q}");
        }
    });
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sessions_are_isolated(order in proptest::collection::vec((any::<bool>(), 0..QUERIES.len()), 1..24)) {
        let logs = [read_fixture("px4_sample_small.ulg"), read_fixture("px4_cubeorange.ulg")];
        rt().block_on(async {
            // expected bodies from one private service per log
            let mut expected = Vec::new();
            for bytes in &logs {
                let solo = app();
                let (id, _) = open(&solo, bytes.clone()).await;
                let mut bodies = Vec::new();
                for q in QUERIES {
                    bodies.push(call(&solo, Method::GET, &format!("/logs/{id}/{q}"), vec![]).await);
                }
                expected.push(bodies);
            }
            let shared = app();
            let (a, _) = open(&shared, logs[0].clone()).await;
            let (b, _) = open(&shared, logs[1].clone()).await;
            let ids = [a, b];
            let calls = order.iter().map(|&(second, q)| {
                let (shared, id) = (shared.clone(), ids[second as usize].clone());
                async move {
                    let got = call(&shared, Method::GET, &format!("/logs/{id}/{}", QUERIES[q]), vec![]).await;
                    (second as usize, q, got)
                }
            });
            let handles: Vec<_> = calls.map(tokio::spawn).collect();
            for h in handles {
                let (who, q, got) = h.await.unwrap();
                assert_eq!(got, expected[who][q], "session {who} query {}", QUERIES[q]);
            }
        });
    }
}
