//! File exports: per-message CSV and GeoJSON trajectory layers.

use std::io::Write;

use serde_json::{json, Map, Value};
use skytrace_core::geo::{align_attribute, build_trajectory, segments, split_by_window, Segment};
use skytrace_core::model::{extract_hierarchy, get_series, AttributeRef, LayerKind, TimeWindow};
use skytrace_core::ulog::FlightLog;

use crate::config::AnalysisConfig;
use crate::query::QueryError;

/// One row per record: `timestamp` first, then every field in logged order.
pub fn write_csv<W: Write>(log: &FlightLog, message: &str, multi_id: u8, out: W) -> anyhow::Result<usize> {
    let series = log
        .get(message, multi_id)
        .ok_or_else(|| QueryError::UnknownMessage(format!("{message}/{multi_id}")))?;
    let ts = series.schema.timestamp_index;
    let order: Vec<usize> = std::iter::once(ts)
        .chain((0..series.columns.len()).filter(|&i| i != ts))
        .collect();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(order.iter().map(|&i| series.schema.fields[i].name.as_str()))?;
    let mut row = Vec::with_capacity(order.len());
    for r in 0..series.len() {
        row.clear();
        for &i in &order {
            row.push(series.columns[i].get(r).map(|v| v.to_string()).unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(series.len())
}

/// A FeatureCollection with one LineString per position layer that has at
/// least two fixes. With an attribute, each feature carries one aligned
/// value per segment (`null` for no-data). With a window, only segments
/// starting inside it are exported.
pub fn geojson(
    log: &FlightLog,
    cfg: &AnalysisConfig,
    attr: Option<&AttributeRef>,
    window: Option<&TimeWindow>,
) -> Result<Value, QueryError> {
    let series = attr.map(|a| get_series(log, a, None)).transpose()?;
    let h = extract_hierarchy(log, &cfg.hierarchy);
    let mut features = Vec::new();
    for kind in LayerKind::ALL {
        let Some(layer) = h.layer(kind) else { continue };
        let Ok(samples) = build_trajectory(log, &layer.source) else { continue };
        let Ok(mut segs) = segments(&samples) else { continue };
        if let Some(w) = window {
            segs = split_by_window(&segs, w).0;
        }
        if segs.is_empty() {
            continue;
        }
        if let Some(s) = &series {
            segs = align_attribute(&segs, s);
        }
        features.push(feature(kind, &layer.source.message, &segs, attr));
    }
    Ok(json!({ "type": "FeatureCollection", "features": features }))
}

fn feature(kind: LayerKind, source: &str, segs: &[Segment], attr: Option<&AttributeRef>) -> Value {
    let mut points = vec![segs[0].start];
    points.extend(segs.iter().map(|s| s.end));
    let with_alt = points.iter().all(|p| p.alt_m.is_some_and(f64::is_finite));
    let coordinates: Vec<Value> = points
        .iter()
        .map(|p| match (with_alt, p.alt_m) {
            (true, Some(alt)) => json!([p.lon, p.lat, alt]),
            _ => json!([p.lon, p.lat]),
        })
        .collect();
    let mut props = Map::new();
    props.insert("layer".into(), kind.as_str().into());
    props.insert("source".into(), source.into());
    props.insert(
        "timestamps".into(),
        points.iter().map(|p| p.timestamp_us).collect::<Vec<_>>().into(),
    );
    if let Some(a) = attr {
        props.insert("attribute".into(), a.to_string().into());
        props.insert(
            "values".into(),
            segs.iter().map(|s| s.value).collect::<Vec<_>>().into(),
        );
    }
    json!({
        "type": "Feature",
        "geometry": { "type": "LineString", "coordinates": coordinates },
        "properties": props,
    })
}
