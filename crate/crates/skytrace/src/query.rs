//! Read-only views over a parsed log, shared by the CLI and the service.
//! Every view is a plain serde type; timestamps are integer microseconds.

use std::collections::BTreeMap;

use serde::Serialize;
use skytrace_core::encoding::{
    make_scale, map_category, map_value, palette, resolve_profile, Domain, RenderAs, ScaleKind,
};
use skytrace_core::geo::{
    align_attribute, build_trajectory, mercator, segments, simplify_chart, simplify_indices,
    ChartBudget, GeoError, GeoSample, Point,
};
use skytrace_core::model::{
    detect_constant, extract_events, extract_hierarchy, field_names, flight_meta, get_series,
    AttributeRef, EventKind, LayerKind, ModelError, TimeWindow,
};
use skytrace_core::ulog::FlightLog;

use crate::config::AnalysisConfig;

/// Geo path tolerance in screen pixels at the requested zoom.
pub const PATH_TOLERANCE_PX: f64 = 0.5;

#[derive(Debug, thiserror::Error)]
pub enum QueryError {
    #[error("unknown attribute '{0}'")]
    UnknownAttribute(String),
    #[error("unknown message '{0}'")]
    UnknownMessage(String),
    #[error("no {0} layer in this log")]
    NoLayer(&'static str),
    #[error("invalid window: start {start_us} is after end {end_us}")]
    InvalidWindow { start_us: u64, end_us: u64 },
    #[error("invalid parameter: {0}")]
    BadParam(String),
}

impl QueryError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::UnknownAttribute(_) => "UnknownAttribute",
            Self::UnknownMessage(_) => "UnknownMessage",
            Self::NoLayer(_) => "NoLayer",
            Self::InvalidWindow { .. } => "InvalidWindow",
            Self::BadParam(_) => "BadParam",
        }
    }

    pub fn is_not_found(&self) -> bool {
        matches!(self, Self::UnknownAttribute(_) | Self::UnknownMessage(_) | Self::NoLayer(_))
    }
}

impl From<ModelError> for QueryError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::UnknownAttribute(a) => Self::UnknownAttribute(a),
            ModelError::InvalidAttribute(a) => Self::BadParam(format!("attribute '{a}'")),
            ModelError::InvalidWindow { start_us, end_us } => Self::InvalidWindow { start_us, end_us },
            ModelError::EmptySeries => Self::BadParam("empty series".into()),
        }
    }
}

/// `None` when both ends are open. A missing end is unbounded on that side.
pub fn window(start_us: Option<u64>, end_us: Option<u64>) -> Result<Option<TimeWindow>, QueryError> {
    if start_us.is_none() && end_us.is_none() {
        return Ok(None);
    }
    let (start_us, end_us) = (start_us.unwrap_or(0), end_us.unwrap_or(u64::MAX));
    TimeWindow::new(start_us, end_us)
        .map(Some)
        .map_err(|_| QueryError::InvalidWindow { start_us, end_us })
}

pub fn parse_attr(text: &str) -> Result<AttributeRef, QueryError> {
    AttributeRef::parse(text).map_err(|_| QueryError::BadParam(format!("attribute '{text}'")))
}

fn source_name(message: &str, multi_id: u8) -> String {
    match multi_id {
        0 => message.to_string(),
        id => format!("{message}/{id}"),
    }
}

#[derive(Debug, Serialize)]
pub struct LayerView {
    pub source: String,
    pub records: usize,
}

#[derive(Debug, Serialize)]
pub struct MetaView {
    pub start_us: u64,
    pub end_us: u64,
    pub duration_us: u64,
    /// `[lat, lon]` of the first valid recorded fix.
    pub reference: Option<[f64; 2]>,
    pub message_count: usize,
    pub attribute_count: usize,
    pub truncated: bool,
    pub layers: BTreeMap<&'static str, Option<LayerView>>,
    pub info: BTreeMap<String, String>,
    pub parameter_count: usize,
    pub warnings: Vec<String>,
}

pub fn meta(log: &FlightLog, cfg: &AnalysisConfig) -> MetaView {
    let m = flight_meta(log, &cfg.hierarchy);
    let h = extract_hierarchy(log, &cfg.hierarchy);
    let layers = LayerKind::ALL
        .iter()
        .map(|k| {
            let view = h.layer(*k).map(|l| LayerView {
                source: source_name(&l.source.message, l.source.multi_id),
                records: l.records,
            });
            (k.as_str(), view)
        })
        .collect();
    MetaView {
        start_us: m.start_us,
        end_us: m.end_us,
        duration_us: m.duration_us,
        reference: m.reference.map(|(lat, lon)| [lat, lon]),
        message_count: m.message_count,
        attribute_count: m.attribute_count,
        truncated: m.truncated,
        layers,
        info: log.info().iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        parameter_count: log.parameters().len(),
        warnings: log.warnings().iter().map(|w| w.to_string()).collect(),
    }
}

#[derive(Debug, Serialize)]
pub struct FieldView {
    pub name: String,
    /// Logged type, or `derived` for values computed on read.
    #[serde(rename = "type")]
    pub type_name: &'static str,
    /// Set when every record holds the same value.
    pub constant: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct MessageView {
    pub name: String,
    pub multi_id: u8,
    pub records: usize,
    pub first_us: Option<u64>,
    pub last_us: Option<u64>,
    pub fields: Vec<FieldView>,
}

pub fn messages(log: &FlightLog) -> Vec<MessageView> {
    log.list_messages()
        .into_iter()
        .map(|m| {
            let series = log.get(m.name, m.multi_id);
            let fields = field_names(log, m.name, m.multi_id)
                .unwrap_or_default()
                .into_iter()
                .filter(|f| f != "timestamp")
                .map(|f| {
                    let attr = AttributeRef::new(m.name, m.multi_id, f.as_str());
                    let constant = get_series(log, &attr, None)
                        .ok()
                        .and_then(|s| detect_constant(&s).ok().flatten());
                    let type_name = m.schema.field(&f).map_or("derived", |(_, s)| s.kind.type_name());
                    FieldView { name: f, type_name, constant }
                })
                .collect();
            MessageView {
                name: m.name.to_string(),
                multi_id: m.multi_id,
                records: m.record_count,
                first_us: series.and_then(|s| s.first_timestamp()),
                last_us: series.and_then(|s| s.last_timestamp()),
                fields,
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SeriesQuery {
    pub attr: AttributeRef,
    pub window: Option<TimeWindow>,
    pub budget: ChartBudget,
}

#[derive(Debug, Serialize)]
pub struct SeriesView {
    pub attr: String,
    /// Points inside the window before simplification.
    pub total: usize,
    pub timestamps: Vec<u64>,
    /// NaN is sent as `null`.
    pub values: Vec<f64>,
}

pub fn series(log: &FlightLog, q: &SeriesQuery) -> Result<SeriesView, QueryError> {
    let s = get_series(log, &q.attr, q.window.as_ref())?;
    let kept = simplify_chart(&s.timestamps, &s.values, &q.budget);
    Ok(SeriesView {
        attr: q.attr.to_string(),
        total: s.len(),
        timestamps: kept.iter().map(|&i| s.timestamps[i]).collect(),
        values: kept.iter().map(|&i| s.values[i]).collect(),
    })
}

#[derive(Debug, Clone)]
pub struct TrajectoryQuery {
    pub layer: LayerKind,
    pub attr: Option<AttributeRef>,
    pub window: Option<TimeWindow>,
    /// Simplify the path for display at this map zoom.
    pub zoom: Option<u8>,
    pub scale: ScaleKind,
}

impl TrajectoryQuery {
    pub fn new(layer: LayerKind) -> Self {
        Self {
            layer,
            attr: None,
            window: None,
            zoom: None,
            scale: ScaleKind::Sequential,
        }
    }
}

#[derive(Debug, Default, Serialize)]
pub struct PathPoints {
    pub timestamps: Vec<u64>,
    pub lat: Vec<f64>,
    pub lon: Vec<f64>,
    pub alt: Vec<Option<f64>>,
}

/// Segment `i` runs from point `i` to point `i + 1`.
#[derive(Debug, Default, Serialize)]
pub struct SegmentColumns {
    pub in_window: Vec<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Option<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct TrajectoryView {
    pub layer: &'static str,
    pub source: String,
    pub points: PathPoints,
    pub segments: SegmentColumns,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attr: Option<String>,
    /// Color domain over the whole flight, so brushing keeps colors stable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<&'static str>,
}

pub fn trajectory(log: &FlightLog, cfg: &AnalysisConfig, q: &TrajectoryQuery) -> Result<TrajectoryView, QueryError> {
    let h = extract_hierarchy(log, &cfg.hierarchy);
    let layer = h.layer(q.layer).ok_or(QueryError::NoLayer(q.layer.as_str()))?;
    let attr_series = q
        .attr
        .as_ref()
        .map(|a| get_series(log, a, None))
        .transpose()?;

    let mut samples = match build_trajectory(log, &layer.source) {
        Ok(s) => s,
        Err(GeoError::NoPosition) => Vec::new(),
        Err(e) => return Err(QueryError::BadParam(e.to_string())),
    };
    if let Some(zoom) = q.zoom {
        samples = simplify_path(&samples, zoom);
    }
    let segs = segments(&samples).unwrap_or_default();
    // same inclusive rule as split_by_window
    let in_window = segs
        .iter()
        .map(|s| q.window.as_ref().map_or(true, |w| w.contains(s.t_start_us)))
        .collect();

    let mut view = TrajectoryView {
        layer: q.layer.as_str(),
        source: source_name(&layer.source.message, layer.source.multi_id),
        points: PathPoints {
            timestamps: samples.iter().map(|s| s.timestamp_us).collect(),
            lat: samples.iter().map(|s| s.lat).collect(),
            lon: samples.iter().map(|s| s.lon).collect(),
            alt: samples.iter().map(|s| s.alt_m).collect(),
        },
        segments: SegmentColumns { in_window, ..Default::default() },
        attr: None,
        domain: None,
        scale: None,
    };
    if let Some(series) = attr_series {
        let aligned: Vec<Option<f64>> = align_attribute(&segs, &series).iter().map(|s| s.value).collect();
        let domain = Domain::from_values(aligned.iter().flatten().copied());
        let scale = domain
            .map(|d| make_scale(q.scale, d))
            .transpose()
            .map_err(|e| QueryError::BadParam(e.to_string()))?;
        view.segments.colors = Some(
            aligned
                .iter()
                .map(|v| scale.as_ref().map_or(palette::NO_DATA, |s| map_value(s, *v)).to_hex())
                .collect(),
        );
        view.domain = scale.as_ref().and_then(|s| match s.domain {
            Domain::Continuous { min, max } => Some([min, max]),
            Domain::Categories(_) => None,
        });
        view.scale = Some(q.scale.as_str());
        view.attr = Some(series.attr.to_string());
        view.segments.values = Some(aligned);
    }
    Ok(view)
}

fn simplify_path(samples: &[GeoSample], zoom: u8) -> Vec<GeoSample> {
    let points: Vec<Point> = samples
        .iter()
        .map(|s| {
            let (x, y) = mercator::project(s.lat, s.lon).unwrap_or((0.0, 0.0));
            let (px, py) = mercator::to_pixels(x, y, zoom);
            Point::new(px, py)
        })
        .collect();
    simplify_indices(&points, PATH_TOLERANCE_PX, true)
        .into_iter()
        .map(|i| samples[i])
        .collect()
}

#[derive(Debug, Serialize)]
pub struct EventView {
    pub timestamp_us: u64,
    pub kind: &'static str,
    pub label: String,
    /// Mode id, or severity index for logged messages.
    pub category: u32,
    pub failsafe: bool,
    pub color: String,
}

pub fn events(log: &FlightLog, cfg: &AnalysisConfig) -> Vec<EventView> {
    let modes = make_scale(ScaleKind::Categorical, Domain::Categories(vec!["mode".into()]))
        .expect("categorical palette");
    extract_events(log, &cfg.hierarchy)
        .into_iter()
        .map(|e| {
            let color = match e.kind {
                EventKind::FlightModeChange => map_category(&modes, e.category_index as usize),
                EventKind::LoggedMessage => palette::NO_DATA,
            };
            EventView {
                timestamp_us: e.timestamp_us,
                kind: e.kind.as_str(),
                label: e.label,
                category: e.category_index,
                failsafe: e.failsafe,
                color: color.to_hex(),
            }
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct ChartSeriesView {
    pub attr: String,
    pub label: String,
    pub unit: Option<String>,
    pub scale: f64,
}

#[derive(Debug, Serialize)]
pub struct ChartView {
    pub title: String,
    pub series: Vec<ChartSeriesView>,
    /// Present when every series is constant; scaled values to show instead of a chart.
    pub constant: Option<Vec<f64>>,
}

pub fn overview(log: &FlightLog, cfg: &AnalysisConfig) -> Vec<ChartView> {
    resolve_profile(&cfg.profile, log)
        .into_iter()
        .map(|spec| ChartView {
            title: spec.title,
            series: spec
                .series
                .into_iter()
                .map(|s| ChartSeriesView {
                    attr: s.attr.to_string(),
                    label: s.label,
                    unit: s.unit,
                    scale: s.scale,
                })
                .collect(),
            constant: match spec.render {
                RenderAs::ConstantRow { values } => Some(values),
                RenderAs::Chart => None,
            },
        })
        .collect()
}

/// An attribute path, or the title of an overview group (its first
/// resolved series, matched case-insensitively).
pub fn resolve_attr(log: &FlightLog, cfg: &AnalysisConfig, text: &str) -> Result<AttributeRef, QueryError> {
    if text.contains('.') {
        return parse_attr(text);
    }
    resolve_profile(&cfg.profile, log)
        .into_iter()
        .find(|c| {
            let group = c.title.split(" · ").next().unwrap_or(&c.title);
            group.eq_ignore_ascii_case(text)
        })
        .and_then(|c| c.series.into_iter().next())
        .map(|s| s.attr)
        .ok_or_else(|| QueryError::UnknownAttribute(text.to_string()))
}
