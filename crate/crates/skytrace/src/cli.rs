//! Command line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use skytrace_core::model::{get_series, summarize, detect_constant, TimeWindow};
use skytrace_core::ulog::{parse_log, FlightLog, ParseError};

use crate::config::AnalysisConfig;
use crate::query::{self, QueryError};
use crate::service::{self, ServiceConfig};
use crate::export;

#[derive(Debug, Parser)]
#[command(name = "skytrace", version, about = "Post-flight analysis of PX4 ULog files")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Position hierarchy and flight-mode tables (TOML).
    #[arg(long, global = true, env = "SKYTRACE_HIERARCHY")]
    pub hierarchy: Option<PathBuf>,
    /// Overview chart profile (TOML).
    #[arg(long, global = true, env = "SKYTRACE_PROFILE")]
    pub profile: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Header, duration and the message table.
    Info { file: PathBuf },
    /// Statistics of one attribute, e.g. `vehicle_gps_position.alt`.
    Summarize { file: PathBuf, attr: String },
    /// All records of one message as CSV.
    ExportCsv {
        file: PathBuf,
        message: String,
        #[arg(long, default_value_t = 0)]
        instance: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trajectory layers as GeoJSON.
    ExportGeojson {
        file: PathBuf,
        /// Attribute path or overview group title to align per segment.
        #[arg(long)]
        attr: Option<String>,
        /// `start:end` in microseconds; either side may be empty.
        #[arg(long, value_parser = parse_window)]
        window: Option<TimeWindow>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "SKYTRACE_BIND", default_value = "127.0.0.1:8080")]
    pub bind: SocketAddr,
    /// Idle seconds before an uploaded log is dropped.
    #[arg(long, env = "SKYTRACE_TTL_SECS", default_value_t = service::DEFAULT_TTL.as_secs())]
    pub ttl_secs: u64,
    #[arg(long, env = "SKYTRACE_MAX_UPLOAD", default_value_t = service::DEFAULT_UPLOAD_LIMIT)]
    pub max_upload_bytes: usize,
    #[arg(long, env = "SKYTRACE_TILE_URL", default_value = service::DEFAULT_TILE_URL)]
    pub tile_url: String,
}

fn parse_window(s: &str) -> Result<TimeWindow, String> {
    let (a, b) = s.split_once(':').ok_or("expected start:end")?;
    let num = |t: &str, d: u64| if t.is_empty() { Ok(d) } else { t.parse::<u64>().map_err(|e| e.to_string()) };
    TimeWindow::new(num(a, 0)?, num(b, u64::MAX)?).map_err(|e| e.to_string())
}

/// Maps an error to the process exit code: 2 for unknown or invalid
/// attributes and messages, 1 for everything else.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<QueryError>() {
        Some(_) => 2,
        None => 1,
    }
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = AnalysisConfig::load(cli.config.hierarchy.as_deref(), cli.config.profile.as_deref())?;
    match cli.command {
        Command::Info { file } => {
            let log = load(&file)?;
            info(&log, &cfg, &mut io::stdout().lock())
        }
        Command::Summarize { file, attr } => {
            let log = load(&file)?;
            let attr = query::resolve_attr(&log, &cfg, &attr)?;
            let s = get_series(&log, &attr, None).map_err(QueryError::from)?;
            let sum = summarize(&s);
            let mut out = io::stdout().lock();
            writeln!(out, "attribute: {attr}")?;
            writeln!(out, "count: {}", s.len())?;
            if let Ok(sum) = sum {
                writeln!(out, "nan: {}", sum.nan_count)?;
                let opt = |v: Option<f64>| v.map_or("-".to_string(), |v| v.to_string());
                writeln!(out, "min: {}", opt(sum.min))?;
                writeln!(out, "max: {}", opt(sum.max))?;
                writeln!(out, "mean: {}", opt(sum.mean))?;
            }
            if let Ok(Some(c)) = detect_constant(&s) {
                writeln!(out, "constant: {c}")?;
            }
            Ok(())
        }
        Command::ExportCsv { file, message, instance, out } => {
            let log = load(&file)?;
            with_output(out.as_deref(), |w| export::write_csv(&log, &message, instance, w).map(drop))
        }
        Command::ExportGeojson { file, attr, window, out } => {
            let log = load(&file)?;
            let attr = attr.map(|a| query::resolve_attr(&log, &cfg, &a)).transpose()?;
            let doc = export::geojson(&log, &cfg, attr.as_ref(), window.as_ref())?;
            with_output(out.as_deref(), |mut w| {
                serde_json::to_writer_pretty(&mut w, &doc)?;
                writeln!(w)?;
                Ok(())
            })
        }
        Command::Serve(args) => {
            let config = ServiceConfig {
                bind: args.bind,
                session_ttl: Duration::from_secs(args.ttl_secs),
                max_upload_bytes: args.max_upload_bytes,
                tile_url: args.tile_url,
                analysis: cfg,
            };
            tokio::runtime::Runtime::new()?.block_on(service::serve(config))
        }
    }
}

fn load(path: &Path) -> anyhow::Result<FlightLog> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse_log(&bytes).map_err(|e: ParseError| anyhow::Error::new(e).context(format!("parsing {}", path.display())))
}

fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> anyhow::Result<()>) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn info(log: &FlightLog, cfg: &AnalysisConfig, out: &mut dyn Write) -> anyhow::Result<()> {
    let meta = query::meta(log, cfg);
    writeln!(out, "version: {}", log.version())?;
    writeln!(out, "start_us: {}", meta.start_us)?;
    writeln!(out, "end_us: {}", meta.end_us)?;
    writeln!(out, "duration: {:.3} s", meta.duration_us as f64 * 1e-6)?;
    writeln!(out, "messages: {}", meta.message_count)?;
    writeln!(out, "attributes: {}", meta.attribute_count)?;
    writeln!(out, "parameters: {}", meta.parameter_count)?;
    if let Some([lat, lon]) = meta.reference {
        writeln!(out, "reference: {lat:.7} {lon:.7}")?;
    }
    for (layer, view) in &meta.layers {
        match view {
            Some(v) => writeln!(out, "layer {layer}: {} ({} records)", v.source, v.records)?,
            None => writeln!(out, "layer {layer}: none")?,
        }
    }
    for w in &meta.warnings {
        writeln!(out, "warning: {w}")?;
    }
    writeln!(out)?;
    let rows = log.list_messages();
    let width = rows.iter().map(|m| m.name.len()).max().unwrap_or(0);
    for m in rows {
        writeln!(
            out,
            "{:<width$}  {:>2}  {:>8} records  {:>3} fields",
            m.name,
            m.multi_id,
            m.record_count,
            m.schema.fields.len()
        )?;
    }
    Ok(())
}
