//! Comparison against frozen reference-parser dumps (`*.oracle.json`).

use serde_json::Value;
use sha2::{Digest, Sha256};
use skytrace_core::ulog::{FlightLog, ParamValue};

pub fn load(path: &std::path::Path) -> Value {
    let text = std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
    serde_json::from_str(&text).expect("oracle file is valid JSON")
}

fn param_matches(ours: &ParamValue, theirs: &Value) -> bool {
    match ours {
        ParamValue::Int(v) => theirs.as_i64() == Some(*v as i64),
        // both sides hold the same f32 widened to f64
        ParamValue::Float(v) => theirs.as_f64().map(|x| x.to_bits()) == Some((*v as f64).to_bits()),
    }
}

/// Every difference between `log` and the oracle dump, as readable lines.
/// An empty result means full agreement.
pub fn compare(log: &FlightLog, oracle: &Value) -> Vec<String> {
    let mut diffs = Vec::new();
    let mut check = |ok: bool, what: String| {
        if !ok {
            diffs.push(what);
        }
    };

    let start = oracle["start_timestamp"].as_u64();
    check(start == Some(log.start_boot_us()), format!("start timestamp {start:?} vs {}", log.start_boot_us()));
    let duration = oracle["duration_us"].as_u64();
    let ours = log.last_timestamp_us() - log.start_boot_us();
    check(duration == Some(ours), format!("duration {duration:?} vs {ours}"));
    let attrs = oracle["attribute_count"].as_u64().map(|v| v as usize);
    check(attrs == Some(log.attribute_count()), format!("attribute count {attrs:?} vs {}", log.attribute_count()));

    let expected = oracle["series"].as_array().cloned().unwrap_or_default();
    let listed = log.list_messages();
    let names_theirs: Vec<(String, u64)> = expected
        .iter()
        .map(|s| (s["name"].as_str().unwrap_or("").to_string(), s["multi_id"].as_u64().unwrap_or(0)))
        .collect();
    let names_ours: Vec<(String, u64)> =
        listed.iter().map(|m| (m.name.to_string(), m.multi_id as u64)).collect();
    check(names_theirs == names_ours, format!("message list differs: {names_theirs:?} vs {names_ours:?}"));

    for s in &expected {
        let name = s["name"].as_str().unwrap_or("");
        let multi = s["multi_id"].as_u64().unwrap_or(0) as u8;
        let Some(series) = log.get(name, multi) else {
            check(false, format!("{name}/{multi} missing"));
            continue;
        };
        let id = format!("{name}/{multi}");
        let count = s["count"].as_u64().map(|v| v as usize);
        check(count == Some(series.len()), format!("{id}: count {count:?} vs {}", series.len()));
        check(
            s["first_timestamp"].as_u64() == series.first_timestamp(),
            format!("{id}: first timestamp"),
        );
        check(
            s["last_timestamp"].as_u64() == series.last_timestamp(),
            format!("{id}: last timestamp"),
        );
        let fields_theirs: Vec<(String, String)> = s["fields"]
            .as_array()
            .map(|a| {
                a.iter()
                    .map(|f| (f[0].as_str().unwrap_or("").to_string(), f[1].as_str().unwrap_or("").to_string()))
                    .collect()
            })
            .unwrap_or_default();
        let fields_ours: Vec<(String, String)> = series
            .schema
            .fields
            .iter()
            .map(|f| (f.name.clone(), f.kind.type_name().to_string()))
            .collect();
        check(fields_theirs == fields_ours, format!("{id}: field layout differs"));
        for (field, column) in series.schema.fields.iter().zip(&series.columns) {
            let digest = hex::encode(Sha256::digest(column.to_le_bytes()));
            let theirs = s["digests"][&field.name].as_str();
            check(theirs == Some(digest.as_str()), format!("{id}: values of '{}' differ", field.name));
        }
    }

    let params = oracle["parameters"].as_object().cloned().unwrap_or_default();
    check(params.len() == log.parameters().len(), format!("parameter count {} vs {}", params.len(), log.parameters().len()));
    for (k, v) in &params {
        let ok = log.parameters().get(k).is_some_and(|p| param_matches(p, v));
        check(ok, format!("parameter {k}"));
    }
    let changed = oracle["changed_parameters"].as_array().cloned().unwrap_or_default();
    check(changed.len() == log.changed_parameters().len(), "changed parameter count".to_string());
    for (c, ours) in changed.iter().zip(log.changed_parameters()) {
        let ok = c[0].as_u64() == Some(ours.timestamp_us)
            && c[1].as_str() == Some(ours.name.as_str())
            && param_matches(&ours.value, &c[2]);
        check(ok, format!("changed parameter {}", ours.name));
    }

    let info: Vec<&str> = oracle["info_keys"]
        .as_array()
        .map(|a| a.iter().filter_map(Value::as_str).collect())
        .unwrap_or_default();
    let ours: Vec<&str> = log.info().keys().map(String::as_str).collect();
    check(info == ours, format!("info keys {info:?} vs {ours:?}"));

    let plain: Vec<_> = log.logged_text().iter().filter(|m| m.tag.is_none()).collect();
    let tagged = log.logged_text().len() - plain.len();
    let messages = oracle["logged_messages"].as_array().cloned().unwrap_or_default();
    check(messages.len() == plain.len(), format!("logged message count {} vs {}", messages.len(), plain.len()));
    for (m, ours) in messages.iter().zip(&plain) {
        let ok = m[0].as_u64() == Some(ours.timestamp_us)
            && m[1].as_u64() == Some(ours.level as u64)
            && m[2].as_str() == Some(ours.text.as_str());
        check(ok, format!("logged message at {}", ours.timestamp_us));
    }
    check(
        oracle["tagged_logged_messages"].as_u64() == Some(tagged as u64),
        "tagged message count".to_string(),
    );

    let dropouts = oracle["dropouts"].as_array().cloned().unwrap_or_default();
    let ok = dropouts.len() == log.dropouts().len()
        && dropouts.iter().zip(log.dropouts()).all(|(d, o)| {
            d[0].as_u64() == Some(o.timestamp_us) && d[1].as_u64() == Some(o.duration_ms as u64)
        });
    check(ok, "dropouts".to_string());
    check(
        oracle["file_corruption"].as_bool() == Some(log.corrupt()),
        format!("corruption flag vs {}", log.corrupt()),
    );
    diffs
}
