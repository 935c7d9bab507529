#![no_main]

use libfuzzer_sys::fuzz_target;
use skytrace_core::model::{field_names, get_series, AttributeRef};
use skytrace_core::ulog::parse_log;

fuzz_target!(|data: &[u8]| {
    let Ok(log) = parse_log(data) else { return };
    for key in log.series().keys() {
        for field in field_names(&log, &key.name, key.multi_id).unwrap_or_default() {
            let attr = AttributeRef::new(key.name.clone(), key.multi_id, field);
            let _ = get_series(&log, &attr, None);
        }
    }
});
