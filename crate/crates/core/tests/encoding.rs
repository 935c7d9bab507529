use proptest::prelude::*;
use skytrace_core::encoding::*;
use skytrace_core::model::{AttributePattern, AttributeRef};
use skytrace_core::ulog::parse_log;
use skytrace_testkit::{read_fixture, Fields, ULogWriter};

fn seq(min: f64, max: f64) -> ColorScale {
    make_scale(ScaleKind::Sequential, Domain::Continuous { min, max }).unwrap()
}

fn arb_domain() -> impl Strategy<Value = (f64, f64)> {
    (-1e6f64..1e6, 1e-3f64..1e6).prop_map(|(min, span)| (min, min + span))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn endpoints_and_clamping((min, max) in arb_domain(), beyond in 0.0f64..1e6) {
        let s = seq(min, max);
        prop_assert_eq!(map_value(&s, Some(min)).to_hex(), "#f95e3f");
        prop_assert_eq!(map_value(&s, Some(max)).to_hex(), "#16132e");
        prop_assert_eq!(map_value(&s, Some(min - beyond)).to_hex(), "#f95e3f");
        prop_assert_eq!(map_value(&s, Some(max + beyond)).to_hex(), "#16132e");
        prop_assert_eq!(map_value(&s, None), palette::NO_DATA);
        prop_assert_eq!(map_value(&s, Some(f64::NAN)).to_hex(), "#9e9e9e");
    }

    #[test]
    fn interpolation_is_continuous((min, max) in arb_domain(), t in 0.0f64..1.0, dt in 0.0f64..1e-3) {
        let s = seq(min, max);
        let a = s.interpolate(min + t * (max - min)).unwrap();
        let b = s.interpolate(min + (t + dt).min(1.0) * (max - min)).unwrap();
        // steepest stop-to-stop channel change is < 256 over a quarter of the domain
        let bound = 256.0 * 4.0 * dt + 1e-6;
        for c in 0..3 {
            prop_assert!((a[c] - b[c]).abs() <= bound);
        }
    }
}

#[test]
fn sequential_lightness_decreases() {
    let stops: Vec<f64> = palette::SEQUENTIAL.iter().map(|c| cie_lightness(*c)).collect();
    assert!(stops.windows(2).all(|w| w[1] < w[0]), "{stops:?}");
    // the mapped colors at the stop positions are the stops themselves
    let s = seq(0.0, 4.0);
    for (i, c) in palette::SEQUENTIAL.iter().enumerate() {
        assert_eq!(map_value(&s, Some(i as f64)), *c);
    }
}

#[test]
fn constant_domain_is_widened() {
    assert_eq!(
        Domain::from_values([3.0, 3.0, f64::NAN]),
        Some(Domain::Continuous { min: 2.0, max: 4.0 })
    );
    assert_eq!(Domain::from_values([f64::NAN]), None);
    assert!(matches!(
        make_scale(ScaleKind::Sequential, Domain::Continuous { min: 1.0, max: 1.0 }),
        Err(EncodingError::InvalidDomain(_))
    ));
}

#[test]
fn categorical_labels() {
    let s = make_scale(
        ScaleKind::Categorical,
        Domain::Categories(vec!["Manual".into(), "Mission".into()]),
    )
    .unwrap();
    assert_eq!(map_label(&s, "Mission"), palette::CATEGORICAL[1]);
    assert_eq!(map_label(&s, "Land"), palette::NO_DATA);
}

fn entry(p: &str, label: &str) -> ProfileEntry {
    ProfileEntry {
        label: Some(label.to_string()),
        ..ProfileEntry::new(AttributePattern::parse(p).unwrap())
    }
}

fn group(title: &str, shared: bool, entries: Vec<ProfileEntry>) -> ProfileGroup {
    ProfileGroup { title: title.to_string(), entries, shared_scale: shared }
}

#[test]
fn profile_on_sample_log() {
    let log = parse_log(&read_fixture("px4_sample_small.ulg")).unwrap();
    let profile = OverviewProfile {
        groups: vec![
            group("Missing", false, vec![entry("no_such_message.x", "x")]),
            group("Attitude", false, vec![entry("vehicle_attitude.roll", "Roll"), entry("vehicle_attitude.pitch", "Pitch")]),
            group("Battery", true, vec![entry("battery_status/*.voltage_v", "Voltage")]),
        ],
    };
    let specs = resolve_profile(&profile, &log);
    let titles: Vec<&str> = specs.iter().map(|s| s.title.as_str()).collect();
    assert_eq!(titles, ["Attitude · Roll", "Attitude · Pitch", "Battery"]);
    assert_eq!(specs[0].series[0].attr, AttributeRef::parse("vehicle_attitude.roll").unwrap());
}

#[test]
fn constant_attribute_becomes_a_row() {
    let mut w = ULogWriter::new(0);
    w.format("m:uint64_t timestamp;int32_t k;float v;").subscribe(0, 0, "m");
    for t in 0..5u64 {
        w.data(0, &Fields::new().u64(t).i32(42).f32(t as f32).build());
    }
    let log = parse_log(&w.finish()).unwrap();
    let profile = OverviewProfile {
        groups: vec![group("K", false, vec![entry("m.k", "k")]), group("V", false, vec![entry("m.v", "v")])],
    };
    let specs = resolve_profile(&profile, &log);
    assert_eq!(specs[0].render, RenderAs::ConstantRow { values: vec![42.0] });
    assert_eq!(specs[0].constant_text().as_deref(), Some("42"));
    assert_eq!(specs[1].render, RenderAs::Chart);
}

#[test]
fn shared_groups_need_one_unit() {
    let mut a = entry("a.x", "a");
    a.unit = Some("m".into());
    let mut b = entry("b.x", "b");
    b.unit = Some("s".into());
    let profile = OverviewProfile { groups: vec![group("G", true, vec![a.clone(), b.clone()])] };
    assert!(matches!(profile.validate(), Err(EncodingError::UnitMismatch { .. })));
    let split = OverviewProfile { groups: vec![group("G", false, vec![a, b])] };
    assert!(split.validate().is_ok());
}
