use std::io::Write;
use std::path::Path;

use ctsched_system::{
    load_system, parse_system_text, system_to_string, validate_topology, Diagnostic, LoadOptions,
    SystemError,
};

const MINIMAL: &str = r#"
version = 1

[horizon]
intervals = 2 x 3600

[penalties]
bypass = 0.01
spill = 0.02

[areas]
north
south

[loads]
north const:20
south const:30

[reservoirs]
res1 1e6 5e5 const:10

[plants]
pl1 res1 north 20 10 0 40 const:0 SINK SINK SINK

[segments]
pl1 0 20 2 0

[thermal]
t1 south 5 60 30 500 200 0.05 0.05 0.1 0.1 1

[cables]
hvdc north south 50 0.5 0.5

[cuts]
1000 res1:-0.004
"#;

fn parse(text: &str) -> Result<ctsched_system::SystemInstance, SystemError> {
    parse_system_text(text, Path::new("."), "test.sys", &LoadOptions::default())
}

#[test]
fn minimal_file_loads_with_expected_counts() {
    let sys = parse(MINIMAL).unwrap();
    assert_eq!(sys.areas.len(), 2);
    assert_eq!(sys.reservoirs.len(), 1);
    assert_eq!(sys.plants.len(), 1);
    assert_eq!(sys.thermal.len(), 1);
    assert_eq!(sys.cables.len(), 1);
    assert_eq!(sys.cuts.len(), 1);
    assert_eq!(sys.horizon.num_intervals(), 2);
    assert_eq!(sys.areas[0].load_mw.eval(1800.0).unwrap(), 20.0);
    assert_eq!(sys.reservoirs[0].inflow_m3s, vec![10.0, 10.0]);
    // Cable exports from north (+1), imports into south (-1).
    assert_eq!(sys.cables[0].incidence(0), 1.0);
    assert_eq!(sys.cables[0].incidence(1), -1.0);
}

#[test]
fn v_init_above_capacity_names_the_reservoir() {
    let text = MINIMAL.replace("res1 1e6 5e5 const:10", "res1 1e6 2e6 const:10");
    match parse(&text) {
        Err(SystemError::Invalid(diags)) => {
            assert!(diags.iter().any(|d| matches!(
                d,
                Diagnostic::InitialVolumeOutOfRange { reservoir, .. } if reservoir == "res1"
            )));
        }
        other => panic!("expected invalid, got {other:?}"),
    }
}

#[test]
fn cyclic_routing_lists_the_cycle() {
    let text = r#"
version = 1
[horizon]
intervals = 1 x 3600
[penalties]
bypass = 0
spill = 0
[areas]
north
[loads]
north const:10
[reservoirs]
resA 1e6 5e5 const:1
resB 1e6 5e5 const:1
[plants]
plA resA north 10 0 0 10 const:0 resB resB resB
plB resB north 10 0 0 10 const:0 resA resA resA
[segments]
plA 0 10 1 0
plB 0 10 1 0
[thermal]
[cables]
"#;
    match parse(text) {
        Err(SystemError::Invalid(diags)) => {
            let cycle = diags.iter().find_map(|d| match d {
                Diagnostic::CyclicRouting { cycle } => Some(cycle.clone()),
                _ => None,
            });
            let cycle = cycle.expect("cycle diagnostic");
            assert!(cycle.contains(&"resA".to_string()) && cycle.contains(&"resB".to_string()));
        }
        other => panic!("expected invalid, got {other:?}"),
    }
}

#[test]
fn three_reservoir_chain_is_clean() {
    let text = r#"
version = 1
[horizon]
intervals = 1 x 3600
[penalties]
bypass = 0
spill = 0
[areas]
north
[loads]
north const:10
[reservoirs]
top 1e6 5e5 const:1
mid 1e6 5e5 const:1
low 1e6 5e5 const:1
[plants]
plT top north 10 0 0 10 const:0 mid mid mid
plM mid north 10 0 0 10 const:0 low low low
plL low north 10 0 0 10 const:0 SINK SINK SINK
[segments]
plT 0 10 1 0
plM 0 10 1 0
plL 0 10 1 0
[thermal]
[cables]
"#;
    let sys = parse(text).unwrap();
    assert!(validate_topology(&sys).is_empty());
    // upstream_of resolves the chain.
    let mid = sys.reservoir_index("mid").unwrap();
    let ups = sys.upstream_of(mid);
    assert_eq!(ups.len(), 3); // discharge, bypass and spill of plT
}

#[test]
fn segment_sum_mismatch_is_flagged() {
    let text = MINIMAL.replace("pl1 0 20 2 0", "pl1 0 18 2 0");
    match parse(&text) {
        Err(SystemError::Invalid(diags)) => {
            assert!(diags
                .iter()
                .any(|d| matches!(d, Diagnostic::SegmentSumMismatch { plant, .. } if plant == "pl1")));
        }
        other => panic!("expected invalid, got {other:?}"),
    }
}

#[test]
fn inline_load_on_wrong_interval_count_is_a_horizon_mismatch() {
    let text = r#"
version = 1
[horizon]
intervals = 2 x 3600
[penalties]
bypass = 0
spill = 0
[areas]
north
[loads]
north inline
[load north]
0 10 10 10 10
[reservoirs]
[plants]
[segments]
[thermal]
t1 north 0 60 30 0 0 1 1 1 1 1
[cables]
"#;
    match parse(text) {
        Err(SystemError::Invalid(diags)) => {
            assert!(diags
                .iter()
                .any(|d| matches!(d, Diagnostic::HorizonMismatch { got: 1, want: 2, .. })));
        }
        other => panic!("expected invalid, got {other:?}"),
    }
}

#[test]
fn unknown_reference_is_a_parse_error_with_line() {
    let text = MINIMAL.replace("pl1 res1 north", "pl1 nores north");
    match parse(&text) {
        Err(SystemError::Parse { line, message, .. }) => {
            assert!(message.contains("unknown reservoir"), "{message}");
            assert!(line > 0);
        }
        other => panic!("expected parse error, got {other:?}"),
    }
}

#[test]
fn round_trip_is_field_exact() {
    let sys = parse(MINIMAL).unwrap();
    let text = system_to_string(&sys);
    let back = parse(&text).unwrap();
    assert_eq!(sys, back);

    // And again through an actual file.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.txt");
    ctsched_system::write_system_file(&sys, &path).unwrap();
    let back2 = load_system(&path).unwrap();
    assert_eq!(sys, back2);
}

#[test]
fn csv_series_are_fitted_and_averaged() {
    let dir = tempfile::tempdir().unwrap();
    // 5-minute linear ramp load over 2 hours: exactly representable.
    let mut load = std::fs::File::create(dir.path().join("load.csv")).unwrap();
    writeln!(load, "time_s,value").unwrap();
    for i in 0..=24 {
        let t = i as f64 * 300.0;
        writeln!(load, "{t},{}", 10.0 + t / 100.0).unwrap();
    }
    // Step inflow: 4 in hour one, 6 in hour two.
    let mut inflow = std::fs::File::create(dir.path().join("inflow.csv")).unwrap();
    writeln!(inflow, "time_s,value").unwrap();
    for i in 0..24 {
        let t = i as f64 * 300.0;
        writeln!(inflow, "{t},{}", if t < 3600.0 { 4.0 } else { 6.0 }).unwrap();
    }
    let text = r#"
version = 1
[horizon]
intervals = 2 x 3600
[penalties]
bypass = 0
spill = 0
[areas]
north
[loads]
north csv:load.csv
[reservoirs]
res1 1e6 5e5 csv:inflow.csv
[plants]
pl1 res1 north 20 10 0 40 const:0 SINK SINK SINK
[segments]
pl1 0 20 2 0
[thermal]
[cables]
"#;
    let path = dir.path().join("sys.txt");
    std::fs::write(&path, text).unwrap();
    let sys = load_system(&path).unwrap();
    let load = &sys.areas[0].load_mw;
    for t in [0.0, 1800.0, 3600.0, 5400.0, 7200.0] {
        assert!(
            (load.eval(t).unwrap() - (10.0 + t / 100.0)).abs() < 1e-6,
            "t={t}"
        );
    }
    assert!((sys.reservoirs[0].inflow_m3s[0] - 4.0).abs() < 1e-9);
    assert!((sys.reservoirs[0].inflow_m3s[1] - 6.0).abs() < 1e-9);
}

#[test]
fn wrong_version_is_rejected() {
    let text = MINIMAL.replace("version = 1", "version = 2");
    assert!(matches!(parse(&text), Err(SystemError::Parse { .. })));
}
