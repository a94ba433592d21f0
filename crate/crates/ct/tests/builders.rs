//! Structural tests of the constraint builders: coefficient inspection and
//! the variable/constraint count audit.

use ctsched_ct::{build_ct, CtBuildOptions, CtBuilder};
use ctsched_milp::Relop;
use ctsched_system::fixtures::{desk_instance, hourly_horizon, load_constants, single_hydro};
use ctsched_system::SystemInstance;

/// Hand-derived model size formulas for a full build.
fn expected_counts(instance: &SystemInstance) -> (usize, usize, usize) {
    let n = instance.horizon.num_intervals();
    let m = instance.plants.len();
    let s: usize = instance.plants.iter().map(|p| p.segments.len()).sum();
    let j = instance.thermal.len();
    let l = instance.cables.len();
    let r = instance.reservoirs.len();
    let a = instance.areas.len();
    let k = instance.cuts.len();

    let continuous = 4 * n * (8 * m + s + j + l) + r * (n + 1) + 1;
    let binaries = n * (m + s + j) + 2 * (n - 1) * (j + m);

    let topology = 16 * m * n;
    let volume = r * (1 + 11 * n);
    let cuts = k;
    let production: usize = instance
        .plants
        .iter()
        .map(|p| n * (4 + 8 * p.segments.len()))
        .sum();
    let balance = 4 * a * n;
    let cable = 6 * l * n;
    let thermal = j * (14 * n + 2 * (n - 1));
    let hydro_uc = m * (8 * n + 2 * (n - 1));
    let continuity = (n - 1) * (2 * j + 2 * l + 2 * m + 2 * m);
    let constraints = topology
        + volume
        + cuts
        + production
        + balance
        + cable
        + thermal
        + hydro_uc
        + continuity;
    (continuous, binaries, constraints)
}

#[test]
fn model_size_matches_hand_derived_formulas() {
    let instance = desk_instance();
    let problem = build_ct(&instance, CtBuildOptions::default()).unwrap();
    let stats = problem.stats();
    let (continuous, binaries, constraints) = expected_counts(&instance);
    assert_eq!(stats.continuous, continuous, "continuous count");
    assert_eq!(stats.binaries, binaries, "binary count");
    assert_eq!(stats.constraints, constraints, "constraint count");
}

#[test]
fn dropping_hydro_continuity_removes_the_jump_rows() {
    let instance = desk_instance();
    let full = build_ct(&instance, CtBuildOptions::default()).unwrap();
    let dropped = build_ct(
        &instance,
        CtBuildOptions {
            drop_hydro_continuity: true,
        },
    )
    .unwrap();
    let n = instance.horizon.num_intervals();
    let m = instance.plants.len();
    assert_eq!(
        full.stats().constraints - dropped.stats().constraints,
        2 * m * (n - 1)
    );
}

#[test]
fn objective_coefficients_follow_the_quarter_rule() {
    // Marginal cost of 7200 mu/MWh is 2 mu/MWs; each of the four cubic
    // coefficients then carries delta/4 * 2 = 1800 in the objective.
    let horizon = hourly_horizon(1);
    let load = load_constants(&horizon, &[10.0]);
    let mut instance = ctsched_system::fixtures::thermal_pair(horizon, load);
    instance.thermal.truncate(1);
    instance.thermal[0].cost_mu_per_mwh = 7200.0;
    let problem = build_ct(&instance, CtBuildOptions::default()).unwrap();
    let obj = problem.model.objective();
    for k in 0..4 {
        let coeff = obj.coeff(problem.blocks.thermal[0].g[0][k]);
        assert!((coeff - 1800.0).abs() < 1e-9, "coeff {coeff}");
    }
    // Startup and shutdown indicators price at their fixed costs (none in a
    // one-interval model).
    assert!(problem.blocks.thermal[0].start.is_empty());
}

#[test]
fn cut_rows_carry_negated_water_values() {
    // alpha >= WV * v_end + D with WV = -1, D = 1000 becomes
    // alpha + v_end >= 1000.
    let horizon = hourly_horizon(2);
    let load = load_constants(&horizon, &[10.0, 10.0]);
    let mut instance = single_hydro(horizon, load);
    instance.cuts.push(ctsched_system::Cut {
        constant_mu: 1000.0,
        coeffs_mu_per_m3: vec![-1.0],
    });
    let problem = build_ct(&instance, CtBuildOptions::default()).unwrap();
    let cut = problem
        .model
        .constraints()
        .iter()
        .find(|c| c.name == "cut_0")
        .unwrap();
    assert_eq!(cut.op, Relop::Ge);
    assert_eq!(cut.rhs, 1000.0);
    assert_eq!(cut.expr.coeff(problem.blocks.alpha), 1.0);
    let v_end = problem.blocks.reservoirs[0].v[2];
    assert_eq!(cut.expr.coeff(v_end), 1.0);
}

#[test]
fn empty_cut_set_pins_alpha_with_warning() {
    let horizon = hourly_horizon(2);
    let load = load_constants(&horizon, &[10.0, 10.0]);
    let instance = single_hydro(horizon, load);
    assert!(instance.cuts.is_empty());
    let problem = build_ct(&instance, CtBuildOptions::default()).unwrap();
    let alpha = problem.model.var(problem.blocks.alpha);
    assert_eq!((alpha.lo, alpha.hi), (0.0, 0.0));
    assert!(problem.warnings.iter().any(|w| w.contains("cut set")));
}

#[test]
fn forbidden_segment_uses_the_equality_form() {
    let instance = desk_instance();
    let problem = build_ct(&instance, CtBuildOptions::default()).unwrap();
    // pl_dn's middle segment is forbidden: its rows are equalities tying the
    // flow to width * w.
    let fix = problem
        .model
        .constraints()
        .iter()
        .find(|c| c.name == "segfix1_pl_dn_0_0")
        .expect("forbidden segment row");
    assert_eq!(fix.op, Relop::Eq);
    let b = &problem.blocks.plants[1];
    assert_eq!(fix.expr.coeff(b.q_s[1][0][0]), 1.0);
    assert_eq!(fix.expr.coeff(b.w[1][0]), -20.0);
    // Ordinary segments keep the one-sided lower bound.
    assert!(problem
        .model
        .constraints()
        .iter()
        .any(|c| c.name == "seglo0_pl_dn_0_0" && c.op == Relop::Ge));
}

#[test]
fn short_intervals_are_rejected() {
    let mut instance = desk_instance();
    instance.horizon = ctsched_system::Horizon::from_interval_lengths(0.0, &[30.0; 6]);
    // Loads no longer align, but the interval check fires first.
    let err = CtBuilder::new(&instance, CtBuildOptions::default()).err();
    assert!(matches!(
        err,
        Some(ctsched_ct::BuildError::IntervalTooShort { interval: 0, .. })
    ));
}

#[test]
fn initial_thermal_state_is_fixed_not_free() {
    let instance = desk_instance();
    let problem = build_ct(&instance, CtBuildOptions::default()).unwrap();
    let u0_slow = problem.model.var(problem.blocks.thermal[0].u[0]);
    assert_eq!((u0_slow.lo, u0_slow.hi), (1.0, 1.0));
    let u0_fast = problem.model.var(problem.blocks.thermal[1].u[0]);
    assert_eq!((u0_fast.lo, u0_fast.hi), (0.0, 0.0));
}

#[test]
fn cable_ramp_rows_scale_coefficient_differences_by_3_over_delta() {
    // A flow rising as [0, F, F, F] has start-of-interval derivative
    // 3 F / delta, which the first ramp row bounds by the up limit.
    let instance = desk_instance();
    let problem = build_ct(&instance, CtBuildOptions::default()).unwrap();
    let row = problem
        .model
        .constraints()
        .iter()
        .find(|c| c.name == "frampup_hvdc_0_0")
        .unwrap();
    let f = problem.blocks.cables[0].f[0];
    assert!((row.expr.coeff(f[1]) - 3.0 / 3600.0).abs() < 1e-15);
    assert!((row.expr.coeff(f[0]) + 3.0 / 3600.0).abs() < 1e-15);
    assert_eq!(row.op, Relop::Le);
    assert_eq!(row.rhs, instance.cables[0].ramp_up_mw_s);
    // With F = 50 and delta = 3600 the implied start ramp is ~0.0417 MW/s.
    let implied: f64 = 3.0 * 50.0 / 3600.0;
    assert!((implied - 0.041666666666666664).abs() < 1e-12);
}

#[test]
fn lp_serialization_is_deterministic_for_the_desk_model() {
    let instance = desk_instance();
    let a = build_ct(&instance, CtBuildOptions::default()).unwrap();
    let b = build_ct(&instance, CtBuildOptions::default()).unwrap();
    assert_eq!(
        ctsched_milp::lp_to_string(&a.model),
        ctsched_milp::lp_to_string(&b.model)
    );
}
