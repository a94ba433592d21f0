//! Desk-scale instance constructors shared by the test suites of the model
//! crates. Compiled only with the `fixtures` feature.

use ctsched_bernstein::{fit_samples, PiecewisePoly, Sample};

use crate::types::*;

/// `n` intervals of 3600 s starting at t = 0.
pub fn hourly_horizon(n: usize) -> Horizon {
    Horizon::from_interval_lengths(0.0, &vec![3600.0; n])
}

/// Constant load per interval (piecewise constant, exactly representable).
pub fn load_constants(horizon: &Horizon, values: &[f64]) -> PiecewisePoly {
    PiecewisePoly::constant_per_interval(horizon.knots_s.clone(), values)
        .expect("load on horizon knots")
}

/// C1 least-squares fit of 5-minute samples of a smooth profile.
pub fn load_smooth(horizon: &Horizon, f: impl Fn(f64) -> f64) -> PiecewisePoly {
    let start = horizon.start_s();
    let end = horizon.end_s();
    let mut samples = Vec::new();
    let mut t = start;
    while t <= end + 1e-9 {
        samples.push(Sample {
            time_s: t,
            value: f(t),
        });
        t += 300.0;
    }
    fit_samples(&samples, &horizon.knots_s, true).expect("smooth load fits")
}

fn segment(index: usize, width: f64, eta: f64, forbidden: bool) -> DischargeSegment {
    DischargeSegment {
        index,
        q_max_m3s: width,
        energy_rate: eta,
        forbidden,
    }
}

/// One hydro area with a single plant (eta = 1), ample water, no cuts.
/// The power balance forces production to track the load exactly.
pub fn single_hydro(horizon: Horizon, load: PiecewisePoly) -> SystemInstance {
    let n = horizon.num_intervals();
    SystemInstance {
        horizon,
        penalties: Penalties {
            bypass_mu_per_m3: 0.01,
            spill_mu_per_m3: 0.02,
        },
        areas: vec![Area {
            id: "main".into(),
            load_mw: load,
        }],
        reservoirs: vec![Reservoir {
            id: "res".into(),
            v_max_m3: 5.0e7,
            v_init_m3: 2.5e7,
            inflow_m3s: vec![0.0; n],
        }],
        plants: vec![HydroPlant {
            id: "pl".into(),
            reservoir: 0,
            area: 0,
            q_d_max_m3s: 200.0,
            q_b_max_m3s: 50.0,
            p_min_mw: 0.0,
            p_max_mw: 200.0,
            creek_m3s: vec![0.0; n],
            segments: vec![segment(0, 200.0, 1.0, false)],
            discharge_to: RouteTarget::Sink,
            bypass_to: RouteTarget::Sink,
            spill_to: RouteTarget::Sink,
        }],
        thermal: Vec::new(),
        cables: Vec::new(),
        cuts: Vec::new(),
    }
}

/// Thermal-only single area with two units; the cheap one starts committed.
pub fn thermal_pair(horizon: Horizon, load: PiecewisePoly) -> SystemInstance {
    SystemInstance {
        horizon,
        penalties: Penalties {
            bypass_mu_per_m3: 0.0,
            spill_mu_per_m3: 0.0,
        },
        areas: vec![Area {
            id: "main".into(),
            load_mw: load,
        }],
        reservoirs: Vec::new(),
        plants: Vec::new(),
        thermal: vec![
            ThermalUnit {
                id: "cheap".into(),
                area: 0,
                g_min_mw: 10.0,
                g_max_mw: 100.0,
                cost_mu_per_mwh: 10.0,
                startup_mu: 500.0,
                shutdown_mu: 200.0,
                ramp_up_mw_s: 0.05,
                ramp_down_mw_s: 0.05,
                start_gain_mw_s: 0.05,
                stop_gain_mw_s: 0.05,
                initially_on: true,
            },
            ThermalUnit {
                id: "dear".into(),
                area: 0,
                g_min_mw: 5.0,
                g_max_mw: 80.0,
                cost_mu_per_mwh: 45.0,
                startup_mu: 300.0,
                shutdown_mu: 100.0,
                ramp_up_mw_s: 0.1,
                ramp_down_mw_s: 0.1,
                start_gain_mw_s: 0.1,
                stop_gain_mw_s: 0.1,
                initially_on: false,
            },
        ],
        cables: Vec::new(),
        cuts: Vec::new(),
    }
}

/// Two reservoirs in cascade, two plants (the lower one with a forbidden
/// production band), two thermal units, one HVDC cable, six hourly
/// intervals: the reference desk instance.
pub fn desk_instance() -> SystemInstance {
    let horizon = hourly_horizon(6);
    let n = horizon.num_intervals();
    let hydro_load = load_smooth(&horizon, |t| {
        60.0 + 20.0 * (2.0 * std::f64::consts::PI * t / 14400.0).sin()
    });
    let thermal_load = load_smooth(&horizon, |t| {
        55.0 + 22.0 * (2.0 * std::f64::consts::PI * t / 21600.0 + 1.0).sin()
    });
    SystemInstance {
        horizon,
        penalties: Penalties {
            bypass_mu_per_m3: 0.01,
            spill_mu_per_m3: 0.02,
        },
        areas: vec![
            Area {
                id: "hydro".into(),
                load_mw: hydro_load,
            },
            Area {
                id: "thermal".into(),
                load_mw: thermal_load,
            },
        ],
        reservoirs: vec![
            Reservoir {
                id: "res_up".into(),
                v_max_m3: 1.2e6,
                v_init_m3: 8.0e5,
                inflow_m3s: vec![10.0; n],
            },
            Reservoir {
                id: "res_dn".into(),
                v_max_m3: 1.6e6,
                v_init_m3: 9.0e5,
                inflow_m3s: vec![5.0; n],
            },
        ],
        plants: vec![
            HydroPlant {
                id: "pl_up".into(),
                reservoir: 0,
                area: 0,
                q_d_max_m3s: 60.0,
                q_b_max_m3s: 20.0,
                p_min_mw: 6.0,
                p_max_mw: 60.0,
                creek_m3s: vec![0.0; n],
                segments: vec![segment(0, 30.0, 1.1, false), segment(1, 30.0, 0.9, false)],
                discharge_to: RouteTarget::Reservoir(1),
                bypass_to: RouteTarget::Reservoir(1),
                spill_to: RouteTarget::Reservoir(1),
            },
            HydroPlant {
                id: "pl_dn".into(),
                reservoir: 1,
                area: 0,
                q_d_max_m3s: 80.0,
                q_b_max_m3s: 30.0,
                p_min_mw: 8.0,
                p_max_mw: 71.0,
                creek_m3s: vec![2.0; n],
                segments: vec![
                    segment(0, 30.0, 1.0, false),
                    segment(1, 20.0, 0.85, true),
                    segment(2, 30.0, 0.8, false),
                ],
                discharge_to: RouteTarget::Sink,
                bypass_to: RouteTarget::Sink,
                spill_to: RouteTarget::Sink,
            },
        ],
        thermal: vec![
            ThermalUnit {
                id: "t_slow".into(),
                area: 1,
                g_min_mw: 20.0,
                g_max_mw: 120.0,
                cost_mu_per_mwh: 12.0,
                startup_mu: 500.0,
                shutdown_mu: 300.0,
                ramp_up_mw_s: 0.01,
                ramp_down_mw_s: 0.01,
                start_gain_mw_s: 0.02,
                stop_gain_mw_s: 0.02,
                initially_on: true,
            },
            ThermalUnit {
                id: "t_fast".into(),
                area: 1,
                g_min_mw: 5.0,
                g_max_mw: 60.0,
                cost_mu_per_mwh: 40.0,
                startup_mu: 200.0,
                shutdown_mu: 100.0,
                ramp_up_mw_s: 0.05,
                ramp_down_mw_s: 0.05,
                start_gain_mw_s: 0.05,
                stop_gain_mw_s: 0.05,
                initially_on: false,
            },
        ],
        cables: vec![Cable {
            id: "hvdc".into(),
            from_area: 0,
            to_area: 1,
            f_max_mw: 50.0,
            ramp_up_mw_s: 0.5,
            ramp_down_mw_s: 0.5,
        }],
        cuts: vec![
            Cut {
                constant_mu: 6000.0,
                coeffs_mu_per_m3: vec![-0.004, -0.0035],
            },
            Cut {
                constant_mu: 2500.0,
                coeffs_mu_per_m3: vec![-0.002, -0.0018],
            },
            Cut {
                constant_mu: 9000.0,
                coeffs_mu_per_m3: vec![-0.0055, -0.005],
            },
        ],
    }
}

/// Hydro-only instance engineered to tempt premature segment use: the
/// second segment converts water more efficiently than the first
/// (concavity-violating ordering), water is valued through a cut, and the
/// load varies steeply above the first segment's 16 MW capacity. The
/// relaxation serves it from the efficient second segment alone; the
/// ordering binaries force the first segment to saturate instead.
pub fn segment_temptation_instance(num_intervals: usize) -> SystemInstance {
    let horizon = hourly_horizon(num_intervals);
    let n = horizon.num_intervals();
    let end = horizon.end_s();
    // The load (and its cubic control points, which swing wider than the
    // values) stays above the 16 MW capacity of segment 0, so the efficient
    // segment 1 is always needed and the fill-order binaries always bind.
    let load = load_smooth(&horizon, |t| {
        27.0 + 7.0 * (std::f64::consts::PI * t / end).sin()
    });
    SystemInstance {
        horizon,
        penalties: Penalties {
            bypass_mu_per_m3: 0.05,
            spill_mu_per_m3: 0.1,
        },
        areas: vec![Area {
            id: "main".into(),
            load_mw: load,
        }],
        reservoirs: vec![Reservoir {
            id: "res".into(),
            v_max_m3: 4.0e6,
            v_init_m3: 2.0e6,
            inflow_m3s: vec![1.0; n],
        }],
        plants: vec![HydroPlant {
            id: "pl".into(),
            reservoir: 0,
            area: 0,
            q_d_max_m3s: 40.0,
            q_b_max_m3s: 10.0,
            p_min_mw: 1.0,
            p_max_mw: 40.0,
            creek_m3s: vec![0.0; n],
            segments: vec![segment(0, 20.0, 0.8, false), segment(1, 20.0, 1.2, false)],
            discharge_to: RouteTarget::Sink,
            bypass_to: RouteTarget::Sink,
            spill_to: RouteTarget::Sink,
        }],
        thermal: Vec::new(),
        cables: Vec::new(),
        cuts: vec![Cut {
            constant_mu: 50000.0,
            coeffs_mu_per_m3: vec![-0.02],
        }],
    }
}
