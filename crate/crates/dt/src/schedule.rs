use std::collections::BTreeMap;

use ctsched_bernstein::{BernsteinVec, PiecewisePoly};
use ctsched_milp::{MilpModel, ModelStats, Solution, SolveStatus, VarRef};
use ctsched_system::SystemInstance;

use crate::builder::DtBlocks;

#[derive(Debug, Clone, Default)]
pub struct DtObjectiveBreakdown {
    pub total_mu: f64,
    pub future_cost_mu: f64,
    pub bypass_penalty_mu: f64,
    pub spill_penalty_mu: f64,
    pub thermal_energy_mu: f64,
    pub thermal_startup_mu: f64,
    pub thermal_shutdown_mu: f64,
}

#[derive(Debug, Clone)]
pub struct DtSolveMeta {
    pub status: SolveStatus,
    pub objective: f64,
    pub mip_gap: Option<f64>,
    pub wall_time_s: f64,
    pub stats: ModelStats,
    pub warnings: Vec<String>,
}

/// Solved hourly schedule: scalar values per hour plus step-function
/// trajectories for comparison and export.
#[derive(Debug, Clone)]
pub struct DtSchedule {
    pub knots_s: Vec<f64>,
    /// Hourly scalars keyed like the continuous model's series
    /// (`p_<plant>`, `g_<unit>`, `f_<cable>`, `qd_<plant>` ...).
    pub hourly: BTreeMap<String, Vec<f64>>,
    pub hydro_production: BTreeMap<String, PiecewisePoly>,
    pub thermal_production: BTreeMap<String, PiecewisePoly>,
    pub cable_flow: BTreeMap<String, PiecewisePoly>,
    pub water_flows: BTreeMap<String, PiecewisePoly>,
    /// Piecewise-linear volume trajectories (exact between knots).
    pub volumes: BTreeMap<String, PiecewisePoly>,
    pub volume_knots_m3: BTreeMap<String, Vec<f64>>,
    pub thermal_commitment: BTreeMap<String, Vec<bool>>,
    pub hydro_commitment: BTreeMap<String, Vec<bool>>,
    pub segment_commitment: BTreeMap<String, Vec<Vec<bool>>>,
    pub objective: DtObjectiveBreakdown,
    pub meta: DtSolveMeta,
}

fn steps(knots: &[f64], sol: &Solution, vars: &[VarRef]) -> PiecewisePoly {
    let values: Vec<f64> = vars.iter().map(|v| sol.value(*v)).collect();
    PiecewisePoly::constant_per_interval(knots.to_vec(), &values)
        .expect("hourly steps on the horizon")
}

fn scalars(sol: &Solution, vars: &[VarRef]) -> Vec<f64> {
    vars.iter().map(|v| sol.value(*v)).collect()
}

fn binaries(sol: &Solution, vars: &[VarRef]) -> Vec<bool> {
    vars.iter().map(|v| sol.value(*v) > 0.5).collect()
}

/// Exact linear interpolation between knot volumes, as cubic pieces.
fn linear_pieces(knots: &[f64], values: &[f64]) -> PiecewisePoly {
    let pieces = values
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            BernsteinVec::cubic([a, a + (b - a) / 3.0, a + 2.0 * (b - a) / 3.0, b])
        })
        .collect();
    PiecewisePoly::new(knots.to_vec(), pieces).expect("volume knots on the horizon")
}

pub(crate) fn extract_dt_schedule(
    instance: &SystemInstance,
    model: &MilpModel,
    blocks: &DtBlocks,
    sol: &Solution,
    warnings: Vec<String>,
) -> DtSchedule {
    let knots = &instance.horizon.knots_s;
    let n = instance.horizon.num_intervals();
    let mut hourly = BTreeMap::new();
    let mut water_flows = BTreeMap::new();
    let mut hydro_production = BTreeMap::new();
    let mut hydro_commitment = BTreeMap::new();
    let mut segment_commitment = BTreeMap::new();

    for (m, plant) in instance.plants.iter().enumerate() {
        let b = &blocks.plants[m];
        let id = &plant.id;
        hydro_production.insert(id.clone(), steps(knots, sol, &b.p));
        hourly.insert(format!("p_{id}"), scalars(sol, &b.p));
        for (kind, vars) in [
            ("qd", &b.q_d),
            ("qb", &b.q_b),
            ("qo", &b.q_o),
            ("qrel", &b.q_rel),
            ("qnet", &b.q_net),
            ("qin", &b.q_in),
            ("qout", &b.q_out),
        ] {
            water_flows.insert(format!("{kind}_{id}"), steps(knots, sol, vars));
            hourly.insert(format!("{kind}_{id}"), scalars(sol, vars));
        }
        for (s, q_s) in b.q_s.iter().enumerate() {
            water_flows.insert(format!("qs{s}_{id}"), steps(knots, sol, q_s));
            hourly.insert(format!("qs{s}_{id}"), scalars(sol, q_s));
        }
        hydro_commitment.insert(id.clone(), binaries(sol, &b.z));
        segment_commitment.insert(id.clone(), b.w.iter().map(|w| binaries(sol, w)).collect());
    }

    let mut volumes = BTreeMap::new();
    let mut volume_knots = BTreeMap::new();
    for (r, reservoir) in instance.reservoirs.iter().enumerate() {
        let values = scalars(sol, &blocks.reservoirs[r]);
        volumes.insert(reservoir.id.clone(), linear_pieces(knots, &values));
        volume_knots.insert(reservoir.id.clone(), values);
    }

    let mut thermal_production = BTreeMap::new();
    let mut thermal_commitment = BTreeMap::new();
    for (j, unit) in instance.thermal.iter().enumerate() {
        let b = &blocks.thermal[j];
        thermal_production.insert(unit.id.clone(), steps(knots, sol, &b.g));
        hourly.insert(format!("g_{}", unit.id), scalars(sol, &b.g));
        thermal_commitment.insert(unit.id.clone(), binaries(sol, &b.u));
    }

    let mut cable_flow = BTreeMap::new();
    for (l, cable) in instance.cables.iter().enumerate() {
        cable_flow.insert(cable.id.clone(), steps(knots, sol, &blocks.cables[l]));
        hourly.insert(format!("f_{}", cable.id), scalars(sol, &blocks.cables[l]));
    }

    // Cost breakdown from the solved values.
    let mut objective = DtObjectiveBreakdown {
        future_cost_mu: sol.value(blocks.alpha),
        ..Default::default()
    };
    for (m, _) in instance.plants.iter().enumerate() {
        let b = &blocks.plants[m];
        for h in 0..n {
            let delta = instance.horizon.delta_s(h);
            objective.bypass_penalty_mu +=
                delta * instance.penalties.bypass_mu_per_m3 * sol.value(b.q_b[h]);
            objective.spill_penalty_mu +=
                delta * instance.penalties.spill_mu_per_m3 * sol.value(b.q_o[h]);
        }
    }
    for (j, unit) in instance.thermal.iter().enumerate() {
        let b = &blocks.thermal[j];
        for h in 0..n {
            objective.thermal_energy_mu +=
                instance.horizon.delta_s(h) * unit.cost_mu_per_mws() * sol.value(b.g[h]);
        }
        for t in 0..n.saturating_sub(1) {
            objective.thermal_startup_mu += unit.startup_mu * sol.value(b.start[t]).round();
            objective.thermal_shutdown_mu += unit.shutdown_mu * sol.value(b.stop[t]).round();
        }
    }
    objective.total_mu = objective.future_cost_mu
        + objective.bypass_penalty_mu
        + objective.spill_penalty_mu
        + objective.thermal_energy_mu
        + objective.thermal_startup_mu
        + objective.thermal_shutdown_mu;

    let mut all_warnings = warnings;
    all_warnings.extend(sol.warnings.iter().cloned());

    DtSchedule {
        knots_s: knots.clone(),
        hourly,
        hydro_production,
        thermal_production,
        cable_flow,
        water_flows,
        volumes,
        volume_knots_m3: volume_knots,
        thermal_commitment,
        hydro_commitment,
        segment_commitment,
        objective,
        meta: DtSolveMeta {
            status: sol.status,
            objective: sol.objective.unwrap_or(f64::NAN),
            mip_gap: sol.mip_gap,
            wall_time_s: sol.wall_time_s,
            stats: model.stats(),
            warnings: all_warnings,
        },
    }
}

impl DtSchedule {
    pub fn area_injection(&self, instance: &SystemInstance, area: usize) -> PiecewisePoly {
        let mut acc = PiecewisePoly::zero(self.knots_s.clone()).expect("horizon");
        for m in instance.plants_in_area(area) {
            acc = acc
                .axpy(1.0, &self.hydro_production[&instance.plants[m].id])
                .expect("shared knots");
        }
        for j in instance.thermal_in_area(area) {
            acc = acc
                .axpy(1.0, &self.thermal_production[&instance.thermal[j].id])
                .expect("shared knots");
        }
        for cable in &instance.cables {
            let inc = cable.incidence(area);
            if inc != 0.0 {
                acc = acc
                    .axpy(-inc, &self.cable_flow[&cable.id])
                    .expect("shared knots");
            }
        }
        acc
    }

    pub fn area_hydro_sum(&self, instance: &SystemInstance, area: usize) -> PiecewisePoly {
        let mut acc = PiecewisePoly::zero(self.knots_s.clone()).expect("horizon");
        for m in instance.plants_in_area(area) {
            acc = acc
                .axpy(1.0, &self.hydro_production[&instance.plants[m].id])
                .expect("shared knots");
        }
        acc
    }

    pub fn area_thermal_sum(&self, instance: &SystemInstance, area: usize) -> PiecewisePoly {
        let mut acc = PiecewisePoly::zero(self.knots_s.clone()).expect("horizon");
        for j in instance.thermal_in_area(area) {
            acc = acc
                .axpy(1.0, &self.thermal_production[&instance.thermal[j].id])
                .expect("shared knots");
        }
        acc
    }
}
