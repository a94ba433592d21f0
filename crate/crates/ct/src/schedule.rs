//! Reassembly of solver output into piecewise-polynomial trajectories.

use std::collections::BTreeMap;

use ctsched_bernstein::{BernsteinVec, PiecewisePoly};
use ctsched_milp::{MilpModel, ModelStats, Solution, SolveStatus, VarRef};
use ctsched_system::SystemInstance;

use crate::blocks::CtBlocks;

#[derive(Debug, Clone, Default)]
pub struct ObjectiveBreakdown {
    pub total_mu: f64,
    pub future_cost_mu: f64,
    pub bypass_penalty_mu: f64,
    pub spill_penalty_mu: f64,
    pub thermal_energy_mu: f64,
    pub thermal_startup_mu: f64,
    pub thermal_shutdown_mu: f64,
}

#[derive(Debug, Clone)]
pub struct SolveMeta {
    pub status: SolveStatus,
    pub objective: f64,
    pub mip_gap: Option<f64>,
    pub wall_time_s: f64,
    pub stats: ModelStats,
    pub warnings: Vec<String>,
}

/// Solved continuous-time trajectories: cubic pieces for every flow and
/// power variable, degree-4 volume pieces, commitments and cost breakdown.
#[derive(Debug, Clone)]
pub struct Schedule {
    pub knots_s: Vec<f64>,
    pub hydro_production: BTreeMap<String, PiecewisePoly>,
    pub thermal_production: BTreeMap<String, PiecewisePoly>,
    pub cable_flow: BTreeMap<String, PiecewisePoly>,
    /// Water flows keyed `<kind>_<plant>` with kinds qd, qs<n>, qb, qo,
    /// qrel, qnet, qin, qout.
    pub water_flows: BTreeMap<String, PiecewisePoly>,
    /// Degree-4 volume trajectories per reservoir.
    pub volumes: BTreeMap<String, PiecewisePoly>,
    pub thermal_commitment: BTreeMap<String, Vec<bool>>,
    pub hydro_commitment: BTreeMap<String, Vec<bool>>,
    /// Per plant: `[segment][interval]` commitment of the ordering binaries.
    pub segment_commitment: BTreeMap<String, Vec<Vec<bool>>>,
    pub objective: ObjectiveBreakdown,
    pub meta: SolveMeta,
}

fn poly_from(
    knots: &[f64],
    sol: &Solution,
    coeffs: &[[VarRef; 4]],
) -> PiecewisePoly {
    let pieces = coeffs
        .iter()
        .map(|vars| BernsteinVec::cubic([
            sol.value(vars[0]),
            sol.value(vars[1]),
            sol.value(vars[2]),
            sol.value(vars[3]),
        ]))
        .collect();
    PiecewisePoly::new(knots.to_vec(), pieces).expect("solver trajectories share the horizon")
}

fn binaries(sol: &Solution, vars: &[VarRef]) -> Vec<bool> {
    vars.iter().map(|v| sol.value(*v) > 0.5).collect()
}

pub(crate) fn extract_schedule(
    instance: &SystemInstance,
    model: &MilpModel,
    blocks: &CtBlocks,
    sol: &Solution,
    warnings: Vec<String>,
) -> Schedule {
    let knots = &instance.horizon.knots_s;
    let mut hydro_production = BTreeMap::new();
    let mut water_flows = BTreeMap::new();
    let mut hydro_commitment = BTreeMap::new();
    let mut segment_commitment = BTreeMap::new();
    for (m, plant) in instance.plants.iter().enumerate() {
        let b = &blocks.plants[m];
        hydro_production.insert(plant.id.clone(), poly_from(knots, sol, &b.p));
        water_flows.insert(format!("qd_{}", plant.id), poly_from(knots, sol, &b.q_d));
        water_flows.insert(format!("qb_{}", plant.id), poly_from(knots, sol, &b.q_b));
        water_flows.insert(format!("qo_{}", plant.id), poly_from(knots, sol, &b.q_o));
        water_flows.insert(format!("qrel_{}", plant.id), poly_from(knots, sol, &b.q_rel));
        water_flows.insert(format!("qnet_{}", plant.id), poly_from(knots, sol, &b.q_net));
        water_flows.insert(format!("qin_{}", plant.id), poly_from(knots, sol, &b.q_in));
        water_flows.insert(format!("qout_{}", plant.id), poly_from(knots, sol, &b.q_out));
        for (s, q_s) in b.q_s.iter().enumerate() {
            water_flows.insert(format!("qs{s}_{}", plant.id), poly_from(knots, sol, q_s));
        }
        hydro_commitment.insert(plant.id.clone(), binaries(sol, &b.z));
        segment_commitment.insert(
            plant.id.clone(),
            b.w.iter().map(|w| binaries(sol, w)).collect(),
        );
    }

    // Degree-4 volume coefficients: the knot volume plus the scaled running
    // integral of q_net.
    let mut volumes = BTreeMap::new();
    for (r, reservoir) in instance.reservoirs.iter().enumerate() {
        let plant = instance
            .plant_of_reservoir(r)
            .expect("validated: reservoir has a plant");
        let mut pieces = Vec::with_capacity(instance.horizon.num_intervals());
        for h in 0..instance.horizon.num_intervals() {
            let delta = instance.horizon.delta_s(h);
            let v_h = sol.value(blocks.reservoirs[r].v[h]);
            let q: Vec<f64> = blocks.plants[plant].q_net[h]
                .iter()
                .map(|v| sol.value(*v))
                .collect();
            let mut coeffs = [v_h; 5];
            let mut acc = 0.0;
            for k in 1..5 {
                acc += q[k - 1];
                coeffs[k] = v_h + delta * 0.25 * acc;
            }
            pieces.push(BernsteinVec::new(coeffs.to_vec()).expect("degree-4 volume piece"));
        }
        volumes.insert(
            reservoir.id.clone(),
            PiecewisePoly::new(knots.clone(), pieces).expect("volume trajectory on horizon"),
        );
    }

    let mut thermal_production = BTreeMap::new();
    let mut thermal_commitment = BTreeMap::new();
    for (j, unit) in instance.thermal.iter().enumerate() {
        let b = &blocks.thermal[j];
        thermal_production.insert(unit.id.clone(), poly_from(knots, sol, &b.g));
        thermal_commitment.insert(unit.id.clone(), binaries(sol, &b.u));
    }

    let mut cable_flow = BTreeMap::new();
    for (l, cable) in instance.cables.iter().enumerate() {
        cable_flow.insert(cable.id.clone(), poly_from(knots, sol, &blocks.cables[l].f));
    }

    let objective = breakdown(instance, blocks, sol);
    let mut all_warnings = warnings;
    all_warnings.extend(sol.warnings.iter().cloned());

    Schedule {
        knots_s: knots.clone(),
        hydro_production,
        thermal_production,
        cable_flow,
        water_flows,
        volumes,
        thermal_commitment,
        hydro_commitment,
        segment_commitment,
        objective,
        meta: SolveMeta {
            status: sol.status,
            objective: sol.objective.unwrap_or(f64::NAN),
            mip_gap: sol.mip_gap,
            wall_time_s: sol.wall_time_s,
            stats: model.stats(),
            warnings: all_warnings,
        },
    }
}

fn breakdown(instance: &SystemInstance, blocks: &CtBlocks, sol: &Solution) -> ObjectiveBreakdown {
    let n = instance.horizon.num_intervals();
    let mut out = ObjectiveBreakdown {
        future_cost_mu: sol.value(blocks.alpha),
        ..Default::default()
    };
    for (m, _) in instance.plants.iter().enumerate() {
        let b = &blocks.plants[m];
        for h in 0..n {
            let scale = instance.horizon.delta_s(h) / 4.0;
            let qb: f64 = b.q_b[h].iter().map(|v| sol.value(*v)).sum();
            let qo: f64 = b.q_o[h].iter().map(|v| sol.value(*v)).sum();
            out.bypass_penalty_mu += scale * instance.penalties.bypass_mu_per_m3 * qb;
            out.spill_penalty_mu += scale * instance.penalties.spill_mu_per_m3 * qo;
        }
    }
    for (j, unit) in instance.thermal.iter().enumerate() {
        let b = &blocks.thermal[j];
        for h in 0..n {
            let scale = instance.horizon.delta_s(h) / 4.0 * unit.cost_mu_per_mws();
            let g: f64 = b.g[h].iter().map(|v| sol.value(*v)).sum();
            out.thermal_energy_mu += scale * g;
        }
        for t in 0..n.saturating_sub(1) {
            out.thermal_startup_mu += unit.startup_mu * sol.value(b.start[t]).round();
            out.thermal_shutdown_mu += unit.shutdown_mu * sol.value(b.stop[t]).round();
        }
    }
    out.total_mu = out.future_cost_mu
        + out.bypass_penalty_mu
        + out.spill_penalty_mu
        + out.thermal_energy_mu
        + out.thermal_startup_mu
        + out.thermal_shutdown_mu;
    out
}

impl Schedule {
    /// Net scheduled injection of an area: hydro plus thermal production
    /// minus cable exports, as one piecewise cubic.
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

    /// Sum of hydro production over an area.
    pub fn area_hydro_sum(&self, instance: &SystemInstance, area: usize) -> PiecewisePoly {
        let mut acc = PiecewisePoly::zero(self.knots_s.clone()).expect("horizon");
        for m in instance.plants_in_area(area) {
            acc = acc
                .axpy(1.0, &self.hydro_production[&instance.plants[m].id])
                .expect("shared knots");
        }
        acc
    }

    /// Sum of thermal production over an area.
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
