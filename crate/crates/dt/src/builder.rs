//! The hourly model: one scalar per variable per interval, sharing the
//! topology, volume, cut, segment and commitment structure of the
//! continuous-time model. Loads enter as their exact per-interval means and
//! ramp limits couple adjacent hours through endpoint differences.

use ctsched_milp::{LinExpr, MilpModel, ModelError, ModelStats, Relop, VarKind, VarRef};
use ctsched_system::{SystemInstance, Waterway};

use crate::error::DtBuildError;

pub struct DtPlantBlock {
    pub q_d: Vec<VarRef>,
    pub q_s: Vec<Vec<VarRef>>,
    pub q_b: Vec<VarRef>,
    pub q_o: Vec<VarRef>,
    pub q_rel: Vec<VarRef>,
    pub q_net: Vec<VarRef>,
    pub q_in: Vec<VarRef>,
    pub q_out: Vec<VarRef>,
    pub p: Vec<VarRef>,
    pub z: Vec<VarRef>,
    pub w: Vec<Vec<VarRef>>,
    /// Start/stop indicators; pure bookkeeping here (no cost or jump role),
    /// so they are relaxed to continuous [0, 1].
    pub start: Vec<VarRef>,
    pub stop: Vec<VarRef>,
}

pub struct DtThermalBlock {
    pub g: Vec<VarRef>,
    pub u: Vec<VarRef>,
    pub start: Vec<VarRef>,
    pub stop: Vec<VarRef>,
}

pub struct DtBlocks {
    pub plants: Vec<DtPlantBlock>,
    pub reservoirs: Vec<Vec<VarRef>>,
    pub thermal: Vec<DtThermalBlock>,
    pub cables: Vec<Vec<VarRef>>,
    pub alpha: VarRef,
}

pub struct DtProblem {
    pub model: MilpModel,
    pub blocks: DtBlocks,
    pub warnings: Vec<String>,
}

impl DtProblem {
    pub fn stats(&self) -> ModelStats {
        self.model.stats()
    }
}

fn lin(terms: &[(VarRef, f64)]) -> LinExpr {
    terms.iter().cloned().collect()
}

fn allocate(model: &mut MilpModel, instance: &SystemInstance) -> Result<DtBlocks, ModelError> {
    let n = instance.horizon.num_intervals();
    let inf = f64::INFINITY;
    let mut plants = Vec::new();
    for plant in &instance.plants {
        let id = plant.id.as_str();
        let mut b = DtPlantBlock {
            q_d: Vec::new(),
            q_s: Vec::new(),
            q_b: Vec::new(),
            q_o: Vec::new(),
            q_rel: Vec::new(),
            q_net: Vec::new(),
            q_in: Vec::new(),
            q_out: Vec::new(),
            p: Vec::new(),
            z: Vec::new(),
            w: Vec::new(),
            start: Vec::new(),
            stop: Vec::new(),
        };
        for h in 0..n {
            b.q_d
                .push(model.add_continuous(format!("qd_{id}_{h}"), 0.0, plant.q_d_max_m3s)?);
            b.q_b
                .push(model.add_continuous(format!("qb_{id}_{h}"), 0.0, plant.q_b_max_m3s)?);
            b.q_o.push(model.add_continuous(format!("qo_{id}_{h}"), 0.0, inf)?);
            b.q_rel
                .push(model.add_continuous(format!("qrel_{id}_{h}"), 0.0, inf)?);
            b.q_net
                .push(model.add_continuous(format!("qnet_{id}_{h}"), -inf, inf)?);
            b.q_in
                .push(model.add_continuous(format!("qin_{id}_{h}"), 0.0, inf)?);
            b.q_out
                .push(model.add_continuous(format!("qout_{id}_{h}"), 0.0, inf)?);
            b.p
                .push(model.add_continuous(format!("p_{id}_{h}"), 0.0, plant.p_max_mw)?);
            b.z.push(model.add_binary(format!("z_{id}_{h}"))?);
        }
        for seg in &plant.segments {
            let mut q_s = Vec::new();
            let mut w = Vec::new();
            for h in 0..n {
                q_s.push(model.add_continuous(
                    format!("qs{}_{id}_{h}", seg.index),
                    0.0,
                    seg.q_max_m3s,
                )?);
                w.push(model.add_binary(format!("w{}_{id}_{h}", seg.index))?);
            }
            b.q_s.push(q_s);
            b.w.push(w);
        }
        for t in 0..n.saturating_sub(1) {
            b.start
                .push(model.add_var(format!("hup_{id}_{t}"), VarKind::Continuous, 0.0, 1.0)?);
            b.stop
                .push(model.add_var(format!("hdn_{id}_{t}"), VarKind::Continuous, 0.0, 1.0)?);
        }
        plants.push(b);
    }

    let mut reservoirs = Vec::new();
    for reservoir in &instance.reservoirs {
        let mut v = Vec::new();
        for i in 0..=n {
            v.push(model.add_continuous(
                format!("v_{}_{i}", reservoir.id),
                0.0,
                reservoir.v_max_m3,
            )?);
        }
        reservoirs.push(v);
    }

    let mut thermal = Vec::new();
    for unit in &instance.thermal {
        let id = unit.id.as_str();
        let mut b = DtThermalBlock {
            g: Vec::new(),
            u: Vec::new(),
            start: Vec::new(),
            stop: Vec::new(),
        };
        for h in 0..n {
            b.g
                .push(model.add_continuous(format!("g_{id}_{h}"), 0.0, unit.g_max_mw)?);
            b.u.push(model.add_binary(format!("u_{id}_{h}"))?);
        }
        let init = if unit.initially_on { 1.0 } else { 0.0 };
        model.set_bounds(b.u[0], init, init)?;
        for t in 0..n.saturating_sub(1) {
            b.start.push(model.add_binary(format!("sup_{id}_{t}"))?);
            b.stop.push(model.add_binary(format!("sdn_{id}_{t}"))?);
        }
        thermal.push(b);
    }

    let mut cables = Vec::new();
    for cable in &instance.cables {
        let mut f = Vec::new();
        for h in 0..n {
            f.push(model.add_continuous(
                format!("f_{}_{h}", cable.id),
                -cable.f_max_mw,
                cable.f_max_mw,
            )?);
        }
        cables.push(f);
    }

    let alpha = model.add_continuous("alpha", -inf, inf)?;
    Ok(DtBlocks {
        plants,
        reservoirs,
        thermal,
        cables,
        alpha,
    })
}

/// Build the full hourly MILP for an instance.
pub fn build_dt(instance: &SystemInstance) -> Result<DtProblem, DtBuildError> {
    let n = instance.horizon.num_intervals();
    let mut model = MilpModel::new("dt_hydrothermal");
    let blocks = allocate(&mut model, instance)?;
    let mut warnings = Vec::new();

    // Objective.
    let mut obj = LinExpr::term(blocks.alpha, 1.0);
    for b in &blocks.plants {
        for h in 0..n {
            let delta = instance.horizon.delta_s(h);
            obj.add_term(b.q_b[h], delta * instance.penalties.bypass_mu_per_m3);
            obj.add_term(b.q_o[h], delta * instance.penalties.spill_mu_per_m3);
        }
    }
    for (j, b) in blocks.thermal.iter().enumerate() {
        let unit = &instance.thermal[j];
        for h in 0..n {
            obj.add_term(b.g[h], instance.horizon.delta_s(h) * unit.cost_mu_per_mws());
        }
        for t in 0..n.saturating_sub(1) {
            obj.add_term(b.start[t], unit.startup_mu);
            obj.add_term(b.stop[t], unit.shutdown_mu);
        }
    }
    model.set_objective(obj)?;

    // Topology, per plant and hour.
    for (m, plant) in instance.plants.iter().enumerate() {
        let id = &plant.id;
        let inflow = &instance.reservoirs[plant.reservoir].inflow_m3s;
        let upstream = instance.upstream_of(plant.reservoir);
        for h in 0..n {
            let b = &blocks.plants[m];
            model.add_constraint_in_group(
                format!("tnet_{id}_{h}"),
                "topology",
                lin(&[(b.q_net[h], 1.0), (b.q_in[h], -1.0), (b.q_out[h], 1.0)]),
                Relop::Eq,
                inflow[h],
            )?;
            model.add_constraint_in_group(
                format!("tout_{id}_{h}"),
                "topology",
                lin(&[(b.q_out[h], 1.0), (b.q_rel[h], -1.0), (b.q_o[h], -1.0)]),
                Relop::Eq,
                0.0,
            )?;
            let mut e = LinExpr::term(b.q_in[h], 1.0);
            for (up, way) in &upstream {
                let source = match way {
                    Waterway::Discharge => blocks.plants[*up].q_d[h],
                    Waterway::Bypass => blocks.plants[*up].q_b[h],
                    Waterway::Spill => blocks.plants[*up].q_o[h],
                };
                e.add_term(source, -1.0);
            }
            model.add_constraint_in_group(format!("tin_{id}_{h}"), "topology", e, Relop::Eq, 0.0)?;
            let b = &blocks.plants[m];
            model.add_constraint_in_group(
                format!("trel_{id}_{h}"),
                "topology",
                lin(&[(b.q_rel[h], 1.0), (b.q_d[h], -1.0), (b.q_b[h], -1.0)]),
                Relop::Eq,
                -plant.creek_m3s[h],
            )?;
        }
    }

    // Volume balance (exact for piecewise-constant flows).
    for (r, reservoir) in instance.reservoirs.iter().enumerate() {
        let id = &reservoir.id;
        let plant = instance
            .plant_of_reservoir(r)
            .expect("validated: reservoir has a plant");
        model.add_constraint_in_group(
            format!("vinit_{id}"),
            "volume",
            lin(&[(blocks.reservoirs[r][0], 1.0)]),
            Relop::Eq,
            reservoir.v_init_m3,
        )?;
        for h in 0..n {
            let delta = instance.horizon.delta_s(h);
            let v = &blocks.reservoirs[r];
            model.add_constraint_in_group(
                format!("vbal_{id}_{h}"),
                "volume",
                lin(&[
                    (v[h + 1], 1.0),
                    (v[h], -1.0),
                    (blocks.plants[plant].q_net[h], -delta),
                ]),
                Relop::Eq,
                0.0,
            )?;
        }
    }

    // Future cost cuts.
    if instance.cuts.is_empty() {
        model.set_bounds(blocks.alpha, 0.0, 0.0)?;
        warnings.push("cut set is empty: future cost fixed at 0".to_string());
    } else {
        for (k, cut) in instance.cuts.iter().enumerate() {
            let mut e = LinExpr::term(blocks.alpha, 1.0);
            for (r, coeff) in cut.coeffs_mu_per_m3.iter().enumerate() {
                if *coeff != 0.0 {
                    e.add_term(blocks.reservoirs[r][n], -coeff);
                }
            }
            model.add_constraint_in_group(format!("cut_{k}"), "cuts", e, Relop::Ge, cut.constant_mu)?;
        }
    }

    // Production function with the same segment-ordering binaries.
    for (m, plant) in instance.plants.iter().enumerate() {
        let id = &plant.id;
        for h in 0..n {
            let b = &blocks.plants[m];
            let mut sum = LinExpr::term(b.q_d[h], 1.0);
            for q_s in &b.q_s {
                sum.add_term(q_s[h], -1.0);
            }
            model.add_constraint_in_group(format!("qdsum_{id}_{h}"), "production", sum, Relop::Eq, 0.0)?;
            let b = &blocks.plants[m];
            let mut power = LinExpr::term(b.p[h], 1.0);
            for (seg, q_s) in plant.segments.iter().zip(&b.q_s) {
                power.add_term(q_s[h], -seg.energy_rate);
            }
            model.add_constraint_in_group(format!("pdef_{id}_{h}"), "production", power, Relop::Eq, 0.0)?;
            for seg in &plant.segments {
                let ni = seg.index;
                let b = &blocks.plants[m];
                let e = lin(&[(b.q_s[ni][h], 1.0), (b.w[ni][h], -seg.q_max_m3s)]);
                if seg.forbidden {
                    model.add_constraint_in_group(
                        format!("segfix{ni}_{id}_{h}"),
                        "production",
                        e,
                        Relop::Eq,
                        0.0,
                    )?;
                } else {
                    model.add_constraint_in_group(
                        format!("seglo{ni}_{id}_{h}"),
                        "production",
                        e,
                        Relop::Ge,
                        0.0,
                    )?;
                }
                if ni > 0 {
                    let b = &blocks.plants[m];
                    model.add_constraint_in_group(
                        format!("segord{ni}_{id}_{h}"),
                        "production",
                        lin(&[(b.q_s[ni][h], 1.0), (b.w[ni - 1][h], -seg.q_max_m3s)]),
                        Relop::Le,
                        0.0,
                    )?;
                }
            }
        }
    }

    // Hourly energy balance against the exact interval mean of the load.
    for (a, area) in instance.areas.iter().enumerate() {
        if area.load_mw.num_intervals() != n {
            return Err(DtBuildError::LoadMismatch {
                area: area.id.clone(),
            });
        }
        let plants = instance.plants_in_area(a);
        let units = instance.thermal_in_area(a);
        for h in 0..n {
            let mut e = LinExpr::new();
            for &m in &plants {
                e.add_term(blocks.plants[m].p[h], 1.0);
            }
            for &j in &units {
                e.add_term(blocks.thermal[j].g[h], 1.0);
            }
            for (l, cable) in instance.cables.iter().enumerate() {
                let inc = cable.incidence(a);
                if inc != 0.0 {
                    e.add_term(blocks.cables[l][h], -inc);
                }
            }
            model.add_constraint_in_group(
                format!("bal_{}_{h}", area.id),
                "balance",
                e,
                Relop::Eq,
                area.load_mw.interval_mean(h),
            )?;
        }
    }

    // Thermal commitment and endpoint-difference ramping.
    for (j, unit) in instance.thermal.iter().enumerate() {
        let id = &unit.id;
        for h in 0..n {
            let b = &blocks.thermal[j];
            model.add_constraint_in_group(
                format!("gcap_{id}_{h}"),
                "thermal",
                lin(&[(b.g[h], 1.0), (b.u[h], -unit.g_max_mw)]),
                Relop::Le,
                0.0,
            )?;
            let b = &blocks.thermal[j];
            model.add_constraint_in_group(
                format!("gmin_{id}_{h}"),
                "thermal",
                lin(&[(b.g[h], 1.0), (b.u[h], -unit.g_min_mw)]),
                Relop::Ge,
                0.0,
            )?;
        }
        for t in 0..n.saturating_sub(1) {
            let delta = instance.horizon.delta_s(t);
            let b = &blocks.thermal[j];
            model.add_constraint_in_group(
                format!("grampup_{id}_{t}"),
                "thermal",
                lin(&[
                    (b.g[t + 1], 1.0),
                    (b.g[t], -1.0),
                    (b.start[t], -unit.start_gain_mw_s * delta),
                ]),
                Relop::Le,
                unit.ramp_up_mw_s * delta,
            )?;
            let b = &blocks.thermal[j];
            model.add_constraint_in_group(
                format!("grampdn_{id}_{t}"),
                "thermal",
                lin(&[
                    (b.g[t], 1.0),
                    (b.g[t + 1], -1.0),
                    (b.stop[t], -unit.stop_gain_mw_s * delta),
                ]),
                Relop::Le,
                unit.ramp_down_mw_s * delta,
            )?;
            let b = &blocks.thermal[j];
            model.add_constraint_in_group(
                format!("scount_{id}_{t}"),
                "thermal",
                lin(&[
                    (b.start[t], 1.0),
                    (b.stop[t], -1.0),
                    (b.u[t + 1], -1.0),
                    (b.u[t], 1.0),
                ]),
                Relop::Eq,
                0.0,
            )?;
            let b = &blocks.thermal[j];
            model.add_constraint_in_group(
                format!("sonce_{id}_{t}"),
                "thermal",
                lin(&[(b.start[t], 1.0), (b.stop[t], 1.0)]),
                Relop::Le,
                1.0,
            )?;
        }
    }

    // Cable ramping between hours.
    for (l, cable) in instance.cables.iter().enumerate() {
        let id = &cable.id;
        for t in 0..n.saturating_sub(1) {
            let delta = instance.horizon.delta_s(t);
            let f = &blocks.cables[l];
            model.add_constraint_in_group(
                format!("frampup_{id}_{t}"),
                "cable",
                lin(&[(f[t + 1], 1.0), (f[t], -1.0)]),
                Relop::Le,
                cable.ramp_up_mw_s * delta,
            )?;
            model.add_constraint_in_group(
                format!("frampdn_{id}_{t}"),
                "cable",
                lin(&[(f[t], 1.0), (f[t + 1], -1.0)]),
                Relop::Le,
                cable.ramp_down_mw_s * delta,
            )?;
        }
    }

    // Hydro commitment.
    for (m, plant) in instance.plants.iter().enumerate() {
        let id = &plant.id;
        for h in 0..n {
            let b = &blocks.plants[m];
            model.add_constraint_in_group(
                format!("pcap_{id}_{h}"),
                "hydro_uc",
                lin(&[(b.p[h], 1.0), (b.z[h], -plant.p_max_mw)]),
                Relop::Le,
                0.0,
            )?;
            let b = &blocks.plants[m];
            model.add_constraint_in_group(
                format!("pmin_{id}_{h}"),
                "hydro_uc",
                lin(&[(b.p[h], 1.0), (b.z[h], -plant.p_min_mw)]),
                Relop::Ge,
                0.0,
            )?;
        }
        for t in 0..n.saturating_sub(1) {
            let b = &blocks.plants[m];
            model.add_constraint_in_group(
                format!("hscount_{id}_{t}"),
                "hydro_uc",
                lin(&[
                    (b.start[t], 1.0),
                    (b.stop[t], -1.0),
                    (b.z[t + 1], -1.0),
                    (b.z[t], 1.0),
                ]),
                Relop::Eq,
                0.0,
            )?;
            let b = &blocks.plants[m];
            model.add_constraint_in_group(
                format!("hsonce_{id}_{t}"),
                "hydro_uc",
                lin(&[(b.start[t], 1.0), (b.stop[t], 1.0)]),
                Relop::Le,
                1.0,
            )?;
        }
    }

    Ok(DtProblem {
        model,
        blocks,
        warnings,
    })
}
