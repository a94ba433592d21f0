//! Variable allocation: one degree-3 coefficient vector per flow/power
//! variable per interval, scalar volumes per knot, commitment binaries.
//!
//! Names follow `<group>_<entity>_<interval>[_<coeffindex>]` so solution
//! files can be read back into coefficient vectors without auxiliary maps.

use ctsched_milp::{MilpModel, ModelError, VarRef};
use ctsched_system::SystemInstance;

pub struct PlantBlock {
    pub q_d: Vec<[VarRef; 4]>,
    /// Indexed `[segment][interval]`.
    pub q_s: Vec<Vec<[VarRef; 4]>>,
    pub q_b: Vec<[VarRef; 4]>,
    pub q_o: Vec<[VarRef; 4]>,
    pub q_rel: Vec<[VarRef; 4]>,
    pub q_net: Vec<[VarRef; 4]>,
    pub q_in: Vec<[VarRef; 4]>,
    pub q_out: Vec<[VarRef; 4]>,
    pub p: Vec<[VarRef; 4]>,
    pub z: Vec<VarRef>,
    /// Indexed `[segment][interval]`.
    pub w: Vec<Vec<VarRef>>,
    /// Start/stop indicators for the N-1 interval transitions.
    pub start: Vec<VarRef>,
    pub stop: Vec<VarRef>,
}

pub struct ReservoirBlock {
    /// Volume at every knot (N+1 entries).
    pub v: Vec<VarRef>,
}

pub struct ThermalBlock {
    pub g: Vec<[VarRef; 4]>,
    pub u: Vec<VarRef>,
    pub start: Vec<VarRef>,
    pub stop: Vec<VarRef>,
}

pub struct CableBlock {
    pub f: Vec<[VarRef; 4]>,
}

pub struct CtBlocks {
    pub plants: Vec<PlantBlock>,
    pub reservoirs: Vec<ReservoirBlock>,
    pub thermal: Vec<ThermalBlock>,
    pub cables: Vec<CableBlock>,
    pub alpha: VarRef,
}

fn coeff_vec(
    model: &mut MilpModel,
    group: &str,
    entity: &str,
    h: usize,
    lo: f64,
    hi: f64,
) -> Result<[VarRef; 4], ModelError> {
    let mut out = [VarRef::default(); 4];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = model.add_continuous(format!("{group}_{entity}_{h}_{k}"), lo, hi)?;
    }
    Ok(out)
}

pub fn allocate(model: &mut MilpModel, instance: &SystemInstance) -> Result<CtBlocks, ModelError> {
    let n = instance.horizon.num_intervals();
    let inf = f64::INFINITY;

    let mut plants = Vec::with_capacity(instance.plants.len());
    for plant in &instance.plants {
        let id = plant.id.as_str();
        let mut block = PlantBlock {
            q_d: Vec::with_capacity(n),
            q_s: Vec::new(),
            q_b: Vec::with_capacity(n),
            q_o: Vec::with_capacity(n),
            q_rel: Vec::with_capacity(n),
            q_net: Vec::with_capacity(n),
            q_in: Vec::with_capacity(n),
            q_out: Vec::with_capacity(n),
            p: Vec::with_capacity(n),
            z: Vec::with_capacity(n),
            w: Vec::new(),
            start: Vec::with_capacity(n.saturating_sub(1)),
            stop: Vec::with_capacity(n.saturating_sub(1)),
        };
        for h in 0..n {
            block
                .q_d
                .push(coeff_vec(model, "qd", id, h, 0.0, plant.q_d_max_m3s)?);
            block
                .q_b
                .push(coeff_vec(model, "qb", id, h, 0.0, plant.q_b_max_m3s)?);
            block.q_o.push(coeff_vec(model, "qo", id, h, 0.0, inf)?);
            block.q_rel.push(coeff_vec(model, "qrel", id, h, 0.0, inf)?);
            block
                .q_net
                .push(coeff_vec(model, "qnet", id, h, -inf, inf)?);
            block.q_in.push(coeff_vec(model, "qin", id, h, 0.0, inf)?);
            block.q_out.push(coeff_vec(model, "qout", id, h, 0.0, inf)?);
            block
                .p
                .push(coeff_vec(model, "p", id, h, 0.0, plant.p_max_mw)?);
            block.z.push(model.add_binary(format!("z_{id}_{h}"))?);
        }
        for seg in &plant.segments {
            let mut q_s = Vec::with_capacity(n);
            let mut w = Vec::with_capacity(n);
            for h in 0..n {
                q_s.push(coeff_vec(
                    model,
                    &format!("qs{}", seg.index),
                    id,
                    h,
                    0.0,
                    seg.q_max_m3s,
                )?);
                w.push(model.add_binary(format!("w{}_{id}_{h}", seg.index))?);
            }
            block.q_s.push(q_s);
            block.w.push(w);
        }
        for t in 0..n.saturating_sub(1) {
            block.start.push(model.add_binary(format!("hup_{id}_{t}"))?);
            block.stop.push(model.add_binary(format!("hdn_{id}_{t}"))?);
        }
        plants.push(block);
    }

    let mut reservoirs = Vec::with_capacity(instance.reservoirs.len());
    for reservoir in &instance.reservoirs {
        let mut v = Vec::with_capacity(n + 1);
        for i in 0..=n {
            v.push(model.add_continuous(
                format!("v_{}_{i}", reservoir.id),
                0.0,
                reservoir.v_max_m3,
            )?);
        }
        reservoirs.push(ReservoirBlock { v });
    }

    let mut thermal = Vec::with_capacity(instance.thermal.len());
    for unit in &instance.thermal {
        let id = unit.id.as_str();
        let mut block = ThermalBlock {
            g: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            start: Vec::with_capacity(n.saturating_sub(1)),
            stop: Vec::with_capacity(n.saturating_sub(1)),
        };
        for h in 0..n {
            block
                .g
                .push(coeff_vec(model, "g", id, h, 0.0, unit.g_max_mw)?);
            let u = model.add_binary(format!("u_{id}_{h}"))?;
            block.u.push(u);
        }
        // The state entering the horizon is data, not a decision.
        let init = if unit.initially_on { 1.0 } else { 0.0 };
        model.set_bounds(block.u[0], init, init)?;
        for t in 0..n.saturating_sub(1) {
            block.start.push(model.add_binary(format!("sup_{id}_{t}"))?);
            block.stop.push(model.add_binary(format!("sdn_{id}_{t}"))?);
        }
        thermal.push(block);
    }

    let mut cables = Vec::with_capacity(instance.cables.len());
    for cable in &instance.cables {
        let mut f = Vec::with_capacity(n);
        for h in 0..n {
            f.push(coeff_vec(
                model,
                "f",
                &cable.id,
                h,
                -cable.f_max_mw,
                cable.f_max_mw,
            )?);
        }
        cables.push(CableBlock { f });
    }

    let alpha = model.add_continuous("alpha", -inf, inf)?;

    Ok(CtBlocks {
        plants,
        reservoirs,
        thermal,
        cables,
        alpha,
    })
}
