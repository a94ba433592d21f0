//! Constraint builders for the continuous-time model. Each `build_*` method
//! adds one family of constraints; `build_ct` runs all of them in a fixed
//! order so identical instances produce byte-identical LP files.

use ctsched_milp::{LinExpr, MilpModel, ModelStats, Relop, VarRef};
use ctsched_system::{SystemInstance, Waterway};

use crate::blocks::{allocate, CtBlocks};
use crate::error::BuildError;

/// Shortest interval the continuity relaxation tolerates: the hydropower
/// continuity argument assumes intervals long against plant ramp times.
pub const MIN_INTERVAL_S: f64 = 60.0;

#[derive(Debug, Clone, Default)]
pub struct CtBuildOptions {
    /// Remove the hydro production jump constraints (the tractability
    /// trade-off switch).
    pub drop_hydro_continuity: bool,
}

pub struct CtProblem {
    pub model: MilpModel,
    pub blocks: CtBlocks,
    pub warnings: Vec<String>,
}

impl CtProblem {
    pub fn stats(&self) -> ModelStats {
        self.model.stats()
    }
}

pub struct CtBuilder<'a> {
    pub instance: &'a SystemInstance,
    pub opts: CtBuildOptions,
    pub model: MilpModel,
    pub blocks: CtBlocks,
    pub warnings: Vec<String>,
}

fn lin(terms: &[(VarRef, f64)]) -> LinExpr {
    terms.iter().cloned().collect()
}

impl<'a> CtBuilder<'a> {
    pub fn new(instance: &'a SystemInstance, opts: CtBuildOptions) -> Result<Self, BuildError> {
        for h in 0..instance.horizon.num_intervals() {
            let delta = instance.horizon.delta_s(h);
            if delta < MIN_INTERVAL_S {
                return Err(BuildError::IntervalTooShort {
                    interval: h,
                    delta_s: delta,
                    min_s: MIN_INTERVAL_S,
                });
            }
        }
        let mut model = MilpModel::new("ct_hydrothermal");
        let blocks = allocate(&mut model, instance)?;
        Ok(Self {
            instance,
            opts,
            model,
            blocks,
            warnings: Vec::new(),
        })
    }

    fn eq(&mut self, name: String, group: &str, expr: LinExpr, rhs: f64) -> Result<(), BuildError> {
        self.model
            .add_constraint_in_group(name, group, expr, Relop::Eq, rhs)?;
        Ok(())
    }

    fn le(&mut self, name: String, group: &str, expr: LinExpr, rhs: f64) -> Result<(), BuildError> {
        self.model
            .add_constraint_in_group(name, group, expr, Relop::Le, rhs)?;
        Ok(())
    }

    fn ge(&mut self, name: String, group: &str, expr: LinExpr, rhs: f64) -> Result<(), BuildError> {
        self.model
            .add_constraint_in_group(name, group, expr, Relop::Ge, rhs)?;
        Ok(())
    }

    /// Objective: future cost plus water penalties plus thermal operating,
    /// startup and shutdown costs. Flow and power integrals use the exact
    /// quarter-sum of the cubic coefficients.
    pub fn build_objective(&mut self) -> Result<(), BuildError> {
        let instance = self.instance;
        let mut obj = LinExpr::term(self.blocks.alpha, 1.0);
        let n = instance.horizon.num_intervals();
        for plant in &self.blocks.plants {
            for h in 0..n {
                let scale = instance.horizon.delta_s(h) / 4.0;
                for k in 0..4 {
                    obj.add_term(plant.q_b[h][k], scale * instance.penalties.bypass_mu_per_m3);
                    obj.add_term(plant.q_o[h][k], scale * instance.penalties.spill_mu_per_m3);
                }
            }
        }
        for (j, unit) in self.blocks.thermal.iter().enumerate() {
            let data = &instance.thermal[j];
            let cost = data.cost_mu_per_mws();
            for h in 0..n {
                let scale = instance.horizon.delta_s(h) / 4.0 * cost;
                for k in 0..4 {
                    obj.add_term(unit.g[h][k], scale);
                }
            }
            for t in 0..n.saturating_sub(1) {
                obj.add_term(unit.start[t], data.startup_mu);
                obj.add_term(unit.stop[t], data.shutdown_mu);
            }
        }
        self.model.set_objective(obj)?;
        Ok(())
    }

    /// Waterway bookkeeping, coefficient-wise: net flow, controlled
    /// outflow, upstream inflow and plant release.
    pub fn build_topology(&mut self) -> Result<(), BuildError> {
        let instance = self.instance;
        let n = instance.horizon.num_intervals();
        for (m, data) in instance.plants.iter().enumerate() {
            let id = &data.id;
            let reservoir = data.reservoir;
            let inflow = &instance.reservoirs[reservoir].inflow_m3s;
            let upstream = instance.upstream_of(reservoir);
            for h in 0..n {
                for k in 0..4 {
                    let b = &self.blocks.plants[m];
                    // q_net = I + q_in - q_out
                    let e = lin(&[
                        (b.q_net[h][k], 1.0),
                        (b.q_in[h][k], -1.0),
                        (b.q_out[h][k], 1.0),
                    ]);
                    self.eq(format!("tnet_{id}_{h}_{k}"), "topology", e, inflow[h])?;
                    // q_out = q_rel + q_o
                    let b = &self.blocks.plants[m];
                    let e = lin(&[
                        (b.q_out[h][k], 1.0),
                        (b.q_rel[h][k], -1.0),
                        (b.q_o[h][k], -1.0),
                    ]);
                    self.eq(format!("tout_{id}_{h}_{k}"), "topology", e, 0.0)?;
                    // q_in = sum of upstream discharge/bypass/spill
                    let mut e = LinExpr::term(self.blocks.plants[m].q_in[h][k], 1.0);
                    for (up, way) in &upstream {
                        let source = match way {
                            Waterway::Discharge => self.blocks.plants[*up].q_d[h][k],
                            Waterway::Bypass => self.blocks.plants[*up].q_b[h][k],
                            Waterway::Spill => self.blocks.plants[*up].q_o[h][k],
                        };
                        e.add_term(source, -1.0);
                    }
                    self.eq(format!("tin_{id}_{h}_{k}"), "topology", e, 0.0)?;
                    // q_rel = q_d + q_b - I_u
                    let b = &self.blocks.plants[m];
                    let e = lin(&[
                        (b.q_rel[h][k], 1.0),
                        (b.q_d[h][k], -1.0),
                        (b.q_b[h][k], -1.0),
                    ]);
                    self.eq(format!("trel_{id}_{h}_{k}"), "topology", e, -data.creek_m3s[h])?;
                }
            }
        }
        Ok(())
    }

    /// Volume dynamics: initial volume, knot-to-knot balance via the exact
    /// quarter-sum, and the five convex-hull inequalities keeping the
    /// degree-4 volume trajectory inside the reservoir for all t.
    pub fn build_volume(&mut self) -> Result<(), BuildError> {
        let instance = self.instance;
        let n = instance.horizon.num_intervals();
        for (r, data) in instance.reservoirs.iter().enumerate() {
            let id = &data.id;
            let v_init = data.v_init_m3;
            let v_max = data.v_max_m3;
            let plant = instance
                .plant_of_reservoir(r)
                .expect("validated: every reservoir has its plant");
            let v0 = self.blocks.reservoirs[r].v[0];
            self.eq(format!("vinit_{id}"), "volume", lin(&[(v0, 1.0)]), v_init)?;
            for h in 0..n {
                let delta = instance.horizon.delta_s(h);
                let b = &self.blocks.reservoirs[r];
                let q_net = self.blocks.plants[plant].q_net[h];
                let mut e = lin(&[(b.v[h + 1], 1.0), (b.v[h], -1.0)]);
                for q in q_net {
                    e.add_term(q, -delta / 4.0);
                }
                self.eq(format!("vbal_{id}_{h}"), "volume", e, 0.0)?;
                // Degree-4 hull: v_h + delta * (N^T q_net)_k for k = 0..4.
                for k in 0..5 {
                    let mut e = LinExpr::term(self.blocks.reservoirs[r].v[h], 1.0);
                    for q in q_net.iter().take(k) {
                        e.add_term(*q, delta / 4.0);
                    }
                    self.ge(format!("vhulllo_{id}_{h}_{k}"), "volume", e.clone(), 0.0)?;
                    self.le(format!("vhullhi_{id}_{h}_{k}"), "volume", e, v_max)?;
                }
            }
        }
        Ok(())
    }

    /// Future cost cuts on the end-of-horizon reservoir state. An empty cut
    /// set pins the future cost at zero.
    pub fn build_cuts(&mut self) -> Result<(), BuildError> {
        let n = self.instance.horizon.num_intervals();
        if self.instance.cuts.is_empty() {
            self.model.set_bounds(self.blocks.alpha, 0.0, 0.0)?;
            self.warnings
                .push("cut set is empty: future cost fixed at 0".to_string());
            return Ok(());
        }
        for (k, cut) in self.instance.cuts.iter().enumerate() {
            let mut e = LinExpr::term(self.blocks.alpha, 1.0);
            for (r, coeff) in cut.coeffs_mu_per_m3.iter().enumerate() {
                if *coeff != 0.0 {
                    e.add_term(self.blocks.reservoirs[r].v[n], -coeff);
                }
            }
            self.ge(format!("cut_{k}"), "cuts", e, cut.constant_mu)?;
        }
        Ok(())
    }

    /// Piecewise-linear production function with binary segment ordering:
    /// segment n must be at capacity before segment n+1 may flow, and
    /// forbidden segments are all-or-nothing.
    pub fn build_production(&mut self) -> Result<(), BuildError> {
        let instance = self.instance;
        let n = instance.horizon.num_intervals();
        for (m, data) in instance.plants.iter().enumerate() {
            let id = &data.id;
            let segments = &data.segments;
            for h in 0..n {
                for k in 0..4 {
                    let b = &self.blocks.plants[m];
                    let mut sum = LinExpr::term(b.q_d[h][k], 1.0);
                    for seg in &b.q_s {
                        sum.add_term(seg[h][k], -1.0);
                    }
                    self.eq(format!("qdsum_{id}_{h}_{k}"), "production", sum, 0.0)?;
                    let b = &self.blocks.plants[m];
                    let mut power = LinExpr::term(b.p[h][k], 1.0);
                    for (seg, q_s) in segments.iter().zip(&b.q_s) {
                        power.add_term(q_s[h][k], -seg.energy_rate);
                    }
                    self.eq(format!("pdef_{id}_{h}_{k}"), "production", power, 0.0)?;
                }
                for seg in segments {
                    let ni = seg.index;
                    for k in 0..4 {
                        let b = &self.blocks.plants[m];
                        let e = lin(&[(b.q_s[ni][h][k], 1.0), (b.w[ni][h], -seg.q_max_m3s)]);
                        if seg.forbidden {
                            self.eq(format!("segfix{ni}_{id}_{h}_{k}"), "production", e, 0.0)?;
                        } else {
                            self.ge(format!("seglo{ni}_{id}_{h}_{k}"), "production", e, 0.0)?;
                        }
                        if ni > 0 {
                            let b = &self.blocks.plants[m];
                            let e = lin(&[(b.q_s[ni][h][k], 1.0), (b.w[ni - 1][h], -seg.q_max_m3s)]);
                            self.le(format!("segord{ni}_{id}_{h}_{k}"), "production", e, 0.0)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Power balance per area, coefficient-wise against the fitted net load.
    pub fn build_power_balance(&mut self) -> Result<(), BuildError> {
        let instance = self.instance;
        let n = instance.horizon.num_intervals();
        for (a, area) in instance.areas.iter().enumerate() {
            if area.load_mw.num_intervals() != n {
                return Err(BuildError::LoadMismatch {
                    area: area.id.clone(),
                });
            }
            let plants = instance.plants_in_area(a);
            let units = instance.thermal_in_area(a);
            for h in 0..n {
                let piece = &area.load_mw.pieces()[h];
                if piece.degree() != 3 {
                    return Err(BuildError::LoadMismatch {
                        area: area.id.clone(),
                    });
                }
                for k in 0..4 {
                    let mut e = LinExpr::new();
                    for &m in &plants {
                        e.add_term(self.blocks.plants[m].p[h][k], 1.0);
                    }
                    for &j in &units {
                        e.add_term(self.blocks.thermal[j].g[h][k], 1.0);
                    }
                    for (l, cable) in instance.cables.iter().enumerate() {
                        let inc = cable.incidence(a);
                        if inc != 0.0 {
                            e.add_term(self.blocks.cables[l].f[h][k], -inc);
                        }
                    }
                    let rhs = piece.coeffs()[k];
                    self.eq(format!("bal_{}_{h}_{k}", area.id), "balance", e, rhs)?;
                }
            }
        }
        Ok(())
    }

    /// HVDC ramping: the degree-2 derivative coefficients bound the flow
    /// derivative everywhere in the interval.
    pub fn build_cable(&mut self) -> Result<(), BuildError> {
        let instance = self.instance;
        let n = instance.horizon.num_intervals();
        for (l, data) in instance.cables.iter().enumerate() {
            let id = &data.id;
            for h in 0..n {
                let delta = instance.horizon.delta_s(h);
                for k in 0..3 {
                    let f = self.blocks.cables[l].f[h];
                    let e = lin(&[(f[k + 1], 3.0 / delta), (f[k], -3.0 / delta)]);
                    self.le(
                        format!("frampup_{id}_{h}_{k}"),
                        "cable",
                        e.clone(),
                        data.ramp_up_mw_s,
                    )?;
                    self.ge(format!("frampdn_{id}_{h}_{k}"), "cable", e, -data.ramp_down_mw_s)?;
                }
            }
        }
        Ok(())
    }

    /// Thermal unit commitment and ramping. The commitment vector
    /// interpolates from the interval's start state to its end state so a
    /// unit can ramp in from (or out to) zero inside one interval; the last
    /// interval's state is frozen.
    pub fn build_thermal(&mut self) -> Result<(), BuildError> {
        let instance = self.instance;
        let n = instance.horizon.num_intervals();
        for (j, data) in instance.thermal.iter().enumerate() {
            let id = &data.id;
            for h in 0..n {
                let delta = instance.horizon.delta_s(h);
                for k in 0..4 {
                    let b = &self.blocks.thermal[j];
                    let state = if k < 2 || h + 1 >= n { b.u[h] } else { b.u[h + 1] };
                    let hi = lin(&[(b.g[h][k], 1.0), (state, -data.g_max_mw)]);
                    self.le(format!("gcap_{id}_{h}_{k}"), "thermal", hi, 0.0)?;
                    let b = &self.blocks.thermal[j];
                    let state = if k < 2 || h + 1 >= n { b.u[h] } else { b.u[h + 1] };
                    let lo = lin(&[(b.g[h][k], 1.0), (state, -data.g_min_mw)]);
                    self.ge(format!("gmin_{id}_{h}_{k}"), "thermal", lo, 0.0)?;
                }
                for k in 0..3 {
                    let b = &self.blocks.thermal[j];
                    let g = b.g[h];
                    let mut up = lin(&[(g[k + 1], 3.0 / delta), (g[k], -3.0 / delta)]);
                    let mut dn = up.clone();
                    if h + 1 < n {
                        up.add_term(b.start[h], -data.start_gain_mw_s);
                        dn.add_term(b.stop[h], data.stop_gain_mw_s);
                    }
                    self.le(format!("grampup_{id}_{h}_{k}"), "thermal", up, data.ramp_up_mw_s)?;
                    self.ge(
                        format!("grampdn_{id}_{h}_{k}"),
                        "thermal",
                        dn,
                        -data.ramp_down_mw_s,
                    )?;
                }
            }
            for t in 0..n.saturating_sub(1) {
                let b = &self.blocks.thermal[j];
                let e = lin(&[
                    (b.start[t], 1.0),
                    (b.stop[t], -1.0),
                    (b.u[t + 1], -1.0),
                    (b.u[t], 1.0),
                ]);
                self.eq(format!("scount_{id}_{t}"), "thermal", e, 0.0)?;
                let b = &self.blocks.thermal[j];
                let e = lin(&[(b.start[t], 1.0), (b.stop[t], 1.0)]);
                self.le(format!("sonce_{id}_{t}"), "thermal", e, 1.0)?;
            }
        }
        Ok(())
    }

    /// Hydropower unit commitment: production confined to [P_min, P_max]
    /// while committed, zero otherwise, with the commitment constant over
    /// each interval so output never dwells between 0 and P_min.
    pub fn build_hydro_uc(&mut self) -> Result<(), BuildError> {
        let instance = self.instance;
        let n = instance.horizon.num_intervals();
        for (m, data) in instance.plants.iter().enumerate() {
            let id = &data.id;
            for h in 0..n {
                for k in 0..4 {
                    let b = &self.blocks.plants[m];
                    let hi = lin(&[(b.p[h][k], 1.0), (b.z[h], -data.p_max_mw)]);
                    self.le(format!("pcap_{id}_{h}_{k}"), "hydro_uc", hi, 0.0)?;
                    let b = &self.blocks.plants[m];
                    let lo = lin(&[(b.p[h][k], 1.0), (b.z[h], -data.p_min_mw)]);
                    self.ge(format!("pmin_{id}_{h}_{k}"), "hydro_uc", lo, 0.0)?;
                }
            }
            for t in 0..n.saturating_sub(1) {
                let b = &self.blocks.plants[m];
                let e = lin(&[
                    (b.start[t], 1.0),
                    (b.stop[t], -1.0),
                    (b.z[t + 1], -1.0),
                    (b.z[t], 1.0),
                ]);
                self.eq(format!("hscount_{id}_{t}"), "hydro_uc", e, 0.0)?;
                let b = &self.blocks.plants[m];
                let e = lin(&[(b.start[t], 1.0), (b.stop[t], 1.0)]);
                self.le(format!("hsonce_{id}_{t}"), "hydro_uc", e, 1.0)?;
            }
        }
        Ok(())
    }

    /// Continuity across interior knots: thermal and cable trajectories are
    /// C1 (value and time derivative), bypass and spill are C0, and hydro
    /// production may jump only when a start/stop indicator is set. Nothing
    /// is imposed on the discharge variables themselves.
    pub fn build_continuity(&mut self) -> Result<(), BuildError> {
        let instance = self.instance;
        let n = instance.horizon.num_intervals();
        if n < 2 {
            return Ok(());
        }
        for (j, data) in instance.thermal.iter().enumerate() {
            let id = &data.id;
            for t in 0..n - 1 {
                let b = &self.blocks.thermal[j];
                let e = lin(&[(b.g[t][3], 1.0), (b.g[t + 1][0], -1.0)]);
                self.eq(format!("gc0_{id}_{t}"), "continuity", e, 0.0)?;
                let d0 = instance.horizon.delta_s(t);
                let d1 = instance.horizon.delta_s(t + 1);
                let b = &self.blocks.thermal[j];
                let e = lin(&[
                    (b.g[t][3], 3.0 / d0),
                    (b.g[t][2], -3.0 / d0),
                    (b.g[t + 1][1], -3.0 / d1),
                    (b.g[t + 1][0], 3.0 / d1),
                ]);
                self.eq(format!("gc1_{id}_{t}"), "continuity", e, 0.0)?;
            }
        }
        for (l, data) in instance.cables.iter().enumerate() {
            let id = &data.id;
            for t in 0..n - 1 {
                let b = &self.blocks.cables[l];
                let e = lin(&[(b.f[t][3], 1.0), (b.f[t + 1][0], -1.0)]);
                self.eq(format!("fc0_{id}_{t}"), "continuity", e, 0.0)?;
                let d0 = instance.horizon.delta_s(t);
                let d1 = instance.horizon.delta_s(t + 1);
                let b = &self.blocks.cables[l];
                let e = lin(&[
                    (b.f[t][3], 3.0 / d0),
                    (b.f[t][2], -3.0 / d0),
                    (b.f[t + 1][1], -3.0 / d1),
                    (b.f[t + 1][0], 3.0 / d1),
                ]);
                self.eq(format!("fc1_{id}_{t}"), "continuity", e, 0.0)?;
            }
        }
        for (m, data) in instance.plants.iter().enumerate() {
            let id = &data.id;
            for t in 0..n - 1 {
                let b = &self.blocks.plants[m];
                let e = lin(&[(b.q_b[t][3], 1.0), (b.q_b[t + 1][0], -1.0)]);
                self.eq(format!("qbc0_{id}_{t}"), "continuity", e, 0.0)?;
                let b = &self.blocks.plants[m];
                let e = lin(&[(b.q_o[t][3], 1.0), (b.q_o[t + 1][0], -1.0)]);
                self.eq(format!("qoc0_{id}_{t}"), "continuity", e, 0.0)?;
                if !self.opts.drop_hydro_continuity {
                    let b = &self.blocks.plants[m];
                    let jump_dn = lin(&[
                        (b.p[t][3], 1.0),
                        (b.p[t + 1][0], -1.0),
                        (b.stop[t], -data.p_max_mw),
                    ]);
                    self.le(format!("pjdn_{id}_{t}"), "continuity", jump_dn, 0.0)?;
                    let b = &self.blocks.plants[m];
                    let jump_up = lin(&[
                        (b.p[t + 1][0], 1.0),
                        (b.p[t][3], -1.0),
                        (b.start[t], -data.p_max_mw),
                    ]);
                    self.le(format!("pjup_{id}_{t}"), "continuity", jump_up, 0.0)?;
                }
            }
        }
        Ok(())
    }

    pub fn finish(self) -> CtProblem {
        CtProblem {
            model: self.model,
            blocks: self.blocks,
            warnings: self.warnings,
        }
    }
}

/// Build the full continuous-time MILP for an instance.
pub fn build_ct(instance: &SystemInstance, opts: CtBuildOptions) -> Result<CtProblem, BuildError> {
    let mut b = CtBuilder::new(instance, opts)?;
    b.build_objective()?;
    b.build_topology()?;
    b.build_volume()?;
    b.build_cuts()?;
    b.build_production()?;
    b.build_power_balance()?;
    b.build_cable()?;
    b.build_thermal()?;
    b.build_hydro_uc()?;
    b.build_continuity()?;
    Ok(b.finish())
}
