use ctsched_bernstein::PiecewisePoly;

/// Time axis: strictly increasing knots in seconds, one model interval per
/// knot gap.
#[derive(Debug, Clone, PartialEq)]
pub struct Horizon {
    pub knots_s: Vec<f64>,
}

impl Horizon {
    pub fn from_interval_lengths(start_s: f64, lengths_s: &[f64]) -> Self {
        let mut knots = Vec::with_capacity(lengths_s.len() + 1);
        let mut t = start_s;
        knots.push(t);
        for d in lengths_s {
            t += d;
            knots.push(t);
        }
        Self { knots_s: knots }
    }

    pub fn num_intervals(&self) -> usize {
        self.knots_s.len() - 1
    }

    pub fn delta_s(&self, h: usize) -> f64 {
        self.knots_s[h + 1] - self.knots_s[h]
    }

    pub fn start_s(&self) -> f64 {
        self.knots_s[0]
    }

    pub fn end_s(&self) -> f64 {
        *self.knots_s.last().unwrap()
    }
}

/// Water penalties of the objective function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Penalties {
    pub bypass_mu_per_m3: f64,
    pub spill_mu_per_m3: f64,
}

/// A market area: copper plate with a net load profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Area {
    pub id: String,
    pub load_mw: PiecewisePoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reservoir {
    pub id: String,
    pub v_max_m3: f64,
    pub v_init_m3: f64,
    /// Natural inflow, piecewise constant per interval.
    pub inflow_m3s: Vec<f64>,
}

/// Where a waterway discharges to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteTarget {
    Reservoir(usize),
    /// Water leaves the modelled system.
    Sink,
}

/// One linear piece of the discharge-to-power curve.
#[derive(Debug, Clone, PartialEq)]
pub struct DischargeSegment {
    pub index: usize,
    pub q_max_m3s: f64,
    /// Conversion factor eta in MWs per m3.
    pub energy_rate: f64,
    /// All-or-nothing segment modelling a forbidden production region.
    pub forbidden: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HydroPlant {
    pub id: String,
    pub reservoir: usize,
    pub area: usize,
    pub q_d_max_m3s: f64,
    pub q_b_max_m3s: f64,
    pub p_min_mw: f64,
    pub p_max_mw: f64,
    /// Creek intake entering the main tunnel, piecewise constant.
    pub creek_m3s: Vec<f64>,
    pub segments: Vec<DischargeSegment>,
    pub discharge_to: RouteTarget,
    pub bypass_to: RouteTarget,
    pub spill_to: RouteTarget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalUnit {
    pub id: String,
    pub area: usize,
    pub g_min_mw: f64,
    pub g_max_mw: f64,
    /// Marginal cost as given in the input file.
    pub cost_mu_per_mwh: f64,
    pub startup_mu: f64,
    pub shutdown_mu: f64,
    pub ramp_up_mw_s: f64,
    pub ramp_down_mw_s: f64,
    /// Extra ramping allowance while starting/stopping.
    pub start_gain_mw_s: f64,
    pub stop_gain_mw_s: f64,
    pub initially_on: bool,
}

impl ThermalUnit {
    /// Marginal cost converted so that `cost * integral(g dt)` with time in
    /// seconds is in mu.
    pub fn cost_mu_per_mws(&self) -> f64 {
        self.cost_mu_per_mwh / 3600.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cable {
    pub id: String,
    /// Positive flow exports from this area...
    pub from_area: usize,
    /// ...and imports into this one.
    pub to_area: usize,
    pub f_max_mw: f64,
    pub ramp_up_mw_s: f64,
    pub ramp_down_mw_s: f64,
}

impl Cable {
    /// Flow direction coefficient of the power balance for `area`.
    pub fn incidence(&self, area: usize) -> f64 {
        if area == self.from_area {
            1.0
        } else if area == self.to_area {
            -1.0
        } else {
            0.0
        }
    }
}

/// One Benders cut of the future cost function: `alpha >= sum_m WV_m * v_m(end) + D`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub constant_mu: f64,
    /// Water value per reservoir index; reservoirs not named in the input get 0.
    pub coeffs_mu_per_m3: Vec<f64>,
}

/// Which waterway an upstream plant uses to reach a reservoir.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Waterway {
    Discharge,
    Bypass,
    Spill,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemInstance {
    pub horizon: Horizon,
    pub penalties: Penalties,
    pub areas: Vec<Area>,
    pub reservoirs: Vec<Reservoir>,
    pub plants: Vec<HydroPlant>,
    pub thermal: Vec<ThermalUnit>,
    pub cables: Vec<Cable>,
    pub cuts: Vec<Cut>,
}

impl SystemInstance {
    pub fn area_index(&self, id: &str) -> Option<usize> {
        self.areas.iter().position(|a| a.id == id)
    }

    pub fn reservoir_index(&self, id: &str) -> Option<usize> {
        self.reservoirs.iter().position(|r| r.id == id)
    }

    pub fn plant_index(&self, id: &str) -> Option<usize> {
        self.plants.iter().position(|p| p.id == id)
    }

    /// The plant drawing from a reservoir (validated to be exactly one).
    pub fn plant_of_reservoir(&self, reservoir: usize) -> Option<usize> {
        self.plants.iter().position(|p| p.reservoir == reservoir)
    }

    /// All upstream (plant, waterway) pairs routed into a reservoir.
    pub fn upstream_of(&self, reservoir: usize) -> Vec<(usize, Waterway)> {
        let mut out = Vec::new();
        for (idx, plant) in self.plants.iter().enumerate() {
            for (target, way) in [
                (plant.discharge_to, Waterway::Discharge),
                (plant.bypass_to, Waterway::Bypass),
                (plant.spill_to, Waterway::Spill),
            ] {
                if target == RouteTarget::Reservoir(reservoir) {
                    out.push((idx, way));
                }
            }
        }
        out
    }

    pub fn plants_in_area(&self, area: usize) -> Vec<usize> {
        self.plants
            .iter()
            .enumerate()
            .filter(|(_, p)| p.area == area)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn thermal_in_area(&self, area: usize) -> Vec<usize> {
        self.thermal
            .iter()
            .enumerate()
            .filter(|(_, t)| t.area == area)
            .map(|(i, _)| i)
            .collect()
    }
}
