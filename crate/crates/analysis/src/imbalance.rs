//! Structural (deterministic) imbalance: the energy mismatch between a
//! schedule and the continuously varying reference load, and the CT vs DT
//! comparison report built from it.

use std::collections::BTreeMap;
use std::io::Write;

use ctsched_bernstein::{BernsteinVec, PiecewisePoly, Sample};
use ctsched_ct::Schedule;
use ctsched_dt::DtSchedule;
use ctsched_milp::ModelStats;
use ctsched_system::SystemInstance;

use crate::error::AnalysisError;
use crate::quadrature::integral_abs_diff;
use crate::sig9;

/// Energy mismatch in MWh between a scheduled trajectory and a reference
/// load over their shared horizon, by exact piecewise quadrature.
pub fn structural_imbalance(
    scheduled: &PiecewisePoly,
    reference_load: &PiecewisePoly,
) -> Result<f64, AnalysisError> {
    Ok(integral_abs_diff(scheduled, reference_load)? / 3600.0)
}

/// What the schedules are measured against.
#[derive(Debug, Clone, Default)]
pub enum ReferenceLoad<'a> {
    /// The fitted continuous-time load of the instance (the model's best
    /// proxy for real-time load).
    #[default]
    Fitted,
    /// Raw samples per area id, integrated as a piecewise-linear function
    /// (trapezoid rule).
    RawSamples(&'a BTreeMap<String, Vec<Sample>>),
}

/// Piecewise-linear interpolant through samples, exact under the trapezoid
/// rule.
pub fn piecewise_linear(samples: &[Sample]) -> Result<PiecewisePoly, AnalysisError> {
    if samples.len() < 2
        || samples
            .windows(2)
            .any(|w| !(w[1].time_s > w[0].time_s))
    {
        return Err(AnalysisError::BadReference("<samples>".into()));
    }
    let knots: Vec<f64> = samples.iter().map(|s| s.time_s).collect();
    let pieces = samples
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].value, w[1].value);
            BernsteinVec::cubic([a, a + (b - a) / 3.0, a + 2.0 * (b - a) / 3.0, b])
        })
        .collect();
    Ok(PiecewisePoly::new(knots, pieces)?)
}

fn reference_for_area(
    instance: &SystemInstance,
    area: usize,
    reference: &ReferenceLoad,
) -> Result<PiecewisePoly, AnalysisError> {
    match reference {
        ReferenceLoad::Fitted => Ok(instance.areas[area].load_mw.clone()),
        ReferenceLoad::RawSamples(map) => {
            let id = &instance.areas[area].id;
            let samples = map
                .get(id)
                .ok_or_else(|| AnalysisError::BadReference(id.clone()))?;
            piecewise_linear(samples).map_err(|_| AnalysisError::BadReference(id.clone()))
        }
    }
}

#[derive(Debug, Clone)]
pub struct AreaImbalance {
    pub area: String,
    pub dt_mwh: f64,
    pub ct_mwh: f64,
    /// `1 - ct/dt`; zero with `dt_zero` set when the DT imbalance vanishes.
    pub reduction: f64,
    pub dt_zero: bool,
}

#[derive(Debug, Clone)]
pub struct ImbalanceReport {
    pub areas: Vec<AreaImbalance>,
    pub system_dt_mwh: f64,
    pub system_ct_mwh: f64,
    pub system_reduction: f64,
    pub system_dt_zero: bool,
    pub ct_objective_mu: f64,
    pub dt_objective_mu: f64,
    pub ct_stats: ModelStats,
    pub dt_stats: ModelStats,
    pub ct_gap: Option<f64>,
    pub dt_gap: Option<f64>,
    pub ct_time_s: f64,
    pub dt_time_s: f64,
}

fn reduction(dt: f64, ct: f64) -> (f64, bool) {
    const TINY: f64 = 1e-12;
    if dt > TINY {
        (1.0 - ct / dt, false)
    } else {
        (0.0, true)
    }
}

/// Per-area and system-level imbalances of the CT and DT schedules against
/// the reference load, with cost deltas and the model-size table.
pub fn compare(
    ct: &Schedule,
    dt: &DtSchedule,
    instance: &SystemInstance,
    reference: &ReferenceLoad,
) -> Result<ImbalanceReport, AnalysisError> {
    let mut areas = Vec::new();
    let mut system_dt = 0.0;
    let mut system_ct = 0.0;
    for (a, area) in instance.areas.iter().enumerate() {
        let reference_load = reference_for_area(instance, a, reference)?;
        let ct_inj = ct.area_injection(instance, a);
        let dt_inj = dt.area_injection(instance, a);
        let ct_mwh = structural_imbalance(&ct_inj, &reference_load)?;
        let dt_mwh = structural_imbalance(&dt_inj, &reference_load)?;
        system_ct += ct_mwh;
        system_dt += dt_mwh;
        let (red, zero) = reduction(dt_mwh, ct_mwh);
        areas.push(AreaImbalance {
            area: area.id.clone(),
            dt_mwh,
            ct_mwh,
            reduction: red,
            dt_zero: zero,
        });
    }
    let (system_reduction, system_dt_zero) = reduction(system_dt, system_ct);
    Ok(ImbalanceReport {
        areas,
        system_dt_mwh: system_dt,
        system_ct_mwh: system_ct,
        system_reduction,
        system_dt_zero,
        ct_objective_mu: ct.objective.total_mu,
        dt_objective_mu: dt.objective.total_mu,
        ct_stats: ct.meta.stats,
        dt_stats: dt.meta.stats,
        ct_gap: ct.meta.mip_gap,
        dt_gap: dt.meta.mip_gap,
        ct_time_s: ct.meta.wall_time_s,
        dt_time_s: dt.meta.wall_time_s,
    })
}

impl ImbalanceReport {
    pub fn write_text<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "structural imbalance report")?;
        writeln!(w, "===========================")?;
        for a in &self.areas {
            let flag = if a.dt_zero { " (dt imbalance ~ 0)" } else { "" };
            writeln!(
                w,
                "area {}: dt {} MWh, ct {} MWh, reduction {} %{}",
                a.area,
                sig9(a.dt_mwh),
                sig9(a.ct_mwh),
                sig9(100.0 * a.reduction),
                flag
            )?;
        }
        let flag = if self.system_dt_zero {
            " (dt imbalance ~ 0)"
        } else {
            ""
        };
        writeln!(
            w,
            "system: dt {} MWh, ct {} MWh, reduction {} %{}",
            sig9(self.system_dt_mwh),
            sig9(self.system_ct_mwh),
            sig9(100.0 * self.system_reduction),
            flag
        )?;
        writeln!(w)?;
        writeln!(
            w,
            "objective: ct {} mu, dt {} mu, delta {} mu",
            sig9(self.ct_objective_mu),
            sig9(self.dt_objective_mu),
            sig9(self.ct_objective_mu - self.dt_objective_mu)
        )?;
        writeln!(w)?;
        writeln!(w, "model size            hourly    cont.-time")?;
        writeln!(
            w,
            "binary variables      {:<9} {}",
            self.dt_stats.binaries, self.ct_stats.binaries
        )?;
        writeln!(
            w,
            "continuous variables  {:<9} {}",
            self.dt_stats.continuous, self.ct_stats.continuous
        )?;
        writeln!(
            w,
            "constraints           {:<9} {}",
            self.dt_stats.constraints, self.ct_stats.constraints
        )?;
        writeln!(
            w,
            "solution time [s]     {:<9} {}",
            sig9(self.dt_time_s),
            sig9(self.ct_time_s)
        )?;
        writeln!(
            w,
            "mip gap               {:<9} {}",
            self.dt_gap.map_or("-".to_string(), sig9),
            self.ct_gap.map_or("-".to_string(), sig9)
        )?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("write to Vec");
        String::from_utf8(buf).expect("report is utf-8")
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "area,dt_mwh,ct_mwh,reduction,dt_zero")?;
        for a in &self.areas {
            writeln!(
                w,
                "{},{},{},{},{}",
                a.area,
                sig9(a.dt_mwh),
                sig9(a.ct_mwh),
                sig9(a.reduction),
                u8::from(a.dt_zero)
            )?;
        }
        writeln!(
            w,
            "system,{},{},{},{}",
            sig9(self.system_dt_mwh),
            sig9(self.system_ct_mwh),
            sig9(self.system_reduction),
            u8::from(self.system_dt_zero)
        )?;
        Ok(())
    }
}
