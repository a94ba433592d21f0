//! Figure-ready CSV export: every entity trajectory plus per-area
//! aggregates, sampled at a fixed resolution.

use std::io::Write;
use std::path::Path;

use ctsched_bernstein::PiecewisePoly;
use ctsched_ct::Schedule;
use ctsched_dt::DtSchedule;
use ctsched_system::SystemInstance;

use crate::error::AnalysisError;

/// Anything exportable as a set of named time series plus area aggregates.
pub trait ScheduleSeries {
    fn knots(&self) -> &[f64];
    fn series(&self) -> Vec<(String, &PiecewisePoly)>;
    fn aggregates(&self, instance: &SystemInstance) -> Vec<(String, PiecewisePoly)>;
}

impl ScheduleSeries for Schedule {
    fn knots(&self) -> &[f64] {
        &self.knots_s
    }

    fn series(&self) -> Vec<(String, &PiecewisePoly)> {
        let mut out = Vec::new();
        for (id, poly) in &self.hydro_production {
            out.push((format!("p_{id}"), poly));
        }
        for (id, poly) in &self.thermal_production {
            out.push((format!("g_{id}"), poly));
        }
        for (id, poly) in &self.cable_flow {
            out.push((format!("f_{id}"), poly));
        }
        for (name, poly) in &self.water_flows {
            out.push((name.clone(), poly));
        }
        for (id, poly) in &self.volumes {
            out.push((format!("v_{id}"), poly));
        }
        out
    }

    fn aggregates(&self, instance: &SystemInstance) -> Vec<(String, PiecewisePoly)> {
        let mut out = Vec::new();
        for (a, area) in instance.areas.iter().enumerate() {
            out.push((
                format!("area_{}_hydro", area.id),
                self.area_hydro_sum(instance, a),
            ));
            out.push((
                format!("area_{}_thermal", area.id),
                self.area_thermal_sum(instance, a),
            ));
            out.push((
                format!("area_{}_injection", area.id),
                self.area_injection(instance, a),
            ));
        }
        out
    }
}

impl ScheduleSeries for DtSchedule {
    fn knots(&self) -> &[f64] {
        &self.knots_s
    }

    fn series(&self) -> Vec<(String, &PiecewisePoly)> {
        let mut out = Vec::new();
        for (id, poly) in &self.hydro_production {
            out.push((format!("p_{id}"), poly));
        }
        for (id, poly) in &self.thermal_production {
            out.push((format!("g_{id}"), poly));
        }
        for (id, poly) in &self.cable_flow {
            out.push((format!("f_{id}"), poly));
        }
        for (name, poly) in &self.water_flows {
            out.push((name.clone(), poly));
        }
        for (id, poly) in &self.volumes {
            out.push((format!("v_{id}"), poly));
        }
        out
    }

    fn aggregates(&self, instance: &SystemInstance) -> Vec<(String, PiecewisePoly)> {
        let mut out = Vec::new();
        for (a, area) in instance.areas.iter().enumerate() {
            out.push((
                format!("area_{}_hydro", area.id),
                self.area_hydro_sum(instance, a),
            ));
            out.push((
                format!("area_{}_thermal", area.id),
                self.area_thermal_sum(instance, a),
            ));
            out.push((
                format!("area_{}_injection", area.id),
                self.area_injection(instance, a),
            ));
        }
        out
    }
}

/// Write one `time_s,value` CSV per entity and per aggregate into `dir`,
/// sampled every `resolution_s` seconds from the first to the last knot
/// inclusive.
pub fn sample_schedule<S: ScheduleSeries>(
    schedule: &S,
    instance: &SystemInstance,
    resolution_s: f64,
    dir: &Path,
) -> Result<(), AnalysisError> {
    if !(resolution_s > 0.0) {
        return Err(AnalysisError::BadResolution(resolution_s));
    }
    std::fs::create_dir_all(dir)?;
    let aggregates = schedule.aggregates(instance);
    let mut all: Vec<(String, &PiecewisePoly)> = schedule.series();
    for (name, poly) in &aggregates {
        all.push((name.clone(), poly));
    }
    for (name, poly) in all {
        let path = dir.join(format!("{name}.csv"));
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(file, "time_s,value")?;
        for t in sample_times(schedule.knots(), resolution_s) {
            // Full-precision values: downstream sums must reproduce the
            // aggregates exactly.
            writeln!(file, "{t},{}", poly.eval(t)?)?;
        }
        file.flush()?;
    }
    Ok(())
}

pub(crate) fn sample_times(knots: &[f64], resolution_s: f64) -> Vec<f64> {
    let start = knots[0];
    let end = *knots.last().unwrap();
    let mut out = Vec::new();
    let mut i = 0usize;
    loop {
        let t = start + i as f64 * resolution_s;
        if t > end + 1e-9 {
            break;
        }
        out.push(t.min(end));
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fencepost_counting() {
        let knots: Vec<f64> = (0..=24).map(|h| h as f64 * 3600.0).collect();
        assert_eq!(sample_times(&knots, 300.0).len(), 289);
        assert_eq!(sample_times(&[0.0, 600.0], 600.0).len(), 2);
    }
}
