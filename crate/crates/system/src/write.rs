//! Canonical writer for the system file format. Series are emitted inline so
//! the output is self-contained and `load_system(write_system(x))` round
//! trips exactly.

use std::io::{self, Write};
use std::path::Path;

use crate::types::{RouteTarget, SystemInstance};

fn n(v: f64) -> String {
    format!("{v}")
}

fn route(instance: &SystemInstance, target: RouteTarget) -> String {
    match target {
        RouteTarget::Sink => "SINK".to_string(),
        RouteTarget::Reservoir(r) => instance.reservoirs[r].id.clone(),
    }
}

pub fn write_system<W: Write>(instance: &SystemInstance, w: &mut W) -> io::Result<()> {
    writeln!(w, "version = 1")?;
    writeln!(w)?;
    writeln!(w, "[horizon]")?;
    let knots: Vec<String> = instance.horizon.knots_s.iter().map(|k| n(*k)).collect();
    writeln!(w, "knots = {}", knots.join(" "))?;
    writeln!(w)?;
    writeln!(w, "[penalties]")?;
    writeln!(w, "bypass = {}", n(instance.penalties.bypass_mu_per_m3))?;
    writeln!(w, "spill = {}", n(instance.penalties.spill_mu_per_m3))?;
    writeln!(w)?;
    writeln!(w, "[areas]")?;
    for a in &instance.areas {
        writeln!(w, "{}", a.id)?;
    }
    writeln!(w)?;
    writeln!(w, "[loads]")?;
    for a in &instance.areas {
        writeln!(w, "{} inline", a.id)?;
    }
    for a in &instance.areas {
        writeln!(w)?;
        writeln!(w, "[load {}]", a.id)?;
        for (h, piece) in a.load_mw.pieces().iter().enumerate() {
            let coeffs: Vec<String> = piece.coeffs().iter().map(|c| n(*c)).collect();
            writeln!(w, "{h} {}", coeffs.join(" "))?;
        }
    }
    writeln!(w)?;
    writeln!(w, "[reservoirs]")?;
    for r in &instance.reservoirs {
        writeln!(w, "{} {} {} inline", r.id, n(r.v_max_m3), n(r.v_init_m3))?;
    }
    for r in &instance.reservoirs {
        writeln!(w)?;
        writeln!(w, "[inflow {}]", r.id)?;
        for (h, v) in r.inflow_m3s.iter().enumerate() {
            writeln!(w, "{h} {}", n(*v))?;
        }
    }
    writeln!(w)?;
    writeln!(w, "[plants]")?;
    for p in &instance.plants {
        writeln!(
            w,
            "{} {} {} {} {} {} {} inline {} {} {}",
            p.id,
            instance.reservoirs[p.reservoir].id,
            instance.areas[p.area].id,
            n(p.q_d_max_m3s),
            n(p.q_b_max_m3s),
            n(p.p_min_mw),
            n(p.p_max_mw),
            route(instance, p.discharge_to),
            route(instance, p.bypass_to),
            route(instance, p.spill_to),
        )?;
    }
    for p in &instance.plants {
        writeln!(w)?;
        writeln!(w, "[creek {}]", p.id)?;
        for (h, v) in p.creek_m3s.iter().enumerate() {
            writeln!(w, "{h} {}", n(*v))?;
        }
    }
    writeln!(w)?;
    writeln!(w, "[segments]")?;
    for p in &instance.plants {
        for s in &p.segments {
            writeln!(
                w,
                "{} {} {} {} {}",
                p.id,
                s.index,
                n(s.q_max_m3s),
                n(s.energy_rate),
                u8::from(s.forbidden)
            )?;
        }
    }
    writeln!(w)?;
    writeln!(w, "[thermal]")?;
    for t in &instance.thermal {
        writeln!(
            w,
            "{} {} {} {} {} {} {} {} {} {} {} {}",
            t.id,
            instance.areas[t.area].id,
            n(t.g_min_mw),
            n(t.g_max_mw),
            n(t.cost_mu_per_mwh),
            n(t.startup_mu),
            n(t.shutdown_mu),
            n(t.ramp_up_mw_s),
            n(t.ramp_down_mw_s),
            n(t.start_gain_mw_s),
            n(t.stop_gain_mw_s),
            u8::from(t.initially_on)
        )?;
    }
    writeln!(w)?;
    writeln!(w, "[cables]")?;
    for c in &instance.cables {
        writeln!(
            w,
            "{} {} {} {} {} {}",
            c.id,
            instance.areas[c.from_area].id,
            instance.areas[c.to_area].id,
            n(c.f_max_mw),
            n(c.ramp_up_mw_s),
            n(c.ramp_down_mw_s)
        )?;
    }
    if !instance.cuts.is_empty() {
        writeln!(w)?;
        writeln!(w, "[cuts]")?;
        for cut in &instance.cuts {
            let mut parts = vec![n(cut.constant_mu)];
            for (r, coef) in cut.coeffs_mu_per_m3.iter().enumerate() {
                if *coef != 0.0 {
                    parts.push(format!("{}:{}", instance.reservoirs[r].id, n(*coef)));
                }
            }
            writeln!(w, "{}", parts.join(" "))?;
        }
    }
    Ok(())
}

pub fn write_system_file<P: AsRef<Path>>(instance: &SystemInstance, path: P) -> io::Result<()> {
    let mut f = io::BufWriter::new(std::fs::File::create(path)?);
    write_system(instance, &mut f)?;
    f.flush()
}

pub fn system_to_string(instance: &SystemInstance) -> String {
    let mut buf = Vec::new();
    write_system(instance, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("system text is utf-8")
}
