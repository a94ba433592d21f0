//! Reader for the sectioned system file format.
//!
//! The file is plain text with `[section]` headers, `#` comments and
//! whitespace-separated columns. Load and inflow series can be given as
//! constants, as references to `time_s,value` CSV files (resolved relative to
//! the system file) or inline via `[load <area>]` / `[inflow <reservoir>]` /
//! `[creek <plant>]` tables.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use ctsched_bernstein::{fit_samples, samples_from_csv_file, PiecewisePoly, Sample};

use crate::error::SystemError;
use crate::types::*;
use crate::validate::validate_topology;

#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Enforce value and derivative continuity across interval boundaries
    /// when fitting load CSVs.
    pub enforce_c1: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self { enforce_c1: true }
    }
}

pub fn load_system<P: AsRef<Path>>(path: P) -> Result<SystemInstance, SystemError> {
    load_system_with(path, &LoadOptions::default())
}

pub fn load_system_with<P: AsRef<Path>>(
    path: P,
    opts: &LoadOptions,
) -> Result<SystemInstance, SystemError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| SystemError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_system_text(&text, base, &path.display().to_string(), opts)
}

#[derive(Debug, Clone)]
enum SeriesSource {
    Const(f64),
    Csv(PathBuf),
    Inline,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

struct Sections<'a> {
    preamble: Vec<Line<'a>>,
    named: Vec<(usize, Vec<String>, Vec<Line<'a>>)>,
}

fn split_sections<'a>(text: &'a str, path: &str) -> Result<Sections<'a>, SystemError> {
    let mut out = Sections {
        preamble: Vec::new(),
        named: Vec::new(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            if !content.ends_with(']') {
                return Err(parse_err(path, no, "unterminated section header"));
            }
            let header: Vec<String> = content[1..content.len() - 1]
                .split_whitespace()
                .map(str::to_string)
                .collect();
            if header.is_empty() {
                return Err(parse_err(path, no, "empty section header"));
            }
            out.named.push((no, header, Vec::new()));
        } else {
            let line = Line { no, text: content };
            match out.named.last_mut() {
                Some((_, _, lines)) => lines.push(line),
                None => out.preamble.push(line),
            }
        }
    }
    Ok(out)
}

fn parse_err(path: &str, line: usize, message: impl Into<String>) -> SystemError {
    SystemError::Parse {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_kv(line: &Line, path: &str) -> Result<(String, String), SystemError> {
    let mut parts = line.text.splitn(2, '=');
    let key = parts.next().unwrap_or("").trim().to_string();
    let value = parts
        .next()
        .ok_or_else(|| parse_err(path, line.no, "expected `key = value`"))?
        .trim()
        .to_string();
    Ok((key, value))
}

fn num(path: &str, line: usize, field: &str, raw: &str) -> Result<f64, SystemError> {
    let v: f64 = raw
        .parse()
        .map_err(|_| parse_err(path, line, format!("cannot parse {field} from `{raw}`")))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, format!("{field} must be finite")));
    }
    Ok(v)
}

fn parse_source(path: &str, line: usize, raw: &str, base: &Path) -> Result<SeriesSource, SystemError> {
    if raw == "inline" {
        Ok(SeriesSource::Inline)
    } else if let Some(v) = raw.strip_prefix("const:") {
        Ok(SeriesSource::Const(num(path, line, "constant series", v)?))
    } else if let Some(p) = raw.strip_prefix("csv:") {
        Ok(SeriesSource::Csv(base.join(p)))
    } else {
        Err(parse_err(
            path,
            line,
            format!("series must be `const:<v>`, `csv:<path>` or `inline`, got `{raw}`"),
        ))
    }
}

/// Time-weighted per-interval means of a step function given by samples:
/// each value holds from its timestamp to the next (and the first/last values
/// extend to the horizon edges).
fn step_means(samples: &[Sample], knots: &[f64]) -> Result<Vec<f64>, String> {
    if samples.is_empty() {
        return Err("series has no samples".into());
    }
    let n = knots.len() - 1;
    let mut out = Vec::with_capacity(n);
    for h in 0..n {
        let (a, b) = (knots[h], knots[h + 1]);
        let mut acc = 0.0;
        for (i, s) in samples.iter().enumerate() {
            let seg_start = if i == 0 { f64::NEG_INFINITY } else { s.time_s };
            let seg_end = samples.get(i + 1).map_or(f64::INFINITY, |n| n.time_s);
            let lo = seg_start.max(a);
            let hi = seg_end.min(b);
            if hi > lo {
                acc += s.value * (hi - lo);
            }
        }
        out.push(acc / (b - a));
    }
    Ok(out)
}

pub fn parse_system_text(
    text: &str,
    base: &Path,
    path: &str,
    opts: &LoadOptions,
) -> Result<SystemInstance, SystemError> {
    let sections = split_sections(text, path)?;

    for line in &sections.preamble {
        let (key, value) = parse_kv(line, path)?;
        if key == "version" {
            if value != "1" {
                return Err(parse_err(
                    path,
                    line.no,
                    format!("unsupported schema version {value}"),
                ));
            }
        } else {
            return Err(parse_err(path, line.no, format!("unknown top-level key {key}")));
        }
    }

    // First pass: index sections by header.
    let mut horizon: Option<Horizon> = None;
    let mut penalties = Penalties {
        bypass_mu_per_m3: 0.0,
        spill_mu_per_m3: 0.0,
    };
    let mut area_ids: Vec<(usize, String)> = Vec::new();
    let mut load_sources: HashMap<String, (usize, SeriesSource)> = HashMap::new();
    let mut inline_loads: HashMap<String, Vec<(usize, Vec<f64>)>> = HashMap::new();
    let mut inline_series: HashMap<(String, String), Vec<(usize, f64)>> = HashMap::new();
    struct RawReservoir {
        line: usize,
        id: String,
        v_max: f64,
        v_init: f64,
        inflow: SeriesSource,
    }
    struct RawPlant {
        line: usize,
        id: String,
        reservoir: String,
        area: String,
        q_d: f64,
        q_b: f64,
        p_min: f64,
        p_max: f64,
        creek: SeriesSource,
        discharge_to: String,
        bypass_to: String,
        spill_to: String,
    }
    let mut raw_reservoirs: Vec<RawReservoir> = Vec::new();
    struct RawCable {
        line: usize,
        id: String,
        from: String,
        to: String,
        f_max: f64,
        ramp_up: f64,
        ramp_down: f64,
    }
    let mut raw_plants: Vec<RawPlant> = Vec::new();
    let mut raw_segments: Vec<(usize, String, usize, f64, f64, bool)> = Vec::new();
    let mut thermal: Vec<ThermalUnit> = Vec::new();
    let mut raw_thermal_areas: Vec<(usize, String)> = Vec::new();
    let mut raw_cables: Vec<RawCable> = Vec::new();
    let mut raw_cuts: Vec<(usize, f64, Vec<(String, f64)>)> = Vec::new();

    for (header_line, header, lines) in &sections.named {
        match header[0].as_str() {
            "horizon" => {
                let mut start = 0.0;
                let mut knots: Option<Vec<f64>> = None;
                let mut lengths: Option<Vec<f64>> = None;
                for line in lines {
                    let (key, value) = parse_kv(line, path)?;
                    match key.as_str() {
                        "start" => start = num(path, line.no, "start", &value)?,
                        "knots" => {
                            let mut ks = Vec::new();
                            for tok in value.split_whitespace() {
                                ks.push(num(path, line.no, "knot", tok)?);
                            }
                            knots = Some(ks);
                        }
                        "intervals" => {
                            let toks: Vec<&str> = value.split_whitespace().collect();
                            let mut ds = Vec::new();
                            if toks.len() == 3 && toks[1] == "x" {
                                let count = toks[0].parse::<usize>().map_err(|_| {
                                    parse_err(path, line.no, "bad interval count")
                                })?;
                                let d = num(path, line.no, "interval length", toks[2])?;
                                ds = vec![d; count];
                            } else {
                                for tok in toks {
                                    ds.push(num(path, line.no, "interval length", tok)?);
                                }
                            }
                            lengths = Some(ds);
                        }
                        other => {
                            return Err(parse_err(path, line.no, format!("unknown horizon key {other}")))
                        }
                    }
                }
                let hz = if let Some(ks) = knots {
                    if ks.len() < 2 || ks.windows(2).any(|w| !(w[1] > w[0])) {
                        return Err(parse_err(path, *header_line, "knots must be strictly increasing"));
                    }
                    Horizon { knots_s: ks }
                } else if let Some(ds) = lengths {
                    if ds.is_empty() || ds.iter().any(|d| *d <= 0.0) {
                        return Err(parse_err(path, *header_line, "interval lengths must be positive"));
                    }
                    Horizon::from_interval_lengths(start, &ds)
                } else {
                    return Err(parse_err(path, *header_line, "horizon needs `knots` or `intervals`"));
                };
                horizon = Some(hz);
            }
            "penalties" => {
                for line in lines {
                    let (key, value) = parse_kv(line, path)?;
                    match key.as_str() {
                        "bypass" => penalties.bypass_mu_per_m3 = num(path, line.no, "bypass", &value)?,
                        "spill" => penalties.spill_mu_per_m3 = num(path, line.no, "spill", &value)?,
                        other => {
                            return Err(parse_err(path, line.no, format!("unknown penalty key {other}")))
                        }
                    }
                }
            }
            "areas" => {
                for line in lines {
                    let toks: Vec<&str> = line.text.split_whitespace().collect();
                    if toks.len() != 1 {
                        return Err(parse_err(path, line.no, "area rows have a single id column"));
                    }
                    area_ids.push((line.no, toks[0].to_string()));
                }
            }
            "loads" => {
                for line in lines {
                    let toks: Vec<&str> = line.text.split_whitespace().collect();
                    if toks.len() != 2 {
                        return Err(parse_err(path, line.no, "load rows are `<area> <source>`"));
                    }
                    let source = parse_source(path, line.no, toks[1], base)?;
                    load_sources.insert(toks[0].to_string(), (line.no, source));
                }
            }
            "load" => {
                let area = header
                    .get(1)
                    .ok_or_else(|| parse_err(path, *header_line, "expected `[load <area>]`"))?
                    .clone();
                let mut rows = Vec::new();
                for line in lines {
                    let toks: Vec<&str> = line.text.split_whitespace().collect();
                    if toks.len() != 5 {
                        return Err(parse_err(path, line.no, "inline load rows are `<h> <c0> <c1> <c2> <c3>`"));
                    }
                    let h: usize = toks[0]
                        .parse()
                        .map_err(|_| parse_err(path, line.no, "bad interval index"))?;
                    let mut coeffs = Vec::with_capacity(4);
                    for t in &toks[1..] {
                        coeffs.push(num(path, line.no, "coefficient", t)?);
                    }
                    rows.push((h, coeffs));
                }
                inline_loads.insert(area, rows);
            }
            "inflow" | "creek" => {
                let owner = header
                    .get(1)
                    .ok_or_else(|| parse_err(path, *header_line, "expected `[inflow <id>]` / `[creek <id>]`"))?
                    .clone();
                let mut rows = Vec::new();
                for line in lines {
                    let toks: Vec<&str> = line.text.split_whitespace().collect();
                    if toks.len() != 2 {
                        return Err(parse_err(path, line.no, "series rows are `<h> <value>`"));
                    }
                    let _h: usize = toks[0]
                        .parse()
                        .map_err(|_| parse_err(path, line.no, "bad interval index"))?;
                    rows.push((line.no, num(path, line.no, "value", toks[1])?));
                }
                inline_series.insert((header[0].clone(), owner), rows);
            }
            "reservoirs" => {
                for line in lines {
                    let toks: Vec<&str> = line.text.split_whitespace().collect();
                    if toks.len() != 4 {
                        return Err(parse_err(
                            path,
                            line.no,
                            "reservoir rows are `<id> <v_max_m3> <v_init_m3> <inflow>`",
                        ));
                    }
                    raw_reservoirs.push(RawReservoir {
                        line: line.no,
                        id: toks[0].to_string(),
                        v_max: num(path, line.no, "v_max", toks[1])?,
                        v_init: num(path, line.no, "v_init", toks[2])?,
                        inflow: parse_source(path, line.no, toks[3], base)?,
                    });
                }
            }
            "plants" => {
                for line in lines {
                    let toks: Vec<&str> = line.text.split_whitespace().collect();
                    if toks.len() != 11 {
                        return Err(parse_err(
                            path,
                            line.no,
                            "plant rows are `<id> <reservoir> <area> <q_d> <q_b> <p_min> <p_max> <creek> <discharge_to> <bypass_to> <spill_to>`",
                        ));
                    }
                    raw_plants.push(RawPlant {
                        line: line.no,
                        id: toks[0].to_string(),
                        reservoir: toks[1].to_string(),
                        area: toks[2].to_string(),
                        q_d: num(path, line.no, "q_d", toks[3])?,
                        q_b: num(path, line.no, "q_b", toks[4])?,
                        p_min: num(path, line.no, "p_min", toks[5])?,
                        p_max: num(path, line.no, "p_max", toks[6])?,
                        creek: parse_source(path, line.no, toks[7], base)?,
                        discharge_to: toks[8].to_string(),
                        bypass_to: toks[9].to_string(),
                        spill_to: toks[10].to_string(),
                    });
                }
            }
            "segments" => {
                for line in lines {
                    let toks: Vec<&str> = line.text.split_whitespace().collect();
                    if toks.len() != 5 {
                        return Err(parse_err(
                            path,
                            line.no,
                            "segment rows are `<plant> <index> <q_s> <eta> <forbidden>`",
                        ));
                    }
                    let index: usize = toks[1]
                        .parse()
                        .map_err(|_| parse_err(path, line.no, "bad segment index"))?;
                    let forbidden = match toks[4] {
                        "0" => false,
                        "1" => true,
                        other => {
                            return Err(parse_err(path, line.no, format!("forbidden flag must be 0 or 1, got {other}")))
                        }
                    };
                    raw_segments.push((
                        line.no,
                        toks[0].to_string(),
                        index,
                        num(path, line.no, "q_s", toks[2])?,
                        num(path, line.no, "eta", toks[3])?,
                        forbidden,
                    ));
                }
            }
            "thermal" => {
                for line in lines {
                    let toks: Vec<&str> = line.text.split_whitespace().collect();
                    if toks.len() != 12 {
                        return Err(parse_err(
                            path,
                            line.no,
                            "thermal rows are `<id> <area> <g_min> <g_max> <cost_mu_per_mwh> <startup_mu> <shutdown_mu> <ramp_up> <ramp_dn> <gain_up> <gain_dn> <u_init>`",
                        ));
                    }
                    let initially_on = match toks[11] {
                        "0" => false,
                        "1" => true,
                        other => {
                            return Err(parse_err(path, line.no, format!("u_init must be 0 or 1, got {other}")))
                        }
                    };
                    raw_thermal_areas.push((line.no, toks[1].to_string()));
                    thermal.push(ThermalUnit {
                        id: toks[0].to_string(),
                        area: usize::MAX,
                        g_min_mw: num(path, line.no, "g_min", toks[2])?,
                        g_max_mw: num(path, line.no, "g_max", toks[3])?,
                        cost_mu_per_mwh: num(path, line.no, "cost", toks[4])?,
                        startup_mu: num(path, line.no, "startup", toks[5])?,
                        shutdown_mu: num(path, line.no, "shutdown", toks[6])?,
                        ramp_up_mw_s: num(path, line.no, "ramp_up", toks[7])?,
                        ramp_down_mw_s: num(path, line.no, "ramp_dn", toks[8])?,
                        start_gain_mw_s: num(path, line.no, "gain_up", toks[9])?,
                        stop_gain_mw_s: num(path, line.no, "gain_dn", toks[10])?,
                        initially_on,
                    });
                }
            }
            "cables" => {
                for line in lines {
                    let toks: Vec<&str> = line.text.split_whitespace().collect();
                    if toks.len() != 6 {
                        return Err(parse_err(
                            path,
                            line.no,
                            "cable rows are `<id> <from_area> <to_area> <f_max> <ramp_up> <ramp_dn>`",
                        ));
                    }
                    raw_cables.push(RawCable {
                        line: line.no,
                        id: toks[0].to_string(),
                        from: toks[1].to_string(),
                        to: toks[2].to_string(),
                        f_max: num(path, line.no, "f_max", toks[3])?,
                        ramp_up: num(path, line.no, "ramp_up", toks[4])?,
                        ramp_down: num(path, line.no, "ramp_dn", toks[5])?,
                    });
                }
            }
            "cuts" => {
                for line in lines {
                    let toks: Vec<&str> = line.text.split_whitespace().collect();
                    if toks.is_empty() {
                        continue;
                    }
                    let constant = num(path, line.no, "cut constant", toks[0])?;
                    let mut coeffs = Vec::new();
                    for tok in &toks[1..] {
                        let mut parts = tok.splitn(2, ':');
                        let res = parts
                            .next()
                            .filter(|s| !s.is_empty())
                            .ok_or_else(|| parse_err(path, line.no, "cut terms are `<reservoir>:<wv>`"))?;
                        let coef = parts
                            .next()
                            .ok_or_else(|| parse_err(path, line.no, "cut terms are `<reservoir>:<wv>`"))?;
                        coeffs.push((res.to_string(), num(path, line.no, "water value", coef)?));
                    }
                    raw_cuts.push((line.no, constant, coeffs));
                }
            }
            other => {
                return Err(parse_err(path, *header_line, format!("unknown section [{other}]")));
            }
        }
    }

    let horizon = horizon.ok_or_else(|| parse_err(path, 0, "missing [horizon] section"))?;
    let n = horizon.num_intervals();

    // Resolve areas and loads.
    let mut areas = Vec::new();
    for (line_no, id) in &area_ids {
        if areas.iter().any(|a: &Area| a.id == *id) {
            return Err(parse_err(path, *line_no, format!("duplicate area id {id}")));
        }
        let (src_line, source) = load_sources
            .get(id)
            .ok_or_else(|| parse_err(path, *line_no, format!("area {id} has no load entry")))?;
        let load = resolve_load(path, *src_line, id, source, &inline_loads, &horizon, opts)?;
        areas.push(Area {
            id: id.clone(),
            load_mw: load,
        });
    }
    for area in load_sources.keys() {
        if !areas.iter().any(|a| a.id == *area) {
            return Err(parse_err(path, 0, format!("load given for unknown area {area}")));
        }
    }

    let area_index = |id: &str, line: usize| -> Result<usize, SystemError> {
        areas
            .iter()
            .position(|a| a.id == id)
            .ok_or_else(|| parse_err(path, line, format!("unknown area {id}")))
    };

    // Reservoirs.
    let mut reservoirs = Vec::new();
    for raw in &raw_reservoirs {
        if reservoirs.iter().any(|r: &Reservoir| r.id == raw.id) {
            return Err(parse_err(path, raw.line, format!("duplicate reservoir id {}", raw.id)));
        }
        let inflow = resolve_steps(
            path,
            raw.line,
            "inflow",
            &raw.id,
            &raw.inflow,
            &inline_series,
            &horizon,
        )?;
        reservoirs.push(Reservoir {
            id: raw.id.clone(),
            v_max_m3: raw.v_max,
            v_init_m3: raw.v_init,
            inflow_m3s: inflow,
        });
    }
    let reservoir_index = |id: &str, line: usize| -> Result<usize, SystemError> {
        reservoirs
            .iter()
            .position(|r| r.id == id)
            .ok_or_else(|| parse_err(path, line, format!("unknown reservoir {id}")))
    };
    let route = |id: &str, line: usize| -> Result<RouteTarget, SystemError> {
        if id == "SINK" {
            Ok(RouteTarget::Sink)
        } else {
            Ok(RouteTarget::Reservoir(reservoir_index(id, line)?))
        }
    };

    // Plants with their segments.
    let mut plants = Vec::new();
    for raw in &raw_plants {
        if plants.iter().any(|p: &HydroPlant| p.id == raw.id) {
            return Err(parse_err(path, raw.line, format!("duplicate plant id {}", raw.id)));
        }
        let creek = resolve_steps(path, raw.line, "creek", &raw.id, &raw.creek, &inline_series, &horizon)?;
        let mut segments: Vec<DischargeSegment> = raw_segments
            .iter()
            .filter(|(_, plant, ..)| plant == &raw.id)
            .map(|(_, _, index, q_s, eta, forbidden)| DischargeSegment {
                index: *index,
                q_max_m3s: *q_s,
                energy_rate: *eta,
                forbidden: *forbidden,
            })
            .collect();
        segments.sort_by_key(|s| s.index);
        plants.push(HydroPlant {
            id: raw.id.clone(),
            reservoir: reservoir_index(&raw.reservoir, raw.line)?,
            area: area_index(&raw.area, raw.line)?,
            q_d_max_m3s: raw.q_d,
            q_b_max_m3s: raw.q_b,
            p_min_mw: raw.p_min,
            p_max_mw: raw.p_max,
            creek_m3s: creek,
            segments,
            discharge_to: route(&raw.discharge_to, raw.line)?,
            bypass_to: route(&raw.bypass_to, raw.line)?,
            spill_to: route(&raw.spill_to, raw.line)?,
        });
    }
    for (line, plant, ..) in &raw_segments {
        if !plants.iter().any(|p| p.id == *plant) {
            return Err(parse_err(path, *line, format!("segment for unknown plant {plant}")));
        }
    }

    // Thermal areas.
    for (unit, (line, area)) in thermal.iter_mut().zip(&raw_thermal_areas) {
        unit.area = area_index(area, *line)?;
    }
    {
        let mut seen = std::collections::HashSet::new();
        for (t, (line, _)) in thermal.iter().zip(&raw_thermal_areas) {
            if !seen.insert(t.id.clone()) {
                return Err(parse_err(path, *line, format!("duplicate thermal id {}", t.id)));
            }
        }
    }

    // Cables.
    let mut cables = Vec::new();
    for raw in &raw_cables {
        if cables.iter().any(|c: &Cable| c.id == raw.id) {
            return Err(parse_err(path, raw.line, format!("duplicate cable id {}", raw.id)));
        }
        cables.push(Cable {
            id: raw.id.clone(),
            from_area: area_index(&raw.from, raw.line)?,
            to_area: area_index(&raw.to, raw.line)?,
            f_max_mw: raw.f_max,
            ramp_up_mw_s: raw.ramp_up,
            ramp_down_mw_s: raw.ramp_down,
        });
    }

    // Cuts: missing coefficients default to zero so every cut covers every
    // reservoir.
    let mut cuts = Vec::new();
    for (line, constant, coeffs) in &raw_cuts {
        let mut full = vec![0.0; reservoirs.len()];
        for (res, coef) in coeffs {
            full[reservoir_index(res, *line)?] = *coef;
        }
        cuts.push(Cut {
            constant_mu: *constant,
            coeffs_mu_per_m3: full,
        });
    }

    let instance = SystemInstance {
        horizon,
        penalties,
        areas,
        reservoirs,
        plants,
        thermal,
        cables,
        cuts,
    };
    let _ = n;
    let diagnostics = validate_topology(&instance);
    if !diagnostics.is_empty() {
        return Err(SystemError::Invalid(diagnostics));
    }
    Ok(instance)
}

/// Raw 5-minute load samples per area, for the raw-reference imbalance mode.
/// Only areas whose load comes from a CSV have raw samples; constant loads
/// synthesize a two-point series and inline loads have none.
pub fn raw_load_samples<P: AsRef<Path>>(
    path: P,
) -> Result<std::collections::BTreeMap<String, Vec<Sample>>, SystemError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| SystemError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let label = path.display().to_string();
    let sections = split_sections(&text, &label)?;
    let mut horizon_span: Option<(f64, f64)> = None;
    for (_, header, lines) in &sections.named {
        if header[0] == "horizon" {
            for line in lines {
                let (key, value) = parse_kv(line, &label)?;
                match key.as_str() {
                    "knots" => {
                        let ks: Vec<f64> = value
                            .split_whitespace()
                            .filter_map(|t| t.parse().ok())
                            .collect();
                        if ks.len() >= 2 {
                            horizon_span = Some((ks[0], *ks.last().unwrap()));
                        }
                    }
                    "intervals" => {
                        let toks: Vec<&str> = value.split_whitespace().collect();
                        let total: f64 = if toks.len() == 3 && toks[1] == "x" {
                            toks[0].parse::<f64>().unwrap_or(0.0)
                                * toks[2].parse::<f64>().unwrap_or(0.0)
                        } else {
                            toks.iter().filter_map(|t| t.parse::<f64>().ok()).sum()
                        };
                        horizon_span = Some((0.0, total));
                    }
                    _ => {}
                }
            }
        }
    }
    let mut out = std::collections::BTreeMap::new();
    for (_, header, lines) in &sections.named {
        if header[0] != "loads" {
            continue;
        }
        for line in lines {
            let toks: Vec<&str> = line.text.split_whitespace().collect();
            if toks.len() != 2 {
                continue;
            }
            match parse_source(&label, line.no, toks[1], base)? {
                SeriesSource::Csv(csv_path) => {
                    let samples =
                        samples_from_csv_file(&csv_path).map_err(|source| SystemError::Series {
                            entity: format!("load of area {}", toks[0]),
                            source,
                        })?;
                    out.insert(toks[0].to_string(), samples);
                }
                SeriesSource::Const(v) => {
                    if let Some((start, end)) = horizon_span {
                        out.insert(
                            toks[0].to_string(),
                            vec![
                                Sample {
                                    time_s: start,
                                    value: v,
                                },
                                Sample {
                                    time_s: end,
                                    value: v,
                                },
                            ],
                        );
                    }
                }
                SeriesSource::Inline => {}
            }
        }
    }
    Ok(out)
}

fn resolve_load(
    path: &str,
    line: usize,
    area: &str,
    source: &SeriesSource,
    inline_loads: &HashMap<String, Vec<(usize, Vec<f64>)>>,
    horizon: &Horizon,
    opts: &LoadOptions,
) -> Result<PiecewisePoly, SystemError> {
    match source {
        SeriesSource::Const(v) => {
            PiecewisePoly::constant_per_interval(
                horizon.knots_s.clone(),
                &vec![*v; horizon.num_intervals()],
            )
            .map_err(|e| parse_err(path, line, e.to_string()))
        }
        SeriesSource::Csv(csv_path) => {
            let samples = samples_from_csv_file(csv_path).map_err(|source| SystemError::Series {
                entity: format!("load of area {area}"),
                source,
            })?;
            fit_samples(&samples, &horizon.knots_s, opts.enforce_c1).map_err(|source| {
                SystemError::Series {
                    entity: format!("load of area {area}"),
                    source,
                }
            })
        }
        SeriesSource::Inline => {
            let rows = inline_loads
                .get(area)
                .ok_or_else(|| parse_err(path, line, format!("no [load {area}] section")))?;
            let mut by_h: Vec<Option<Vec<f64>>> = vec![None; rows.len()];
            for (h, coeffs) in rows {
                if *h >= rows.len() || by_h[*h].is_some() {
                    return Err(parse_err(
                        path,
                        line,
                        format!("[load {area}] rows must cover 0..{} exactly once", rows.len()),
                    ));
                }
                by_h[*h] = Some(coeffs.clone());
            }
            let pieces: Vec<ctsched_bernstein::BernsteinVec> = by_h
                .into_iter()
                .map(|c| ctsched_bernstein::BernsteinVec::new(c.unwrap()))
                .collect::<Result<_, _>>()
                .map_err(|e| parse_err(path, line, e.to_string()))?;
            // Build on horizon knots when the counts line up; otherwise keep
            // the data on a synthetic axis and let validation flag the
            // mismatch.
            let knots = if pieces.len() == horizon.num_intervals() {
                horizon.knots_s.clone()
            } else {
                (0..=pieces.len()).map(|i| i as f64).collect()
            };
            PiecewisePoly::new(knots, pieces).map_err(|e| parse_err(path, line, e.to_string()))
        }
    }
}

fn resolve_steps(
    path: &str,
    line: usize,
    kind: &str,
    owner: &str,
    source: &SeriesSource,
    inline_series: &HashMap<(String, String), Vec<(usize, f64)>>,
    horizon: &Horizon,
) -> Result<Vec<f64>, SystemError> {
    match source {
        SeriesSource::Const(v) => Ok(vec![*v; horizon.num_intervals()]),
        SeriesSource::Csv(csv_path) => {
            let samples = samples_from_csv_file(csv_path).map_err(|source| SystemError::Series {
                entity: format!("{kind} of {owner}"),
                source,
            })?;
            step_means(&samples, &horizon.knots_s).map_err(|m| parse_err(path, line, m))
        }
        SeriesSource::Inline => {
            let rows = inline_series
                .get(&(kind.to_string(), owner.to_string()))
                .ok_or_else(|| parse_err(path, line, format!("no [{kind} {owner}] section")))?;
            Ok(rows.iter().map(|(_, v)| *v).collect())
        }
    }
}
