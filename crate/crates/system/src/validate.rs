use std::fmt;

use crate::types::{RouteTarget, SystemInstance};

const REL_TOL: f64 = 1e-9;

/// One violated invariant. `validate_topology` returns these instead of
/// failing, so a front end can report all problems at once.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    CyclicRouting {
        cycle: Vec<String>,
    },
    SegmentSumMismatch {
        plant: String,
        sum_m3s: f64,
        q_d_max_m3s: f64,
    },
    SegmentPowerMismatch {
        plant: String,
        sum_mw: f64,
        p_max_mw: f64,
    },
    HorizonMismatch {
        what: String,
        got: usize,
        want: usize,
    },
    InitialVolumeOutOfRange {
        reservoir: String,
        v_init_m3: f64,
        v_max_m3: f64,
    },
    NegativeInflow {
        entity: String,
        interval: usize,
    },
    PlantCountMismatch {
        reservoir: String,
        count: usize,
    },
    BadRange {
        entity: String,
        message: String,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::CyclicRouting { cycle } => {
                write!(f, "cyclic routing through reservoirs {}", cycle.join(" -> "))
            }
            Diagnostic::SegmentSumMismatch {
                plant,
                sum_m3s,
                q_d_max_m3s,
            } => write!(
                f,
                "plant {plant}: segment sum mismatch, widths total {sum_m3s} m3/s vs turbine max {q_d_max_m3s} m3/s"
            ),
            Diagnostic::SegmentPowerMismatch {
                plant,
                sum_mw,
                p_max_mw,
            } => write!(
                f,
                "plant {plant}: segment sum mismatch, eta-weighted widths total {sum_mw} MW vs p_max {p_max_mw} MW"
            ),
            Diagnostic::HorizonMismatch { what, got, want } => {
                write!(f, "horizon mismatch: {what} covers {got} intervals, horizon has {want}")
            }
            Diagnostic::InitialVolumeOutOfRange {
                reservoir,
                v_init_m3,
                v_max_m3,
            } => write!(
                f,
                "reservoir {reservoir}: initial volume {v_init_m3} m3 outside [0, {v_max_m3}] m3"
            ),
            Diagnostic::NegativeInflow { entity, interval } => {
                write!(f, "{entity}: negative inflow in interval {interval}")
            }
            Diagnostic::PlantCountMismatch { reservoir, count } => {
                write!(f, "reservoir {reservoir} has {count} plants, expected exactly 1")
            }
            Diagnostic::BadRange { entity, message } => write!(f, "{entity}: {message}"),
        }
    }
}

/// Check routing, segment sums and horizon alignment. Empty result means the
/// instance satisfies every modelled invariant.
fn id_ok(id: &str) -> bool {
    !id.is_empty()
        && id.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn validate_topology(instance: &SystemInstance) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let n = instance.horizon.num_intervals();

    // Entity ids become solver variable names, so they share that charset.
    let all_ids = instance
        .areas
        .iter()
        .map(|a| a.id.as_str())
        .chain(instance.reservoirs.iter().map(|r| r.id.as_str()))
        .chain(instance.plants.iter().map(|p| p.id.as_str()))
        .chain(instance.thermal.iter().map(|t| t.id.as_str()))
        .chain(instance.cables.iter().map(|c| c.id.as_str()));
    for id in all_ids {
        if !id_ok(id) {
            out.push(Diagnostic::BadRange {
                entity: format!("id {id}"),
                message: "ids must start with a letter and use only letters, digits and underscores"
                    .into(),
            });
        }
    }

    for area in &instance.areas {
        if area.load_mw.num_intervals() != n
            || area
                .load_mw
                .knots()
                .iter()
                .zip(&instance.horizon.knots_s)
                .any(|(a, b)| (a - b).abs() > 1e-9)
        {
            out.push(Diagnostic::HorizonMismatch {
                what: format!("load of area {}", area.id),
                got: area.load_mw.num_intervals(),
                want: n,
            });
        }
    }

    for r in &instance.reservoirs {
        if !(0.0 <= r.v_init_m3 && r.v_init_m3 <= r.v_max_m3) {
            out.push(Diagnostic::InitialVolumeOutOfRange {
                reservoir: r.id.clone(),
                v_init_m3: r.v_init_m3,
                v_max_m3: r.v_max_m3,
            });
        }
        if r.inflow_m3s.len() != n {
            out.push(Diagnostic::HorizonMismatch {
                what: format!("inflow of reservoir {}", r.id),
                got: r.inflow_m3s.len(),
                want: n,
            });
        }
        for (h, v) in r.inflow_m3s.iter().enumerate() {
            if *v < 0.0 {
                out.push(Diagnostic::NegativeInflow {
                    entity: format!("reservoir {}", r.id),
                    interval: h,
                });
            }
        }
    }

    for (ri, r) in instance.reservoirs.iter().enumerate() {
        let count = instance.plants.iter().filter(|p| p.reservoir == ri).count();
        if count != 1 {
            out.push(Diagnostic::PlantCountMismatch {
                reservoir: r.id.clone(),
                count,
            });
        }
    }

    for p in &instance.plants {
        if p.creek_m3s.len() != n {
            out.push(Diagnostic::HorizonMismatch {
                what: format!("creek intake of plant {}", p.id),
                got: p.creek_m3s.len(),
                want: n,
            });
        }
        for (h, v) in p.creek_m3s.iter().enumerate() {
            if *v < 0.0 {
                out.push(Diagnostic::NegativeInflow {
                    entity: format!("plant {}", p.id),
                    interval: h,
                });
            }
        }
        if !(0.0 <= p.p_min_mw && p.p_min_mw <= p.p_max_mw) {
            out.push(Diagnostic::BadRange {
                entity: format!("plant {}", p.id),
                message: format!("p_min {} must lie in [0, p_max {}]", p.p_min_mw, p.p_max_mw),
            });
        }
        if p.q_b_max_m3s < 0.0 || p.q_d_max_m3s <= 0.0 {
            out.push(Diagnostic::BadRange {
                entity: format!("plant {}", p.id),
                message: "turbine and bypass capacities must be non-negative (turbine positive)"
                    .into(),
            });
        }
        if p.segments.is_empty() {
            out.push(Diagnostic::BadRange {
                entity: format!("plant {}", p.id),
                message: "needs at least one discharge segment".into(),
            });
            continue;
        }
        for (i, s) in p.segments.iter().enumerate() {
            if s.index != i {
                out.push(Diagnostic::BadRange {
                    entity: format!("plant {}", p.id),
                    message: format!("segment indices must be contiguous from 0, got {}", s.index),
                });
                break;
            }
            if s.q_max_m3s <= 0.0 || s.energy_rate < 0.0 {
                out.push(Diagnostic::BadRange {
                    entity: format!("plant {} segment {}", p.id, s.index),
                    message: "segment width must be positive and eta non-negative".into(),
                });
            }
        }
        let width_sum: f64 = p.segments.iter().map(|s| s.q_max_m3s).sum();
        if (width_sum - p.q_d_max_m3s).abs() > REL_TOL * p.q_d_max_m3s.abs().max(1.0) {
            out.push(Diagnostic::SegmentSumMismatch {
                plant: p.id.clone(),
                sum_m3s: width_sum,
                q_d_max_m3s: p.q_d_max_m3s,
            });
        }
        let power_sum: f64 = p.segments.iter().map(|s| s.q_max_m3s * s.energy_rate).sum();
        if (power_sum - p.p_max_mw).abs() > REL_TOL * p.p_max_mw.abs().max(1.0) {
            out.push(Diagnostic::SegmentPowerMismatch {
                plant: p.id.clone(),
                sum_mw: power_sum,
                p_max_mw: p.p_max_mw,
            });
        }
    }

    for t in &instance.thermal {
        if !(0.0 <= t.g_min_mw && t.g_min_mw <= t.g_max_mw) {
            out.push(Diagnostic::BadRange {
                entity: format!("thermal {}", t.id),
                message: format!("g_min {} must lie in [0, g_max {}]", t.g_min_mw, t.g_max_mw),
            });
        }
        if t.cost_mu_per_mwh < 0.0 || t.startup_mu < 0.0 || t.shutdown_mu < 0.0 {
            out.push(Diagnostic::BadRange {
                entity: format!("thermal {}", t.id),
                message: "costs must be non-negative".into(),
            });
        }
        if t.ramp_up_mw_s < 0.0
            || t.ramp_down_mw_s < 0.0
            || t.start_gain_mw_s < 0.0
            || t.stop_gain_mw_s < 0.0
        {
            out.push(Diagnostic::BadRange {
                entity: format!("thermal {}", t.id),
                message: "ramp limits must be non-negative".into(),
            });
        }
    }

    for c in &instance.cables {
        if c.from_area == c.to_area {
            out.push(Diagnostic::BadRange {
                entity: format!("cable {}", c.id),
                message: "must connect two distinct areas".into(),
            });
        }
        if c.f_max_mw < 0.0 || c.ramp_up_mw_s < 0.0 || c.ramp_down_mw_s < 0.0 {
            out.push(Diagnostic::BadRange {
                entity: format!("cable {}", c.id),
                message: "capacity and ramp limits must be non-negative".into(),
            });
        }
    }

    if let Some(cycle) = find_cycle(instance) {
        out.push(Diagnostic::CyclicRouting { cycle });
    }

    out
}

/// Depth-first search over the reservoir routing graph; returns the node ids
/// of a directed cycle if one exists.
fn find_cycle(instance: &SystemInstance) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let n = instance.reservoirs.len();
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in &instance.plants {
        for target in [p.discharge_to, p.bypass_to, p.spill_to] {
            if let RouteTarget::Reservoir(r) = target {
                if r < n {
                    edges[p.reservoir].push(r);
                }
            }
        }
    }
    let mut marks = vec![Mark::White; n];
    let mut stack: Vec<usize> = Vec::new();

    fn dfs(
        node: usize,
        edges: &[Vec<usize>],
        marks: &mut [Mark],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        marks[node] = Mark::Grey;
        stack.push(node);
        for &next in &edges[node] {
            match marks[next] {
                Mark::Grey => {
                    let start = stack.iter().position(|&s| s == next).unwrap();
                    let mut cycle = stack[start..].to_vec();
                    cycle.push(next);
                    return Some(cycle);
                }
                Mark::White => {
                    if let Some(c) = dfs(next, edges, marks, stack) {
                        return Some(c);
                    }
                }
                Mark::Black => {}
            }
        }
        stack.pop();
        marks[node] = Mark::Black;
        None
    }

    for start in 0..n {
        if marks[start] == Mark::White {
            if let Some(cycle) = dfs(start, &edges, &mut marks, &mut stack) {
                return Some(
                    cycle
                        .into_iter()
                        .map(|r| instance.reservoirs[r].id.clone())
                        .collect(),
                );
            }
        }
    }
    None
}
