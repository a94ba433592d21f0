//! Solution-file parsing for external solvers.
//!
//! Two families are auto-detected: XML-style `.sol` files (CPLEX and
//! friends) and plain `name value` listings. The plain reader also
//! understands the CBC command-line layout (`index name value dual`) and the
//! sectioned HiGHS `--solution_file` layout.

use std::path::Path;

use crate::error::SolParseError;
use crate::model::MilpModel;
use crate::solution::{Solution, SolveStatus};

#[derive(Debug, Clone, Default)]
pub struct ParsedSolution {
    pub status: Option<SolveStatus>,
    pub objective: Option<f64>,
    pub gap: Option<f64>,
    pub values: Vec<(String, f64)>,
}

pub fn parse_solution_text(text: &str) -> Result<ParsedSolution, SolParseError> {
    let trimmed = text.trim_start();
    if trimmed.is_empty() {
        return Err(SolParseError::Unrecognized);
    }
    if trimmed.starts_with('<') {
        parse_xml(text)
    } else {
        parse_plain(text)
    }
}

pub fn parse_solution_file<P: AsRef<Path>>(path: P) -> Result<ParsedSolution, SolParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| SolParseError::Syntax {
        line: 0,
        message: e.to_string(),
    })?;
    parse_solution_text(&text)
}

fn status_from_word(word: &str) -> Option<SolveStatus> {
    let w = word.to_ascii_lowercase();
    if w.contains("infeasible") {
        Some(SolveStatus::Infeasible)
    } else if w.contains("unbounded") {
        Some(SolveStatus::Unbounded)
    } else if w.contains("optimal") {
        Some(SolveStatus::Optimal)
    } else if w.contains("stopped") || w.contains("limit") || w.contains("feasible") {
        Some(SolveStatus::FeasibleGap)
    } else if w.contains("error") || w.contains("unknown") {
        Some(SolveStatus::Error)
    } else {
        None
    }
}

fn parse_plain(text: &str) -> Result<ParsedSolution, SolParseError> {
    let mut out = ParsedSolution::default();
    let mut reading_rows = false;
    let mut expect_status_line = false;
    let mut saw_anything = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            // HiGHS section markers; everything after `# Rows` is row data.
            let rest = rest.trim().to_ascii_lowercase();
            if rest.starts_with("rows") || rest.starts_with("basis") || rest.starts_with("dual") {
                reading_rows = true;
            } else if rest.starts_with("columns") || rest.starts_with("primal") {
                reading_rows = false;
            }
            continue;
        }
        if reading_rows {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if expect_status_line {
            expect_status_line = false;
            if out.status.is_none() {
                out.status = status_from_word(line);
            }
            saw_anything = true;
            continue;
        }
        match tokens[0].to_ascii_lowercase().as_str() {
            "model" => {
                // "Model status" header: the status is on the following line.
                expect_status_line = true;
                continue;
            }
            "status" if tokens.len() >= 2 => {
                if out.status.is_none() {
                    out.status = status_from_word(tokens[1]);
                }
                saw_anything = true;
                continue;
            }
            "objective" if tokens.len() >= 2 => {
                out.objective = tokens[1].parse().ok();
                saw_anything = true;
                continue;
            }
            "gap" if tokens.len() >= 2 => {
                out.gap = tokens[1].parse().ok();
                saw_anything = true;
                continue;
            }
            _ => {}
        }
        if tokens.len() == 1 {
            if let Some(status) = status_from_word(tokens[0]) {
                if out.status.is_none() {
                    out.status = Some(status);
                }
                saw_anything = true;
                continue;
            }
        }
        // CBC-style banner: "Optimal - objective value 72000".
        if status_from_word(tokens[0]).is_some() && tokens.len() > 2 {
            if out.status.is_none() {
                out.status = status_from_word(tokens[0]);
            }
            if let Some(v) = tokens.iter().rev().find_map(|t| t.parse::<f64>().ok()) {
                out.objective = Some(v);
            }
            saw_anything = true;
            continue;
        }
        // "name value" pair.
        if tokens.len() == 2 {
            if let Ok(v) = tokens[1].parse::<f64>() {
                out.values.push((tokens[0].to_string(), v));
                saw_anything = true;
                continue;
            }
        }
        // CBC row: "index name value dual".
        if tokens.len() == 4 {
            if let (Ok(_), Ok(v)) = (tokens[0].parse::<usize>(), tokens[2].parse::<f64>()) {
                out.values.push((tokens[1].to_string(), v));
                saw_anything = true;
                continue;
            }
        }
        return Err(SolParseError::Syntax {
            line: idx + 1,
            message: format!("unrecognized line `{line}`"),
        });
    }
    if !saw_anything {
        return Err(SolParseError::Unrecognized);
    }
    Ok(out)
}

fn xml_attr(tag: &str, name: &str) -> Option<String> {
    let needle = format!("{name}=\"");
    let start = tag.find(&needle)? + needle.len();
    let end = tag[start..].find('"')? + start;
    Some(tag[start..end].to_string())
}

fn parse_xml(text: &str) -> Result<ParsedSolution, SolParseError> {
    let mut out = ParsedSolution::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with("<header") || line.starts_with("<CPLEXSolution") {
            if let Some(s) = xml_attr(line, "solutionStatusString") {
                out.status = status_from_word(&s);
            }
            if let Some(v) = xml_attr(line, "objectiveValue") {
                out.objective = v.parse().ok();
            }
            if let Some(v) = xml_attr(line, "MIPGap").or_else(|| xml_attr(line, "gap")) {
                out.gap = v.parse().ok();
            }
        } else if line.starts_with("<variable ") || line.starts_with("<variable\t") {
            let name = xml_attr(line, "name").ok_or(SolParseError::Syntax {
                line: idx + 1,
                message: "variable element without name".into(),
            })?;
            let value: f64 = xml_attr(line, "value")
                .and_then(|v| v.parse().ok())
                .ok_or(SolParseError::Syntax {
                    line: idx + 1,
                    message: "variable element without numeric value".into(),
                })?;
            out.values.push((name, value));
        }
    }
    if out.values.is_empty() && out.status.is_none() {
        return Err(SolParseError::Unrecognized);
    }
    Ok(out)
}

/// Align a parsed solution with a model: missing variables default to zero
/// with a warning, unknown names are warned about and dropped.
pub fn align_solution(model: &MilpModel, parsed: &ParsedSolution) -> Solution {
    let mut warnings = Vec::new();
    let status = parsed.status.unwrap_or_else(|| {
        warnings.push("solution file carries no status; assuming optimal".into());
        SolveStatus::Optimal
    });
    if !status.has_values() {
        let mut s = Solution::failed(status, "solver reported no usable solution");
        s.warnings = warnings;
        s.mip_gap = parsed.gap;
        return s;
    }
    let mut values = vec![0.0; model.num_vars()];
    let mut seen = vec![false; model.num_vars()];
    for (name, v) in &parsed.values {
        match model.var_by_name(name) {
            Some(r) => {
                values[r.index()] = *v;
                seen[r.index()] = true;
            }
            None => warnings.push(format!("solution names unknown variable `{name}`")),
        }
    }
    let missing = seen.iter().filter(|s| !**s).count();
    if missing > 0 {
        warnings.push(format!(
            "{missing} model variables missing from solution; defaulting them to 0"
        ));
    }
    let mut sol = Solution::with_values(status, values, 0.0);
    sol.objective = Some(
        parsed
            .objective
            .unwrap_or_else(|| sol.objective_from_values(model)),
    );
    sol.mip_gap = parsed.gap;
    sol.warnings = warnings;
    sol
}

/// Write a solution in the plain `name value` layout that
/// [`parse_solution_text`] reads back.
pub fn write_plain_solution<W: std::io::Write>(
    model: &MilpModel,
    solution: &Solution,
    w: &mut W,
) -> std::io::Result<()> {
    writeln!(w, "status {}", solution.status.as_str())?;
    if let Some(obj) = solution.objective {
        writeln!(w, "objective {obj}")?;
    }
    if let Some(gap) = solution.mip_gap {
        writeln!(w, "gap {gap}")?;
    }
    if solution.status.has_values() {
        for (r, def) in model.vars() {
            writeln!(w, "{} {}", def.name, solution.value(r))?;
        }
    }
    Ok(())
}
