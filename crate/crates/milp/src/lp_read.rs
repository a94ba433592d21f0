//! Reader for the CPLEX-style LP dialect emitted by [`crate::lp::write_lp`].
//!
//! Rows must be labelled (`name: expr op rhs`), which is what this project
//! and mainstream solvers write. Keywords are case-insensitive and rows may
//! wrap across lines.

use std::collections::HashMap;
use std::path::Path;

use crate::error::LpParseError;
use crate::model::{LinExpr, MilpModel, Relop, VarKind};

#[derive(Debug)]
pub struct LpFile {
    pub model: MilpModel,
    pub maximize: bool,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Num(f64),
    Colon,
    Plus,
    Minus,
    Op(Relop),
}

fn err(line: usize, message: impl Into<String>) -> LpParseError {
    LpParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<Tok>, LpParseError> {
    let mut out = Vec::new();
    let bytes: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '\\' {
            break; // comment to end of line
        } else if c == ':' {
            out.push(Tok::Colon);
            i += 1;
        } else if c == '<' || c == '>' || c == '=' {
            let op = match c {
                '<' => Relop::Le,
                '>' => Relop::Ge,
                _ => Relop::Eq,
            };
            i += 1;
            if i < bytes.len() && bytes[i] == '=' && c != '=' {
                i += 1;
            }
            out.push(Tok::Op(op));
        } else if c == '+' || c == '-' {
            let signed_number = bytes
                .get(i + 1)
                .is_some_and(|n| n.is_ascii_digit() || *n == '.');
            if signed_number {
                let (num, next) = read_number(&bytes, i, line_no)?;
                out.push(Tok::Num(num));
                i = next;
            } else if c == '+' {
                out.push(Tok::Plus);
                i += 1;
            } else {
                // Distinguish "- 3 x" from "-infinity".
                let rest: String = bytes[i + 1..].iter().collect();
                if rest.to_ascii_lowercase().starts_with("inf") {
                    let end = i
                        + 1
                        + bytes[i + 1..]
                            .iter()
                            .take_while(|ch| ch.is_ascii_alphanumeric())
                            .count();
                    out.push(Tok::Num(f64::NEG_INFINITY));
                    i = end;
                } else {
                    out.push(Tok::Minus);
                    i += 1;
                }
            }
        } else if c.is_ascii_digit() || c == '.' {
            let (num, next) = read_number(&bytes, i, line_no)?;
            out.push(Tok::Num(num));
            i = next;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_' || bytes[i] == '.') {
                i += 1;
            }
            let word: String = bytes[start..i].iter().collect();
            let lower = word.to_ascii_lowercase();
            if lower == "infinity" || lower == "inf" {
                out.push(Tok::Num(f64::INFINITY));
            } else {
                out.push(Tok::Word(word));
            }
        } else {
            return Err(err(line_no, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn read_number(chars: &[char], start: usize, line_no: usize) -> Result<(f64, usize), LpParseError> {
    let mut i = start;
    if chars[i] == '+' || chars[i] == '-' {
        i += 1;
    }
    let mut prev_exp = false;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_digit() || c == '.' {
            prev_exp = false;
            i += 1;
        } else if c == 'e' || c == 'E' {
            prev_exp = true;
            i += 1;
        } else if (c == '+' || c == '-') && prev_exp {
            prev_exp = false;
            i += 1;
        } else {
            break;
        }
    }
    let text: String = chars[start..i].iter().collect();
    text.parse()
        .map(|v| (v, i))
        .map_err(|_| err(line_no, format!("malformed number `{text}`")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    Done,
}

fn section_for(tokens: &[Tok]) -> Option<(Section, bool)> {
    let words: Vec<String> = tokens
        .iter()
        .filter_map(|t| match t {
            Tok::Word(w) => Some(w.to_ascii_lowercase()),
            _ => None,
        })
        .collect();
    if words.is_empty() || words.len() != tokens.len() {
        return None;
    }
    let joined = words.join(" ");
    match joined.as_str() {
        "minimize" | "minimise" | "min" | "minimum" => Some((Section::Objective, false)),
        "maximize" | "maximise" | "max" | "maximum" => Some((Section::Objective, true)),
        "subject to" | "st" | "s.t." | "such that" => Some((Section::Constraints, false)),
        "bounds" | "bound" => Some((Section::Bounds, false)),
        "binaries" | "binary" | "bin" => Some((Section::Binaries, false)),
        "end" => Some((Section::Done, false)),
        _ => None,
    }
}

#[derive(Debug, Default)]
struct RawExpr {
    terms: Vec<(String, f64)>,
    constant: f64,
}

/// Parse a token run `[label:] term...` into (label, expression, trailing).
fn parse_expr(
    tokens: &[Tok],
    line_no: usize,
) -> Result<(Option<String>, RawExpr, usize), LpParseError> {
    let mut idx = 0;
    let mut label = None;
    if tokens.len() >= 2 && matches!(tokens[1], Tok::Colon) {
        if let Tok::Word(w) = &tokens[0] {
            label = Some(w.clone());
            idx = 2;
        }
    }
    let mut expr = RawExpr::default();
    let mut sign = 1.0;
    let mut pending: Option<f64> = None;
    while idx < tokens.len() {
        match &tokens[idx] {
            Tok::Plus => {
                if let Some(p) = pending.take() {
                    expr.constant += sign * p;
                }
                sign = 1.0;
            }
            Tok::Minus => {
                if let Some(p) = pending.take() {
                    expr.constant += sign * p;
                }
                sign = -1.0;
            }
            Tok::Num(v) => {
                if let Some(p) = pending.take() {
                    expr.constant += sign * p;
                    sign = 1.0;
                }
                pending = Some(*v);
            }
            Tok::Word(name) => {
                let coeff = sign * pending.take().unwrap_or(1.0);
                expr.terms.push((name.clone(), coeff));
                sign = 1.0;
            }
            Tok::Op(_) => break,
            Tok::Colon => return Err(err(line_no, "unexpected `:`")),
        }
        idx += 1;
    }
    if let Some(p) = pending.take() {
        expr.constant += sign * p;
    }
    Ok((label, expr, idx))
}

struct Discovered {
    order: Vec<String>,
    seen: HashMap<String, usize>,
}

impl Discovered {
    fn new() -> Self {
        Self {
            order: Vec::new(),
            seen: HashMap::new(),
        }
    }

    fn touch(&mut self, name: &str) {
        if !self.seen.contains_key(name) {
            self.seen.insert(name.to_string(), self.order.len());
            self.order.push(name.to_string());
        }
    }
}

pub fn parse_lp(text: &str) -> Result<LpFile, LpParseError> {
    let mut section = Section::Preamble;
    let mut maximize = false;
    let mut objective = RawExpr::default();
    let mut rows: Vec<(String, RawExpr, Relop, f64)> = Vec::new();
    let mut bounds: Vec<(String, f64, f64, bool)> = Vec::new(); // name, lo, hi, is_fix
    let mut binaries: Vec<String> = Vec::new();
    let mut discovered = Discovered::new();
    let mut objective_tokens: Vec<(usize, Tok)> = Vec::new();
    let mut row_tokens: Vec<(usize, Tok)> = Vec::new();

    let flush_rows = |row_tokens: &mut Vec<(usize, Tok)>,
                      rows: &mut Vec<(String, RawExpr, Relop, f64)>,
                      discovered: &mut Discovered|
     -> Result<(), LpParseError> {
        // Split the accumulated token stream at `label:` boundaries.
        let mut i = 0;
        while i < row_tokens.len() {
            let line_no = row_tokens[i].0;
            let mut j = i + 2;
            while j + 1 < row_tokens.len() {
                if matches!(row_tokens[j + 1].1, Tok::Colon)
                    && matches!(row_tokens[j].1, Tok::Word(_))
                {
                    break;
                }
                j += 1;
            }
            let end = if j + 1 >= row_tokens.len() {
                row_tokens.len()
            } else {
                j
            };
            let slice: Vec<Tok> = row_tokens[i..end].iter().map(|(_, t)| t.clone()).collect();
            let (label, expr, used) = parse_expr(&slice, line_no)?;
            let label = label.ok_or_else(|| err(line_no, "constraint row without a label"))?;
            if used + 2 > slice.len() {
                return Err(err(line_no, format!("row `{label}` is missing `op rhs`")));
            }
            let op = match slice[used] {
                Tok::Op(op) => op,
                _ => return Err(err(line_no, format!("row `{label}` has no relation"))),
            };
            let rhs = match slice[used + 1] {
                Tok::Num(v) => v,
                _ => return Err(err(line_no, format!("row `{label}` has no numeric rhs"))),
            };
            if used + 2 != slice.len() {
                return Err(err(line_no, format!("trailing tokens after row `{label}`")));
            }
            for (name, _) in &expr.terms {
                discovered.touch(name);
            }
            rows.push((label, expr, op, rhs));
            i = end;
        }
        row_tokens.clear();
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens = tokenize(raw, line_no)?;
        if tokens.is_empty() {
            continue;
        }
        if let Some((next, is_max)) = section_for(&tokens) {
            if section == Section::Constraints {
                flush_rows(&mut row_tokens, &mut rows, &mut discovered)?;
            }
            section = next;
            if section == Section::Objective {
                maximize = is_max;
            }
            continue;
        }
        match section {
            Section::Preamble => {
                return Err(err(line_no, "expected a Minimize/Maximize section first"))
            }
            Section::Objective => {
                objective_tokens.extend(tokens.into_iter().map(|t| (line_no, t)));
            }
            Section::Constraints => {
                row_tokens.extend(tokens.into_iter().map(|t| (line_no, t)));
            }
            Section::Bounds => {
                let b = parse_bound_line(&tokens, line_no)?;
                discovered.touch(&b.0);
                bounds.push(b);
            }
            Section::Binaries => {
                for t in tokens {
                    match t {
                        Tok::Word(w) => {
                            discovered.touch(&w);
                            binaries.push(w);
                        }
                        _ => return Err(err(line_no, "binary section expects variable names")),
                    }
                }
            }
            Section::Done => {}
        }
    }
    if section == Section::Constraints {
        flush_rows(&mut row_tokens, &mut rows, &mut discovered)?;
    }

    if !objective_tokens.is_empty() {
        let line_no = objective_tokens[0].0;
        let toks: Vec<Tok> = objective_tokens.into_iter().map(|(_, t)| t).collect();
        let (_, expr, used) = parse_expr(&toks, line_no)?;
        if used != toks.len() {
            return Err(err(line_no, "unexpected relation in objective"));
        }
        objective = expr;
    }
    // Objective variables must come first in discovery order so that a
    // round-trip through text preserves it; they were parsed last, so walk
    // them now in a fresh pass before naming everything else.
    let mut final_order = Discovered::new();
    for (name, _) in &objective.terms {
        final_order.touch(name);
    }
    for name in &discovered.order {
        final_order.touch(name);
    }

    let binary_set: std::collections::HashSet<&str> =
        binaries.iter().map(String::as_str).collect();
    let mut model = MilpModel::new("lp_import");
    for name in &final_order.order {
        let kind = if binary_set.contains(name.as_str()) {
            VarKind::Binary
        } else {
            VarKind::Continuous
        };
        let (lo, hi) = if kind == VarKind::Binary {
            (0.0, 1.0)
        } else {
            (0.0, f64::INFINITY)
        };
        model
            .add_var(name.clone(), kind, lo, hi)
            .map_err(|e| LpParseError::Inconsistent(e.to_string()))?;
    }
    for (name, lo, hi, _) in &bounds {
        let var = model.var_by_name(name).expect("bounded names discovered");
        let (mut lo, mut hi) = (*lo, *hi);
        if binary_set.contains(name.as_str()) {
            lo = lo.max(0.0);
            hi = hi.min(1.0);
        }
        model
            .set_bounds(var, lo, hi)
            .map_err(|e| LpParseError::Inconsistent(e.to_string()))?;
    }
    let mut obj = LinExpr::new();
    for (name, coeff) in &objective.terms {
        obj.add_term(model.var_by_name(name).unwrap(), *coeff);
    }
    obj.add_constant(objective.constant);
    model
        .set_objective(obj)
        .map_err(|e| LpParseError::Inconsistent(e.to_string()))?;
    for (label, raw, op, rhs) in rows {
        let mut expr = LinExpr::new();
        for (name, coeff) in &raw.terms {
            expr.add_term(model.var_by_name(name).unwrap(), *coeff);
        }
        expr.add_constant(raw.constant);
        model
            .add_constraint(label, expr, op, rhs)
            .map_err(|e| LpParseError::Inconsistent(e.to_string()))?;
    }
    Ok(LpFile { model, maximize })
}

pub fn parse_lp_file<P: AsRef<Path>>(path: P) -> Result<LpFile, LpParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| LpParseError::Syntax {
        line: 0,
        message: e.to_string(),
    })?;
    parse_lp(&text)
}

/// Bounds lines: `x free`, `x = v`, `x <= v`, `x >= v`, `lo <= x <= hi`.
fn parse_bound_line(
    tokens: &[Tok],
    line_no: usize,
) -> Result<(String, f64, f64, bool), LpParseError> {
    match tokens {
        [Tok::Word(name), Tok::Word(kw)] if kw.eq_ignore_ascii_case("free") => {
            Ok((name.clone(), f64::NEG_INFINITY, f64::INFINITY, false))
        }
        [Tok::Word(name), Tok::Op(Relop::Eq), Tok::Num(v)] => Ok((name.clone(), *v, *v, true)),
        [Tok::Word(name), Tok::Op(Relop::Le), Tok::Num(v)] => {
            Ok((name.clone(), 0.0, *v, false))
        }
        [Tok::Word(name), Tok::Op(Relop::Ge), Tok::Num(v)] => {
            Ok((name.clone(), *v, f64::INFINITY, false))
        }
        [Tok::Num(lo), Tok::Op(Relop::Le), Tok::Word(name), Tok::Op(Relop::Le), Tok::Num(hi)] => {
            Ok((name.clone(), *lo, *hi, false))
        }
        [Tok::Num(hi), Tok::Op(Relop::Ge), Tok::Word(name), Tok::Op(Relop::Ge), Tok::Num(lo)] => {
            Ok((name.clone(), *lo, *hi, false))
        }
        _ => Err(err(line_no, "unrecognized bounds line")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::lp_to_string;
    use crate::model::Relop;

    #[test]
    fn parses_minimal_lp() {
        let text = "Minimize\n obj: 1 x\nSubject To\n c0: 1 x >= 1\nEnd\n";
        let lp = parse_lp(text).unwrap();
        assert!(!lp.maximize);
        assert_eq!(lp.model.num_vars(), 1);
        assert_eq!(lp.model.constraints().len(), 1);
        assert_eq!(lp.model.constraints()[0].op, Relop::Ge);
        assert_eq!(lp.model.constraints()[0].rhs, 1.0);
    }

    #[test]
    fn parses_negative_rhs_and_free_bounds() {
        let text = "Minimize\n obj: 2 x - 3 y\nSubject To\n r: 1 x - 1 y <= -5\nBounds\n y free\nEnd\n";
        let lp = parse_lp(text).unwrap();
        let y = lp.model.var_by_name("y").unwrap();
        assert_eq!(lp.model.var(y).lo, f64::NEG_INFINITY);
        assert_eq!(lp.model.constraints()[0].rhs, -5.0);
        let obj = lp.model.objective();
        assert_eq!(obj.coeff(y), -3.0);
    }

    #[test]
    fn round_trip_preserves_structure() {
        let mut m = MilpModel::new("rt");
        let x = m.add_continuous("x", 0.0, 5.0).unwrap();
        let y = m
            .add_continuous("y", f64::NEG_INFINITY, f64::INFINITY)
            .unwrap();
        let w = m.add_binary("w").unwrap();
        let mut obj = LinExpr::term(x, 1.5);
        obj.add_term(y, -2.0);
        obj.add_term(w, 10.0);
        obj.add_constant(4.0);
        m.set_objective(obj).unwrap();
        let mut e = LinExpr::term(x, 1.0);
        e.add_term(y, 2.0);
        m.add_constraint("bal", e, Relop::Eq, 3.0).unwrap();
        let mut e2 = LinExpr::term(w, -1.0);
        e2.add_term(x, 0.25);
        m.add_constraint("cap", e2, Relop::Le, 0.75).unwrap();

        let text = lp_to_string(&m);
        let back = parse_lp(&text).unwrap();
        assert!(!back.maximize);
        assert_eq!(back.model.num_vars(), 3);
        for (r, def) in m.vars() {
            let r2 = back.model.var_by_name(&def.name).unwrap();
            let d2 = back.model.var(r2);
            assert_eq!(def.kind, d2.kind, "{}", def.name);
            assert_eq!(def.lo, d2.lo, "{}", def.name);
            assert_eq!(def.hi, d2.hi, "{}", def.name);
            assert_eq!(m.objective().coeff(r), back.model.objective().coeff(r2));
        }
        assert_eq!(m.objective().constant, back.model.objective().constant);
        assert_eq!(m.constraints().len(), back.model.constraints().len());
        for (a, b) in m.constraints().iter().zip(back.model.constraints()) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.op, b.op);
            assert_eq!(a.rhs, b.rhs);
            for (va, ca) in a.expr.iter() {
                let vb = back.model.var_by_name(&m.var(va).name).unwrap();
                assert_eq!(b.expr.coeff(vb), ca);
            }
        }
    }

    #[test]
    fn wrapped_rows_are_joined() {
        let text = "Minimize\n obj: 1 a\nSubject To\n long: 1 a + 2 b\n    + 3 c >= 6\nEnd\n";
        let lp = parse_lp(text).unwrap();
        assert_eq!(lp.model.constraints()[0].expr.num_terms(), 3);
    }

    #[test]
    fn maximize_flag_survives() {
        let lp = parse_lp("Maximize\n obj: 1 x\nSubject To\n c: 1 x <= 2\nEnd\n").unwrap();
        assert!(lp.maximize);
    }

    #[test]
    fn garbage_reports_line() {
        let e = parse_lp("Minimize\n obj: 1 x\nSubject To\n c ~ 1 x >= 1\nEnd\n").unwrap_err();
        assert!(matches!(e, LpParseError::Syntax { line: 4, .. }));
    }
}
