use std::io::{self, Write};
use std::path::Path;

use crate::model::{MilpModel, Relop, VarKind};

/// Render a finite float with Rust's shortest round-trip formatting so two
/// writes of the same model are byte-identical.
pub(crate) fn fmt_num(v: f64) -> String {
    format!("{v}")
}

fn push_term(out: &mut String, line_len: &mut usize, first: bool, coeff: f64, name: &str) {
    let mut piece = String::new();
    if first {
        if coeff < 0.0 {
            piece.push_str("- ");
        }
    } else if coeff < 0.0 {
        piece.push_str(" - ");
    } else {
        piece.push_str(" + ");
    }
    piece.push_str(&fmt_num(coeff.abs()));
    piece.push(' ');
    piece.push_str(name);
    if *line_len + piece.len() > 220 {
        out.push_str("\n    ");
        *line_len = 4;
        // Re-render without the leading space after a line break.
        let trimmed = piece.trim_start();
        out.push_str(trimmed);
        *line_len += trimmed.len();
    } else {
        out.push_str(&piece);
        *line_len += piece.len();
    }
}

fn render_expr(model: &MilpModel, expr: &crate::model::LinExpr, constant: f64) -> String {
    let mut out = String::new();
    let mut line_len = 0usize;
    let mut first = true;
    for (var, coeff) in expr.iter() {
        push_term(&mut out, &mut line_len, first, coeff, &model.var(var).name);
        first = false;
    }
    if constant != 0.0 || first {
        if first {
            out.push_str(&fmt_num(constant));
        } else if constant < 0.0 {
            out.push_str(" - ");
            out.push_str(&fmt_num(-constant));
        } else {
            out.push_str(" + ");
            out.push_str(&fmt_num(constant));
        }
    }
    out
}

/// Write the model as CPLEX-style LP text.
pub fn write_lp<W: Write>(model: &MilpModel, w: &mut W) -> io::Result<()> {
    writeln!(w, "\\ Problem: {}", model.name())?;
    writeln!(w, "Minimize")?;
    let obj = model.objective();
    writeln!(w, " obj: {}", render_expr(model, obj, obj.constant))?;
    writeln!(w, "Subject To")?;
    for c in model.constraints() {
        if c.expr.is_empty() {
            // A row without terms is not valid LP text; anchor the vacuous
            // constraint on the first variable with a zero coefficient.
            if let Some((var, _)) = model.vars().next() {
                writeln!(
                    w,
                    " {}: 0 {} {} {}",
                    c.name,
                    model.var(var).name,
                    c.op.symbol(),
                    fmt_num(c.rhs)
                )?;
            }
            continue;
        }
        writeln!(
            w,
            " {}: {} {} {}",
            c.name,
            render_expr(model, &c.expr, 0.0),
            c.op.symbol(),
            fmt_num(c.rhs)
        )?;
    }
    writeln!(w, "Bounds")?;
    for (_, def) in model.vars() {
        let (lo, hi) = (def.lo, def.hi);
        let default = if def.kind == VarKind::Binary {
            (0.0, 1.0)
        } else {
            (0.0, f64::INFINITY)
        };
        if (lo, hi) == default {
            continue;
        }
        if lo == hi {
            writeln!(w, " {} = {}", def.name, fmt_num(lo))?;
        } else if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
            writeln!(w, " {} free", def.name)?;
        } else if lo == f64::NEG_INFINITY {
            writeln!(w, " -infinity <= {} <= {}", def.name, fmt_num(hi))?;
        } else if hi == f64::INFINITY {
            writeln!(w, " {} >= {}", def.name, fmt_num(lo))?;
        } else {
            writeln!(w, " {} <= {} <= {}", fmt_num(lo), def.name, fmt_num(hi))?;
        }
    }
    let binaries: Vec<&str> = model
        .vars()
        .filter(|(_, d)| d.kind == VarKind::Binary)
        .map(|(_, d)| d.name.as_str())
        .collect();
    if !binaries.is_empty() {
        writeln!(w, "Binaries")?;
        for chunk in binaries.chunks(8) {
            writeln!(w, " {}", chunk.join(" "))?;
        }
    }
    writeln!(w, "End")?;
    Ok(())
}

pub fn lp_to_string(model: &MilpModel) -> String {
    let mut buf = Vec::new();
    write_lp(model, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("lp text is ascii")
}

pub fn write_lp_file<P: AsRef<Path>>(model: &MilpModel, path: P) -> io::Result<()> {
    let mut file = io::BufWriter::new(std::fs::File::create(path)?);
    write_lp(model, &mut file)?;
    file.flush()
}

#[allow(unused)]
fn op_symbol(op: Relop) -> &'static str {
    op.symbol()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{LinExpr, MilpModel, Relop};

    #[test]
    fn one_var_model_renders_obj_and_row() {
        let mut m = MilpModel::new("tiny");
        let x = m.add_continuous("x", 0.0, f64::INFINITY).unwrap();
        m.set_objective(LinExpr::term(x, 1.0)).unwrap();
        m.add_constraint("c0", LinExpr::term(x, 1.0), Relop::Ge, 1.0)
            .unwrap();
        let text = lp_to_string(&m);
        assert!(text.contains("Minimize"));
        assert!(text.contains(" obj: 1 x"));
        assert!(text.contains(" c0: 1 x >= 1"));
        assert!(text.ends_with("End\n"));
    }

    #[test]
    fn binary_section_lists_binaries() {
        let mut m = MilpModel::new("b");
        let w = m.add_binary("w").unwrap();
        m.set_objective(LinExpr::term(w, 1.0)).unwrap();
        let text = lp_to_string(&m);
        assert!(text.contains("Binaries\n w\n"));
    }

    #[test]
    fn fixed_bound_serialized_as_equality() {
        let mut m = MilpModel::new("f");
        m.add_continuous("x", 2.0, 2.0).unwrap();
        let text = lp_to_string(&m);
        assert!(text.contains(" x = 2\n"), "{text}");
    }

    #[test]
    fn writes_are_byte_identical() {
        let build = || {
            let mut m = MilpModel::new("det");
            let x = m.add_continuous("x", 0.0, 5.0).unwrap();
            let y = m.add_continuous("y", f64::NEG_INFINITY, f64::INFINITY).unwrap();
            let w = m.add_binary("w").unwrap();
            let mut obj = LinExpr::term(x, 1.25);
            obj.add_term(y, -3.0);
            obj.add_term(w, 100.0);
            obj.add_constant(7.0);
            m.set_objective(obj).unwrap();
            let mut e = LinExpr::term(x, 1.0);
            e.add_term(y, 1.0);
            m.add_constraint("bal", e, Relop::Eq, 2.0).unwrap();
            m
        };
        assert_eq!(lp_to_string(&build()), lp_to_string(&build()));
    }
}
