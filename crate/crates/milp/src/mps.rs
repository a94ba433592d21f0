use std::io::{self, Write};
use std::path::Path;

use crate::lp::fmt_num;
use crate::model::{MilpModel, Relop, VarKind};

/// Write the model in fixed-layout MPS. Fields are padded to the classic
/// column offsets; names longer than a field simply extend it, which every
/// mainstream reader accepts.
pub fn write_mps<W: Write>(model: &MilpModel, w: &mut W) -> io::Result<()> {
    writeln!(w, "NAME          {}", model.name())?;
    writeln!(w, "ROWS")?;
    writeln!(w, " N  obj")?;
    for c in model.constraints() {
        let sense = match c.op {
            Relop::Le => "L",
            Relop::Eq => "E",
            Relop::Ge => "G",
        };
        writeln!(w, " {}  {}", sense, c.name)?;
    }

    // Column-major coefficients: objective first, then rows in order.
    writeln!(w, "COLUMNS")?;
    let mut in_integer_block = false;
    let mut marker = 0usize;
    for (var, def) in model.vars() {
        let wants_integer = def.kind == VarKind::Binary;
        if wants_integer != in_integer_block {
            let kind = if wants_integer { "'INTORG'" } else { "'INTEND'" };
            writeln!(
                w,
                "    MARKER{:<4}              'MARKER'                 {}",
                marker, kind
            )?;
            marker += 1;
            in_integer_block = wants_integer;
        }
        let obj_coeff = model.objective().coeff(var);
        if obj_coeff != 0.0 {
            writeln!(
                w,
                "    {:<10}{:<10}{}",
                def.name,
                "obj",
                fmt_num(obj_coeff)
            )?;
        }
        for c in model.constraints() {
            let coeff = c.expr.coeff(var);
            if coeff != 0.0 {
                writeln!(w, "    {:<10}{:<10}{}", def.name, c.name, fmt_num(coeff))?;
            }
        }
    }
    if in_integer_block {
        writeln!(
            w,
            "    MARKER{:<4}              'MARKER'                 'INTEND'",
            marker
        )?;
    }

    writeln!(w, "RHS")?;
    if model.objective().constant != 0.0 {
        // MPS convention: the objective RHS entry carries the negated constant.
        writeln!(
            w,
            "    {:<10}{:<10}{}",
            "RHS",
            "obj",
            fmt_num(-model.objective().constant)
        )?;
    }
    for c in model.constraints() {
        if c.rhs != 0.0 {
            writeln!(w, "    {:<10}{:<10}{}", "RHS", c.name, fmt_num(c.rhs))?;
        }
    }

    writeln!(w, "BOUNDS")?;
    for (_, def) in model.vars() {
        let (lo, hi) = (def.lo, def.hi);
        if def.kind == VarKind::Binary {
            if (lo, hi) == (0.0, 1.0) {
                writeln!(w, " BV {:<10}{}", "BND", def.name)?;
            } else if lo == hi {
                writeln!(w, " FX {:<10}{:<10}{}", "BND", def.name, fmt_num(lo))?;
            } else {
                writeln!(w, " LO {:<10}{:<10}{}", "BND", def.name, fmt_num(lo))?;
                writeln!(w, " UP {:<10}{:<10}{}", "BND", def.name, fmt_num(hi))?;
            }
            continue;
        }
        if (lo, hi) == (0.0, f64::INFINITY) {
            continue;
        }
        if lo == hi {
            writeln!(w, " FX {:<10}{:<10}{}", "BND", def.name, fmt_num(lo))?;
        } else if lo == f64::NEG_INFINITY && hi == f64::INFINITY {
            writeln!(w, " FR {:<10}{}", "BND", def.name)?;
        } else {
            if lo == f64::NEG_INFINITY {
                writeln!(w, " MI {:<10}{}", "BND", def.name)?;
            } else if lo != 0.0 {
                writeln!(w, " LO {:<10}{:<10}{}", "BND", def.name, fmt_num(lo))?;
            }
            if hi != f64::INFINITY {
                writeln!(w, " UP {:<10}{:<10}{}", "BND", def.name, fmt_num(hi))?;
            }
        }
    }
    writeln!(w, "ENDATA")?;
    Ok(())
}

pub fn mps_to_string(model: &MilpModel) -> String {
    let mut buf = Vec::new();
    write_mps(model, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("mps text is ascii")
}

pub fn write_mps_file<P: AsRef<Path>>(model: &MilpModel, path: P) -> io::Result<()> {
    let mut file = io::BufWriter::new(std::fs::File::create(path)?);
    write_mps(model, &mut file)?;
    file.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{LinExpr, MilpModel, Relop};

    fn sample_model() -> MilpModel {
        let mut m = MilpModel::new("mps_test");
        let x = m.add_continuous("x", 0.0, 5.0).unwrap();
        let w = m.add_binary("w").unwrap();
        let mut obj = LinExpr::term(x, 2.0);
        obj.add_term(w, 10.0);
        m.set_objective(obj).unwrap();
        let mut e = LinExpr::term(x, 1.0);
        e.add_term(w, -4.0);
        m.add_constraint("cap", e, Relop::Le, 3.0).unwrap();
        m
    }

    #[test]
    fn sections_present_and_markers_wrap_binaries() {
        let text = mps_to_string(&sample_model());
        for section in ["NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"] {
            assert!(text.contains(section), "missing {section}");
        }
        let intorg = text.find("'INTORG'").unwrap();
        let intend = text.find("'INTEND'").unwrap();
        let w_col = text.find("    w  ").unwrap();
        assert!(intorg < w_col && w_col < intend);
        assert!(text.contains(" BV BND       w"));
        assert!(text.contains(" UP BND       x         5"));
    }

    #[test]
    fn writes_are_deterministic() {
        assert_eq!(mps_to_string(&sample_model()), mps_to_string(&sample_model()));
    }
}
