//! Cross-validation of the LP and MPS writers: HiGHS reads the files back
//! through its own parsers and must reach the same optimum as the in-memory
//! solve.

use std::ffi::CString;

use ctsched_milp::{
    solve_builtin, write_lp_file, write_mps_file, LinExpr, MilpModel, Relop, SolveOptions,
    SolveStatus,
};

fn sample_model() -> MilpModel {
    let mut m = MilpModel::new("readback");
    let x = m.add_continuous("x", 0.0, 10.0).unwrap();
    let y = m
        .add_continuous("y_free", f64::NEG_INFINITY, f64::INFINITY)
        .unwrap();
    let z = m.add_continuous("z_fixed", 2.5, 2.5).unwrap();
    let w0 = m.add_binary("w0").unwrap();
    let w1 = m.add_binary("w1").unwrap();
    let mut obj = LinExpr::term(x, 1.5);
    obj.add_term(y, 1.0);
    obj.add_term(w0, 7.0);
    obj.add_term(w1, 3.0);
    obj.add_term(z, 2.0);
    // Constant term: written literally in LP, as a negated RHS entry in MPS.
    obj.add_constant(100.0);
    m.set_objective(obj).unwrap();
    let mut demand = LinExpr::term(x, 1.0);
    demand.add_term(y, 1.0);
    demand.add_term(w0, 4.0);
    demand.add_term(w1, 2.0);
    m.add_constraint("demand", demand, Relop::Ge, 9.0).unwrap();
    let mut link = LinExpr::term(y, 1.0);
    link.add_term(w1, -6.0);
    m.add_constraint("link", link, Relop::Le, 0.0).unwrap();
    let mut floor = LinExpr::term(y, 1.0);
    floor.add_term(w1, 5.0);
    m.add_constraint("floor", floor, Relop::Ge, 0.0).unwrap();
    m
}

/// Solve a model file through the HiGHS C API readers.
fn solve_file_with_highs(path: &std::path::Path) -> (bool, f64) {
    unsafe {
        let highs = highs_sys::Highs_create();
        let flag = CString::new("output_flag").unwrap();
        highs_sys::Highs_setBoolOptionValue(highs, flag.as_ptr(), 0);
        let cpath = CString::new(path.to_str().unwrap()).unwrap();
        let read_status = highs_sys::Highs_readModel(highs, cpath.as_ptr());
        assert!(read_status <= 1, "HiGHS failed to read {}", path.display());
        highs_sys::Highs_run(highs);
        let status = highs_sys::Highs_getModelStatus(highs);
        let objective = highs_sys::Highs_getObjectiveValue(highs);
        highs_sys::Highs_destroy(highs);
        (status == highs_sys::MODEL_STATUS_OPTIMAL, objective)
    }
}

#[test]
fn highs_reparses_our_lp_and_mps_to_the_same_optimum() {
    let model = sample_model();
    let reference = solve_builtin(&model, &SolveOptions::default());
    assert_eq!(reference.status, SolveStatus::Optimal);
    let want = reference.objective.unwrap();

    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("m.lp");
    let mps = dir.path().join("m.mps");
    write_lp_file(&model, &lp).unwrap();
    write_mps_file(&model, &mps).unwrap();

    for path in [lp, mps] {
        let (optimal, objective) = solve_file_with_highs(&path);
        assert!(optimal, "{} did not solve to optimality", path.display());
        assert!(
            (objective - want).abs() <= 1e-9 * want.abs().max(1.0),
            "{}: {objective} vs {want}",
            path.display()
        );
    }
}
