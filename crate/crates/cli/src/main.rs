//! Batch command-line front end: fit loads, build and solve the
//! continuous-time and hourly models, compare them and export schedules.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use ctsched_analysis::{compare, sample_schedule, sig9, ImbalanceReport, ReferenceLoad};
use ctsched_bernstein::{fit_rmse, fit_samples, samples_from_csv_file};
use ctsched_ct::{build_ct, solve_ct_problem, CtBuildOptions, CtError, CtSolveOptions, Schedule};
use ctsched_dt::{build_dt, solve_dt_problem, DtError, DtSchedule, DtSolveOptions};
use ctsched_milp::{
    parse_lp_file, solve_builtin, write_lp_file, write_plain_solution, LinExpr, SolveOptions,
    SolverSpec, GAP_ENV, TIME_LIMIT_ENV,
};
use ctsched_system::{load_system_with, raw_load_samples, validate_topology, LoadOptions};

mod exit_code {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const INFEASIBLE: i32 = 3;
    pub const SOLVER: i32 = 4;
    pub const IO: i32 = 5;
}

#[derive(Parser)]
#[command(name = "ctsched", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelChoice {
    Ct,
    Dt,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReferenceChoice {
    /// Measure against the fitted continuous-time load.
    Fitted,
    /// Measure against the raw load samples, integrated by trapezoid.
    Raw,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a system file, printing diagnostics.
    Validate {
        #[arg(long)]
        system: PathBuf,
    },
    /// Least-squares fit of a sampled series onto piecewise cubics.
    Fit {
        /// CSV with header `time_s,value`.
        #[arg(long)]
        samples: PathBuf,
        /// Either `N x SECONDS` (e.g. `24x3600`) or an explicit knot list.
        #[arg(long)]
        knots: String,
        /// Output file for the per-interval coefficients.
        #[arg(long)]
        out: PathBuf,
        /// Fit each interval independently instead of enforcing continuity
        /// of value and derivative across knots.
        #[arg(long)]
        no_c1: bool,
    },
    /// Build and solve the scheduling models; write LP files, schedule CSVs
    /// and summaries (plus the comparison report for `both`).
    Run(RunArgs),
    /// Solve both models and report structural imbalances (same artifacts
    /// as `run --model both`).
    Compare(RunArgs),
    /// Bundled LP solver: read an LP file, write a plain solution file.
    /// Usable as an external solver command (`CT_SOLVER="ctsched solve-lp"`).
    SolveLp {
        model: PathBuf,
        solution: PathBuf,
        #[arg(long)]
        gap: Option<f64>,
        #[arg(long)]
        time_limit: Option<f64>,
    },
}

#[derive(clap::Args, Clone)]
struct RunArgs {
    #[arg(long)]
    system: Option<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<ModelChoice>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// External solver command; the bundled engine when absent (the
    /// CT_SOLVER environment variable overrides the default).
    #[arg(long)]
    solver: Option<String>,
    /// Relative MIP gap target (default exact, 1e-9).
    #[arg(long)]
    gap: Option<f64>,
    /// Solver time limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Schedule CSV sampling resolution in seconds.
    #[arg(long)]
    resolution: Option<f64>,
    /// Remove the hydro production continuity pair (tractability switch).
    #[arg(long)]
    drop_hydro_continuity: bool,
    /// Reference load for the imbalance report.
    #[arg(long, value_enum)]
    reference: Option<ReferenceChoice>,
    /// Fit load CSVs per interval without cross-knot continuity.
    #[arg(long)]
    no_c1_fit: bool,
    /// Optional `key = value` config file supplying defaults for the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Everything `run`/`compare` needs, after merging config file and flags.
struct RunConfig {
    system: PathBuf,
    model: ModelChoice,
    out: PathBuf,
    solver: SolverSpec,
    gap: f64,
    time_limit: Option<f64>,
    resolution: f64,
    drop_hydro_continuity: bool,
    reference: ReferenceChoice,
    enforce_c1: bool,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { system } => cmd_validate(&system),
        Command::Fit {
            samples,
            knots,
            out,
            no_c1,
        } => cmd_fit(&samples, &knots, &out, no_c1),
        Command::Run(args) => cmd_run(args, false),
        Command::Compare(args) => cmd_run(args, true),
        Command::SolveLp {
            model,
            solution,
            gap,
            time_limit,
        } => cmd_solve_lp(&model, &solution, gap, time_limit),
    };
    match result {
        Ok(()) => std::process::exit(exit_code::OK),
        Err(f) => {
            eprintln!("error: {}", f.message);
            std::process::exit(f.code);
        }
    }
}

fn cmd_validate(system: &Path) -> Result<(), Failure> {
    match ctsched_system::load_system(system) {
        Ok(instance) => {
            let diags = validate_topology(&instance);
            if diags.is_empty() {
                println!(
                    "ok: {} areas, {} reservoirs, {} plants, {} thermal units, {} cables, {} cuts, {} intervals",
                    instance.areas.len(),
                    instance.reservoirs.len(),
                    instance.plants.len(),
                    instance.thermal.len(),
                    instance.cables.len(),
                    instance.cuts.len(),
                    instance.horizon.num_intervals()
                );
                Ok(())
            } else {
                for d in &diags {
                    println!("diagnostic: {d}");
                }
                Err(Failure::new(exit_code::PARSE, "system file is invalid"))
            }
        }
        Err(e) => Err(Failure::new(exit_code::PARSE, e.to_string())),
    }
}

fn parse_knots(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = |m: &str| Failure::new(exit_code::USAGE, format!("bad --knots `{spec}`: {m}"));
    if let Some((count, len)) = spec.split_once('x') {
        let count: usize = count.trim().parse().map_err(|_| bad("count"))?;
        let len: f64 = len.trim().parse().map_err(|_| bad("length"))?;
        if count == 0 || len <= 0.0 {
            return Err(bad("need a positive count and length"));
        }
        return Ok((0..=count).map(|i| i as f64 * len).collect());
    }
    let knots: Result<Vec<f64>, _> = spec
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect();
    let knots = knots.map_err(|_| bad("knot list"))?;
    if knots.len() < 2 {
        return Err(bad("need at least two knots"));
    }
    Ok(knots)
}

fn cmd_fit(samples: &Path, knots: &str, out: &Path, no_c1: bool) -> Result<(), Failure> {
    let knots = parse_knots(knots)?;
    let samples = samples_from_csv_file(samples)
        .map_err(|e| Failure::new(exit_code::PARSE, e.to_string()))?;
    let fit = fit_samples(&samples, &knots, !no_c1)
        .map_err(|e| Failure::new(exit_code::PARSE, e.to_string()))?;
    let rmse = fit_rmse(&fit, &samples);
    let mut file = std::fs::File::create(out)
        .map_err(|e| Failure::new(exit_code::IO, format!("{}: {e}", out.display())))?;
    writeln!(file, "# piecewise cubic fit, one row per interval").map_err(io_failure)?;
    writeln!(file, "# h c0 c1 c2 c3").map_err(io_failure)?;
    for (h, piece) in fit.pieces().iter().enumerate() {
        let coeffs: Vec<String> = piece.coeffs().iter().map(|c| format!("{c}")).collect();
        writeln!(file, "{h} {}", coeffs.join(" ")).map_err(io_failure)?;
    }
    println!("fitted {} intervals, rmse {}", fit.num_intervals(), sig9(rmse));
    Ok(())
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::new(exit_code::IO, e.to_string())
}

fn merge_config(args: RunArgs, force_both: bool) -> Result<RunConfig, Failure> {
    let mut file_values: BTreeMap<String, String> = BTreeMap::new();
    if let Some(config) = &args.config {
        let text = std::fs::read_to_string(config)
            .map_err(|e| Failure::new(exit_code::IO, format!("{}: {e}", config.display())))?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Failure::new(
                    exit_code::PARSE,
                    format!("{}:{}: expected `key = value`", config.display(), idx + 1),
                )
            })?;
            file_values.insert(key.trim().to_string(), value.trim().to_string());
        }
    }
    let from_file = |key: &str| file_values.get(key).cloned();
    let parse_f64 = |key: &str| -> Result<Option<f64>, Failure> {
        from_file(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Failure::new(exit_code::PARSE, format!("config {key}: bad number")))
            })
            .transpose()
    };

    let system = args
        .system
        .or_else(|| from_file("system").map(PathBuf::from))
        .ok_or_else(|| Failure::new(exit_code::USAGE, "--system is required"))?;
    let out = args
        .out
        .or_else(|| from_file("out").map(PathBuf::from))
        .ok_or_else(|| Failure::new(exit_code::USAGE, "--out is required"))?;
    let model = if force_both {
        ModelChoice::Both
    } else {
        args.model
            .or_else(|| match from_file("model").as_deref() {
                Some("ct") => Some(ModelChoice::Ct),
                Some("dt") => Some(ModelChoice::Dt),
                Some("both") => Some(ModelChoice::Both),
                _ => None,
            })
            .unwrap_or(ModelChoice::Both)
    };
    let solver_cmd = args.solver.or_else(|| from_file("solver"));
    let solver = match solver_cmd {
        Some(cmd) => SolverSpec::Command(cmd),
        None => SolverSpec::from_env_or(SolverSpec::Builtin),
    };
    let gap = match args.gap {
        Some(g) => g,
        None => parse_f64("gap")?.unwrap_or(1e-9),
    };
    if !(0.0..=1.0).contains(&gap) {
        return Err(Failure::new(exit_code::USAGE, "--gap must lie in [0, 1]"));
    }
    let time_limit = match args.time_limit {
        Some(t) => Some(t),
        None => parse_f64("time_limit")?,
    };
    let resolution = match args.resolution {
        Some(r) => r,
        None => parse_f64("resolution")?.unwrap_or(300.0),
    };
    if !(resolution > 0.0) {
        return Err(Failure::new(exit_code::USAGE, "--resolution must be positive"));
    }
    let drop_hydro_continuity = args.drop_hydro_continuity
        || from_file("drop_hydro_continuity").as_deref() == Some("true");
    let reference = args
        .reference
        .or_else(|| match from_file("reference").as_deref() {
            Some("raw") => Some(ReferenceChoice::Raw),
            Some("fitted") => Some(ReferenceChoice::Fitted),
            _ => None,
        })
        .unwrap_or(ReferenceChoice::Fitted);
    let enforce_c1 = !(args.no_c1_fit || from_file("no_c1_fit").as_deref() == Some("true"));
    Ok(RunConfig {
        system,
        model,
        out,
        solver,
        gap,
        time_limit,
        resolution,
        drop_hydro_continuity,
        reference,
        enforce_c1,
    })
}

fn cmd_run(args: RunArgs, force_both: bool) -> Result<(), Failure> {
    let config = merge_config(args, force_both)?;
    let instance = load_system_with(
        &config.system,
        &LoadOptions {
            enforce_c1: config.enforce_c1,
        },
    )
    .map_err(|e| Failure::new(exit_code::PARSE, e.to_string()))?;
    std::fs::create_dir_all(&config.out).map_err(io_failure)?;

    let solve_opts = SolveOptions {
        gap_target: config.gap,
        time_limit_s: config.time_limit,
        verbose: false,
    };

    let want_ct = matches!(config.model, ModelChoice::Ct | ModelChoice::Both);
    let want_dt = matches!(config.model, ModelChoice::Dt | ModelChoice::Both);

    let mut ct_schedule: Option<Schedule> = None;
    if want_ct {
        let problem = build_ct(
            &instance,
            CtBuildOptions {
                drop_hydro_continuity: config.drop_hydro_continuity,
            },
        )
        .map_err(|e| Failure::new(exit_code::PARSE, e.to_string()))?;
        write_lp_file(&problem.model, config.out.join("ct.lp")).map_err(io_failure)?;
        let opts = CtSolveOptions {
            solver: config.solver.clone(),
            solve: solve_opts.clone(),
            build: CtBuildOptions {
                drop_hydro_continuity: config.drop_hydro_continuity,
            },
            diagnose_infeasible: true,
        };
        let schedule = solve_ct_problem(&instance, problem, &opts).map_err(|e| match e {
            CtError::Infeasible { .. } => Failure::new(exit_code::INFEASIBLE, e.to_string()),
            CtError::SolverFailed(_) | CtError::Solve(_) => {
                Failure::new(exit_code::SOLVER, e.to_string())
            }
            other => Failure::new(exit_code::PARSE, other.to_string()),
        })?;
        write_ct_artifacts(&config, &instance, &schedule)?;
        ct_schedule = Some(schedule);
    }

    let mut dt_schedule: Option<DtSchedule> = None;
    if want_dt {
        let problem =
            build_dt(&instance).map_err(|e| Failure::new(exit_code::PARSE, e.to_string()))?;
        write_lp_file(&problem.model, config.out.join("dt.lp")).map_err(io_failure)?;
        let opts = DtSolveOptions {
            solver: config.solver.clone(),
            solve: solve_opts.clone(),
            diagnose_infeasible: true,
        };
        let schedule = solve_dt_problem(&instance, problem, &opts).map_err(|e| match e {
            DtError::Infeasible { .. } => Failure::new(exit_code::INFEASIBLE, e.to_string()),
            DtError::SolverFailed(_) | DtError::Solve(_) => {
                Failure::new(exit_code::SOLVER, e.to_string())
            }
            other => Failure::new(exit_code::PARSE, other.to_string()),
        })?;
        write_dt_artifacts(&config, &instance, &schedule)?;
        dt_schedule = Some(schedule);
    }

    if let (Some(ct), Some(dt)) = (&ct_schedule, &dt_schedule) {
        let raw;
        let reference = match config.reference {
            ReferenceChoice::Fitted => ReferenceLoad::Fitted,
            ReferenceChoice::Raw => {
                raw = raw_load_samples(&config.system)
                    .map_err(|e| Failure::new(exit_code::PARSE, e.to_string()))?;
                for area in &instance.areas {
                    if !raw.contains_key(&area.id) {
                        return Err(Failure::new(
                            exit_code::PARSE,
                            format!(
                                "--reference raw needs csv load samples for area {}",
                                area.id
                            ),
                        ));
                    }
                }
                ReferenceLoad::RawSamples(&raw)
            }
        };
        let report = compare(ct, dt, &instance, &reference)
            .map_err(|e| Failure::new(exit_code::PARSE, e.to_string()))?;
        write_report(&config.out, &report)?;
        print!("{}", report.to_text());
    }
    println!("artifacts written to {}", config.out.display());
    Ok(())
}

/// Common summary fields of both models.
struct Summary<'a> {
    label: &'a str,
    status: &'a str,
    costs: [(&'a str, f64); 7],
    stats: ctsched_milp::ModelStats,
    mip_gap: Option<f64>,
    wall_time_s: f64,
    warnings: &'a [String],
}

/// Total load energy over the horizon in MWh (exact interval means).
fn load_energy_mwh(instance: &ctsched_system::SystemInstance) -> f64 {
    let mut total = 0.0;
    for area in &instance.areas {
        for h in 0..instance.horizon.num_intervals() {
            total += area.load_mw.interval_mean(h) * instance.horizon.delta_s(h);
        }
    }
    total / 3600.0
}

fn write_summary(
    config: &RunConfig,
    instance: &ctsched_system::SystemInstance,
    suffix: &str,
    summary: &Summary,
) -> Result<(), Failure> {
    let mut out = Vec::new();
    writeln!(out, "model: {}", summary.label).map_err(io_failure)?;
    writeln!(out, "status: {}", summary.status).map_err(io_failure)?;
    let total = summary.costs[0].1;
    writeln!(out, "objective_mu: {}", sig9(total)).map_err(io_failure)?;
    let energy = load_energy_mwh(instance);
    if energy > 0.0 {
        writeln!(out, "objective_mu_per_mwh: {}", sig9(total / energy)).map_err(io_failure)?;
    }
    for (name, value) in &summary.costs[1..] {
        writeln!(out, "  {name}: {}", sig9(*value)).map_err(io_failure)?;
    }
    writeln!(out, "binaries: {}", summary.stats.binaries).map_err(io_failure)?;
    writeln!(out, "continuous: {}", summary.stats.continuous).map_err(io_failure)?;
    writeln!(out, "constraints: {}", summary.stats.constraints).map_err(io_failure)?;
    writeln!(out, "mip_gap: {}", summary.mip_gap.map_or("-".into(), sig9)).map_err(io_failure)?;
    writeln!(out, "wall_time_s: {}", sig9(summary.wall_time_s)).map_err(io_failure)?;
    std::fs::write(config.out.join(format!("summary_{suffix}.txt")), out).map_err(io_failure)?;
    let mut log = Vec::new();
    writeln!(log, "status: {}", summary.status).map_err(io_failure)?;
    for w in summary.warnings {
        writeln!(log, "warning: {w}").map_err(io_failure)?;
    }
    std::fs::write(config.out.join(format!("{suffix}_solver.log")), log).map_err(io_failure)?;
    Ok(())
}

fn write_ct_artifacts(
    config: &RunConfig,
    instance: &ctsched_system::SystemInstance,
    schedule: &Schedule,
) -> Result<(), Failure> {
    sample_schedule(schedule, instance, config.resolution, &config.out.join("ct"))
        .map_err(|e| Failure::new(exit_code::IO, e.to_string()))?;
    let b = &schedule.objective;
    write_summary(
        config,
        instance,
        "ct",
        &Summary {
            label: "continuous-time",
            status: schedule.meta.status.as_str(),
            costs: [
                ("objective_mu", b.total_mu),
                ("future_cost_mu", b.future_cost_mu),
                ("bypass_penalty_mu", b.bypass_penalty_mu),
                ("spill_penalty_mu", b.spill_penalty_mu),
                ("thermal_energy_mu", b.thermal_energy_mu),
                ("thermal_startup_mu", b.thermal_startup_mu),
                ("thermal_shutdown_mu", b.thermal_shutdown_mu),
            ],
            stats: schedule.meta.stats,
            mip_gap: schedule.meta.mip_gap,
            wall_time_s: schedule.meta.wall_time_s,
            warnings: &schedule.meta.warnings,
        },
    )
}

fn write_dt_artifacts(
    config: &RunConfig,
    instance: &ctsched_system::SystemInstance,
    schedule: &DtSchedule,
) -> Result<(), Failure> {
    sample_schedule(schedule, instance, config.resolution, &config.out.join("dt"))
        .map_err(|e| Failure::new(exit_code::IO, e.to_string()))?;
    let b = &schedule.objective;
    write_summary(
        config,
        instance,
        "dt",
        &Summary {
            label: "hourly",
            status: schedule.meta.status.as_str(),
            costs: [
                ("objective_mu", b.total_mu),
                ("future_cost_mu", b.future_cost_mu),
                ("bypass_penalty_mu", b.bypass_penalty_mu),
                ("spill_penalty_mu", b.spill_penalty_mu),
                ("thermal_energy_mu", b.thermal_energy_mu),
                ("thermal_startup_mu", b.thermal_startup_mu),
                ("thermal_shutdown_mu", b.thermal_shutdown_mu),
            ],
            stats: schedule.meta.stats,
            mip_gap: schedule.meta.mip_gap,
            wall_time_s: schedule.meta.wall_time_s,
            warnings: &schedule.meta.warnings,
        },
    )
}

fn write_report(out: &Path, report: &ImbalanceReport) -> Result<(), Failure> {
    let mut text = Vec::new();
    report.write_text(&mut text).map_err(io_failure)?;
    std::fs::write(out.join("report.txt"), text).map_err(io_failure)?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv).map_err(io_failure)?;
    std::fs::write(out.join("report.csv"), csv).map_err(io_failure)?;
    Ok(())
}

fn cmd_solve_lp(
    model_path: &Path,
    solution_path: &Path,
    gap: Option<f64>,
    time_limit: Option<f64>,
) -> Result<(), Failure> {
    let lp = parse_lp_file(model_path).map_err(|e| Failure::new(exit_code::PARSE, e.to_string()))?;
    let env_f64 = |name: &str| std::env::var(name).ok().and_then(|v| v.parse().ok());
    let opts = SolveOptions {
        gap_target: gap.or_else(|| env_f64(GAP_ENV)).unwrap_or(1e-9),
        time_limit_s: time_limit.or_else(|| env_f64(TIME_LIMIT_ENV)),
        verbose: false,
    };
    let mut model = lp.model;
    if lp.maximize {
        let mut negated = LinExpr::new();
        negated.add_expr(model.objective(), -1.0);
        model
            .set_objective(negated)
            .map_err(|e| Failure::new(exit_code::PARSE, e.to_string()))?;
    }
    let mut solution = solve_builtin(&model, &opts);
    if lp.maximize {
        solution.objective = solution.objective.map(|v| -v);
    }
    let mut file = std::fs::File::create(solution_path)
        .map_err(|e| Failure::new(exit_code::IO, format!("{}: {e}", solution_path.display())))?;
    write_plain_solution(&model, &solution, &mut file).map_err(io_failure)?;
    println!(
        "status {}{}",
        solution.status.as_str(),
        solution
            .objective
            .map(|o| format!(", objective {o}"))
            .unwrap_or_default()
    );
    Ok(())
}
