//! `reclaim`: solve, check, generate and draw two-pad reclaimer schedules.
//!
//! Exit status: 0 ok, 1 violation or infeasible input, 2 usage or resource error.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use reclaim_core::bounds::{occupancy_decomposition, preemptive_bounds, single_reclaimer_lower_bound};
use reclaim_core::generators::{
    find_subset, gen_contiguous_thm6, gen_one_six_prec, gen_partition_thm2, gen_positioning_partition, gen_random, GenMode,
    Generated, ReductionArtifact,
};
use reclaim_core::model::json::{
    format_q, instance_from_json, instance_to_value, lengths_from_json, lengths_to_json, parse_q, result_to_value,
    schedule_from_value, schedule_to_value,
};
use reclaim_core::model::validate_instance;
use reclaim_core::oracles::{
    oracle_positioning_single, oracle_single_prec_directions, oracle_two_free, oracle_two_free_assigned, oracle_two_prec,
    SearchBudget,
};
use reclaim_core::positioning::{check_positioning_feasibility, fb_positioning, positioning_lower_bound, Feasibility, LengthsInstance};
use reclaim_core::precedence_solvers::{dp_single_precedence, dp_two_precedence, DEFAULT_MAX_STATES};
use reclaim_core::preemptive_solver::preemptive_schedule;
use reclaim_core::probe::{conjecture_probe, ProbeParams};
use reclaim_core::render::{render_svg, RenderSpec};
use reclaim_core::single_solver::forward_backward;
use reclaim_core::two_solver::{best_contiguous_unimodal, evaluate_pair, two_approximation, PairChoice};
use reclaim_core::{Error, Instance, Mode, Q, Reclaimer, SolveResult};

#[derive(Parser)]
#[command(name = "reclaim", version, about = "Stockyard reclaimer scheduling on two pads sharing one rail")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check an instance, and optionally a schedule against it.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Free)]
        mode: ModeArg,
    },
    /// Run a solver and print its result as JSON.
    Solve {
        #[arg(long, value_enum)]
        solver: SolverArg,
        /// Placed instance (every solver except `fb-positioning`).
        #[arg(long, conflicts_with = "lengths")]
        instance: Option<PathBuf>,
        /// Lengths instance for `fb-positioning`.
        #[arg(long)]
        lengths: Option<PathBuf>,
        /// `j,j',p,q,k` for `--solver pair`: routings p, q in {1, 2}, waiting reclaimer k in {0, 1}.
        #[arg(long)]
        pair: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: u64,
    },
    /// Print lower bounds.
    Bound {
        #[arg(long, conflicts_with = "lengths")]
        instance: Option<PathBuf>,
        #[arg(long)]
        lengths: Option<PathBuf>,
    },
    /// Run an exhaustive reference solver.
    Oracle {
        #[arg(long, value_enum)]
        kind: OracleArg,
        #[arg(long, conflicts_with = "lengths")]
        instance: Option<PathBuf>,
        #[arg(long)]
        lengths: Option<PathBuf>,
        /// Comma-separated pile ids forced onto R0 (`two-free` only); the rest go to R1.
        #[arg(long)]
        assign_r0: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
    /// Draw a schedule as a time-space SVG.
    Render {
        #[arg(long)]
        instance: PathBuf,
        /// A schedule, or a solver result containing one.
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 400)]
        height: u32,
    },
    /// Compare the best contiguous schedule with the optimum on random instances.
    Probe {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        min_n: usize,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 12)]
        max_length: i64,
        /// Comma-separated speeds, e.g. `1,3/2,18`.
        #[arg(long, default_value = "1,3/2,2,5,18")]
        speeds: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Random instance, reproducible from the seed.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        length: i64,
        #[arg(long, default_value = "1")]
        speed: String,
        #[arg(long, value_enum, default_value_t = GenModeArg::Free)]
        mode: GenModeArg,
    },
    /// Two reclaimers, all piles on one pad (partition).
    Partition(ReductionArgs),
    /// Two reclaimers with a fixed contiguous assignment (partition).
    Contiguous(ReductionArgs),
    /// Positioning for one reclaimer (partition).
    Positioning(ReductionArgs),
    /// Positioning for two reclaimers (partition).
    PositioningTwo(ReductionArgs),
    /// Two reclaimers with a fixed order and positioning (1/6 split).
    OneSix(ReductionArgs),
}

#[derive(Args)]
struct ReductionArgs {
    /// Comma-separated positive integers.
    #[arg(long)]
    a: String,
    /// 0-based indices of a certificate subset.
    #[arg(long, conflicts_with = "find_witness")]
    witness: Option<String>,
    /// Search for a certificate subset and attach it when one exists.
    #[arg(long)]
    find_witness: bool,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    #[arg(long, default_value_t = SearchBudget::default().max_piles)]
    max_piles: usize,
    #[arg(long, default_value_t = SearchBudget::default().max_grid)]
    max_grid: i64,
    #[arg(long, default_value_t = SearchBudget::default().max_nodes)]
    max_nodes: u64,
}

impl From<BudgetArgs> for SearchBudget {
    fn from(b: BudgetArgs) -> Self {
        SearchBudget { max_piles: b.max_piles, max_grid: b.max_grid, max_nodes: b.max_nodes }
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum ModeArg {
    Free,
    Precedence,
    Preemptive,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum SolverArg {
    ForwardBackward,
    Preemptive,
    Pair,
    Contiguous,
    Approx,
    DpSingle,
    DpTwo,
    FbPositioning,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum OracleArg {
    TwoFree,
    SinglePrec,
    TwoPrec,
    Positioning,
}

#[derive(ValueEnum, Clone, Copy)]
enum GenModeArg {
    Free,
    Precedence,
    Lengths,
}

/// An error carrying its exit status.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        let code = match err.downcast_ref::<Error>() {
            Some(Error::Infeasible(_)) => 1,
            _ => 2,
        };
        Failure { code, err }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(path: &Path) -> anyhow::Result<Instance> {
    Ok(instance_from_json(&read_text(path)?)?)
}

fn load_lengths(path: &Path) -> anyhow::Result<LengthsInstance> {
    Ok(lengths_from_json(&read_text(path)?)?)
}

fn need<'a>(p: &'a Option<PathBuf>, flag: &str) -> anyhow::Result<&'a Path> {
    p.as_deref().ok_or_else(|| anyhow!("--{} is required here", flag))
}

fn emit(text: &str) {
    // A closed pipe downstream is not an error for us.
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn print(v: &Value) {
    emit(&format!("{}\n", serde_json::to_string_pretty(v).expect("values serialize")));
}

fn parse_list<T: std::str::FromStr>(s: &str) -> anyhow::Result<Vec<T>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<T>().map_err(|_| anyhow!("bad list element {:?}", p)))
        .collect()
}

fn run(cmd: Cmd) -> Result<u8, Failure> {
    match cmd {
        Cmd::Validate { instance, schedule, mode } => validate(&instance, schedule.as_deref(), mode),
        Cmd::Solve { solver, instance, lengths, pair, max_states } => {
            if solver == SolverArg::FbPositioning {
                let p = fb_positioning(&load_lengths(need(&lengths, "lengths")?)?).map_err(anyhow::Error::from)?;
                print(&json!({
                    "instance": instance_to_value(&p.instance),
                    "order": p.order,
                    "case": p.case,
                    "split": p.split,
                    "result": result_to_value(&p.result),
                }));
                return Ok(0);
            }
            let inst = load_instance(need(&instance, "instance")?)?;
            let res = solve(&inst, solver, pair.as_deref(), max_states)?;
            print(&result_to_value(&res));
            Ok(0)
        }
        Cmd::Bound { instance, lengths } => {
            if let Some(path) = lengths {
                let li = load_lengths(&path)?;
                let feas = check_positioning_feasibility(&li);
                let label = match feas {
                    Feasibility::Guaranteed => "guaranteed",
                    Feasibility::Unknown => "unknown",
                    Feasibility::Infeasible => "infeasible",
                };
                print(&json!({"feasibility": label, "lower_bound": format_q(positioning_lower_bound(&li))}));
                return Ok(if feas == Feasibility::Infeasible { 1 } else { 0 });
            }
            let inst = load_instance(need(&instance, "instance")?)?;
            let d = occupancy_decomposition(&inst);
            let b = preemptive_bounds(&inst);
            print(&json!({
                "single_reclaimer": format_q(single_reclaimer_lower_bound(&inst)),
                "q1": d.q1, "q2": d.q2, "e": d.e,
                "k0": format_q(b.k0),
                "k_per_gap": b.k_per_gap.iter().map(|&k| format_q(k)).collect::<Vec<_>>(),
                "k_star": format_q(b.k_star),
                "argmin": b.argmin,
            }));
            Ok(0)
        }
        Cmd::Oracle { kind, instance, lengths, assign_r0, budget } => {
            let budget = SearchBudget::from(budget);
            let value = match kind {
                OracleArg::Positioning => {
                    let li = load_lengths(need(&lengths, "lengths")?)?;
                    json!({"makespan": format_q(oracle_positioning_single(&li, &budget).map_err(anyhow::Error::from)?)})
                }
                OracleArg::TwoFree => {
                    let inst = load_instance(need(&instance, "instance")?)?;
                    let res = match assign_r0 {
                        Some(ids) => oracle_two_free_assigned(&inst, &budget, &parse_list::<usize>(&ids)?),
                        None => oracle_two_free(&inst, &budget),
                    };
                    result_to_value(&res.map_err(anyhow::Error::from)?)
                }
                OracleArg::SinglePrec => {
                    let inst = load_instance(need(&instance, "instance")?)?;
                    json!({"makespan": format_q(oracle_single_prec_directions(&inst).map_err(anyhow::Error::from)?)})
                }
                OracleArg::TwoPrec => {
                    let inst = load_instance(need(&instance, "instance")?)?;
                    json!({"makespan": format_q(oracle_two_prec(&inst, &budget).map_err(anyhow::Error::from)?)})
                }
            };
            print(&value);
            Ok(0)
        }
        Cmd::Gen { what } => {
            print(&generate(what)?);
            Ok(0)
        }
        Cmd::Render { instance, schedule, out, width, height } => {
            let inst = load_instance(&instance)?;
            let v: Value = serde_json::from_str(&read_text(&schedule)?).context("schedule is not JSON")?;
            let v = match v.get("schedule") {
                Some(inner) => inner.clone(),
                None => v,
            };
            let sched = schedule_from_value(v).map_err(anyhow::Error::from)?;
            let spec = RenderSpec { width_px: width, height_px: height, ..RenderSpec::default() };
            let svg = render_svg(&inst, &sched, &spec).map_err(|e| Failure { code: 1, err: e.into() })?;
            match out {
                Some(p) => fs::write(&p, svg).with_context(|| format!("writing {}", p.display()))?,
                None => emit(&svg),
            }
            Ok(0)
        }
        Cmd::Probe { seed, trials, min_n, max_n, max_length, speeds, budget } => {
            let speeds = speeds.split(',').map(|s| parse_q(s).map_err(anyhow::Error::from)).collect::<anyhow::Result<Vec<Q>>>()?;
            let params = ProbeParams { min_n, max_n, max_length, speeds, budget: budget.into() };
            let report = conjecture_probe(seed, trials, &params).map_err(anyhow::Error::from)?;
            if !report.flagged.is_empty() {
                eprintln!("note: {} trial(s) exceeded ratio 4/3", report.flagged.len());
            }
            print(&report.to_value());
            Ok(0)
        }
    }
}

fn validate(instance: &Path, schedule: Option<&Path>, mode: ModeArg) -> Result<u8, Failure> {
    let inst = load_instance(instance)?;
    let mut violations = validate_instance(&inst);
    if violations.is_empty() {
        if let Some(path) = schedule {
            let v: Value = serde_json::from_str(&read_text(path)?).context("schedule is not JSON")?;
            let v = v.get("schedule").cloned().unwrap_or(v);
            let sched = schedule_from_value(v).map_err(anyhow::Error::from)?;
            let mode = match mode {
                ModeArg::Free => Mode::Free,
                ModeArg::Precedence => Mode::Precedence,
                ModeArg::Preemptive => Mode::Preemptive,
            };
            violations = reclaim_core::model::validate_schedule(&inst, &sched, mode);
            if violations.is_empty() {
                print(&json!({"ok": true, "makespan": format_q(reclaim_core::makespan(&sched))}));
                return Ok(0);
            }
        }
    }
    let list: Vec<Value> = violations.iter().map(|v| json!({"kind": v.kind.label(), "message": v.message})).collect();
    print(&json!({"ok": list.is_empty(), "violations": list}));
    Ok(if list.is_empty() { 0 } else { 1 })
}

fn parse_pair(s: &str) -> anyhow::Result<PairChoice> {
    let v: Vec<usize> = parse_list(s)?;
    let [j, j_prime, p, q, k] = v[..] else { bail!("--pair expects five numbers j,j',p,q,k") };
    if !(1..=2).contains(&p) || !(1..=2).contains(&q) || k > 1 {
        bail!("p and q must be 1 or 2, k must be 0 or 1");
    }
    Ok(PairChoice { j, j_prime, p: p as u8, q: q as u8, k: Reclaimer::from_index(k) })
}

fn solve(inst: &Instance, solver: SolverArg, pair: Option<&str>, max_states: u64) -> anyhow::Result<SolveResult> {
    Ok(match solver {
        SolverArg::ForwardBackward => forward_backward(inst)?,
        SolverArg::Preemptive => preemptive_schedule(inst)?,
        SolverArg::Pair => evaluate_pair(inst, parse_pair(pair.ok_or_else(|| anyhow!("--pair is required"))?)?)?,
        SolverArg::Contiguous => best_contiguous_unimodal(inst)?,
        SolverArg::Approx => two_approximation(inst)?,
        SolverArg::DpSingle => dp_single_precedence(inst)?,
        SolverArg::DpTwo => dp_two_precedence(inst, max_states)?,
        SolverArg::FbPositioning => unreachable!("handled by the caller"),
    })
}

fn generate(what: GenCmd) -> anyhow::Result<Value> {
    let (a, witness, find, kind) = match what {
        GenCmd::Random { seed, n, length, speed, mode } => {
            let mode = match mode {
                GenModeArg::Free => GenMode::Free,
                GenModeArg::Precedence => GenMode::Precedence,
                GenModeArg::Lengths => GenMode::Lengths,
            };
            return Ok(generated_value(&gen_random(seed, n, length, parse_q(&speed)?, mode)?));
        }
        GenCmd::Partition(r) => (r.a, r.witness, r.find_witness, 2),
        GenCmd::Contiguous(r) => (r.a, r.witness, r.find_witness, 6),
        GenCmd::Positioning(r) => (r.a, r.witness, r.find_witness, 8),
        GenCmd::PositioningTwo(r) => (r.a, r.witness, r.find_witness, 9),
        GenCmd::OneSix(r) => (r.a, r.witness, r.find_witness, 10),
    };
    let a: Vec<i64> = parse_list(&a)?;
    let sum: i64 = a.iter().sum();
    let mut w: Option<Vec<usize>> = witness.map(|s| parse_list(&s)).transpose()?;
    if find {
        let target = if kind == 10 { sum / 7 } else { sum / 2 };
        w = find_subset(&a, target);
    }
    let w = w.as_deref();
    let art = match kind {
        2 => gen_partition_thm2(&a, w)?,
        6 => gen_contiguous_thm6(&a, w)?,
        8 => gen_positioning_partition(&a, false, w)?,
        9 => gen_positioning_partition(&a, true, w)?,
        _ => gen_one_six_prec(&a, w)?,
    };
    Ok(artifact_value(&art))
}

fn generated_value(g: &Generated) -> Value {
    match g {
        Generated::Placed(inst) => instance_to_value(inst),
        Generated::Lengths(li) => serde_json::from_str(&lengths_to_json(li)).expect("lengths JSON parses"),
    }
}

fn artifact_value(art: &ReductionArtifact) -> Value {
    json!({
        "instance": generated_value(&art.instance),
        "target": format_q(art.target),
        "yes_witness": art.yes_witness,
        "fixed_assignment": art.fixed_assignment.as_ref().map(|v| v.iter().map(|&(id, r)| json!([id, format!("R{}", r.index())])).collect::<Vec<_>>()),
        "witness_placement": art.witness_placement.as_ref().map(instance_to_value),
        "witness_schedule": art.witness_schedule.as_ref().map(schedule_to_value),
    })
}
