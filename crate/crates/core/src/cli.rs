//! The `multiprong` command line.
//!
//! Reports go to standard output as JSON; progress and human-readable
//! tables go to standard error. `solve` exits 0 on a plan, 1 when no plan
//! exists and 2 on any error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::attack::{plan_greedy, route, AttackResult, ROUTES};
use crate::control::{check_plan_goal, ControlInstance, Goal};
use crate::dodgson::verify_sandwich;
use crate::election::{Rule, SetOrder};
use crate::format::{self, PlanFile};
use crate::fpt::{self, fpt_solve};
use crate::oracle::{solve_exhaustive_with, OracleEnvelope, OracleOptions};
use crate::reduction;
use crate::verify::{run_suite, Suite, SuiteReport, VerifyOptions};

pub const EXIT_PLAN: i32 = 0;
pub const EXIT_IMPOSSIBLE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "multiprong", version, about = "Plan and verify multiprong control attacks on elections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a control instance.
    Solve(SolveArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Generate a control instance from a reduction.
    Reduce(ReduceArgs),
    /// Dodgson scores and the maximin bounds for one election.
    Dodgson(DodgsonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverChoice {
    Auto,
    Greedy,
    Oracle,
    Fpt,
}

#[derive(clap::Args, Debug)]
struct SolveArgs {
    /// Control-instance JSON file.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Winner rule, `name[:param]`, e.g. `plurality`, `copeland:1/2`.
    #[arg(long, default_value = "plurality")]
    rule: String,
    #[arg(long, value_enum, default_value_t = SolverChoice::Auto)]
    solver: SolverChoice,
    /// Write the plan file here when a plan is found.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the `auto` routing table (to stdout when no instance is given).
    #[arg(long)]
    explain_routing: bool,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long)]
    suite: String,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    rule: Option<String>,
    #[arg(long, default_value_t = 2009)]
    seed: u64,
    /// Random instances per configuration.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Source {
    X3c,
    CopelandAv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    MaximinAc,
    MaximinAv,
    MaximinDv,
    MaximinBv,
    Llull,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GoalArg {
    C,
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Ascending,
    Descending,
}

#[derive(clap::Args, Debug)]
struct ReduceArgs {
    #[arg(long, value_enum)]
    from: Source,
    #[arg(long, value_enum)]
    to: Target,
    #[arg(long, value_enum, default_value_t = GoalArg::C)]
    goal: GoalArg,
    /// Source file: an exact-cover instance or a Copeland¹ voter-addition instance.
    #[arg(long)]
    input: PathBuf,
    /// Output instance file; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Order in which sets are expanded inside ballots.
    #[arg(long, value_enum, default_value_t = OrderArg::Ascending)]
    order: OrderArg,
}

#[derive(clap::Args, Debug)]
struct DodgsonArgs {
    /// Election JSON file with linear-order ballots.
    #[arg(long)]
    election: PathBuf,
}

/// What `solve` prints.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub digest: Option<String>,
    pub rule: String,
    pub solver: Option<String>,
    pub outcome: &'static str,
    pub plan: Option<PlanFile>,
    pub wall_seconds: f64,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PLAN };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
        Command::Reduce(a) => reduce(a),
        Command::Dodgson(a) => dodgson(a),
    }
}

fn print_json<T: Serialize>(value: &T) {
    let mut out = std::io::stdout().lock();
    let _ = serde_json::to_writer_pretty(&mut out, value);
    let _ = writeln!(out);
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

/// The `auto` routing table, one line per planner plus the fallbacks.
pub fn routing_table() -> String {
    let mut s = String::from("rule       goal          prongs          winners    solver\n");
    for r in ROUTES {
        let goal = match r.goal {
            Goal::Constructive => "constructive",
            Goal::Destructive => "destructive",
        };
        let prongs: Vec<&str> = r.prongs.iter().map(|p| p.short_name()).collect();
        let winners = if r.nonunique { "any" } else { "unique" };
        s += &format!("{:<10} {:<13} {:<15} {:<10} {}\n", r.rule, goal, prongs.join("+"), winners, r.planner);
    }
    s += &format!(
        "otherwise: fpt for plurality, veto, Borda, scoring vectors and maximin when |C ∪ A| <= {}; else oracle\n",
        fpt::MAX_CANDIDATES
    );
    s
}

/// The solver `auto` picks for `inst`.
pub fn auto_solver(inst: &ControlInstance, rule: &Rule) -> SolverChoice {
    if route(inst, rule).is_some() {
        SolverChoice::Greedy
    } else if fpt::supports(rule) && inst.candidates.len() + inst.spoilers.len() <= fpt::MAX_CANDIDATES {
        SolverChoice::Fpt
    } else {
        SolverChoice::Oracle
    }
}

fn solver_name(s: SolverChoice) -> &'static str {
    match s {
        SolverChoice::Auto => "auto",
        SolverChoice::Greedy => "greedy",
        SolverChoice::Oracle => "oracle",
        SolverChoice::Fpt => "fpt",
    }
}

fn run_solver(inst: &ControlInstance, rule: &Rule, solver: SolverChoice) -> Result<AttackResult, String> {
    match solver {
        SolverChoice::Greedy => plan_greedy(inst, rule).map_err(|e| e.to_string()),
        SolverChoice::Fpt => fpt_solve(inst, rule).map_err(|e| e.to_string()),
        SolverChoice::Oracle => {
            let envelope = OracleEnvelope::from_env().map_err(|e| e.to_string())?;
            let opts = OracleOptions {
                envelope,
                ..OracleOptions::default()
            };
            solve_exhaustive_with(inst, rule, &opts).map_err(|e| e.to_string())
        }
        SolverChoice::Auto => unreachable!("auto is resolved before solving"),
    }
}

fn solve(a: SolveArgs) -> i32 {
    let start = Instant::now();
    let mut report = RunReport {
        digest: None,
        rule: a.rule.clone(),
        solver: None,
        outcome: "error",
        plan: None,
        wall_seconds: 0.0,
        verified: false,
        error: None,
    };
    if a.explain_routing {
        if a.instance.is_none() {
            print!("{}", routing_table());
            return EXIT_PLAN;
        }
        eprint!("{}", routing_table());
    }
    let result = (|| -> Result<i32, String> {
        let path = a.instance.as_ref().ok_or("missing --instance")?;
        let rule: Rule = a.rule.parse().map_err(|e: crate::election::RuleParseError| e.to_string())?;
        let inst = format::parse_instance(&read(path)?).map_err(|e| e.to_string())?;
        report.digest = Some(format::instance_digest(&inst));
        let solver = match a.solver {
            SolverChoice::Auto => auto_solver(&inst, &rule),
            s => s,
        };
        report.solver = Some(solver_name(solver).to_string());
        eprintln!("solving {} with {} under {rule}", path.display(), solver_name(solver));
        let r = run_solver(&inst, &rule, solver)?;
        match r.plan() {
            Some(plan) => {
                report.verified = check_plan_goal(&inst, plan, &rule).map_err(|e| e.to_string())?;
                if !report.verified {
                    return Err("plan failed re-verification".into());
                }
                report.outcome = "plan";
                report.plan = Some(PlanFile::from_plan(plan));
                if let Some(out) = &a.out {
                    fs::write(out, format::plan_to_json(plan) + "\n")
                        .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
                }
                Ok(EXIT_PLAN)
            }
            None => {
                report.outcome = "impossible";
                Ok(EXIT_IMPOSSIBLE)
            }
        }
    })();
    report.wall_seconds = start.elapsed().as_secs_f64();
    let code = match result {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            report.outcome = "error";
            report.plan = None;
            report.verified = false;
            report.error = Some(e);
            EXIT_ERROR
        }
    };
    print_json(&report);
    code
}

fn verify(a: VerifyArgs) -> i32 {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        match a.suite.parse() {
            Ok(s) => vec![s],
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_ERROR;
            }
        }
    };
    let rule = match a.rule.as_deref().map(str::parse::<Rule>) {
        None => None,
        Some(Ok(r)) => Some(r),
        Some(Err(e)) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let opts = VerifyOptions {
        m: a.m,
        n: a.n,
        k: a.k,
        rule,
        seed: a.seed,
        samples: a.samples,
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for s in suites {
        eprintln!("running {s}");
        let r = run_suite(s, &opts);
        eprintln!("{} ({} cases, {:.1}s)\n{}", r.suite, r.cases(), r.seconds, r.table());
        reports.push(r);
    }
    let ok = reports.iter().all(SuiteReport::passed);
    if reports.len() == 1 {
        print_json(&reports[0]);
    } else {
        print_json(&reports);
    }
    if ok {
        EXIT_PLAN
    } else {
        EXIT_IMPOSSIBLE
    }
}

#[derive(Serialize)]
struct ReduceEcho {
    digest: String,
    out: String,
}

fn reduce(a: ReduceArgs) -> i32 {
    let result = (|| -> Result<(), String> {
        let text = read(&a.input)?;
        let goal = match a.goal {
            GoalArg::C => Goal::Constructive,
            GoalArg::D => Goal::Destructive,
        };
        let order = match a.order {
            OrderArg::Ascending => SetOrder::Ascending,
            OrderArg::Descending => SetOrder::Descending,
        };
        let err = |e: reduction::ReductionError| e.to_string();
        let inst = match (a.from, a.to) {
            (Source::CopelandAv, Target::Llull) => {
                let src = format::parse_instance(&text).map_err(|e| e.to_string())?;
                reduction::reduce_copeland1_av_to_llull_with(&src, order).map_err(err)?
            }
            (Source::CopelandAv, _) | (Source::X3c, Target::Llull) => {
                return Err("llull takes --from copeland-av; the maximin reductions take --from x3c".into())
            }
            (Source::X3c, t) => {
                let x = format::parse_x3c(&text).map_err(|e| e.to_string())?;
                match t {
                    Target::MaximinAc if goal == Goal::Destructive => {
                        return Err("maximin-ac has a constructive reduction only".into())
                    }
                    Target::MaximinAc => reduction::reduce_maximin_constructive_ac_with(&x, order),
                    Target::MaximinAv => reduction::reduce_maximin_av_with(&x, goal, order),
                    Target::MaximinDv => reduction::reduce_maximin_dv_with(&x, goal, order),
                    Target::MaximinBv => reduction::reduce_maximin_bv_with(&x, goal, order),
                    Target::Llull => unreachable!(),
                }
                .map_err(err)?
            }
        };
        let json = format::instance_to_json(&inst) + "\n";
        let digest = format::instance_digest(&inst);
        match &a.out {
            Some(out) => {
                fs::write(out, &json).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
                print_json(&ReduceEcho {
                    digest,
                    out: out.display().to_string(),
                });
            }
            None => {
                print!("{json}");
                eprintln!("digest {digest}");
            }
        }
        Ok(())
    })();
    match result {
        Ok(()) => EXIT_PLAN,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn dodgson(a: DodgsonArgs) -> i32 {
    let result = read(&a.election)
        .and_then(|t| format::parse_election(&t).map_err(|e| e.to_string()))
        .and_then(|e| verify_sandwich(&e).map_err(|e| e.to_string()));
    match result {
        Ok(r) => {
            print_json(&r);
            if r.passed() {
                EXIT_PLAN
            } else {
                EXIT_IMPOSSIBLE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
