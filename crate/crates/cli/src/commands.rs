use std::fmt::Display;
use std::fs;
use std::io::{self, Read};

use dualplex::io::{
    emit_text, emit_threshold_trace, emit_trace, outcome_json, render_snapshot, ProblemDocument,
    RenderStyle,
};
use dualplex::lp::{OptimizeOptions, OptimizeOutcome, PrimalDualOutcome};
use dualplex::model::corpus;
use dualplex::scalar::to_decimal_string;
use dualplex::verify::{
    check_farkas as farkas_valid, check_solution, corpus_stats, pivot_stats, StatsConfig,
};
use dualplex::{
    klee_minty, optimize as optimize_lp, parse_rational, solve as solve_system,
    solve_lp_thresholds, solve_primal_dual, Outcome, Problem, Program, Rational, SolveOptions,
    Tableau, Thresholds,
};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Infeasible = 1,
    /// Unbounded objective or exhausted pivot budget.
    Inconclusive = 2,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Parse(_) => 65,
        }
    }
}

fn usage(msg: impl Display) -> CliError {
    CliError::Usage(msg.to_string())
}

fn load(path: &str) -> Result<Problem<Rational>, CliError> {
    if let Some(name) = path.strip_prefix("corpus:") {
        return corpus::lookup(name).map_err(usage);
    }
    let text = if path == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| usage(format!("stdin: {e}")))?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?
    };
    ProblemDocument::parse(&text)
        .map(|d| d.problem)
        .map_err(|e| CliError::Parse(format!("{path}: {e}")))
}

fn load_program(path: &str) -> Result<Program, CliError> {
    match load(path)? {
        Problem::Program(lp) => Ok(lp),
        Problem::System(_) => Err(usage(format!(
            "{path}: no objective (`min` line or `c` key)"
        ))),
    }
}

fn parse_vector(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|t| parse_rational(t.trim()).map_err(usage))
        .collect()
}

fn tuple(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn options(max_pivots: Option<usize>) -> SolveOptions {
    SolveOptions {
        max_pivots,
        ..SolveOptions::default()
    }
}

fn write_output(text: &str, output: Option<&str>) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn status_of(outcome: &Outcome) -> Status {
    match outcome {
        Outcome::Feasible { .. } => Status::Ok,
        Outcome::Infeasible { .. } => Status::Infeasible,
        Outcome::LimitExceeded { .. } => Status::Inconclusive,
    }
}

fn print_tables(
    initial: &dualplex::TableauSnapshot<Rational>,
    outcome: &Outcome,
    first: usize,
    style: RenderStyle,
) {
    if first == 1 {
        println!("table 1");
        print!("{}", render_snapshot(initial, style));
    }
    for (i, rec) in outcome.trace().iter().enumerate() {
        println!();
        println!(
            "table {} (pivot column {}, row {})",
            first + i + 1,
            rec.entering + 1,
            rec.leaving + 1
        );
        if let Some(after) = &rec.after {
            print!("{}", render_snapshot(after, style));
        }
    }
}

fn print_outcome(outcome: &Outcome) {
    match outcome {
        Outcome::Feasible { x, pivots, .. } => {
            println!("feasible");
            println!("x = {}", tuple(x));
            println!("pivots = {pivots}");
        }
        Outcome::Infeasible {
            entering,
            ray,
            last_point,
            violated,
            pivots,
            ..
        } => {
            println!("infeasible");
            println!("unbounded dual column = {}", entering + 1);
            println!("farkas = {}", tuple(&ray.y));
            println!("last point = {}", tuple(last_point));
            let rows: Vec<String> = violated.iter().map(|r| (r + 1).to_string()).collect();
            println!("violated rows = {}", rows.join(", "));
            println!("pivots = {pivots}");
        }
        Outcome::LimitExceeded { pivots, .. } => {
            println!("pivot limit reached after {pivots} pivots");
        }
    }
}

pub fn solve(
    path: &str,
    trace: bool,
    json: bool,
    style: RenderStyle,
    max_pivots: Option<usize>,
) -> Result<Status, CliError> {
    let problem = load(path)?;
    let mut tab = Tableau::build(problem.system(), None, None).map_err(usage)?;
    let initial = tab.snapshot();
    let mut opts = options(max_pivots);
    opts.record_tableaux = trace;
    let outcome = solve_system(&mut tab, &opts);
    match (json, trace) {
        (true, true) => print!("{}", emit_trace(&outcome)),
        (true, false) => println!("{}", outcome_json(&outcome)),
        (false, trace) => {
            if trace {
                print_tables(&initial, &outcome, 1, style);
                println!();
            }
            print_outcome(&outcome);
        }
    }
    Ok(status_of(&outcome))
}

pub fn thresholds(
    path: &str,
    list: &str,
    trace: bool,
    json: bool,
    style: RenderStyle,
    max_pivots: Option<usize>,
) -> Result<Status, CliError> {
    let lp = load_program(path)?;
    let spec = Thresholds::new(parse_vector(list)?).map_err(usage)?;
    let mut opts = options(max_pivots);
    opts.record_tableaux = trace;
    let run = solve_lp_thresholds(&lp, &spec, &opts).map_err(usage)?;
    if json {
        print!("{}", emit_threshold_trace(&run));
    } else {
        let mut table = 1;
        for step in &run.steps {
            if trace {
                println!("t = {}", step.t);
                print_tables(&run.initial, &step.outcome, table, style);
                table += step.outcome.pivots();
                println!();
            }
            let verdict = match &step.outcome {
                Outcome::Feasible { x, .. } => format!("feasible x = {}", tuple(x)),
                Outcome::Infeasible { .. } => "contradictory".to_string(),
                Outcome::LimitExceeded { .. } => "pivot limit reached".to_string(),
            };
            println!(
                "t = {}: {verdict}, pivots = {}",
                step.t,
                step.outcome.pivots()
            );
        }
        println!("total pivots = {}", run.total_pivots());
    }
    Ok(run
        .steps
        .last()
        .map_or(Status::Ok, |s| status_of(&s.outcome)))
}

pub fn optimize(
    path: &str,
    eps: &str,
    primal_dual: bool,
    max_pivots: Option<usize>,
) -> Result<Status, CliError> {
    let lp = load_program(path)?;
    let opts = options(max_pivots);
    if primal_dual {
        return match solve_primal_dual(&lp, &opts).map_err(usage)? {
            PrimalDualOutcome::Optimal { x, y, z, pivots } => {
                println!("z = {z}");
                println!("x = {}", tuple(&x));
                println!("y = {}", tuple(&y));
                println!("pivots = {pivots}");
                Ok(Status::Ok)
            }
            PrimalDualOutcome::Infeasible(outcome) => {
                print_outcome(&outcome);
                Ok(Status::Infeasible)
            }
            PrimalDualOutcome::Unbounded { x, pivots } => {
                println!("unbounded: the constraints hold at x = {} but the dual is contradictory, so c·x has no lower bound", tuple(&x));
                println!("pivots = {pivots}");
                Ok(Status::Inconclusive)
            }
            PrimalDualOutcome::LimitExceeded { pivots } => {
                println!("pivot limit reached after {pivots} pivots");
                Ok(Status::Inconclusive)
            }
        };
    }
    let eps = parse_rational(eps).map_err(usage)?;
    if eps <= Rational::from_integer(0.into()) {
        return Err(usage("--eps must be positive"));
    }
    let opts = OptimizeOptions {
        solve: opts,
        ..OptimizeOptions::default()
    };
    match optimize_lp(&lp, &eps, &opts).map_err(usage)? {
        OptimizeOutcome::Solved(report) => {
            println!("x = {}", tuple(&report.best_x));
            println!("z_upper = {}", report.z_upper);
            let status = match &report.z_lower {
                Some(lower) => {
                    println!("z_lower = {lower}");
                    Status::Ok
                }
                None => {
                    println!("unbounded: c·x decreases without limit along a recession direction");
                    Status::Inconclusive
                }
            };
            println!("pivots = {}", report.pivots);
            Ok(status)
        }
        OptimizeOutcome::Infeasible(outcome) => {
            print_outcome(&outcome);
            Ok(Status::Infeasible)
        }
        OptimizeOutcome::LimitExceeded { pivots } => {
            println!("pivot limit reached after {pivots} pivots");
            Ok(Status::Inconclusive)
        }
    }
}

pub fn gen_klee_minty(dim: usize, output: Option<&str>) -> Result<Status, CliError> {
    let lp = klee_minty(dim).map_err(usage)?;
    write_output(&emit_text(&Problem::Program(lp)), output)?;
    Ok(Status::Ok)
}

pub fn gen_random(
    vars: usize,
    cons: usize,
    seed: u64,
    output: Option<&str>,
) -> Result<Status, CliError> {
    if vars == 0 {
        return Err(usage("--vars must be positive"));
    }
    // the same instance a one-element bench batch would draw
    let config = StatsConfig {
        vars,
        cons,
        count: 1,
        seed,
        vary_dims: false,
    };
    let system = config.instance(0);
    write_output(&emit_text(&Problem::System(system)), output)?;
    Ok(Status::Ok)
}

fn arity(got: usize, want: usize, what: &str) -> Result<(), CliError> {
    if got == want {
        Ok(())
    } else {
        Err(usage(format!("{what} has {got} entries, expected {want}")))
    }
}

pub fn check_point(path: &str, x: &str) -> Result<Status, CliError> {
    let problem = load(path)?;
    let system = problem.system();
    let x = parse_vector(x)?;
    arity(x.len(), system.num_vars(), "--x")?;
    let report = check_solution(system, &x).map_err(usage)?;
    if report.feasible {
        println!("feasible");
        if let Some(lp) = problem.program() {
            println!("c·x = {}", lp.objective_value(&x));
        }
        return Ok(Status::Ok);
    }
    println!("infeasible");
    for v in &report.violations {
        println!("row {}: short by {}", v.row + 1, v.shortfall);
    }
    for j in &report.negative_vars {
        println!("x{} = {} is negative", j + 1, x[*j]);
    }
    Ok(Status::Infeasible)
}

pub fn check_farkas(path: &str, u: &str) -> Result<Status, CliError> {
    let problem = load(path)?;
    let system = problem.system();
    let u = parse_vector(u)?;
    arity(u.len(), system.num_rows(), "--farkas")?;
    if farkas_valid(system, &u).map_err(usage)? {
        println!("valid certificate: the system is contradictory");
        Ok(Status::Ok)
    } else {
        println!("not a certificate");
        Ok(Status::Infeasible)
    }
}

pub enum Batch {
    Random(StatsConfig),
    Corpus,
}

pub fn bench(batch: Batch, output: Option<&str>) -> Result<Status, CliError> {
    let report = match batch {
        Batch::Corpus => corpus_stats(),
        Batch::Random(config) => {
            if config.vars == 0 {
                return Err(usage("--vars must be positive"));
            }
            pivot_stats(&config)
        }
    };
    write_output(&report.to_csv(), output)?;
    match report.fraction_within_rows() {
        Some(f) => eprintln!(
            "pivots <= m on {} of {} instances ({})",
            report.rows.iter().filter(|r| r.pivots <= r.m).count(),
            report.rows.len(),
            to_decimal_string(&f, 4, false)
        ),
        None => eprintln!("empty batch"),
    }
    if report.fallback_engaged {
        eprintln!("note: the smallest-index fallback rule was used");
    }
    Ok(if report.limit_exceeded() > 0 {
        Status::Inconclusive
    } else {
        Status::Ok
    })
}
