use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dualplex::io::RenderStyle;
use dualplex::verify::StatsConfig;

mod commands;

use commands::{CliError, Status};

/// Exact dual-tableau simplex for linear inequality systems and LPs.
///
/// FILE is a path, `-` for stdin, or `corpus:<name>` for a built-in problem.
#[derive(Parser, Debug)]
#[command(name = "dualplex", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide feasibility of `Ax >= b, x >= 0`.
    Solve {
        file: String,
        /// Print every tableau (or, with --json, one JSON line per pivot).
        #[arg(long)]
        trace: bool,
        /// Machine-readable output, including the certificate on infeasibility.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        style: StyleArgs,
        #[arg(long)]
        max_pivots: Option<usize>,
    },
    /// Solve an LP against a list of objective thresholds `-c·x >= t`.
    Thresholds {
        file: String,
        /// Strictly increasing, comma-separated.
        #[arg(long = "t", value_name = "T1,T2,..", allow_hyphen_values = true)]
        thresholds: String,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        style: StyleArgs,
        #[arg(long)]
        max_pivots: Option<usize>,
    },
    /// Minimize `c·x`.
    Optimize {
        file: String,
        /// Target width of the bracket in threshold mode.
        #[arg(long, default_value = "1/1000")]
        eps: String,
        #[arg(long, value_enum, default_value_t = Mode::Threshold)]
        mode: Mode,
        #[arg(long)]
        max_pivots: Option<usize>,
    },
    /// Write a generated problem in text format.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Check a point or a Farkas certificate against a system.
    Check {
        file: String,
        #[arg(
            long,
            value_name = "V1,V2,..",
            allow_hyphen_values = true,
            conflicts_with = "farkas",
            required_unless_present = "farkas"
        )]
        x: Option<String>,
        #[arg(long, value_name = "U1,U2,..", allow_hyphen_values = true)]
        farkas: Option<String>,
    },
    /// Pivot counts over a seeded random batch, as CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct StyleArgs {
    #[arg(long, value_enum, default_value_t = Style::Fraction)]
    style: Style,
    /// Decimal places for --style decimal.
    #[arg(long, default_value_t = 3)]
    places: usize,
    /// Use `,` as the decimal separator.
    #[arg(long)]
    comma: bool,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    KleeMinty {
        #[arg(long)]
        dim: usize,
        #[arg(short, long)]
        output: Option<String>,
    },
    Random {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        cons: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<String>,
    },
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, default_value_t = 6)]
    vars: usize,
    #[arg(long, default_value_t = 6)]
    cons: usize,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Draw each instance's size at random up to --vars and --cons.
    #[arg(long)]
    vary_dims: bool,
    /// Tabulate the built-in worked examples instead of a random batch.
    #[arg(long, conflicts_with_all = ["vars", "cons", "count", "seed", "vary_dims"])]
    corpus: bool,
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Style {
    Fraction,
    Decimal,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Threshold,
    PrimalDual,
}

fn run(cli: Cli) -> Result<Status, CliError> {
    match cli.command {
        Command::Solve {
            file,
            trace,
            json,
            style,
            max_pivots,
        } => commands::solve(&file, trace, json, style.into(), max_pivots),
        Command::Thresholds {
            file,
            thresholds,
            trace,
            json,
            style,
            max_pivots,
        } => commands::thresholds(&file, &thresholds, trace, json, style.into(), max_pivots),
        Command::Optimize {
            file,
            eps,
            mode,
            max_pivots,
        } => commands::optimize(&file, &eps, mode == Mode::PrimalDual, max_pivots),
        Command::Gen { kind } => match kind {
            GenKind::KleeMinty { dim, output } => commands::gen_klee_minty(dim, output.as_deref()),
            GenKind::Random {
                vars,
                cons,
                seed,
                output,
            } => commands::gen_random(vars, cons, seed, output.as_deref()),
        },
        Command::Check { file, x, farkas } => match (x, farkas) {
            (Some(x), None) => commands::check_point(&file, &x),
            (None, Some(u)) => commands::check_farkas(&file, &u),
            _ => Err(CliError::Usage(
                "give exactly one of --x and --farkas".into(),
            )),
        },
        Command::Bench(b) => {
            let batch = if b.corpus {
                commands::Batch::Corpus
            } else {
                commands::Batch::Random(StatsConfig {
                    vars: b.vars,
                    cons: b.cons,
                    count: b.count,
                    seed: b.seed,
                    vary_dims: b.vary_dims,
                })
            };
            commands::bench(batch, b.output.as_deref())
        }
    }
}

impl From<StyleArgs> for RenderStyle {
    fn from(s: StyleArgs) -> Self {
        match s.style {
            Style::Fraction => Self::Fraction,
            Style::Decimal => Self::Decimal {
                places: s.places,
                comma: s.comma,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("dualplex: {e}");
            ExitCode::from(e.code())
        }
    }
}
