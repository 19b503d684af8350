mod commands;
mod error;
mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::Output;
use error::{CliError, EXIT_INPUT};
use input::Input;

/// Exact computations with commuting derivations: jets, coherence of
/// PDE conditions, Singer witnesses, ranks and theta arithmetic.
///
/// Exit status: 0 on success, 1 when the input cannot be read, parsed or
/// validated, 2 when the mathematics fails (a conflict, a failed premise,
/// a vanishing denominator).
#[derive(Parser, Debug)]
#[command(name = "tderiv", version)]
struct Cli {
    /// Print a JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eliminate derivations from a term or a quantifier-free formula.
    Rewrite {
        #[command(flatten)]
        input: Input,
        /// Number of commuting derivations.
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Rewrite a random term when no input is given.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Lie bracket of two derivations, `x -> y, y -> -x; x -> 1`.
    Lie {
        #[command(flatten)]
        input: Input,
    },
    /// Coherence of a condition file.
    #[command(subcommand)]
    Coherence(CoherenceCmd),
    /// Singer axiom instances.
    #[command(subcommand)]
    Singer(SingerCmd),
    /// Rank `rk(A | B)` of rational functions written `a1, a2 | b1, ..`.
    Rank {
        #[command(flatten)]
        input: Input,
        /// Derivation `x -> .., y -> ..`; reports the delta-rank instead.
        #[arg(long)]
        delta: Option<String>,
        /// Highest jet order for the delta-rank.
        #[arg(long)]
        ord: Option<u32>,
    },
    /// Theta-monoid arithmetic on lists such as `[2,0] [1,1]`.
    #[command(subcommand)]
    Theta(ThetaCmd),
    /// Delta-type and delta-dimension of a cell type matrix `1,0; 1,1`.
    DeltaDim {
        #[command(flatten)]
        input: Input,
    },
    /// Decide a conjunction of sign conditions in one real variable.
    Decide1 {
        #[command(flatten)]
        input: Input,
        /// Decide `f > 0` for a random `f` when no input is given.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate a differential term at truncated power series.
    Eval {
        #[command(flatten)]
        input: Input,
        /// `name=series(N; c0, c1, ..)` or `name=series2(N; [i,j]=c, ..)`.
        #[arg(long = "at", required = true)]
        at: Vec<String>,
    },
    /// A polynomial whose jet at 0 lies in a box `(lo, hi) (lo, hi) ..`.
    WitnessBox {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Subcommand, Debug)]
enum CoherenceCmd {
    /// Decide coherence; with `--ord` also probe all orders up to K.
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        ord: Option<u32>,
        /// Check a random coherent condition when no input is given.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Power series solution up to total degree `--deg`.
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 4)]
        deg: u32,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum SingerCmd {
    /// Check the premise at the given point.
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Taylor coefficients of the formal solution up to `--deg`.
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 6)]
        deg: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum ThetaCmd {
    /// Divisibility-minimal elements.
    Min {
        #[command(flatten)]
        input: Input,
    },
    /// Compare two elements in the total order and under divisibility.
    Cmp {
        #[command(flatten)]
        input: Input,
    },
    /// Least common multiple.
    Join {
        #[command(flatten)]
        input: Input,
    },
    /// Greatest common divisor.
    Meet {
        #[command(flatten)]
        input: Input,
    },
    /// Immediate predecessors under divisibility.
    Pred {
        #[command(flatten)]
        input: Input,
    },
    /// All elements up to order `--ord`.
    Enum {
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 2)]
        ord: u32,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Rewrite { .. } => "rewrite",
            Command::Lie { .. } => "lie",
            Command::Coherence(CoherenceCmd::Check { .. }) => "coherence check",
            Command::Coherence(CoherenceCmd::Solve { .. }) => "coherence solve",
            Command::Singer(SingerCmd::Check { .. }) => "singer check",
            Command::Singer(SingerCmd::Solve { .. }) => "singer solve",
            Command::Rank { .. } => "rank",
            Command::Theta(t) => match t {
                ThetaCmd::Min { .. } => "theta min",
                ThetaCmd::Cmp { .. } => "theta cmp",
                ThetaCmd::Join { .. } => "theta join",
                ThetaCmd::Meet { .. } => "theta meet",
                ThetaCmd::Pred { .. } => "theta pred",
                ThetaCmd::Enum { .. } => "theta enum",
            },
            Command::DeltaDim { .. } => "delta-dim",
            Command::Decide1 { .. } => "decide1",
            Command::Eval { .. } => "eval",
            Command::WitnessBox { .. } => "witness-box",
        }
    }

    fn run(&self) -> Result<Output, CliError> {
        match self {
            Command::Rewrite { input, p, seed } => commands::rewrite(input, *p, *seed),
            Command::Lie { input } => commands::lie(input),
            Command::Coherence(CoherenceCmd::Check { input, ord, seed }) => commands::coherence_check(input, *ord, *seed),
            Command::Coherence(CoherenceCmd::Solve { input, deg, seed }) => commands::coherence_solve(input, *deg, *seed),
            Command::Singer(SingerCmd::Check { input, seed }) => commands::singer_check(input, *seed),
            Command::Singer(SingerCmd::Solve { input, deg, seed }) => commands::singer_solve(input, *deg, *seed),
            Command::Rank { input, delta, ord } => commands::rank(input, delta.as_deref(), *ord),
            Command::Theta(t) => match t {
                ThetaCmd::Min { input } => commands::theta_min(input),
                ThetaCmd::Cmp { input } => commands::theta_cmp(input),
                ThetaCmd::Join { input } => commands::theta_join(input),
                ThetaCmd::Meet { input } => commands::theta_meet(input),
                ThetaCmd::Pred { input } => commands::theta_pred(input),
                ThetaCmd::Enum { p, ord } => commands::theta_enum(*p, *ord),
            },
            Command::DeltaDim { input } => commands::delta_dim(input),
            Command::Decide1 { input, seed } => commands::decide1(input, *seed),
            Command::Eval { input, at } => commands::eval(input, at),
            Command::WitnessBox { input } => commands::witness_box(input),
        }
    }
}

fn main() -> ExitCode {
    let json_requested = std::env::args().any(|a| a == "--json");
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            if json_requested {
                let err = CliError::input("usage", e.kind().to_string());
                println!("{}", serde_json::to_string_pretty(&err.to_json()).unwrap());
            } else {
                let _ = e.print();
            }
            return ExitCode::from(EXIT_INPUT);
        }
    };
    match cli.command.run() {
        Ok(out) => {
            if cli.json {
                let v = json!({ "ok": true, "command": cli.command.name(), "result": out.result });
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(out.exit)
        }
        Err(err) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&err.to_json()).unwrap());
            } else {
                eprintln!("{}", err.render());
            }
            ExitCode::from(err.exit)
        }
    }
}
