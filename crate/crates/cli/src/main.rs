//! `ifol`: parse, compile, evaluate and check intensional FOL formulas.

mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ifol", version, about = "Intensional first-order logic with abstraction")]
pub struct Cli {
    /// Signature file (`pred p/2`, `const c`, `var w`); symbols outside it are rejected.
    #[arg(long, global = true, value_name = "FILE")]
    pub sig: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One `key=value` record per line.
    Records,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the desugared formula (or term) and its free-variable tuple.
    Parse { text: String },
    /// Compile to a concept and print it with its degree.
    Intension {
        text: String,
        #[command(flatten)]
        worlds: WorldArgs,
    },
    /// Evaluate a formula: its extension, or a truth value under `--assign`.
    Eval {
        formula: String,
        #[command(flatten)]
        worlds: WorldArgs,
        /// Evaluate only in this world of the set.
        #[arg(long = "in", value_name = "WORLD")]
        in_world: Option<String>,
        #[arg(long, value_name = "x=a,y=b")]
        assign: Option<String>,
    },
    /// Compare the algebraic and the Tarski extensions over every (formula, world) pair.
    CheckDiagram {
        #[command(flatten)]
        source: FormulaSource,
        #[command(flatten)]
        worlds: WorldArgs,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Check `h(I(φ/g)) = t` against tuple membership for every assignment.
    CheckConstraint {
        #[command(flatten)]
        source: FormulaSource,
        #[command(flatten)]
        worlds: WorldArgs,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Decide intensional equivalence of two abstraction terms.
    Equiv {
        left: String,
        right: String,
        #[command(flatten)]
        worlds: WorldArgs,
        #[arg(long, value_name = "x=a,y=b")]
        assign: Option<String>,
        #[arg(long, conflicts_with = "weak")]
        strong: bool,
        #[arg(long)]
        weak: bool,
    },
    /// World-set utilities.
    Worlds {
        #[command(subcommand)]
        command: WorldsCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum WorldsCommand {
    /// Print every world over the signature's predicates and a domain.
    Enumerate {
        #[arg(long, value_delimiter = ',', required = true)]
        domain: Vec<String>,
        #[arg(long, value_name = "c=a,d=b")]
        consts: Option<String>,
        #[arg(long, default_value_t = ifol::worlds::DEFAULT_LIMIT)]
        limit: u64,
        /// Print only the number of worlds.
        #[arg(long)]
        count: bool,
    },
}

/// Where the worlds come from: one file, a world-set file, or enumeration.
#[derive(Args, Debug, Clone)]
pub struct WorldArgs {
    #[arg(long, value_name = "FILE", conflicts_with_all = ["worlds", "enumerate"])]
    pub world: Option<PathBuf>,
    #[arg(long, value_name = "FILE", conflicts_with = "enumerate")]
    pub worlds: Option<PathBuf>,
    /// Enumerate all worlds over `--domain` (predicates from `--sig` or the formulas).
    #[arg(long, requires = "domain")]
    pub enumerate: bool,
    #[arg(long, value_delimiter = ',')]
    pub domain: Vec<String>,
    #[arg(long, value_name = "c=a,d=b")]
    pub consts: Option<String>,
    #[arg(long, default_value_t = ifol::worlds::DEFAULT_LIMIT)]
    pub limit: u64,
}

#[derive(Args, Debug, Clone)]
pub struct FormulaSource {
    /// Formula file, one per line, `# ` comments.
    #[arg(long, value_name = "FILE")]
    pub formulas: Option<PathBuf>,
    /// Include the bundled corpus (the default when nothing else is given).
    #[arg(long)]
    pub corpus: bool,
    /// Number of random formulas.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 0.2)]
    pub abs_prob: f64,
    /// Formula given directly.
    #[arg(long = "formula", value_name = "TEXT")]
    pub inline: Vec<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = String::new();
    let code = match commands::run(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    ExitCode::from(code)
}
