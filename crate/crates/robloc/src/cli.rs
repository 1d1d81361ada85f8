//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use robloc_core::Budget;

use crate::commands::{self, Direction, Format, RunConfig};
use crate::{io, Error, EXIT_INVALID, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "robloc", version, about = "Solve and translate strategies for the robber locating game")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Localization number, subdivision number and capture times.
    Params(Common),
    /// Build a cop strategy graph and print it as DOT, JSON or a summary.
    StrategyGraph(StrategyGraphArgs),
    /// Run a strategy translation between the cop game and a subdivision game.
    Translate(TranslateArgs),
    /// Play a strategy against a scripted or adversarial robber.
    Simulate(SimulateArgs),
    /// Check the library against brute-force distance oracles.
    Verify(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Graph file: {"vertices": [...], "edges": [[u, v], ...]}.
    #[arg(long)]
    graph: PathBuf,
    /// Number of cops; for `params` and `verify` an upper search bound.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    cops: Option<u32>,
    /// Subdivision parameter.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    m: Option<u32>,
    /// Stride length of the subdivision game being translated.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    eta: Option<u32>,
    /// Cap on distinct robber sets explored by the solver.
    #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Cap on rounds for the solver and for simulated plays.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    max_rounds: u32,
    /// Depth cap when expanding strategy graphs.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    depth: u32,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write the output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,
}

#[derive(Debug, Args)]
struct StrategyGraphArgs {
    #[command(flatten)]
    common: Common,
    /// Strategy table file instead of solving.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Report the repeated state instead of failing on a losing strategy.
    #[arg(long)]
    allow_divergent: bool,
    /// Also write the strategy table used.
    #[arg(long)]
    save_table: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TranslateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    direction: DirectionArg,
    /// Strategy table file for the cop game on the input graph.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Scripted robber walk, comma separated.
    #[arg(long, value_delimiter = ',')]
    walk: Option<Vec<String>>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    table: Option<PathBuf>,
    /// Scripted robber walk, comma separated; adversarial when absent.
    #[arg(long, value_delimiter = ',')]
    walk: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    CopToSubs,
    SubsToCop,
}

/// What the process prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Run {
    fn failed(e: &Error) -> Run {
        Run { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() }
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn config(c: &Common, default: Format) -> Result<RunConfig, Error> {
    let graph = io::parse_graph(&read(&c.graph)?).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", c.graph.display())),
        Error::Invalid(m) => Error::Invalid(format!("{}: {m}", c.graph.display())),
        other => other,
    })?;
    let mut cfg = RunConfig::new(graph);
    cfg.cops = c.cops.map(|k| k as usize);
    cfg.m = c.m;
    cfg.eta = c.eta;
    cfg.budget = Budget { max_states: usize::try_from(c.budget).unwrap_or(usize::MAX), max_rounds: c.max_rounds };
    cfg.max_rounds = c.max_rounds;
    cfg.depth = c.depth;
    cfg.threads = c.threads as usize;
    cfg.format = match c.format {
        None => default,
        Some(FormatArg::Text) => Format::Text,
        Some(FormatArg::Json) => Format::Json,
        Some(FormatArg::Dot) => Format::Dot,
    };
    Ok(cfg)
}

fn dispatch(command: Command) -> Result<(commands::Output, Option<PathBuf>), Error> {
    let (out, path) = match command {
        Command::Params(c) => (commands::params(&config(&c, Format::Text)?)?, c.out),
        Command::Verify(c) => (commands::verify(&config(&c, Format::Text)?)?, c.out),
        Command::StrategyGraph(a) => {
            let mut cfg = config(&a.common, Format::Dot)?;
            cfg.table = a.table.as_ref().map(read).transpose()?;
            cfg.allow_divergent = a.allow_divergent;
            let (out, table) = commands::strategy_graph(&cfg)?;
            if let Some(path) = &a.save_table {
                std::fs::write(path, table)?;
            }
            (out, a.common.out)
        }
        Command::Translate(a) => {
            let mut cfg = config(&a.common, Format::Text)?;
            cfg.table = a.table.as_ref().map(read).transpose()?;
            cfg.walk = a.walk;
            let direction = match a.direction {
                DirectionArg::CopToSubs => Direction::CopToSubs,
                DirectionArg::SubsToCop => Direction::SubsToCop,
            };
            (commands::translate(&cfg, direction)?, a.common.out)
        }
        Command::Simulate(a) => {
            let mut cfg = config(&a.common, Format::Text)?;
            cfg.table = a.table.as_ref().map(read).transpose()?;
            cfg.walk = a.walk;
            (commands::simulate(&cfg)?, a.common.out)
        }
    };
    Ok((out, path))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Run { stdout: String::new(), stderr: text, code }
            } else {
                Run { stdout: text, stderr: String::new(), code }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((out, None)) => Run { stdout: out.body, stderr: String::new(), code: out.code },
        Ok((out, Some(path))) => match std::fs::write(&path, &out.body) {
            Ok(()) => Run { stdout: String::new(), stderr: String::new(), code: out.code },
            Err(e) => Run::failed(&Error::Io(e)),
        },
        Err(e) => Run::failed(&e),
    }
}
