use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

mod commands;
mod diagram;
mod error;

use error::CliError;

/// Filling permutations and minimally intersecting filling pairs.
#[derive(Debug, Parser)]
#[command(name = "fillperm", version, about)]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GenusArg {
    #[arg(long, short = 'g', value_parser = clap::value_parser!(u32).range(1..))]
    genus: u32,
}

#[derive(Debug, Args)]
struct PermArgs {
    /// Image list `[2,3,4,1]` or cycles `(1 2 3 4)`.
    perm: String,
    #[command(flatten)]
    genus: GenusArg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate the filling permutations of a genus and count their classes.
    Enumerate {
        #[command(flatten)]
        genus: GenusArg,
        /// Print the counts only.
        #[arg(long, conflicts_with_all = ["classes", "limit"])]
        count_only: bool,
        /// List every class with its size and cycle form.
        #[arg(long)]
        classes: bool,
        /// List at most this many classes.
        #[arg(long)]
        limit: Option<usize>,
        /// Worker threads.
        #[arg(long, short = 'j', value_parser = clap::value_parser!(u64).range(1..))]
        jobs: Option<u64>,
        /// Ignore the genus guard.
        #[arg(long)]
        force: bool,
    },
    /// Check whether a permutation is a filling permutation.
    Verify(PermArgs),
    /// Glue the polygon of a filling permutation and report the surface.
    Reconstruct(PermArgs),
    /// Splice a Z-piece at a vertex, raising the genus by two.
    Extend {
        #[command(flatten)]
        perm: PermArgs,
        #[arg(long, short = 'k')]
        vertex: u32,
        /// Directory holding the derived template.
        #[arg(long)]
        template_cache: Option<PathBuf>,
    },
    /// Count the arcs of a gluing pattern bounding a single polygon on both sides.
    T1 { pattern: PathBuf },
    /// Genus of the surface glued from a pattern.
    Genus { pattern: PathBuf },
    /// Root counts and class bounds.
    Bounds(GenusArg),
    /// Hyperbolic lengths for the regular right-angled polygon.
    Hyp(GenusArg),
    /// Draw the identification polygon as SVG.
    Diagram {
        #[command(flatten)]
        perm: PermArgs,
        /// Output file; stdout when absent.
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
}

/// What a subcommand hands back: the payload merged into the report, or raw
/// text written as is.
pub enum Output {
    Report { genus: Option<u32>, params: Value, result: Map<String, Value> },
    Raw(String),
}

/// A completed run. A `failure` still prints the output, then exits 1.
pub struct Outcome {
    pub output: Output,
    pub failure: Option<String>,
}

fn envelope(name: &str, genus: Option<u32>, params: Value, result: Map<String, Value>, timing: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), json!(1));
    out.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    out.insert("command".into(), json!(name));
    out.insert("params".into(), params);
    if let Some(g) = genus {
        out.insert("genus".into(), json!(g));
    }
    out.extend(result);
    out.insert("timing".into(), timing);
    Value::Object(out)
}

fn print_json(v: &Value, pretty: bool) {
    let text = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    println!("{}", text.expect("JSON values serialize"));
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::Enumerate { .. } => "enumerate",
        Command::Verify(_) => "verify",
        Command::Reconstruct(_) => "reconstruct",
        Command::Extend { .. } => "extend",
        Command::T1 { .. } => "t1",
        Command::Genus { .. } => "genus",
        Command::Bounds(_) => "bounds",
        Command::Hyp(_) => "hyp",
        Command::Diagram { .. } => "diagram",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    let start = Instant::now();
    let cmd = name(&cli.command);
    let jobs = match &cli.command {
        Command::Enumerate { jobs, .. } => *jobs,
        _ => None,
    };
    let timing = || json!({ "elapsed_ms": start.elapsed().as_secs_f64() * 1e3, "jobs": jobs });
    let outcome = match commands::run(cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("fillperm {cmd}: {e}");
            return e.exit_code();
        }
    };
    match outcome.output {
        Output::Report { genus, params, result } => {
            print_json(&envelope(cmd, genus, params, result, timing()), cli.pretty)
        }
        Output::Raw(text) => print!("{text}"),
    }
    match outcome.failure {
        Some(msg) => {
            eprintln!("fillperm {cmd}: {msg}");
            CliError::Validation(msg).exit_code()
        }
        None => ExitCode::SUCCESS,
    }
}
