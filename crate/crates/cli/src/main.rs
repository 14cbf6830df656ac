//! `routeway`: lint and query `.rwy` documents from the command line.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exit status for a successful query or a lint run without errors.
pub const EXIT_OK: u8 = 0;
/// `lint` found error-severity diagnostics.
pub const EXIT_LINT: u8 = 1;
/// The file could not be read or parsed.
pub const EXIT_PARSE: u8 = 2;
/// The document parsed but the query failed.
pub const EXIT_QUERY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "routeway",
    version,
    about = "Lint and query routeway documents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Document to read.
    file: PathBuf,
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Args)]
struct Pair {
    /// Start waypoint id.
    #[arg(long)]
    from: String,
    /// Destination waypoint id.
    #[arg(long)]
    to: String,
}

#[derive(Subcommand)]
enum Command {
    /// Report defective, reducible and unchained units.
    Lint {
        #[command(flatten)]
        common: Common,
    },
    /// Route distance between two waypoints.
    Dist {
        #[command(flatten)]
        common: Common,
        /// Base field; defaults to the document's first.
        #[arg(long = "in")]
        basefield: Option<String>,
        #[command(flatten)]
        pair: Pair,
    },
    /// A shortest routeway between two waypoints.
    Geodesic {
        #[command(flatten)]
        common: Common,
        /// Base field; defaults to the document's first.
        #[arg(long = "in")]
        basefield: Option<String>,
        #[command(flatten)]
        pair: Pair,
    },
    /// Waypoints on some shortest routeway between two waypoints.
    Interval {
        #[command(flatten)]
        common: Common,
        /// Base field; defaults to the document's first.
        #[arg(long = "in")]
        basefield: Option<String>,
        #[command(flatten)]
        pair: Pair,
    },
    /// Detour cost of passing through a waypoint, with perfect/essential status.
    Excess {
        #[command(flatten)]
        common: Common,
        /// Base field; defaults to the document's first.
        #[arg(long = "in")]
        basefield: Option<String>,
        /// Waypoint to pass through.
        #[arg(long)]
        via: String,
        #[command(flatten)]
        pair: Pair,
    },
    /// Everything reachable from a set of anchors, with anchor distances.
    Closure {
        #[command(flatten)]
        common: Common,
        /// Base field; defaults to the document's first.
        #[arg(long = "in")]
        basefield: Option<String>,
        /// Anchor waypoint ids, comma separated.
        #[arg(long, value_delimiter = ',')]
        anchors: Vec<String>,
    },
    /// Whether one routeway refines another.
    Refines {
        #[command(flatten)]
        common: Common,
        /// The coarser routeway.
        #[arg(long)]
        gamma: String,
        /// The finer routeway.
        #[arg(long)]
        eta: String,
    },
    /// Specialize a parameterized routeway.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Routeway to specialize.
        #[arg(long)]
        template: String,
        /// `param=term` (or `param=:term`), repeatable.
        #[arg(long = "bind")]
        bindings: Vec<String>,
        /// Hypothesis label declared to hold, repeatable.
        #[arg(long)]
        holds: Vec<String>,
        /// Hypothesis label declared to fail, repeatable.
        #[arg(long)]
        fails: Vec<String>,
        /// Declare the specialized conclusion false.
        #[arg(long)]
        instance_invalid: bool,
    },
    /// Which atlas targets some roadmap passes through.
    Coverage {
        #[command(flatten)]
        common: Common,
        /// Atlas id; defaults to the document's first.
        #[arg(long)]
        atlas: Option<String>,
    },
    /// Distances along a sequence of growing base fields.
    Filtration {
        #[command(flatten)]
        common: Common,
        /// Filtration id; defaults to the document's first.
        #[arg(long)]
        filtration: Option<String>,
        /// `FROM:TO` waypoint pair, repeatable; defaults to every ordered pair.
        #[arg(long = "pair")]
        pairs: Vec<String>,
    },
    /// All-pairs distances over the route graph.
    Matrix {
        #[command(flatten)]
        common: Common,
        /// Base field; defaults to the document's first.
        #[arg(long = "in")]
        basefield: Option<String>,
    },
    /// Render the route graph, or one roadmap, as DOT or JSON.
    Export {
        #[command(flatten)]
        common: Common,
        /// Base field; defaults to the document's first.
        #[arg(long = "in")]
        basefield: Option<String>,
        /// Export this roadmap's subgraph instead of the route graph.
        #[arg(long)]
        roadmap: Option<String>,
        /// Anchor waypoint ids, drawn with a distinct shape.
        #[arg(long, value_delimiter = ',')]
        anchors: Vec<String>,
        /// Write DOT to this path instead of standard output.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(commands::run(cli.command))
}
