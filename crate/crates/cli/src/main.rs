//! `hypermono`: window analyses of digraphs, self-embeddings and monoids.
//!
//! JSON report on stdout, summary and structured error lines on stderr.
//! Exit status: 0 success, 1 analysis negative, 2 input error.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hypermono::exec::Workers;

use report::{Failure, Report};

#[derive(Parser, Debug)]
#[command(name = "hypermono", version, about = "Finite-window evidence for hyperbolic digraphs and monoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct WindowArgs {
    /// Base vertex; defaults to the file's root line.
    #[arg(long)]
    pub root: Option<String>,
    /// Ball radius for the δ estimate and elliptic checks.
    #[arg(long, default_value_t = 6)]
    pub radius: u32,
    /// Geodesics enumerated per endpoint pair.
    #[arg(long, default_value_t = 64)]
    pub cap: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// δ̂, φ̂ table and derived constants of a digraph window.
    Analyze {
        digraph: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Cayley ball, growth table and cancellativity of a presented monoid.
    Cayley {
        presentation: PathBuf,
        #[arg(long)]
        radius: u32,
        /// Write the growth table as `t,count` CSV.
        #[arg(long)]
        growth_csv: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        max_rules: usize,
        #[arg(long, default_value_t = 32)]
        max_len: usize,
        /// Use the rules even if completion did not finish.
        #[arg(long)]
        assume_confluent: bool,
        /// Write the ball (`ball.dg`) and left multiplications (`left_<gen>.map`) here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Certificates, direction and orbit evidence for one self-embedding.
    Classify {
        digraph: PathBuf,
        map: PathBuf,
        #[arg(long, default_value_t = 20)]
        max_power: u32,
        /// Direction prefix length.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Orbit points sampled for the direction.
        #[arg(long, default_value_t = 8)]
        samples: u32,
        /// Equivalence bound; defaults to 12·δ̂.
        #[arg(long = "M")]
        m: Option<u32>,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Ping-pong certificate for two self-embeddings, with a word oracle.
    Pingpong {
        digraph: PathBuf,
        map1: PathBuf,
        map2: PathBuf,
        /// Search powers on attractor sets (default mode).
        #[arg(long, conflicts_with = "check")]
        search: bool,
        /// Check the given sets, JSON arrays of vertex ids.
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        check: Option<Vec<PathBuf>>,
        /// Compare all words up to this length on the probe vertices.
        #[arg(long)]
        oracle: Option<usize>,
        /// Probe vertices for the oracle; defaults to the base vertex.
        #[arg(long)]
        probe: Vec<String>,
        #[arg(long, default_value_t = 20)]
        max_power: u32,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        samples: u32,
        /// Index of the direction vertex seeding each attractor.
        #[arg(long, default_value_t = 1)]
        anchor: usize,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Order, equivalence, tail containment and ρ̂ for two ray prefixes.
    Rays {
        digraph: PathBuf,
        ray1: PathBuf,
        ray2: PathBuf,
        /// Distance bound; defaults to 12·δ̂.
        #[arg(long = "M")]
        m: Option<u32>,
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// First index of the tails used for ρ̂.
        #[arg(long, default_value_t = 0)]
        tail_from: usize,
        /// Visual parameter `a` and constant `C` for the metric sandwich.
        #[arg(long, num_args = 2, value_names = ["A", "C"])]
        visual: Option<Vec<f64>>,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Emit a fixture: digraph, map and ray files.
    Gallery {
        /// Fixture name; omit with --list.
        name: Option<String>,
        /// `key=value`; `I=1,4,9` sets the index set of ex_directions.
        #[arg(long = "param")]
        params: Vec<String>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Print the catalog and exit.
        #[arg(long)]
        list: bool,
    },
}

fn run(cli: Cli, echo: Vec<String>) -> Result<Report, Failure> {
    let mut report = Report::new(echo);
    match cli.command {
        Command::Analyze { digraph, window } => commands::analyze(&mut report, &digraph, &window)?,
        Command::Cayley {
            presentation,
            radius,
            growth_csv,
            max_rules,
            max_len,
            assume_confluent,
            emit,
        } => commands::cayley(
            &mut report,
            &commands::CayleyArgs {
                presentation,
                radius,
                growth_csv,
                max_rules,
                max_len,
                assume_confluent,
                emit,
            },
        )?,
        Command::Classify {
            digraph,
            map,
            max_power,
            depth,
            samples,
            m,
            k,
            window,
        } => commands::classify(
            &mut report,
            &commands::ClassifyArgs {
                digraph,
                map,
                max_power,
                depth,
                samples,
                m,
                k,
                window,
            },
        )?,
        Command::Pingpong {
            digraph,
            map1,
            map2,
            search: _,
            check,
            oracle,
            probe,
            max_power,
            depth,
            samples,
            anchor,
            window,
        } => commands::pingpong(
            &mut report,
            &commands::PingpongArgs {
                digraph,
                map1,
                map2,
                check,
                oracle,
                probe,
                max_power,
                depth,
                samples,
                anchor,
                window,
            },
        )?,
        Command::Rays {
            digraph,
            ray1,
            ray2,
            m,
            k,
            tail_from,
            visual,
            window,
        } => commands::rays(
            &mut report,
            &commands::RaysArgs {
                digraph,
                ray1,
                ray2,
                m,
                k,
                tail_from,
                visual,
                window,
            },
        )?,
        Command::Gallery { name, params, out, list } => commands::gallery(&mut report, name.as_deref(), &params, &out, list)?,
    }
    Ok(report)
}

fn main() -> ExitCode {
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", Failure::input(e.to_string().trim_end()).line());
            return ExitCode::from(2);
        }
    };
    match Workers::from_env().install(move || run(cli, echo)) {
        Ok(report) => {
            // A closed stdout (e.g. piped into `head`) is not an error.
            let _ = writeln!(std::io::stdout(), "{}", report.to_json());
            for line in report.summary() {
                eprintln!("{line}");
            }
            if report.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("{}", f.line());
            ExitCode::from(2)
        }
    }
}
