use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use glab_cli::commands::{analyze, falsify, family, theta};
use glab_cli::germfile::default_truncation;
use glab_cli::{CliResult, GermFile, Outcome};
use glab_core::FamilyId;

/// Exact invariants, Gorenstein tests and dualising differentials of curve
/// singularities.
#[derive(Parser)]
#[command(name = "glab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse the germ described by a JSON file.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Verify random members of a genus-3 family.
    VerifyFamily {
        family: String,
        #[arg(long)]
        branches: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Truncation order (default: GLAB_DEFAULT_K or 12).
        #[arg(long)]
        truncation: Option<usize>,
        /// Worker threads (0: one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
    /// Search for Gorenstein germs with a given gap profile.
    Falsify {
        #[arg(long, value_delimiter = ',', required = true)]
        profile: Vec<usize>,
        #[arg(long)]
        branches: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
    /// Theta-characteristic parity counts for a germ file or family member.
    Theta {
        #[arg(required_unless_present = "family", conflicts_with = "family")]
        file: Option<PathBuf>,
        #[arg(long)]
        family: Option<String>,
        /// Branch count for --family (default: the family's minimum).
        #[arg(long, requires = "family")]
        branches: Option<usize>,
        #[arg(long)]
        g_tilde: Option<u32>,
        #[arg(long)]
        beta: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Recompute the classification table of the seven genus-3 families.
    Table {
        #[arg(long)]
        json: bool,
    },
}

fn dispatch(command: Command) -> CliResult<(Outcome, bool)> {
    Ok(match command {
        Command::Analyze { file, json } => (analyze::run(&GermFile::load(&file)?)?, json),
        Command::VerifyFamily {
            family,
            branches,
            samples,
            seed,
            truncation,
            jobs,
            json,
        } => {
            let id: FamilyId = family.parse()?;
            let k = truncation.map_or_else(default_truncation, Ok)?;
            (
                family::run_verify(id, branches, samples, seed, k, jobs)?,
                json,
            )
        }
        Command::Falsify {
            profile,
            branches,
            samples,
            seed,
            jobs,
            json,
        } => (falsify::run(&profile, branches, samples, seed, jobs)?, json),
        Command::Theta {
            file,
            family,
            branches,
            g_tilde,
            beta,
            json,
        } => {
            let source = match (file, family) {
                (Some(path), _) => theta::ThetaSource::File(GermFile::load(&path)?),
                (None, Some(name)) => {
                    let id: FamilyId = name.parse()?;
                    theta::ThetaSource::Family {
                        id,
                        b: branches.unwrap_or(id.b_min()),
                        k: default_truncation()?,
                    }
                }
                (None, None) => unreachable!("clap requires a file or --family"),
            };
            (theta::run(source, g_tilde, beta)?, json)
        }
        Command::Table { json } => (family::run_table(default_truncation()?)?, json),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok((outcome, json)) => {
            print!("{}", if json { &outcome.json } else { &outcome.text });
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
