//! `nilgenus`: command-line access to the nilgenus library.
//!
//! Every run produces one report. `--json` prints it as a JSON document, otherwise
//! a short human-readable summary is printed. Exit codes: 0 success, 1 negative
//! verdict of a check, 2 usage or input error, 3 resource cap.

mod commands;
mod report;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nilgenus::Caps;
use report::{Report, Status};

#[derive(Parser, Debug)]
#[command(name = "nilgenus", version, about = "Computations with finitely presented groups")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Omit timing from the report so identical runs print identical bytes.
    #[arg(long, global = true)]
    deterministic: bool,

    /// Worker threads for parallel steps. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(flatten)]
    caps: CapArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CapArgs {
    /// Largest Hirsch length of a nilpotent quotient.
    #[arg(long, global = true, default_value_t = 200)]
    max_hirsch: usize,

    /// Seconds allowed per class of a nilpotent quotient (0 disables).
    #[arg(long, global = true, default_value_t = 60)]
    class_seconds: u64,

    /// Largest coset table during enumeration.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_cosets: usize,

    /// Largest index of a tower step or intersection.
    #[arg(long, global = true, default_value_t = 256)]
    max_index: usize,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            max_hirsch: self.max_hirsch,
            time_per_class: (self.class_seconds > 0).then(|| Duration::from_secs(self.class_seconds)),
            max_cosets: self.max_cosets,
            max_index: self.max_index,
        }
    }
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Abelianization of a presented group.
    Abel { file: String },

    /// Class-c nilpotent quotient G/G_{c+1}.
    Nq {
        #[arg(long)]
        class: u32,
        file: String,
    },

    /// Subgroups of index at most n, up to conjugacy.
    LowIndex {
        #[arg(long)]
        max: usize,
        /// Only normal subgroups.
        #[arg(long)]
        normal: bool,
        file: String,
    },

    /// Presentation of the subgroup generated by comma-separated words.
    Rs {
        #[arg(long)]
        subgroup: String,
        file: String,
    },

    /// Ratios b_1(N)/[G:N] along a tower of normal subgroups.
    L2 {
        #[arg(long, value_enum)]
        tower: TowerKind,
        #[arg(long)]
        depth: usize,
        /// Prime of the congruence tower.
        #[arg(long, default_value_t = 2)]
        prime: u64,
        file: String,
    },

    /// Fibre product of F_r -> Q inside F_r x F_r, optionally with a genus check.
    Fibre {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        q: String,
        /// Run the genus check against F_r x F_r up to this class.
        #[arg(long)]
        class: Option<u32>,
        /// Conjugator length in the relators of the finite cover presentation.
        #[arg(long, default_value_t = 0)]
        depth: usize,
    },

    /// Compare lower central quotients along a homomorphism.
    GenusCheck {
        #[arg(long)]
        class: u32,
        /// `gen=word,...`; without --target the images are imposed as relations.
        #[arg(long)]
        hom: String,
        #[arg(long)]
        target: Option<String>,
        file: String,
    },

    /// Fox matrix and mod-p homology of the presentation complex.
    FoxH2 {
        #[arg(long)]
        p: u64,
        file: String,
    },

    /// Evidence that a group retracting onto a free group is not residually nilpotent.
    Witness {
        /// `gen=word,...` imposed as relations; the quotient must be free.
        #[arg(long)]
        retraction: String,
        #[arg(long)]
        candidate: String,
        #[arg(long, default_value_t = 4)]
        class: u32,
        /// Search subgroups up to this index for a finite quotient moving the candidate.
        #[arg(long, default_value_t = 0)]
        search_index: usize,
        file: String,
    },

    /// Print a named presentation.
    Build { name: String },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum TowerKind {
    PCongruence,
    MOfD,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                // --help and --version
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            if argv.iter().any(|a| a == "--json") {
                let mut r = Report::new(serde_json::Value::Null, vec![], Status::UsageError);
                r.error = Some(e.kind().to_string());
                println!("{}", r.to_json());
            } else {
                eprint!("{e}");
            }
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let outcome = commands::run(&cli.command, &cli.caps.caps(), cli.jobs.max(1));
    let command = serde_json::to_value(&cli.command).expect("command serializes");
    let report = Report {
        result: outcome.result,
        error: outcome.error.clone(),
        ..Report::new(command, outcome.inputs, outcome.status)
    }
    .timed((!cli.deterministic).then(|| start.elapsed()));
    if cli.json {
        println!("{}", report.to_json());
    } else {
        if !outcome.text.is_empty() {
            print!("{}", outcome.text);
        }
        if let Some(e) = &outcome.error {
            eprintln!("error: {e}");
        }
    }
    ExitCode::from(outcome.status.exit_code() as u8)
}
