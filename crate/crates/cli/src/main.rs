//! `mgs`: mutate exchange matrices, classify green sequences, and certify
//! layered T-systems and path-derived sequences.

mod commands;
mod corpus;
mod error;
mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use mgs_core::FamilyKind;

use commands::{MutateTarget, Output, PathChoice, TsystemSource};
use corpus::GenerateOptions;
use error::{CliError, CliResult};
use report::{dump_repro, RunReport};

#[derive(Parser)]
#[command(name = "mgs", version, about = "Maximal green sequences for layered T-systems")]
struct Cli {
    /// Write a JSON run report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,

    /// Directory for reproduction files written on internal errors.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    repro_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutate a matrix and print the result.
    #[command(group(ArgGroup::new("target").required(true).args(["at", "seq"])))]
    Mutate {
        matrix: PathBuf,
        #[arg(long, value_name = "K")]
        at: Option<String>,
        #[arg(long, value_name = "K1,K2,...")]
        seq: Option<String>,
    },
    /// Classify a mutation sequence on the framed matrix.
    CheckGreen {
        matrix: PathBuf,
        #[arg(long, value_name = "K1,K2,...")]
        seq: String,
    },
    /// Certify layered T-system sequences.
    #[command(group(ArgGroup::new("source").required(true).args(["seq", "enumerate"])))]
    Tsystem {
        matrix: PathBuf,
        eta: PathBuf,
        #[arg(long, value_name = "K1,K2,...")]
        seq: Option<String>,
        /// Certify every full shuffle, up to --limit of them.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = 1000, requires = "enumerate")]
        limit: usize,
    },
    /// List contiguous paths from the identity to the longest element.
    Paths {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
        /// Print reduced words instead of permutations.
        #[arg(long)]
        words: bool,
    },
    /// Certify the sequence of a contiguous path.
    #[command(name = "theorem-a", group(ArgGroup::new("path").required(true).args(["path_index", "word"])))]
    TheoremA {
        eta: PathBuf,
        /// Defaults to the disjoint level chains.
        matrix: Option<PathBuf>,
        /// 0-based index in the lexicographic enumeration.
        #[arg(long)]
        path_index: Option<usize>,
        #[arg(long, value_name = "P1,P2,...")]
        word: Option<String>,
    },
    /// Render a matrix or quiver as Graphviz DOT.
    ExportDot { file: PathBuf, eta: Option<PathBuf> },
    /// Generate or verify an instance corpus.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Subcommand)]
enum CorpusCommand {
    Generate {
        #[arg(long, default_value = "corpus")]
        out: PathBuf,
        #[arg(long, default_value_t = 20_240_601)]
        seed: u64,
        /// Instances per random family, and shuffles per chain layout.
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long = "family", value_enum)]
        families: Vec<FamilyArg>,
    },
    Verify {
        #[arg(default_value = "corpus")]
        dir: PathBuf,
        /// Worker threads; 0 picks one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Write one certificate per instance into this directory.
        #[arg(long, value_name = "DIR")]
        certificates: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    DisjointChains,
    AcyclicFinest,
    RandomLayered,
    PathDerived,
}

impl From<FamilyArg> for FamilyKind {
    fn from(f: FamilyArg) -> FamilyKind {
        match f {
            FamilyArg::DisjointChains => FamilyKind::DisjointChains,
            FamilyArg::AcyclicFinest => FamilyKind::AcyclicFinest,
            FamilyArg::RandomLayered => FamilyKind::RandomLayered,
            FamilyArg::PathDerived => FamilyKind::PathDerived,
        }
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Mutate { .. } => "mutate",
            Command::CheckGreen { .. } => "check-green",
            Command::Tsystem { .. } => "tsystem",
            Command::Paths { .. } => "paths",
            Command::TheoremA { .. } => "theorem-a",
            Command::ExportDot { .. } => "export-dot",
            Command::Corpus(CorpusCommand::Generate { .. }) => "corpus generate",
            Command::Corpus(CorpusCommand::Verify { .. }) => "corpus verify",
        }
    }

    fn run(self) -> CliResult<Output> {
        match self {
            Command::Mutate { matrix, at, seq } => {
                let target = match (at, seq) {
                    (Some(k), _) => MutateTarget::At(k),
                    (None, Some(s)) => MutateTarget::Seq(s),
                    (None, None) => unreachable!("clap requires --at or --seq"),
                };
                commands::mutate(&matrix, &target)
            }
            Command::CheckGreen { matrix, seq } => commands::check_green(&matrix, &seq),
            Command::Tsystem {
                matrix,
                eta,
                seq,
                enumerate,
                limit,
            } => {
                let source = match seq {
                    Some(s) if !enumerate => TsystemSource::Seq(s),
                    _ => TsystemSource::Enumerate { limit },
                };
                commands::tsystem(&matrix, &eta, &source)
            }
            Command::Paths { n, limit, words } => commands::paths(n, limit, words),
            Command::TheoremA {
                eta,
                matrix,
                path_index,
                word,
            } => {
                let choice = match (path_index, word) {
                    (Some(i), _) => PathChoice::Index(i),
                    (None, Some(w)) => PathChoice::Word(w),
                    (None, None) => unreachable!("clap requires --path-index or --word"),
                };
                commands::theorem_a(&eta, &choice, matrix.as_deref())
            }
            Command::ExportDot { file, eta } => commands::export(&file, eta.as_deref()),
            Command::Corpus(CorpusCommand::Generate {
                out,
                seed,
                count,
                max_n,
                families,
            }) => {
                let families = if families.is_empty() {
                    vec![
                        FamilyKind::DisjointChains,
                        FamilyKind::AcyclicFinest,
                        FamilyKind::RandomLayered,
                        FamilyKind::PathDerived,
                    ]
                } else {
                    families.into_iter().map(FamilyKind::from).collect()
                };
                let opts = GenerateOptions {
                    seed,
                    count,
                    max_n,
                    families,
                };
                corpus::generate_corpus(&out, &opts)
            }
            Command::Corpus(CorpusCommand::Verify { dir, jobs, certificates }) => {
                corpus::verify_corpus(&dir, jobs, certificates.as_deref())
            }
        }
    }
}

fn fail(command: &str, repro_dir: &Path, e: &CliError) -> ExitCode {
    eprintln!("mgs {command}: {e}");
    if let CliError::Internal { message, repro } = e {
        match dump_repro(repro_dir, command, message, repro) {
            Ok(p) => eprintln!("reproduction written to {}", p.display()),
            Err(io) => eprintln!("could not write reproduction file: {io}"),
        }
    }
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let name = cli.command.name();
    let start = Instant::now();
    let out = match cli.command.run() {
        Ok(out) => out,
        Err(e) => return fail(name, &cli.repro_dir, &e),
    };
    if !out.text.is_empty() {
        println!("{}", out.text);
    }
    if let Some(path) = &cli.report {
        let report = RunReport::new(name, out.inputs, out.payload, start.elapsed().as_millis());
        if let Err(e) = report.write(path) {
            return fail(name, &cli.repro_dir, &CliError::Parse(format!("{}: {e}", path.display())));
        }
    }
    match &out.failure {
        Some(e) => fail(name, &cli.repro_dir, e),
        None => ExitCode::SUCCESS,
    }
}
