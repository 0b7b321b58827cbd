use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use groupeq::cli::{
    cmd_check, cmd_corpus_list, cmd_corpus_show, cmd_lift, cmd_solve, load_input, render_text, CheckOptions,
    CliError, LiftOptions, Report, SolveCommandOptions, CORPUS, EXIT_ERROR,
};
use groupeq::unitary::SolveOptions;

#[derive(Parser)]
#[command(name = "groupeq", version, about = "Solvability certificates and unitary witnesses for group equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the presentation obtained by deleting constants.
    Check {
        file: PathBuf,
        #[arg(long, env = "GROUPEQ_MAX_INDEX", default_value_t = 5)]
        max_index: usize,
        #[arg(long, env = "GROUPEQ_COSET_BUDGET", default_value_t = 2_000_000)]
        coset_budget: usize,
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        json: bool,
    },
    /// Solve numerically in U(m).
    Solve {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        json: bool,
    },
    /// Lift the system along the covering given by a subgroup.
    Lift {
        file: PathBuf,
        /// Subgroup generators separated by `;`, e.g. "x x; y x'"
        #[arg(long, default_value = "")]
        subgroup: String,
        #[arg(long, default_value_t = 1000)]
        max_cosets: usize,
        /// Solve the lifted system and verify it in the wreath product.
        #[arg(long)]
        solve: bool,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        json: bool,
    },
    /// List the built-in examples, print one, or write them all to a directory.
    Corpus {
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolverArgs {
    /// Matrix dimension (defaults to that of the constant values)
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = 5000)]
    max_iter: usize,
}

impl SolverArgs {
    fn options(&self) -> SolveCommandOptions {
        SolveCommandOptions {
            m: self.m,
            solver: SolveOptions { seed: self.seed, restarts: self.restarts, max_iter: self.max_iter, tol: self.tol },
        }
    }
}

fn emit(report: &Report, json: bool) -> ExitCode {
    let text = if json {
        serde_json::to_string_pretty(report).expect("reports serialize") + "\n"
    } else {
        render_text(report)
    };
    // a closed pipe is not an error worth reporting
    let _ = std::io::stdout().write_all(text.as_bytes());
    ExitCode::from(report.exit_code as u8)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Check { file, max_index, coset_budget, reduce, json } => {
            let input = load_input(&file, reduce)?;
            Ok(emit(&cmd_check(&input, &CheckOptions { max_index, coset_budget }), json))
        }
        Command::Solve { file, solver, reduce, json } => {
            let input = load_input(&file, reduce)?;
            Ok(emit(&cmd_solve(&input, &solver.options())?, json))
        }
        Command::Lift { file, subgroup, max_cosets, solve, solver, reduce, json } => {
            let input = load_input(&file, reduce)?;
            let opts = LiftOptions { subgroup, max_cosets, solve: solve.then(|| solver.options()) };
            Ok(emit(&cmd_lift(&input, &opts)?, json))
        }
        Command::Corpus { name: None, out: None } => {
            print!("{}", cmd_corpus_list());
            Ok(ExitCode::SUCCESS)
        }
        Command::Corpus { name, out } => {
            let entries: Vec<_> = match &name {
                Some(n) => vec![(n.as_str(), cmd_corpus_show(n)?)],
                None => CORPUS.iter().map(|e| (e.name, e.text)).collect(),
            };
            match out {
                None => entries.iter().for_each(|(_, text)| print!("{text}")),
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
                    for (n, text) in entries {
                        let path = dir.join(format!("{n}.txt"));
                        std::fs::write(&path, text).map_err(|source| CliError::Io { path: path.clone(), source })?;
                        println!("{}", path.display());
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
