use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mdfy::analysis::{is_pure, unchanged_var, LocalsSet};
use mdfy::gen::{count_stmts, enum_stmts, CorpusSpec, Mutant};
use mdfy::passes::eliminate_mul_zero;
use mdfy::verify::{self, InstanceName, VerifyOptions};
use mdfy::{interp_stmt, parse, pretty_print, Context, EvalError, Stmt, VarName};
use thiserror::Error;

const THREADS_ENV: &str = "MDFY_THREADS";

#[derive(Debug, Parser)]
#[command(name = "mdfy", version, about = "Run, analyse, optimise and verify mdfy programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Interpret a program and print its outcome.
    Run {
        file: PathBuf,
        /// Initial context as a JSON object of integers, e.g. '{"x": 1}'.
        #[arg(long, default_value = "{}")]
        ctx: String,
    },
    /// Run a syntactic analysis and print `true` or `false`.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        analysis: Analysis,
        /// Comma-separated locals for the purity check.
        #[arg(long, value_delimiter = ',')]
        locals: Vec<VarName>,
        /// Watched variable for the unchanged check.
        #[arg(long = "var")]
        watched: Option<VarName>,
    },
    /// Print the program after removing multiplications by zero.
    Opt { file: PathBuf },
    /// Check every inductive case of a proof instance over a finite corpus.
    Verify {
        #[arg(long)]
        instance: InstanceName,
        /// Statement depth (or maximum list length for list-assoc).
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        mutant: Option<Mutant>,
        /// Adds seeded random statements to the corpus.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the corpus statements of a given depth, or count them.
    Enumerate {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        count: bool,
        /// Stop after this many statements.
        #[arg(long)]
        budget: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Analysis {
    Pure,
    Unchanged,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: mdfy::ParseError },
    #[error("invalid --ctx: {0}")]
    Ctx(serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

/// What a command decided, before it becomes a process exit code.
enum Verdict {
    Pass,
    Fail,
}

fn read_program(path: &Path) -> Result<Stmt, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn emit(out: &mut impl Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn execute(command: Command) -> Result<Verdict, CliError> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let verdict = match command {
        Command::Run { file, ctx } => {
            let program = read_program(&file)?;
            let ctx = Context::from_json(&ctx).map_err(CliError::Ctx)?;
            match interp_stmt(&program, &ctx) {
                Ok(done) => {
                    emit(&mut out, &format!("Success value={} ctx={}\n", done.value, done.ctx))?;
                    Verdict::Pass
                }
                Err(EvalError::UndefinedVariable(name)) => {
                    emit(&mut out, &format!("Failure undefined variable: {name}\n"))?;
                    Verdict::Fail
                }
            }
        }
        Command::Check {
            file,
            analysis,
            locals,
            watched,
        } => {
            let program = read_program(&file)?;
            let holds = match analysis {
                Analysis::Pure => is_pure(&program, &locals.into_iter().collect::<LocalsSet>()),
                Analysis::Unchanged => {
                    let watched =
                        watched.ok_or_else(|| CliError::Usage("--analysis unchanged requires --var NAME".into()))?;
                    unchanged_var(&program, &watched)
                }
            };
            emit(&mut out, &format!("{holds}\n"))?;
            if holds {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        Command::Opt { file } => {
            let program = read_program(&file)?;
            emit(&mut out, &format!("{}\n", pretty_print(&eliminate_mul_zero(&program))))?;
            Verdict::Pass
        }
        Command::Verify {
            instance,
            depth,
            mutant,
            seed,
            format,
            out: out_path,
        } => {
            let opts = VerifyOptions {
                instance,
                depth,
                mutant,
                seed,
                threads: threads_from_env()?,
                budget: None,
            };
            let report = verify::run(&opts);
            let rendered = match format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json() + "\n",
            };
            match out_path {
                Some(path) => fs::write(&path, rendered).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?,
                None => emit(&mut out, &rendered)?,
            }
            if report.ok {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
        Command::Enumerate { depth, count, budget } => {
            let mut spec = CorpusSpec::standard().with_depth(depth).unbounded();
            spec.budget = budget;
            if count {
                let n = count_stmts(&spec)
                    .ok_or_else(|| CliError::Usage(format!("statement count at depth {depth} overflows")))?;
                emit(&mut out, &format!("{n}\n"))?;
            } else {
                for s in enum_stmts(&spec) {
                    emit(&mut out, &pretty_print(&s))?;
                    emit(&mut out, "\n")?;
                }
            }
            Verdict::Pass
        }
    };
    out.flush().map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })?;
    Ok(verdict)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match execute(cli.command) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(CliError::Io { source, .. }) if source.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
