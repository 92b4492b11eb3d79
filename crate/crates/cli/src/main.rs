use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use revpi::verification::{
    check_bisim, check_bs_correspondence, check_causal_consistency, check_loop_lemma, check_square_lemma,
    CheckReport, Corpus, KeyPolicy,
};
use revpi::{parse_process, Direction, Engine, KeySupply, SemanticsKind};
use revpi_cli::script::{parse_script, run_script, ScriptError};
use revpi_cli::session::StepError;
use revpi_cli::state::{enabled, next_key, views, StateFile};
use serde_json::json;

#[derive(Parser)]
#[command(name = "revpi", version, about = "Reversible pi-calculus workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Fwd,
    Bwd,
}

impl From<Dir> for Direction {
    fn from(d: Dir) -> Self {
        match d {
            Dir::Fwd => Direction::Forward,
            Dir::Bwd => Direction::Backward,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Loop,
    Square,
    Consistency,
    Bisim,
    BsCorr,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a process and print its JSON encoding (`-` reads stdin).
    Parse { file: PathBuf },
    /// List enabled transitions as JSON.
    Steps {
        #[arg(long, default_value = "rpi")]
        semantics: SemanticsKind,
        /// Process source (lifted under --semantics) or a JSON state from `step`.
        #[arg(long)]
        state: PathBuf,
        /// Omit to list both directions, forward first.
        #[arg(long, value_enum)]
        dir: Option<Dir>,
    },
    /// Apply the N-th transition of the `steps` listing and print the new state.
    Step {
        #[arg(long, default_value = "rpi")]
        semantics: SemanticsKind,
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum)]
        dir: Option<Dir>,
        #[arg(long)]
        id: usize,
    },
    /// Run a batch script of steps.
    Trace {
        #[arg(long)]
        script: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Bounded metatheory check; JSON reports on stdout, summaries on stderr.
    Check {
        #[arg(value_enum)]
        property: Property,
        /// Directory of `.pi` files; the built-in corpus if omitted.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Restrict to one semantics (bs-corr always uses bs).
        #[arg(long)]
        semantics: Option<SemanticsKind>,
        /// Consistency only: forward steps may use any fresh key up to this
        /// bound (defaults to the depth).
        #[arg(long)]
        keys: Option<u32>,
    },
    /// Serve the HTTP session API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
    },
}

/// Failure with a specific exit status.
struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(1, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        return Ok(std::io::read_to_string(std::io::stdin())?);
    }
    std::fs::read_to_string(path).map_err(|e| Failure(1, format!("{}: {e}", path.display())))
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn check(
    property: Property,
    corpus: Option<&Path>,
    depth: usize,
    semantics: Option<SemanticsKind>,
    keys: Option<u32>,
) -> Result<bool, Failure> {
    let corpus = match corpus {
        Some(dir) => Corpus::load_dir(dir)?,
        None => Corpus::builtin(),
    };
    let kinds: Vec<SemanticsKind> = match (property, semantics) {
        (Property::BsCorr, _) => vec![SemanticsKind::Bs],
        (_, Some(k)) => vec![k],
        (_, None) => SemanticsKind::ALL.to_vec(),
    };
    let pool = KeyPolicy::Pool(keys.unwrap_or(u32::try_from(depth).unwrap_or(u32::MAX)));
    let reports: Vec<CheckReport> = kinds
        .into_iter()
        .map(|k| {
            let e = Engine::new(k);
            match property {
                Property::Loop => check_loop_lemma(&corpus, &e, depth),
                Property::Square => check_square_lemma(&corpus, &e, depth),
                Property::Consistency => check_causal_consistency(&corpus, &e, depth, pool),
                Property::Bisim => check_bisim(&corpus, &e, depth),
                Property::BsCorr => check_bs_correspondence(&corpus, depth),
            }
        })
        .collect();
    for r in &reports {
        eprintln!("{}", r.summary());
    }
    print_json(&reports);
    Ok(reports.iter().all(CheckReport::passed))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Parse { file } => {
            let p = parse_process(&read(&file)?)?;
            print_json(&json!({ "process": p, "text": p.to_string() }));
        }
        Command::Steps { semantics, state, dir } => {
            let s = StateFile::load(&read(&state)?, semantics)?;
            let ts = enabled(s.semantics, &s.state, dir.map(Into::into), KeySupply::Fixed(next_key(&s.state)));
            print_json(&views(&ts));
        }
        Command::Step {
            semantics,
            state,
            dir,
            id,
        } => {
            let s = StateFile::load(&read(&state)?, semantics)?;
            let mut ts = enabled(s.semantics, &s.state, dir.map(Into::into), KeySupply::Fixed(next_key(&s.state)));
            if id >= ts.len() {
                let err = StepError::OutOfRange {
                    dir: dir.map_or("enabled", |d| Direction::from(d).as_str()),
                    index: id,
                    available: ts.len(),
                };
                return Err(Failure(2, err.to_string()));
            }
            let t = ts.swap_remove(id);
            eprintln!("{} {}", t.dir.as_str(), t.label);
            print_json(&StateFile {
                semantics: s.semantics,
                state: t.target,
            });
        }
        Command::Trace { script, json } => {
            let lines = parse_script(&read(&script)?)?;
            let (session, trace) = run_script(&lines).map_err(|e| match e {
                ScriptError::Step {
                    source: StepError::OutOfRange { .. },
                    ..
                } => Failure(2, e.to_string()),
                e => Failure(1, e.to_string()),
            })?;
            if json {
                print_json(&json!({
                    "semantics": session.semantics,
                    "trace": session.trace,
                    "state": session.current,
                    "text": session.current.to_string(),
                }));
            } else {
                println!("{} [{}]", session.initial, session.semantics);
                for t in &trace {
                    println!("{:>4}  {} {}\n      {}", t.line, t.dir.as_str(), t.label, t.state);
                }
            }
        }
        Command::Check {
            property,
            corpus,
            depth,
            semantics,
            keys,
        } => {
            if !check(property, corpus.as_deref(), depth, semantics, keys)? {
                return Err(Failure(1, "check failed".into()));
            }
        }
        Command::Serve { port, host } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let addr = SocketAddr::new(host, port);
                let listener = tokio::net::TcpListener::bind(addr).await?;
                tracing::info!(%addr, "listening");
                eprintln!("serving on http://{}", listener.local_addr()?);
                let app = revpi_cli::api::router(Arc::new(Default::default()));
                axum::serve(listener, app).await
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_env("RPI_LOG")
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("warn")),
        )
        .with_writer(std::io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
