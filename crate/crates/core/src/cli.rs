//! The `mumall` command line: `prove` runs the search on the goals of a
//! problem file, `check` verifies a certificate against one.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::certificate::{deserialize_certificate, serialize_certificate, verify_certificate, CertDocument};
use crate::kernel::RuleConfig;
use crate::problem::{parse_problem_file, problem_hash, ProblemFile};
use crate::search::{prove_with_stats, SearchBudget, SearchOutcome, SearchStats};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mumall", version, about = "Proof search and certificate checking for muMALL with equality")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for proofs of the goals in a problem file.
    Prove(ProveArgs),
    /// Check a certificate against a problem file.
    Check {
        cert: PathBuf,
        file: PathBuf,
    },
}

#[derive(Debug, clap::Args)]
pub struct ProveArgs {
    pub file: PathBuf,
    /// Only prove this goal.
    #[arg(long)]
    pub goal: Option<String>,
    /// Fixed-point unfoldings allowed along a branch.
    #[arg(long, default_value_t = 64)]
    pub budget: usize,
    /// Depth bound on enumerated quantifier witnesses.
    #[arg(long, default_value_t = 3)]
    pub witness_depth: usize,
    #[arg(long)]
    pub enable_init: bool,
    #[arg(long)]
    pub enable_cut: bool,
    /// Directory receiving one `<goal>.muproof` per proved goal.
    #[arg(long, value_name = "PATH")]
    pub emit_cert: Option<PathBuf>,
    /// Wall-clock limit per goal.
    #[arg(long)]
    pub timeout_ms: Option<u64>,
    /// Print a JSON summary instead of text.
    #[arg(long)]
    pub json: bool,
}

/// Parses arguments and runs a command; returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match cli.command {
        Command::Prove(args) => run_prove(&args, out, err),
        Command::Check { cert, file } => run_check(&cert, &file, out, err),
    }
}

fn load_problem(path: &Path, err: &mut dyn Write) -> Option<(Vec<u8>, ProblemFile)> {
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", path.display());
            return None;
        }
    };
    let text = match std::str::from_utf8(&bytes) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "{}: invalid UTF-8 at byte {}", path.display(), e.valid_up_to());
            return None;
        }
    };
    match parse_problem_file(text) {
        Ok(pf) => Some((bytes, pf)),
        Err(e) => {
            let _ = writeln!(err, "{}:{e}", path.display());
            None
        }
    }
}

struct GoalResult {
    outcome: SearchOutcome,
    stats: SearchStats,
    elapsed: Duration,
    cert_path: Option<PathBuf>,
}

pub fn run_prove(args: &ProveArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some((bytes, pf)) = load_problem(&args.file, err) else {
        return EXIT_USAGE;
    };
    let goals: Vec<_> = match &args.goal {
        Some(name) => match pf.goal(name) {
            Some(g) => vec![g],
            None => {
                let _ = writeln!(err, "{}: no goal named `{name}`", args.file.display());
                return EXIT_USAGE;
            }
        },
        None => pf.goals.iter().collect(),
    };
    if let Some(dir) = &args.emit_cert {
        if let Err(e) = std::fs::create_dir_all(dir) {
            let _ = writeln!(err, "{}: {e}", dir.display());
            return EXIT_USAGE;
        }
    }
    let config = RuleConfig {
        allow_cut: args.enable_cut,
        allow_init: args.enable_init,
        witness_depth: args.witness_depth,
        ..RuleConfig::default()
    };
    let budget = SearchBudget {
        max_unfoldings: args.budget,
        witness_depth: args.witness_depth,
        wall_clock_ms: args.timeout_ms,
        ..SearchBudget::default()
    };
    let results: Vec<GoalResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = goals
            .iter()
            .map(|g| {
                let (sig, config, budget) = (&pf.signature, &config, &budget);
                scope.spawn(move || {
                    let start = Instant::now();
                    let (outcome, stats) = prove_with_stats(sig, &g.sequent, budget, config);
                    (outcome, stats, start.elapsed())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                let (outcome, stats, elapsed) = h.join().expect("search thread panicked");
                GoalResult {
                    outcome,
                    stats,
                    elapsed,
                    cert_path: None,
                }
            })
            .collect()
    });
    let hash = problem_hash(&bytes);
    let mut results = results;
    for (g, r) in goals.iter().zip(results.iter_mut()) {
        let (Some(dir), Some(cert)) = (&args.emit_cert, r.outcome.certificate()) else {
            continue;
        };
        let doc = CertDocument::new(&hash, &g.name, &config, &pf.signature, cert);
        let path = dir.join(format!("{}.muproof", g.name));
        if let Err(e) = std::fs::write(&path, serialize_certificate(&doc)) {
            let _ = writeln!(err, "{}: {e}", path.display());
            return EXIT_USAGE;
        }
        r.cert_path = Some(path);
    }
    if args.json {
        let records: Vec<_> = goals
            .iter()
            .zip(&results)
            .map(|(g, r)| {
                json!({
                    "goal": g.name,
                    "outcome": r.outcome.label(),
                    "millis": r.elapsed.as_secs_f64() * 1000.0,
                    "nodes": r.stats.nodes,
                    "inductions": r.stats.inductions,
                    "coinductions": r.stats.coinductions,
                    "certificate_size": r.outcome.certificate().map(|c| c.size()),
                    "certificate": r.cert_path.as_ref().map(|p| p.display().to_string()),
                })
            })
            .collect();
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&records).expect("json"));
    } else {
        for (g, r) in goals.iter().zip(&results) {
            let _ = writeln!(
                out,
                "{}: {} ({:.1} ms, {} nodes)",
                g.name,
                r.outcome.label(),
                r.elapsed.as_secs_f64() * 1000.0,
                r.stats.nodes
            );
        }
    }
    if results.iter().all(|r| r.outcome.is_proved()) {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

pub fn run_check(cert_path: &Path, file: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some((bytes, pf)) = load_problem(file, err) else {
        return EXIT_USAGE;
    };
    let cert_bytes = match std::fs::read(cert_path) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", cert_path.display());
            return EXIT_USAGE;
        }
    };
    let doc = match deserialize_certificate(&cert_bytes) {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", cert_path.display());
            return EXIT_USAGE;
        }
    };
    let Some(goal) = pf.goal(&doc.goal_name) else {
        let _ = writeln!(err, "{}: no goal named `{}`", file.display(), doc.goal_name);
        return EXIT_FAIL;
    };
    match verify_certificate(&cert_bytes, &problem_hash(&bytes), &pf.signature, &goal.sequent) {
        Ok(cert) => {
            let _ = writeln!(out, "{}: OK ({} rules)", doc.goal_name, cert.size());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", cert_path.display());
            EXIT_FAIL
        }
    }
}
