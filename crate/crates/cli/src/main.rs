//! `mwl`: runs scenario queries and replays the bundled examples.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mwl_core::certificate::{envelope, to_canonical_string};
use mwl_core::{bundled, golden, run_query, CoreError, Overrides, Query, Scenario};
use rayon::prelude::*;
use serde_json::{json, Value};

const EXIT_GOLDEN_MISMATCH: u8 = 1;

#[derive(Parser)]
#[command(name = "mwl", version, about = "Mordell-Weil lattices of elliptic surfaces and Zariski-pair certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Singular fibers, Euler numbers and torsion.
    Fibers(Common),
    /// Height reports and the Gram matrix.
    Height(Common),
    /// Doubles of sections and their tangent conics.
    Dup(Common),
    /// Divisibility of a combination of sections by a prime.
    Divide(Common),
    /// Zariski-pair certificate for the scenario's [pair] table.
    CertifyPair(Common),
    /// Compares every bundled scenario, or the given one, with its golden values.
    VerifyExamples(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Sections to use instead of the scenario's queries (repeatable).
    #[arg(long = "section")]
    sections: Vec<String>,
    /// Odd prime for divide and certify-pair (repeatable).
    #[arg(long = "prime", conflicts_with = "all_primes")]
    primes: Vec<u64>,
    /// Decide divisibility for every odd prime at once.
    #[arg(long)]
    all_primes: bool,
    /// Write the output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Failure {
    Core(CoreError),
    Io(String),
    Golden(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Core(e)
    }
}

fn load(path: &Path) -> Result<Scenario, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(Scenario::parse(&text)?)
}

/// The queries a subcommand runs: the scenario's own queries of that kind,
/// or one built from `--section` when given.
fn queries_for(kind: &str, scn: &Scenario, c: &Common) -> Result<Vec<Query>, Failure> {
    let adhoc = match kind {
        _ if c.sections.is_empty() => None,
        "height" => Some(vec![Query::Height { sections: c.sections.clone() }]),
        "dup" => Some(c.sections.iter().map(|s| Query::Dup { section: s.clone() }).collect()),
        "divide" => Some(vec![Query::Divide { sections: c.sections.clone(), primes: Vec::new(), all_primes: false }]),
        _ => return Err(Failure::Core(CoreError::Scenario(format!("{kind} takes no --section")))),
    };
    if let Some(q) = adhoc {
        return Ok(q);
    }
    let own: Vec<Query> = scn.file.queries.iter().filter(|q| q.kind() == kind).cloned().collect();
    if !own.is_empty() {
        return Ok(own);
    }
    match kind {
        "fibers" => Ok(vec![Query::Fibers]),
        "certify-pair" => Ok(vec![Query::CertifyPair]),
        _ => Err(Failure::Core(CoreError::Scenario(format!(
            "the scenario has no {kind} query; pass --section"
        )))),
    }
}

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool")
}

fn run_command(kind: &str, c: &Common) -> Result<String, Failure> {
    let path = c.scenario.as_ref().ok_or_else(|| Failure::Io("--scenario is required".into()))?;
    let scn = load(path)?;
    let queries = queries_for(kind, &scn, c)?;
    let ov = Overrides { primes: (!c.primes.is_empty()).then(|| c.primes.clone()), all_primes: c.all_primes };
    let results: Vec<_> = pool(c.jobs).install(|| queries.par_iter().map(|q| run_query(&scn, q, &ov)).collect());
    let outcomes = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(match c.format {
        Format::Json => {
            let results: Vec<Value> = outcomes.iter().map(|o| o.json.clone()).collect();
            to_canonical_string(&envelope(&scn, kind, Value::from(results)))
        }
        Format::Text => {
            let mut s = format!("scenario {} (sha256 {})\n", scn.name(), scn.hash);
            for o in &outcomes {
                s.push('\n');
                s.push_str(&o.text);
            }
            s
        }
    })
}

fn verify_examples(c: &Common) -> Result<String, Failure> {
    let texts: Vec<(String, String)> = match &c.scenario {
        Some(p) => vec![(
            p.display().to_string(),
            std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?,
        )],
        None => bundled::BUNDLED.iter().map(|(f, t)| (f.to_string(), t.to_string())).collect(),
    };
    let reports: Vec<Result<(String, Vec<golden::GoldenCheck>), Failure>> = pool(c.jobs).install(|| {
        texts
            .par_iter()
            .map(|(file, text)| {
                let scn = Scenario::parse(text).map_err(|e| Failure::Io(format!("{file}: {e}")))?;
                Ok((scn.name().to_string(), golden::verify(&scn)))
            })
            .collect()
    });
    let mut out_json = Vec::new();
    let mut text = String::new();
    let mut failures = Vec::new();
    for r in reports {
        let (name, checks) = r?;
        text.push_str(&format!("{name}\n"));
        for ch in &checks {
            let tag = match (ch.passed, ch.informational) {
                (true, _) => "ok",
                (false, true) => "info",
                (false, false) => "FAIL",
            };
            text.push_str(&format!("  [{tag}] {}: {}\n", ch.name, ch.detail));
            if ch.fails_run() {
                failures.push(format!("{name}: {}", ch.name));
            }
        }
        out_json.push(json!({
            "scenario": name,
            "passed": checks.iter().all(|c| !c.fails_run()),
            "checks": checks.iter().map(|c| json!({
                "name": c.name, "passed": c.passed, "informational": c.informational, "detail": c.detail,
            })).collect::<Vec<_>>(),
        }));
    }
    let body = match c.format {
        Format::Json => to_canonical_string(&json!({ "scenarios": out_json, "failures": failures })),
        Format::Text => {
            if failures.is_empty() {
                text.push_str("all golden values match\n");
            } else {
                text.push_str(&format!("{} golden mismatches:\n", failures.len()));
                for f in &failures {
                    text.push_str(&format!("  {f}\n"));
                }
            }
            text
        }
    };
    emit(&body, c.out.as_deref())?;
    if failures.is_empty() {
        Ok(String::new())
    } else {
        Err(Failure::Golden(failures.join("; ")))
    }
}

fn emit(body: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, body).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common) = match &cli.command {
        Command::Fibers(c) => ("fibers", c),
        Command::Height(c) => ("height", c),
        Command::Dup(c) => ("dup", c),
        Command::Divide(c) => ("divide", c),
        Command::CertifyPair(c) => ("certify-pair", c),
        Command::VerifyExamples(c) => ("verify-examples", c),
    };
    let result = if kind == "verify-examples" {
        verify_examples(common)
    } else {
        run_command(kind, common).and_then(|body| emit(&body, common.out.as_deref()).map(|_| body))
    };
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(Failure::Golden(msg)) => {
            eprintln!("mwl: golden mismatch: {msg}");
            ExitCode::from(EXIT_GOLDEN_MISMATCH)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("mwl: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("mwl: {e}");
            ExitCode::from(e.class().exit_code() as u8)
        }
    }
}
