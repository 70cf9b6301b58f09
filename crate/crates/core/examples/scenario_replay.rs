//! Runs every query of a scenario file and compares it with its golden
//! values. Without an argument, replays all bundled scenarios.
//!
//! cargo run -p mwl-core --example scenario_replay -- path/to/scenario.toml

use mwl_core::{bundled, golden, run_query, Overrides, Scenario};

fn replay(scn: &Scenario) -> Result<bool, Box<dyn std::error::Error>> {
    println!("== {} (sha256 {})", scn.name(), scn.hash);
    for q in &scn.file.queries {
        let out = run_query(scn, q, &Overrides::default())?;
        println!("-- {}", q.kind());
        print!("{}", out.text);
    }
    let mut ok = true;
    for c in golden::verify(scn) {
        let tag = if c.passed { "ok" } else if c.informational { "info" } else { "FAIL" };
        println!("[{tag}] {}: {}", c.name, c.detail);
        ok &= !c.fails_run();
    }
    Ok(ok)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenarios = match std::env::args().nth(1) {
        Some(path) => vec![Scenario::parse(&std::fs::read_to_string(path)?)?],
        None => bundled::BUNDLED.iter().map(|(f, _)| bundled::load(f)).collect::<Result<_, _>>()?,
    };
    let mut ok = true;
    for scn in &scenarios {
        ok &= replay(scn)?;
    }
    if !ok {
        std::process::exit(1);
    }
    Ok(())
}
