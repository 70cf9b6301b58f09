//! Singular fibers of a bundled scenario (default `line-conic-1`).
//!
//! cargo run -p mwl-core --example fibers -- eg-3

use mwl_core::{bundled, report};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "line-conic-1".into());
    let scn = bundled::load(&name)?;
    print!("{}", report::fibers(&scn)?.text);
    Ok(())
}
