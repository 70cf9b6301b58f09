//! Certificate for a candidate Zariski pair: same combinatorics, different
//! divisibility of the marked sections.

use mwl_core::certificate::{envelope, to_canonical_string};
use mwl_core::{bundled, report};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "line-conic-1".into());
    let json = std::env::args().any(|a| a == "--json");
    let scn = bundled::load(&name)?;
    let out = report::certify_pair(&scn, None)?;
    if json {
        print!("{}", to_canonical_string(&envelope(&scn, "certify-pair", out.json)));
    } else {
        print!("{}", out.text);
    }
    Ok(())
}
