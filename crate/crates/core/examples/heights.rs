//! Height pairing with per-fiber contributions, and a Gram matrix.

use mwl_algebra::{linalg, rational_to_string};
use mwl_core::bundled;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scn = bundled::load("line-conic-2a")?;
    let labels = ["sL0", "sL1", "sL2"].map(String::from);
    for l in &labels {
        let r = scn.surface.height_report(scn.section(l)?)?;
        println!("<{l}, {l}> = {} with (P.O) = {}", rational_to_string(&r.height), r.intersection_with_zero);
        for c in &r.contributions {
            println!("    {} {}: contr {}", c.place, c.kind, rational_to_string(&c.local.contribution));
        }
    }
    let gram = scn.surface.gram(&scn.sections(&labels)?)?;
    for row in &gram {
        println!("[{}]", row.iter().map(rational_to_string).collect::<Vec<_>>().join(", "));
    }
    println!("det = {}", rational_to_string(&linalg::det(&gram)));
    Ok(())
}
