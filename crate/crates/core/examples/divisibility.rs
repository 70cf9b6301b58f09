//! Is a combination of sections divisible by p in the Mordell-Weil group?

use mwl_core::{all_odd_p_analysis, bundled, coordinates_of, exists_cover_multipliers, verify_presentation, Verdict};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scn = bundled::load("line-conic-1")?;
    let pres = scn.presentation()?;
    let rep = verify_presentation(&scn.surface, &pres)?;
    println!("presentation verified: {} (det {})", rep.passed(), rep.gram_det);
    for pair in [["sC2", "sL3"], ["sC2", "sL4"]] {
        let secs = scn.sections(&pair.map(String::from))?;
        for (l, s) in pair.iter().zip(&secs) {
            let c = coordinates_of(&scn.surface, &pres, s)?;
            println!("{l}: free {:?}, torsion {:?}", c.free, c.torsion);
        }
        for p in [3, 5, 7] {
            match exists_cover_multipliers(&scn.surface, &pres, &secs, p)?.verdict {
                Verdict::Exists { multipliers, divisor, .. } => {
                    println!("  p = {p}: {multipliers:?} works, [{p}] s0 with s0 = {divisor}")
                }
                Verdict::NotExists => println!("  p = {p}: no multipliers"),
            }
        }
        println!("  all odd p: {}", all_odd_p_analysis(&scn.surface, &pres, &secs)?.summary());
    }
    Ok(())
}
