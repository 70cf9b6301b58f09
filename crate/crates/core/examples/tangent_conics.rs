//! Conics tangent to a quartic everywhere, from doubled line sections, and
//! the intersection data of an arrangement.

use mwl_core::{all_even_tangency, bundled, summarize, tangent_conics_through};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scn = bundled::load("line-conic-2a")?;
    let lines: Vec<_> = ["sL0", "sL1", "sL2"]
        .iter()
        .map(|l| Ok((l.to_string(), scn.section(l)?.clone())))
        .collect::<mwl_core::Result<_>>()?;
    let branch = scn.branch();
    for c in tangent_conics_through(scn.book.model(), &lines)? {
        let x = c.as_graph().expect("conics here are graphs");
        println!("{}: x = {x}, even contact with the quartic: {}", c.label, all_even_tangency(&c, &branch)?);
    }
    let curves: Vec<_> = ["C1", "C2", "C3", "L1"].iter().map(|l| scn.curve(l).cloned()).collect::<Result<_, _>>()?;
    let summary = summarize(&curves)?;
    println!("arrangement of total degree {}:", summary.total_degree());
    for p in &summary.points {
        let at: Vec<String> = p
            .incidences
            .iter()
            .map(|((i, j), m)| format!("{}.{} = {m}", summary.components[*i].0, summary.components[*j].0))
            .collect();
        println!("    {} ({} point(s)): {}", p.point.describe(), p.point.degree(), at.join(", "));
    }
    Ok(())
}
