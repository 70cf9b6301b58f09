//! Sections from lines through the pencil, and the chord-tangent law.

use std::collections::BTreeMap;

use mwl_algebra::{parse_bipoly, parse_unipoly, FieldSpec, Var};
use mwl_core::{pencil_setup, PlaneCurve, SectionBook};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = FieldSpec::rationals();
    let none = BTreeMap::new();
    let branch = PlaneCurve::new("Q", parse_bipoly("(x - t^2)(x - 3t + 2)(x + 3t + 2)", &q, &none)?)?;
    let setup = pencil_setup(&branch)?;
    println!("model: {}", setup.model);

    // Lifting x = t + 2 adjoins sqrt 2; the book re-embeds everything.
    let mut book = SectionBook::new(setup.model, 8);
    book.lift("sL3", &parse_unipoly("t + 2", &q, Var::T, &none)?)?;
    book.lift("sL4", &parse_unipoly("1", &q, Var::T, &none)?)?;
    println!("field: {}", book.model().field());

    let m = book.model().clone();
    let (s3, s4) = (book.get("sL3")?.clone(), book.get("sL4")?.clone());
    println!("sL3 = {s3}");
    println!("sL4 = {s4}");
    println!("[2]sL3 = {}", m.smul(2, &s3)?);
    println!("[2]sL4 = {}", m.smul(2, &s4)?);
    let sum = m.add(&s3, &s4)?;
    println!("sL3 + sL4 = {sum}");
    println!("on the curve: {}", m.contains(&sum));
    for t in m.two_torsion()? {
        println!("2-torsion: {t}");
    }
    Ok(())
}
