//! Overlap law of two random k-subsets, the moments of the inner product of
//! two random signals, and weak-composition counts.
//!
//! cargo run --example overlap_moments

use mslr::lowdeg::{compositions_exact, inner_moment, inner_moment_exact, overlap_pmf_exact, UnitValues};

fn main() -> mslr::Result<()> {
    let (p, k) = (12, 3);
    let pmf = overlap_pmf_exact(p, k)?;
    let shown: Vec<String> = pmf.iter().map(|q| q.to_string()).collect();
    println!("P(|S1 ∩ S2| = l) for p = {p}, k = {k}: {}", shown.join(", "));
    for m in 0..=4 {
        println!(
            "E<b1,b2>^{m}: pm1 {} ({:.4}), p1 {}",
            inner_moment_exact(p, k, m, UnitValues::Pm1)?,
            inner_moment(p, k, m, UnitValues::Pm1)?,
            inner_moment_exact(p, k, m, UnitValues::P1)?
        );
    }
    for (m, n) in [(2, 3), (4, 4), (6, 10)] {
        println!("weak compositions of {m} into {n} parts: {}", compositions_exact(m, n)?);
    }
    Ok(())
}
