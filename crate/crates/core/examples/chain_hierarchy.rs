//! ℓ-level hierarchy on chains: bound table, canonical quantum values and
//! the claims they support for n = 3, 5, 7.

use std::f64::consts::FRAC_PI_4;

use netcert::strategy::{canonical_chain, ChainVariant};
use netcert::witness::{bound_table, certify, evaluate, Family};

fn main() -> netcert::Result<()> {
    for n in [3, 5, 7] {
        println!("chain n = {n}");
        for b in bound_table(Family::ChainIj, n)? {
            let p = b.parameter.map(|p| p.to_string()).unwrap_or_default();
            println!("  {:<15} {:>2}  {:.6}  detectable {}", b.model.name(), p, b.threshold, b.detectable);
        }
        for theta in [FRAC_PI_4, 0.6, 0.45] {
            let s = canonical_chain(&vec![theta; n - 1], ChainVariant::Ij)?;
            let w = evaluate(Family::ChainIj, &s.behavior()?, n)?;
            let claims: Vec<String> = certify(&w)?.iter().map(|c| c.claim.to_string()).collect();
            println!("  θ = {theta:.4}: value {:.6} -> [{}]", w.value, claims.join(", "));
        }
    }

    // Even chains fall back on the odd chain obtained by dropping an end party.
    let s = canonical_chain(&[FRAC_PI_4; 5], ChainVariant::Ij)?;
    let w = evaluate(Family::ChainIj, &s.behavior()?, 6)?;
    let claims: Vec<String> = certify(&w)?.iter().map(|c| c.claim.to_string()).collect();
    println!("chain n = 6, θ = π/4: value {:.6} -> [{}]", w.value, claims.join(", "));
    Ok(())
}
