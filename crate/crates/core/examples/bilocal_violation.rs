//! Bilocal I–J witness along the family θ₂ = π/4, sin 2θ₁ = s, with the
//! measurement angle chosen optimally for each point.
//!
//! The hybrid-quantum bound 2^{1/4} is crossed at s = √2 − 1.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use netcert::strategy::canonical_bilocal;
use netcert::witness::{bound_lookup, certify, eval_bilocal_ij, Family, Model};

fn main() -> netcert::Result<()> {
    let fqnn = bound_lookup(Family::BilocalIj, 3, Model::HybridQuantum, Some(1))?.threshold;
    let fnn = bound_lookup(Family::BilocalIj, 3, Model::HybridNs, Some(1))?.threshold;
    println!("FQNN bound {fqnn:.6}, FNN bound {fnn:.6}, crossing expected at s = {:.6}", SQRT_2 - 1.0);
    println!("{:>6} {:>10} {:>10}  claims", "s", "value", "predicted");
    for k in 0..=12 {
        let s = 0.3 + 0.025 * k as f64;
        let strategy = canonical_bilocal(s.asin() / 2.0, FRAC_PI_4, None)?;
        let w = eval_bilocal_ij(&strategy.behavior()?)?;
        let claims: Vec<String> = certify(&w)?.iter().map(|c| c.claim.to_string()).collect();
        println!("{s:>6.3} {:>10.6} {:>10.6}  {}", w.value, strategy.predicted_value.unwrap_or(f64::NAN), claims.join(" "));
    }
    Ok(())
}
