//! Linear (CHSH-block) witnesses on three- and four-party chains. Their
//! bound is 2 whatever the mix of classical and quantum sources, and the
//! quantum value is 2√(1 + sin²2θ₁ sin²2θ₂) at the optimal angle.

use std::f64::consts::FRAC_PI_4;

use netcert::strategy::{canonical_b3, canonical_chain, ChainVariant};
use netcert::witness::{bound_table, eval_linear_b3, eval_linear_bn, Family};

fn main() -> netcert::Result<()> {
    for b in bound_table(Family::LinearB3, 3)? {
        println!("{:<15} {:.6}", b.model.name(), b.threshold);
    }
    println!("\nB3 over (θ₁, θ₂):");
    for t1 in [0.2, 0.4, FRAC_PI_4] {
        for t2 in [0.2, 0.4, FRAC_PI_4] {
            let s = canonical_b3(t1, t2, None)?;
            let w = eval_linear_b3(&s.behavior()?)?;
            let closed = 2.0 * (1.0 + ((2.0 * t1).sin() * (2.0 * t2).sin()).powi(2)).sqrt();
            println!("  θ = ({t1:.3}, {t2:.3})  value {:.9}  closed form {closed:.9}", w.value);
        }
    }
    println!("\nfour-party chain, all θ = π/4:");
    let w = eval_linear_bn(&canonical_chain(&[FRAC_PI_4; 3], ChainVariant::Bn)?.behavior()?, 4)?;
    for (k, v) in &w.components {
        println!("  {k} = {v:.9}");
    }
    println!("  total = {:.9}", w.value);
    Ok(())
}
