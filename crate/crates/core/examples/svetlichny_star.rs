//! Mermin–Svetlichny witness on a star whose centre measures in the GHZ
//! basis. Branch observables carry per-outcome phases.

use std::f64::consts::FRAC_PI_4;

use netcert::strategy::canonical_star;
use netcert::witness::{bound_lookup, eval_star_svetlichny, Family, Model};

fn main() -> netcert::Result<()> {
    for n in 2..=4 {
        let s = canonical_star(&vec![FRAC_PI_4; n], None, true)?;
        let w = eval_star_svetlichny(&s.behavior()?, n, &s.conditioning)?;
        let classical = bound_lookup(Family::StarSvetlichny, n, Model::AllClassical, None)?.threshold;
        let hybrid = bound_lookup(Family::StarSvetlichny, n, Model::HybridQuantum, Some(1))?.threshold;
        println!("n = {n}: value {:.6} (quantum max {:.6}), local {classical}, one classical source {hybrid}", w.value, hybrid * 2f64.sqrt());
    }
    Ok(())
}
