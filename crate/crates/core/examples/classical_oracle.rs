//! Brute-force classical maxima next to the closed-form local bounds.

use netcert::witness::{bound_lookup, brute_force_classical_max, Family, Model, OracleConfig};

fn main() -> netcert::Result<()> {
    let cfg = OracleConfig::default();
    let cases = [
        (Family::BilocalIj, 3),
        (Family::StarIj, 2),
        (Family::LinearB3, 3),
        (Family::LinearBn, 4),
        (Family::StarSvetlichny, 2),
        (Family::StarSvetlichny, 3),
        (Family::StarSvetlichny, 4),
    ];
    for (family, n) in cases {
        let max = brute_force_classical_max(family, n, &cfg)?;
        let bound = bound_lookup(family, n, Model::AllClassical, None)?.threshold;
        println!("{:<16} n = {n}: enumerated {max:.9}, bound {bound:.9}", family.name());
    }
    Ok(())
}
