//! PR boxes on the quantum links of a five-party chain. Each placement of
//! classical sources reaches 2^{1 − 2|S|/(n+1)}, with |S| the number of
//! odd-position parties fed only by classical sources.

use std::collections::BTreeSet;

use netcert::behavior::{behavior_from_pr_chain, check_no_signaling};
use netcert::witness::{eval_chain_ij, isolated_party_count};

fn main() -> netcert::Result<()> {
    let n = 5;
    for mask in 1u32..(1 << (n - 1)) {
        let classical: BTreeSet<usize> = (1..n).filter(|s| mask >> (s - 1) & 1 == 1).collect();
        let b = behavior_from_pr_chain(n, &classical)?;
        let value = eval_chain_ij(&b, n)?.value;
        let s = isolated_party_count(n, &classical);
        let bound = 2f64.powf(1.0 - 2.0 * s as f64 / (n + 1) as f64);
        let ns = if check_no_signaling(&b).is_empty() { "no-signaling" } else { "SIGNALING" };
        println!("classical {classical:?}: |S| = {s}, value {value:.9}, bound {bound:.9}, {ns}");
    }
    Ok(())
}
