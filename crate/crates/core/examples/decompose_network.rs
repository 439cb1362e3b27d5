//! Cover a network with two hubs by stars and chains, certify each piece
//! with canonical strategies and aggregate. Then replace each source by a
//! shared classical bit in turn and watch the overall claim disappear.

use std::path::Path;

use netcert::io::{read_topology, NetworkStrategy};
use netcert::report::{certify_network, NetworkInput};
use netcert::strategy::SourceModel;
use netcert::witness::ClaimKind;

fn main() -> netcert::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/two_hubs.json");
    let topology = read_topology(&path)?;
    let quantum = vec![SourceModel::pure(std::f64::consts::FRAC_PI_4); topology.num_sources()];

    let report = certify_network(&topology, &NetworkInput::Strategy(NetworkStrategy { sources: quantum.clone() }), "all quantum")?;
    for sub in &report.subnetworks {
        let w = &sub.report.witness;
        let claims: Vec<String> = sub.report.claims.iter().map(|c| c.claim.to_string()).collect();
        println!("{:?} {:<22} {:<10} value {:.6} [{}]", sub.kind, sub.parties.join("-"), w.family.name(), w.value, claims.join(", "));
    }
    println!("overall: {:?}\n", report.overall_claims);

    for k in 0..topology.num_sources() {
        let mut sources = quantum.clone();
        sources[k] = SourceModel::Classical;
        let r = certify_network(&topology, &NetworkInput::Strategy(NetworkStrategy { sources }), "one classical")?;
        let failing: Vec<String> =
            r.subnetworks.iter().filter(|s| !s.report.has_claim(ClaimKind::Fqnn)).map(|s| s.parties.join("-")).collect();
        println!(
            "source {k:>2} {:<8} classical: overall FQNN {}, failing {}",
            topology.sources()[k].join("-"),
            r.has_overall(ClaimKind::Fqnn),
            failing.join(" ")
        );
    }
    Ok(())
}
