//! Witness reports for single behaviors and certification of whole networks.

use serde::Serialize;

use crate::behavior::{check_no_signaling, marginalize_behavior, Behavior};
use crate::io::NetworkStrategy;
use crate::network::{decompose_into_chains_and_stars, NetworkKind, NetworkTopology, Subnetwork};
use crate::strategy::{build, CanonicalFamily, ChainVariant, SourceModel};
use crate::witness::{evaluate, ClaimKind, Family, WitnessReport};
use crate::{tolerance, Error, Result};

/// Witness size implied by the number of parties in a behavior.
pub fn infer_n(family: Family, parties: usize) -> usize {
    match family {
        Family::StarIj | Family::StarSvetlichny => parties.saturating_sub(1),
        _ => parties,
    }
}

/// Evaluates `family` on `behavior`, attaches bounds and claims, and warns
/// when the behavior signals beyond the global tolerance.
pub fn witness_report(behavior: &Behavior, family: Family, n: Option<usize>) -> Result<WitnessReport> {
    let value = match n {
        Some(n) => evaluate(family, behavior, n)?,
        // An inferred size that the witness rejects is a property of the behavior.
        None => evaluate(family, behavior, infer_n(family, behavior.scenario().num_parties())).map_err(|e| match e {
            Error::InvalidArgument(m) => Error::mismatch(m),
            other => other,
        })?,
    };
    let mut report = WitnessReport::new(value)?;
    report.warnings = signaling_warnings(behavior);
    Ok(report)
}

fn signaling_warnings(behavior: &Behavior) -> Vec<String> {
    check_no_signaling(behavior)
        .into_iter()
        .map(|v| {
            format!(
                "no-signaling violated: marginal of {} moves by {:.3e} at inputs {:?} (tolerance {:e})",
                v.parties.join(","),
                v.deviation,
                v.inputs,
                tolerance()
            )
        })
        .collect()
}

/// A single-behavior witness report with the run metadata.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub tolerance: f64,
    pub input: String,
    #[serde(flatten)]
    pub report: WitnessReport,
}

impl EvalReport {
    pub fn new(report: WitnessReport, input: &str) -> Self {
        EvalReport {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            tolerance: tolerance(),
            input: input.to_string(),
            report,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubnetworkReport {
    pub kind: NetworkKind,
    pub parties: Vec<String>,
    /// Parent source indices covered by this subnetwork.
    pub sources: Vec<usize>,
    pub report: WitnessReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub tolerance: f64,
    pub input: String,
    pub subnetworks: Vec<SubnetworkReport>,
    /// FNN / FQNN, present only when every subnetwork carries the claim.
    pub overall_claims: Vec<ClaimKind>,
}

impl Report {
    pub fn has_overall(&self, kind: ClaimKind) -> bool {
        self.overall_claims.contains(&kind)
    }
}

/// What the parties of a network did.
#[derive(Debug, Clone)]
pub enum NetworkInput {
    /// Canonical strategies built per subnetwork from these source models.
    Strategy(NetworkStrategy),
    /// A measured behavior over all parties of the topology, in topology order.
    Behavior(Behavior),
}

/// Canonical strategy used on a subnetwork: stars take the star witness,
/// two-party chains the one-branch star, three-party chains the bilocal
/// witness and longer chains the linear chain witness.
pub fn subnetwork_family(sub: &Subnetwork) -> CanonicalFamily {
    let parties = sub.topology.num_parties();
    match sub.kind {
        NetworkKind::Star => CanonicalFamily::Star { linear: false },
        NetworkKind::Chain if parties == 2 => CanonicalFamily::Star { linear: false },
        NetworkKind::Chain if parties == 3 => CanonicalFamily::Bilocal,
        NetworkKind::Chain => CanonicalFamily::Chain(ChainVariant::Bn),
    }
}

fn family_for_shape(sub: &Subnetwork, shape: &[(usize, usize)]) -> Result<(Family, usize)> {
    let m = shape.len();
    let all_binary = shape.iter().all(|&s| s == (2, 2));
    let linear = m >= 3 && shape[0] == (2, 2) && shape[m - 1] == (4, 2) && shape[1..m - 1].iter().all(|&s| s == (1, 4));
    let found = match sub.kind {
        NetworkKind::Star if all_binary => Some((Family::StarIj, m - 1)),
        NetworkKind::Chain if m == 2 && all_binary => Some((Family::StarIj, 1)),
        NetworkKind::Chain if m == 3 && shape == [(2, 2), (1, 4), (2, 2)] => Some((Family::BilocalIj, 3)),
        NetworkKind::Chain if m == 3 && shape == [(2, 2), (1, 4), (3, 2)] => Some((Family::LinearB3, 3)),
        NetworkKind::Chain if linear => Some((Family::LinearBn, m)),
        NetworkKind::Chain if all_binary && m >= 3 => Some((Family::ChainIj, m)),
        _ => None,
    };
    found.ok_or_else(|| Error::mismatch(format!("no witness for a {m}-party {:?} subnetwork with shape {shape:?}", sub.kind)))
}

/// Restriction of `behavior` to `names` (in that order); everyone else is
/// summed out at input 0.
fn restrict(behavior: &Behavior, names: &[String]) -> Result<Behavior> {
    let mut b = behavior.clone();
    let others: Vec<String> =
        b.scenario().parties().iter().map(|p| p.name.clone()).filter(|p| !names.contains(p)).collect();
    for p in others {
        b = marginalize_behavior(&b, &p, 0)?;
    }
    let sc = b.scenario();
    let order: Vec<usize> = names
        .iter()
        .map(|n| sc.party_index(n).ok_or_else(|| Error::mismatch(format!("behavior has no party {n}"))))
        .collect::<Result<_>>()?;
    let parties = order.iter().map(|&i| sc.parties()[i].clone()).collect();
    let target = crate::behavior::Scenario::new(parties)?;
    Behavior::from_fn(target, |x, a| {
        let mut xs = vec![0; x.len()];
        let mut as_ = vec![0; a.len()];
        for (k, &i) in order.iter().enumerate() {
            xs[i] = x[k];
            as_[i] = a[k];
        }
        b.prob(&xs, &as_)
    })
}

/// Decomposes `topology` into chains and stars, evaluates a witness on every
/// piece and aggregates: FQNN (FNN) holds for the network when it holds for
/// every piece.
pub fn certify_network(topology: &NetworkTopology, input: &NetworkInput, description: &str) -> Result<Report> {
    let cover = decompose_into_chains_and_stars(topology)?;
    let mut subnetworks = Vec::with_capacity(cover.subnetworks.len());
    for sub in &cover.subnetworks {
        let report = match input {
            NetworkInput::Strategy(s) => {
                if s.sources.len() != topology.num_sources() {
                    return Err(Error::arg(format!(
                        "strategy lists {} sources, topology has {}",
                        s.sources.len(),
                        topology.num_sources()
                    )));
                }
                let sources: Vec<SourceModel> = sub.source_map.iter().map(|&k| s.sources[k]).collect();
                let strategy = build(subnetwork_family(sub), sources, None)?;
                WitnessReport::new(evaluate(strategy.witness_family(), &strategy.behavior()?, strategy.n())?)?
            }
            NetworkInput::Behavior(b) => {
                if b.scenario().num_parties() != topology.num_parties() {
                    return Err(Error::mismatch("behavior and topology list different parties"));
                }
                let local = restrict(b, sub.topology.parties())?;
                let (family, n) = family_for_shape(sub, &local.scenario().shape())?;
                let mut r = WitnessReport::new(evaluate(family, &local, n)?)?;
                r.warnings = signaling_warnings(&local);
                r
            }
        };
        subnetworks.push(SubnetworkReport {
            kind: sub.kind,
            parties: sub.topology.parties().to_vec(),
            sources: sub.source_map.clone(),
            report,
        });
    }
    let overall_claims = [ClaimKind::Fqnn, ClaimKind::Fnn]
        .into_iter()
        .filter(|&k| !subnetworks.is_empty() && subnetworks.iter().all(|s| s.report.has_claim(k)))
        .collect();
    Ok(Report {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        tolerance: tolerance(),
        input: description.to_string(),
        subnetworks,
        overall_claims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::make_topology;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn single_source_is_one_star() {
        let topo = make_topology(NetworkKind::Chain, 2).unwrap();
        let input = NetworkInput::Strategy(NetworkStrategy { sources: vec![SourceModel::pure(FRAC_PI_4)] });
        let r = certify_network(&topo, &input, "one source").unwrap();
        assert_eq!(r.subnetworks.len(), 1);
        assert_eq!(r.subnetworks[0].report.witness.family, Family::StarIj);
        assert!(r.has_overall(ClaimKind::Fqnn));
    }

    #[test]
    fn behavior_input_matches_strategy_input() {
        let topo = make_topology(NetworkKind::Chain, 3).unwrap();
        let sources = vec![SourceModel::pure(0.6), SourceModel::pure(FRAC_PI_4)];
        let strategy = build(CanonicalFamily::Bilocal, sources.clone(), None).unwrap();
        let from_behavior =
            certify_network(&topo, &NetworkInput::Behavior(strategy.behavior().unwrap()), "behavior").unwrap();
        let from_strategy = certify_network(&topo, &NetworkInput::Strategy(NetworkStrategy { sources }), "strategy").unwrap();
        let (a, b) = (&from_behavior.subnetworks[0].report, &from_strategy.subnetworks[0].report);
        assert!((a.witness.value - b.witness.value).abs() < 1e-12);
        assert_eq!(from_behavior.overall_claims, from_strategy.overall_claims);
    }
}
