//! Random all-classical networks and direct enumeration of
//! `P(a|x) = Σ_λ ∏_s p_s(λ_s) ∏_j [a_j = f_j(x_j, λ_j)]`.
#![allow(dead_code)]

use std::collections::BTreeMap;

use netcert::behavior::{behavior_from_hybrid, HybridStrategy, LocalAction, PartyResponse, SourceKind};
use netcert::network::{make_topology, NetworkKind, NetworkTopology};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub struct Instance {
    pub topology: NetworkTopology,
    pub priors: Vec<Vec<f64>>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    /// `response[j][(x, symbols)]`
    pub response: Vec<BTreeMap<(usize, Vec<usize>), usize>>,
}

pub fn product(radices: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &r in radices {
        out = out.into_iter().flat_map(|p: Vec<usize>| (0..r).map(move |v| [p.clone(), vec![v]].concat())).collect();
    }
    out
}

pub fn random_instance(rng: &mut StdRng) -> Instance {
    let topology = if rng.gen_bool(0.5) {
        make_topology(NetworkKind::Chain, rng.gen_range(2..=4)).unwrap()
    } else {
        make_topology(NetworkKind::Star, rng.gen_range(1..=3)).unwrap()
    };
    let priors: Vec<Vec<f64>> = (0..topology.num_sources())
        .map(|_| {
            let w: Vec<f64> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0.05..1.0)).collect();
            let total: f64 = w.iter().sum();
            w.into_iter().map(|v| v / total).collect()
        })
        .collect();
    let m = topology.num_parties();
    let inputs: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=2)).collect();
    let outputs: Vec<usize> = (0..m).map(|_| rng.gen_range(2..=3)).collect();
    let response = (0..m)
        .map(|j| {
            let radices: Vec<usize> = topology.incident_sources(j).iter().map(|&s| priors[s].len()).collect();
            let mut table = BTreeMap::new();
            for x in 0..inputs[j] {
                for sym in product(&radices) {
                    table.insert((x, sym), rng.gen_range(0..outputs[j]));
                }
            }
            table
        })
        .collect();
    Instance { topology, priors, inputs, outputs, response }
}

pub fn hybrid(inst: &Instance) -> HybridStrategy {
    let parties = (0..inst.topology.num_parties())
        .map(|j| PartyResponse {
            num_inputs: inst.inputs[j],
            num_outputs: inst.outputs[j],
            actions: inst.response[j].iter().map(|(k, &a)| (k.clone(), LocalAction::constant(a, 0))).collect(),
        })
        .collect();
    HybridStrategy {
        topology: inst.topology.clone(),
        sources: inst.priors.iter().map(|w| SourceKind::Classical { weights: w.clone() }).collect(),
        parties,
    }
}

pub fn direct(inst: &Instance, x: &[usize], a: &[usize]) -> f64 {
    let radices: Vec<usize> = inst.priors.iter().map(Vec::len).collect();
    product(&radices)
        .into_iter()
        .map(|lambda| {
            let p: f64 = lambda.iter().enumerate().map(|(s, &l)| inst.priors[s][l]).product();
            let hit = (0..inst.topology.num_parties()).all(|j| {
                let sym: Vec<usize> = inst.topology.incident_sources(j).iter().map(|&s| lambda[s]).collect();
                inst.response[j][&(x[j], sym)] == a[j]
            });
            if hit {
                p
            } else {
                0.0
            }
        })
        .sum()
}

/// Largest deviation between simulation and enumeration over `count` seeded instances.
pub fn worst_deviation(seed: u64, count: usize) -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst = 0f64;
    for _ in 0..count {
        let inst = random_instance(&mut rng);
        let b = behavior_from_hybrid(&hybrid(&inst)).unwrap();
        for x in product(&inst.inputs) {
            for a in product(&inst.outputs) {
                worst = worst.max((b.prob(&x, &a) - direct(&inst, &x, &a)).abs());
            }
        }
    }
    worst
}
