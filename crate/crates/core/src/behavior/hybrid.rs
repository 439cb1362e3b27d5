use std::collections::{BTreeMap, BTreeSet};

use super::born::born_table;
use super::{mixed_radix_decode, mixed_radix_encode, Behavior, PartySpec, Scenario};
use crate::network::NetworkTopology;
use crate::quantum::{MixedState, ProjectiveMeasurement};
use crate::{tolerance, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum SourceKind {
    Quantum(MixedState),
    /// Shared symbol `λ ∈ 0..weights.len()` drawn with the given prior.
    Classical { weights: Vec<f64> },
    /// Bipartite box with `a ⊕ b = s·t` and uniform marginals.
    PrBox,
}

/// What a party does for one (input, received classical symbols) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalAction {
    /// Measurement on the party's qubits; `None` when it holds no qubits.
    pub measurement: Option<ProjectiveMeasurement>,
    /// One input bit per PR box the party holds, boxes in source order.
    pub box_inputs: Vec<usize>,
    /// Final output indexed by `q · 2^boxes + r`, where `q` is the quantum
    /// outcome and `r` packs the box outputs big-endian in source order.
    pub outputs: Vec<usize>,
}

impl LocalAction {
    /// Ignores every resource and answers `output`.
    pub fn constant(output: usize, boxes: usize) -> Self {
        LocalAction { measurement: None, box_inputs: vec![0; boxes], outputs: vec![output; 1 << boxes] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartyResponse {
    pub num_inputs: usize,
    pub num_outputs: usize,
    /// Keyed by (input, symbols of the classical sources held, in source order).
    pub actions: BTreeMap<(usize, Vec<usize>), LocalAction>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridStrategy {
    pub topology: NetworkTopology,
    pub sources: Vec<SourceKind>,
    pub parties: Vec<PartyResponse>,
}

struct PartyView {
    quantum: Vec<usize>,
    classical: Vec<usize>,
    boxes: Vec<usize>,
}

impl HybridStrategy {
    fn views(&self) -> Vec<PartyView> {
        (0..self.topology.num_parties())
            .map(|p| {
                let inc = self.topology.incident_sources(p);
                let pick = |f: fn(&SourceKind) -> bool| inc.iter().copied().filter(|&s| f(&self.sources[s])).collect();
                PartyView {
                    quantum: pick(|k| matches!(k, SourceKind::Quantum(_))),
                    classical: pick(|k| matches!(k, SourceKind::Classical { .. })),
                    boxes: pick(|k| matches!(k, SourceKind::PrBox)),
                }
            })
            .collect()
    }

    fn alphabet(&self, s: usize) -> usize {
        match &self.sources[s] {
            SourceKind::Classical { weights } => weights.len(),
            _ => 1,
        }
    }

    /// Checks the invariants listed on the type.
    pub fn validate(&self) -> Result<()> {
        let t = &self.topology;
        if self.sources.len() != t.num_sources() || self.parties.len() != t.num_parties() {
            return Err(Error::arg("one descriptor per source and per party is required"));
        }
        let tol = tolerance();
        for (s, kind) in self.sources.iter().enumerate() {
            match kind {
                SourceKind::Quantum(st) if st.num_qubits() != t.sources()[s].len() => {
                    return Err(Error::arg(format!("source {s}: state size does not match its parties")));
                }
                SourceKind::Classical { weights } => {
                    if weights.is_empty() || weights.iter().any(|w| !w.is_finite() || *w < -tol) {
                        return Err(Error::arg(format!("source {s}: invalid prior")));
                    }
                    if (weights.iter().sum::<f64>() - 1.0).abs() > tol {
                        return Err(Error::arg(format!("source {s}: prior is not normalized")));
                    }
                }
                SourceKind::PrBox if t.sources()[s].len() != 2 => {
                    return Err(Error::arg(format!("source {s}: a PR box is bipartite")));
                }
                _ => {}
            }
        }
        for (p, view) in self.views().iter().enumerate() {
            let name = &t.parties()[p];
            let resp = &self.parties[p];
            if resp.num_inputs == 0 || resp.num_outputs == 0 {
                return Err(Error::arg(format!("party {name}: empty input or output alphabet")));
            }
            let qdim = 1usize << view.quantum.len();
            let radices: Vec<usize> = view.classical.iter().map(|&s| self.alphabet(s)).collect();
            let combos: usize = radices.iter().product();
            for x in 0..resp.num_inputs {
                for c in 0..combos {
                    let sym = mixed_radix_decode(c, &radices);
                    let act = resp.actions.get(&(x, sym.clone())).ok_or_else(|| {
                        Error::arg(format!("party {name} has no response for input {x} and symbols {sym:?}"))
                    })?;
                    let q = match (&act.measurement, view.quantum.is_empty()) {
                        (None, true) => 1,
                        (Some(m), false) if m.dim() == qdim => m.num_outcomes(),
                        _ => return Err(Error::arg(format!("party {name}: measurement does not match its qubits"))),
                    };
                    if act.box_inputs.len() != view.boxes.len() || act.box_inputs.iter().any(|&b| b > 1) {
                        return Err(Error::arg(format!("party {name}: box inputs must be one bit per PR box")));
                    }
                    if act.outputs.len() != q << view.boxes.len() || act.outputs.iter().any(|&o| o >= resp.num_outputs) {
                        return Err(Error::arg(format!("party {name}: output table has the wrong shape")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Behavior of a network mixing quantum, classical and PR-box sources.
///
/// `P(a|x) = Σ_λ p(λ) Σ_{q,r} P_Q(q | measurements chosen by x, λ) · P_PR(r | box inputs) · [a = outputs(q, r)]`.
pub fn behavior_from_hybrid(strategy: &HybridStrategy) -> Result<Behavior> {
    strategy.validate()?;
    let t = &strategy.topology;
    let views = strategy.views();
    let m = t.num_parties();

    // Distinct measurements per party become the settings of one Born table.
    let mut meas_lists: Vec<Vec<ProjectiveMeasurement>> = Vec::with_capacity(m);
    let mut meas_index: Vec<BTreeMap<(usize, Vec<usize>), usize>> = Vec::with_capacity(m);
    for (p, view) in views.iter().enumerate() {
        let mut list: Vec<ProjectiveMeasurement> = Vec::new();
        let mut idx = BTreeMap::new();
        for (key, act) in &strategy.parties[p].actions {
            let meas = match &act.measurement {
                Some(mm) if !view.quantum.is_empty() => mm.clone(),
                _ => ProjectiveMeasurement::trivial(1),
            };
            let k = match list.iter().position(|l| *l == meas) {
                Some(k) => k,
                None => {
                    list.push(meas);
                    list.len() - 1
                }
            };
            idx.insert(key.clone(), k);
        }
        meas_lists.push(list);
        meas_index.push(idx);
    }

    let quantum_sources: Vec<usize> =
        (0..t.num_sources()).filter(|&s| matches!(strategy.sources[s], SourceKind::Quantum(_))).collect();
    let states: Vec<&MixedState> = quantum_sources
        .iter()
        .map(|&s| match &strategy.sources[s] {
            SourceKind::Quantum(st) => st,
            _ => unreachable!(),
        })
        .collect();
    let mut offsets = BTreeMap::new();
    let mut acc = 0;
    for &s in &quantum_sources {
        offsets.insert(s, acc);
        acc += t.sources()[s].len();
    }
    let party_qubits: Vec<Vec<usize>> = (0..m)
        .map(|p| {
            views[p]
                .quantum
                .iter()
                .map(|&s| offsets[&s] + t.sources()[s].iter().position(|n| *n == t.parties()[p]).unwrap())
                .collect()
        })
        .collect();
    let qtable = born_table(&states, &party_qubits, &meas_lists)?;
    let q_settings: Vec<usize> = meas_lists.iter().map(Vec::len).collect();
    let q_outcomes: Vec<usize> = meas_lists.iter().map(|l| l[0].num_outcomes()).collect();
    let nq_out: usize = q_outcomes.iter().product();

    let classical_sources: Vec<usize> =
        (0..t.num_sources()).filter(|&s| matches!(strategy.sources[s], SourceKind::Classical { .. })).collect();
    let lambda_radices: Vec<usize> = classical_sources.iter().map(|&s| strategy.alphabet(s)).collect();
    let box_sources: Vec<(usize, usize, usize)> = (0..t.num_sources())
        .filter(|&s| matches!(strategy.sources[s], SourceKind::PrBox))
        .map(|s| {
            let ps = t.source_parties(s);
            (s, ps[0], ps[1])
        })
        .collect();

    let scenario = Scenario::new(
        (0..m).map(|p| PartySpec::new(t.parties()[p].clone(), strategy.parties[p].num_inputs, strategy.parties[p].num_outputs)).collect(),
    )?;
    let n_out = scenario.num_output_tuples();
    let mut table = vec![0.0; scenario.table_len()];
    let n_lambda: usize = lambda_radices.iter().product();

    for li in 0..n_lambda {
        let lambda = mixed_radix_decode(li, &lambda_radices);
        let weight: f64 = classical_sources
            .iter()
            .zip(&lambda)
            .map(|(&s, &l)| match &strategy.sources[s] {
                SourceKind::Classical { weights } => weights[l],
                _ => unreachable!(),
            })
            .product();
        if weight == 0.0 {
            continue;
        }
        let sym_of = |s: usize| lambda[classical_sources.iter().position(|&c| c == s).unwrap()];
        for xi in 0..scenario.num_input_tuples() {
            let x = scenario.decode_inputs(xi);
            let keys: Vec<(usize, Vec<usize>)> =
                (0..m).map(|p| (x[p], views[p].classical.iter().map(|&s| sym_of(s)).collect())).collect();
            let acts: Vec<&LocalAction> = (0..m).map(|p| &strategy.parties[p].actions[&keys[p]]).collect();
            let setting: Vec<usize> = (0..m).map(|p| meas_index[p][&keys[p]]).collect();
            let qrow = &qtable[mixed_radix_encode(&setting, q_settings.iter().copied()) * nq_out..][..nq_out];

            // Box input bit of each party at each box.
            let box_in: Vec<(usize, usize)> = box_sources
                .iter()
                .map(|&(s, u, v)| {
                    let pos = |p: usize| views[p].boxes.iter().position(|&b| b == s).unwrap();
                    (acts[u].box_inputs[pos(u)], acts[v].box_inputs[pos(v)])
                })
                .collect();
            let nb = box_sources.len();
            // r ranges over one output bit for the first end of every box; the
            // second end is fixed by a ⊕ b = s·t.
            for r in 0..(1usize << nb) {
                let pr_weight = 0.5f64.powi(nb as i32);
                let mut bits: BTreeMap<(usize, usize), usize> = BTreeMap::new();
                for (k, &(s, u, v)) in box_sources.iter().enumerate() {
                    let a = r >> (nb - 1 - k) & 1;
                    bits.insert((s, u), a);
                    bits.insert((s, v), a ^ (box_in[k].0 & box_in[k].1));
                }
                let rbits: Vec<usize> = (0..m)
                    .map(|p| views[p].boxes.iter().fold(0, |acc, &s| acc << 1 | bits[&(s, p)]))
                    .collect();
                for (qi, pq) in qrow.iter().enumerate() {
                    if *pq == 0.0 {
                        continue;
                    }
                    let q = mixed_radix_decode(qi, &q_outcomes);
                    let a: Vec<usize> =
                        (0..m).map(|p| acts[p].outputs[q[p] << views[p].boxes.len() | rbits[p]]).collect();
                    table[xi * n_out + scenario.encode_outputs(&a)] += weight * pr_weight * pq;
                }
            }
        }
    }
    Behavior::new(scenario, table)
}

/// Chain of `n` parties whose sources at the 1-based `classical_positions`
/// carry a uniform bit and whose other sources are PR boxes, with the
/// responses that saturate the chain no-signaling bound.
pub fn behavior_from_pr_chain(n: usize, classical_positions: &BTreeSet<usize>) -> Result<Behavior> {
    behavior_from_hybrid(&crate::strategy::pr_chain_strategy(n, classical_positions)?)
}
