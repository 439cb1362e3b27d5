use std::collections::{BTreeMap, BTreeSet};

use crate::behavior::{HybridStrategy, LocalAction, PartyResponse, SourceKind};
use crate::network::{make_topology, NetworkKind};
use crate::{Error, Result};

/// Chain of `n` parties with PR boxes everywhere except at the 1-based source
/// positions in `classical_positions`, which carry a uniform bit.
///
/// Odd-position parties that touch a PR box answer with the output of one
/// box shared with an even neighbour (the left one when possible); even
/// parties feed their input into every box chosen that way and answer with
/// the XOR of those outputs. An odd party fed only by classical sources
/// answers 0 when the bit of its first source is 0 and its input otherwise
/// (for odd `n`; for even `n` it answers 0).
pub fn pr_chain_strategy(n: usize, classical_positions: &BTreeSet<usize>) -> Result<HybridStrategy> {
    let topology = make_topology(NetworkKind::Chain, n)?;
    let m = n - 1;
    if classical_positions.is_empty() {
        return Err(Error::arg("at least one classical source position is required"));
    }
    if let Some(&bad) = classical_positions.iter().find(|&&k| k == 0 || k > m) {
        return Err(Error::arg(format!("source position {bad} outside 1..={m}")));
    }
    let classical = |k: usize| classical_positions.contains(&k);
    let sources: Vec<SourceKind> = (1..=m)
        .map(|k| if classical(k) { SourceKind::Classical { weights: vec![0.5, 0.5] } } else { SourceKind::PrBox })
        .collect();

    // Source k joins parties k and k + 1 (1-based).
    let incident = |j: usize| -> Vec<usize> { [j.wrapping_sub(1), j].into_iter().filter(|&k| k >= 1 && k <= m).collect() };
    let mut chosen: BTreeMap<usize, usize> = BTreeMap::new();
    for j in (1..=n).step_by(2) {
        if let Some(&k) = incident(j).iter().find(|&&k| !classical(k)) {
            chosen.insert(j, k);
        }
    }
    let chosen_sources: BTreeSet<usize> = chosen.values().copied().collect();

    let mut parties = Vec::with_capacity(n);
    for j in 1..=n {
        let inc = incident(j);
        let cl: Vec<usize> = inc.iter().copied().filter(|&k| classical(k)).collect();
        let boxes: Vec<usize> = inc.iter().copied().filter(|&k| !classical(k)).collect();
        let nb = boxes.len();
        let mut actions = BTreeMap::new();
        for x in 0..2 {
            for sym in 0..(1usize << cl.len()) {
                let symbols: Vec<usize> = (0..cl.len()).map(|i| sym >> (cl.len() - 1 - i) & 1).collect();
                let act = if j % 2 == 1 {
                    match chosen.get(&j) {
                        Some(&k) => {
                            let pos = boxes.iter().position(|&b| b == k).unwrap();
                            let box_inputs = boxes.iter().map(|&b| if b == k { x } else { 0 }).collect();
                            let outputs = (0..1usize << nb).map(|r| r >> (nb - 1 - pos) & 1).collect();
                            LocalAction { measurement: None, box_inputs, outputs }
                        }
                        None => {
                            let out = if n % 2 == 1 && symbols[0] == 1 { x } else { 0 };
                            LocalAction::constant(out, nb)
                        }
                    }
                } else {
                    let used: Vec<bool> = boxes.iter().map(|b| chosen_sources.contains(b)).collect();
                    let box_inputs = used.iter().map(|&u| if u { x } else { 0 }).collect();
                    let outputs = (0..1usize << nb)
                        .map(|r| (0..nb).filter(|&i| used[i]).fold(0, |acc, i| acc ^ (r >> (nb - 1 - i) & 1)))
                        .collect();
                    LocalAction { measurement: None, box_inputs, outputs }
                };
                actions.insert((x, symbols), act);
            }
        }
        parties.push(PartyResponse { num_inputs: 2, num_outputs: 2, actions });
    }
    Ok(HybridStrategy { topology, sources, parties })
}
