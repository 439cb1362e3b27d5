use super::{mixed_radix_encode, Behavior, PartySpec, Scenario};
use crate::network::NetworkTopology;
use crate::quantum::{tensor_product, CMatrix, MixedState, ProjectiveMeasurement, C64};
use crate::{Error, Result};

/// Born-rule behavior of a network whose sources emit `states` and whose
/// parties pick one of their `measurements` per input.
///
/// Each party measures the qubits it receives, ordered by source index.
pub fn behavior_from_quantum(
    topology: &NetworkTopology,
    states: &[MixedState],
    measurements: &[Vec<ProjectiveMeasurement>],
) -> Result<Behavior> {
    if states.len() != topology.num_sources() {
        return Err(Error::arg(format!("{} states for {} sources", states.len(), topology.num_sources())));
    }
    if measurements.len() != topology.num_parties() {
        return Err(Error::arg(format!("{} measurement lists for {} parties", measurements.len(), topology.num_parties())));
    }
    for (k, st) in states.iter().enumerate() {
        if st.num_qubits() != topology.sources()[k].len() {
            return Err(Error::arg(format!(
                "source {k} feeds {} parties but its state has {} qubits",
                topology.sources()[k].len(),
                st.num_qubits()
            )));
        }
    }
    let mut parties = Vec::with_capacity(topology.num_parties());
    for (i, ms) in measurements.iter().enumerate() {
        let name = &topology.parties()[i];
        let outputs = ms.first().map(|m| m.num_outcomes()).ok_or_else(|| Error::arg(format!("party {name} has no measurement")))?;
        if ms.iter().any(|m| m.num_outcomes() != outputs) {
            return Err(Error::arg(format!("measurements of party {name} differ in outcome count")));
        }
        parties.push(PartySpec::new(name.clone(), ms.len(), outputs));
    }
    let scenario = Scenario::new(parties)?;
    let refs: Vec<&MixedState> = states.iter().collect();
    let table = born_table(&refs, &topology.party_qubits(), measurements)?;
    Behavior::new(scenario, table)
}

/// Dense table over (setting tuple, outcome tuple), settings outermost.
///
/// `party_qubits` indexes the global register formed by the states in order.
pub(crate) fn born_table(
    states: &[&MixedState],
    party_qubits: &[Vec<usize>],
    measurements: &[Vec<ProjectiveMeasurement>],
) -> Result<Vec<f64>> {
    let m = party_qubits.len();
    let total: usize = states.iter().map(|s| s.num_qubits()).sum();
    let mut all: Vec<usize> = party_qubits.concat();
    all.sort_unstable();
    if all != (0..total).collect::<Vec<_>>() {
        return Err(Error::arg("party qubits must partition the global register"));
    }
    for (i, ms) in measurements.iter().enumerate() {
        let d = 1usize << party_qubits[i].len();
        if let Some(bad) = ms.iter().find(|meas| meas.dim() != d) {
            return Err(Error::arg(format!(
                "party {i} holds {} qubits but a measurement has dimension {}",
                party_qubits[i].len(),
                bad.dim()
            )));
        }
    }

    // Contract the largest local systems first: the remaining operator shrinks fastest.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| party_qubits[b].len().cmp(&party_qubits[a].len()).then(a.cmp(&b)));
    let perm: Vec<usize> = order.iter().flat_map(|&p| party_qubits[p].iter().copied()).collect();
    let rho = if states.is_empty() {
        CMatrix::identity(1)
    } else {
        let mats: Vec<CMatrix> = states.iter().map(|s| s.density().clone()).collect();
        tensor_product(&mats)?.permute_qubits(&perm)
    };

    let settings: Vec<usize> = measurements.iter().map(Vec::len).collect();
    let outcomes: Vec<usize> = measurements.iter().map(|ms| ms[0].num_outcomes()).collect();
    let n_out: usize = outcomes.iter().product();
    let mut table = vec![0.0; settings.iter().product::<usize>() * n_out];
    let dims: Vec<usize> = order.iter().map(|&p| 1usize << party_qubits[p].len()).collect();

    let mut ctx = Ctx { order: &order, dims: &dims, measurements, settings: &settings, outcomes: &outcomes, table: &mut table, n_out };
    let mut x = vec![0; m];
    let mut a = vec![0; m];
    ctx.descend(0, rho.data(), rho.dim(), &mut x, &mut a);
    Ok(table)
}

struct Ctx<'a> {
    order: &'a [usize],
    dims: &'a [usize],
    measurements: &'a [Vec<ProjectiveMeasurement>],
    settings: &'a [usize],
    outcomes: &'a [usize],
    table: &'a mut [f64],
    n_out: usize,
}

impl Ctx<'_> {
    fn descend(&mut self, level: usize, rho: &[C64], dim: usize, x: &mut [usize], a: &mut [usize]) {
        if level == self.order.len() {
            let xi = mixed_radix_encode(x, self.settings.iter().copied());
            let ai = mixed_radix_encode(a, self.outcomes.iter().copied());
            self.table[xi * self.n_out + ai] = rho[0].re.max(0.0);
            return;
        }
        let party = self.order[level];
        let d = self.dims[level];
        let rest = dim / d;
        for (s, meas) in self.measurements[party].iter().enumerate() {
            x[party] = s;
            for (o, proj) in meas.projectors().iter().enumerate() {
                a[party] = o;
                let reduced = contract(rho, rest, d, proj);
                self.descend(level + 1, &reduced, rest, x, a);
            }
        }
    }
}

/// `σ[r, c] = Σ_{i,j} Π[j, i] ρ[(i, r), (j, c)]` with the party's factor leading.
fn contract(rho: &[C64], rest: usize, d: usize, proj: &CMatrix) -> Vec<C64> {
    let full = d * rest;
    let mut out = vec![C64::new(0.0, 0.0); rest * rest];
    for i in 0..d {
        for j in 0..d {
            let w = proj.get(j, i);
            if w.norm_sqr() == 0.0 {
                continue;
            }
            for r in 0..rest {
                let row = &rho[(i * rest + r) * full + j * rest..(i * rest + r) * full + j * rest + rest];
                let dst = &mut out[r * rest..(r + 1) * rest];
                for (o, v) in dst.iter_mut().zip(row) {
                    *o += w * v;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::sign_correlator;
    use crate::network::{make_topology, NetworkKind};
    use crate::quantum::{generalized_epr, projective_basis, BasisKind, Observable};
    use std::f64::consts::FRAC_PI_4;

    fn z() -> ProjectiveMeasurement {
        crate::quantum::xz_observable(0.0, 1.0).to_measurement().unwrap()
    }

    #[test]
    fn product_source_is_deterministic() {
        let t = make_topology(NetworkKind::Chain, 2).unwrap();
        let b = behavior_from_quantum(&t, &[generalized_epr(0.0).density()], &[vec![z()], vec![z()]]).unwrap();
        assert!((b.prob(&[0, 0], &[0, 0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn swapping_outcomes_are_uniform() {
        let t = make_topology(NetworkKind::Chain, 3).unwrap();
        let s = generalized_epr(FRAC_PI_4).density();
        let bell = projective_basis(BasisKind::Bell, 2).unwrap();
        let b = behavior_from_quantum(&t, &[s.clone(), s], &[vec![z()], vec![bell], vec![z()]]).unwrap();
        for o in 0..4 {
            let p: f64 = (0..2).flat_map(|a| (0..2).map(move |c| (a, c))).map(|(a, c)| b.prob(&[0, 0, 0], &[a, o, c])).sum();
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_direct_trace_on_three_qubits() {
        // Two sources [A1,A2] and [A3,A2] so that A2's qubits are not contiguous.
        let parties = vec!["A1".to_string(), "A2".into(), "A3".into()];
        let t = NetworkTopology::new(parties, vec![vec!["A1".into(), "A2".into()], vec!["A3".into(), "A2".into()]]).unwrap();
        let s1 = generalized_epr(0.3).density();
        let s2 = generalized_epr(1.1).density();
        let obs = |t: f64| crate::quantum::xz_observable(t, 1.0);
        let m2 = Observable::new(obs(0.4).matrix().kron(obs(0.9).matrix())).unwrap();
        let b = behavior_from_quantum(
            &t,
            &[s1.clone(), s2.clone()],
            &[vec![obs(0.7).to_measurement().unwrap()], vec![m2.to_measurement().unwrap()], vec![obs(1.3).to_measurement().unwrap()]],
        )
        .unwrap();
        // Global register (A1, A2 | A3, A2); the operator A1 ⊗ A2a ⊗ A3 ⊗ A2b.
        let op = tensor_product(&[obs(0.7).matrix().clone(), obs(0.4).matrix().clone(), obs(1.3).matrix().clone(), obs(0.9).matrix().clone()]).unwrap();
        let rho = s1.density().kron(s2.density());
        let direct = rho.matmul(&op).trace().re;
        assert!((sign_correlator(&b, &[0, 0, 0]).unwrap() - direct).abs() < 1e-12);
    }
}
