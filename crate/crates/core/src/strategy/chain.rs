use serde::{Deserialize, Serialize};

use super::{base, finish_nonlinear, meas, pauli_obs, xz_pair, CanonicalFamily, CanonicalStrategy, SourceModel};
use crate::network::{make_topology, NetworkKind};
use crate::quantum::{pauli, projective_basis, xz_observable, BasisKind, ProjectiveMeasurement};
use crate::witness::Family;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainVariant {
    /// Nonlinear I–J witness, odd party count.
    Ij,
    /// Linear witness with four-outcome middle parties.
    Bn,
}

pub(super) fn build_chain(variant: ChainVariant, sources: Vec<SourceModel>, vartheta: Option<f64>) -> Result<CanonicalStrategy> {
    let n = sources.len() + 1;
    if n < 3 {
        return Err(Error::arg(format!("canonical chains need n >= 3, got {n}")));
    }
    match variant {
        ChainVariant::Ij => {
            if n % 2 == 0 {
                return Err(Error::arg(format!("the nonlinear chain witness needs an odd party count, got {n}")));
            }
            let s = base(CanonicalFamily::Chain(variant), make_topology(NetworkKind::Chain, n)?, sources);
            let mut s = finish_nonlinear(s, Family::ChainIj, vartheta)?;
            s.measurements = ij_measurements(n, s.varthetas[0]);
            Ok(s)
        }
        ChainVariant::Bn => {
            let mut s = base(CanonicalFamily::Chain(variant), make_topology(NetworkKind::Chain, n)?, sources);
            let thetas: Vec<f64> = s
                .sources
                .iter()
                .map(|m| match *m {
                    SourceModel::Quantum { theta, .. } => theta,
                    SourceModel::Classical => 0.0,
                })
                .collect();
            let branches = bn_branches(&thetas);
            let mut p = [0.0; 2];
            let mut q = [0.0; 2];
            for b in &branches {
                p[b.class()] += b.prob;
                q[b.class()] += b.prob * b.coherence.abs();
            }
            let angles = match vartheta {
                Some(t) => [t, t],
                None => [q[0].atan2(p[0]), q[1].atan2(p[1])],
            };
            if s.sources.iter().all(SourceModel::is_pure) {
                let v: f64 = branches
                    .iter()
                    .map(|b| 2.0 * b.prob * (angles[b.class()].cos() + angles[b.class()].sin() * b.coherence.abs()))
                    .sum();
                s.predicted_value = Some(v);
            }
            s.varthetas = angles.to_vec();
            s.vartheta_override = vartheta;
            s.measurements = bn_measurements(n, angles)?;
            Ok(s)
        }
    }
}

fn ij_measurements(n: usize, t: f64) -> Vec<Vec<ProjectiveMeasurement>> {
    let (z, x, id) = (pauli::z(), pauli::x(), pauli::identity());
    let pair = |a: &crate::quantum::CMatrix, b: &crate::quantum::CMatrix| a.kron(b);
    (1..=n)
        .map(|j| {
            if j == 1 || j == n {
                xz_pair(t)
            } else if j % 2 == 1 {
                let zi = pair(&z, &id).scale_real(t.cos());
                let xx = pair(&x, &x).scale_real(t.sin());
                vec![meas(&pauli_obs(&zi + &xx)), meas(&pauli_obs(&zi - &xx))]
            } else {
                let first = if j == 2 { pair(&z, &z) } else { pair(&id, &z) };
                vec![meas(&pauli_obs(first)), meas(&pauli_obs(pair(&x, &x)))]
            }
        })
        .collect()
}

/// Bell measurement with labels `00 ↦ Φ⁺, 01 ↦ Ψ⁺, 10 ↦ Ψ⁻, 11 ↦ Φ⁻`: the
/// second bit says whether the parity flips, the first whether the phase does,
/// so label XOR composes the Pauli corrections along the chain.
pub fn xor_bell_measurement() -> Result<ProjectiveMeasurement> {
    let bell = projective_basis(BasisKind::Bell, 2)?;
    let p = bell.projectors();
    ProjectiveMeasurement::new(
        vec![p[0].clone(), p[2].clone(), p[3].clone(), p[1].clone()],
        ["00", "01", "10", "11"].iter().map(|s| s.to_string()).collect(),
    )
}

fn bn_measurements(n: usize, angles: [f64; 2]) -> Result<Vec<Vec<ProjectiveMeasurement>>> {
    let first = vec![meas(&pauli_obs(pauli::z())), meas(&pauli_obs(pauli::x()))];
    let mut out = vec![first];
    for _ in 2..n {
        out.push(vec![xor_bell_measurement()?]);
    }
    // Settings 2 and 3 point along −σ_z so that parity-flipped branches score positively.
    let last = vec![
        meas(&xz_observable(angles[0], 1.0)),
        meas(&xz_observable(angles[0], -1.0)),
        meas(&xz_observable(std::f64::consts::PI - angles[1], 1.0)),
        meas(&xz_observable(std::f64::consts::PI - angles[1], -1.0)),
    ];
    out.push(last);
    Ok(out)
}

/// End-party state after one outcome tuple of the middle parties.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Branch {
    /// XOR of the middle outcome labels, as the integer `2s + t`.
    pub label: usize,
    pub prob: f64,
    /// `⟨σ_x ⊗ σ_x⟩` of the collapsed end state; its sign is `(−1)^s`.
    pub coherence: f64,
}

impl Branch {
    /// 0 for parity-preserving labels (`00`, `11`), 1 otherwise.
    pub fn class(&self) -> usize {
        ((self.label >> 1) ^ self.label) & 1
    }
}

/// Enumerates all middle outcome tuples of a pure-state chain.
pub(crate) fn bn_branches(thetas: &[f64]) -> Vec<Branch> {
    let middles = thetas.len() - 1;
    let alpha = |t: usize, bit: usize| if bit == 0 { thetas[t].cos() } else { thetas[t].sin() };
    let mut out = Vec::with_capacity(1 << (2 * middles));
    for tuple in 0..(1usize << (2 * middles)) {
        let labels: Vec<usize> = (0..middles).map(|k| tuple >> (2 * (middles - 1 - k)) & 3).collect();
        let amp = |first: usize| {
            let mut bit = first;
            let mut a = alpha(0, bit);
            for (k, &l) in labels.iter().enumerate() {
                let (minus, flip) = (l >> 1, (l ^ (l >> 1)) & 1);
                if minus == 1 && bit == 1 {
                    a = -a;
                }
                bit ^= flip;
                a *= alpha(k + 1, bit) * std::f64::consts::FRAC_1_SQRT_2;
            }
            a
        };
        let (u0, u1) = (amp(0), amp(1));
        let prob = u0 * u0 + u1 * u1;
        let coherence = if prob > 0.0 { 2.0 * u0 * u1 / prob } else { 0.0 };
        out.push(Branch { label: labels.iter().fold(0, |acc, l| acc ^ l), prob, coherence });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    #[test]
    fn ij_prediction_all_maximal() {
        let s = super::super::canonical_chain(&[FRAC_PI_4; 4], ChainVariant::Ij).unwrap();
        assert!((s.predicted_value.unwrap() - SQRT_2).abs() < 1e-12);
        assert!(super::super::canonical_chain(&[FRAC_PI_4; 3], ChainVariant::Ij).is_err());
    }

    #[test]
    fn branches_are_normalized_with_aligned_signs() {
        let br = bn_branches(&[0.3, 0.7, 1.1]);
        let total: f64 = br.iter().map(|b| b.prob).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for b in &br {
            let sign = if b.label >> 1 == 1 { -1.0 } else { 1.0 };
            assert!(sign * b.coherence >= 0.0);
        }
    }

    #[test]
    fn bn_prediction_all_maximal() {
        let s = super::super::canonical_chain(&[FRAC_PI_4; 3], ChainVariant::Bn).unwrap();
        assert!((s.predicted_value.unwrap() - 2.0 * SQRT_2).abs() < 1e-12);
    }
}
