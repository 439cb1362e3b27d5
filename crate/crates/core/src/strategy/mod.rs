//! Canonical violating strategies and bound-saturating no-signaling strategies.

mod chain;
mod pr;
mod svetlichny;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::behavior::{behavior_from_quantum, Behavior, HybridStrategy, LocalAction, PartyResponse, SourceKind};
use crate::network::{make_topology, NetworkKind, NetworkTopology};
use crate::quantum::{
    apply_werner_noise, generalized_epr, pauli, projective_basis, xz_observable, BasisKind, CMatrix, MixedState,
    Observable, ProjectiveMeasurement,
};
use crate::witness::Family;
use crate::{Error, Result};

pub use chain::ChainVariant;
pub use pr::pr_chain_strategy;
pub use svetlichny::{svetlichny_phase, SvetlichnyPhase};

/// What one source emits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SourceModel {
    /// `v |φ_θ⟩⟨φ_θ| + (1 − v) I/4` with `|φ_θ⟩ = cos θ|00⟩ + sin θ|11⟩`.
    Quantum {
        theta: f64,
        #[serde(default = "one")]
        visibility: f64,
    },
    /// A shared uniform bit, modelled as the dephased state `(|00⟩⟨00| + |11⟩⟨11|)/2`.
    Classical,
}

fn one() -> f64 {
    1.0
}

impl SourceModel {
    pub fn pure(theta: f64) -> Self {
        SourceModel::Quantum { theta, visibility: 1.0 }
    }

    pub fn state(&self) -> Result<MixedState> {
        match *self {
            SourceModel::Quantum { theta, visibility } => apply_werner_noise(&generalized_epr(theta), visibility),
            SourceModel::Classical => {
                let mut d = CMatrix::zeros(4);
                d.set(0, 0, 0.5.into());
                d.set(3, 3, 0.5.into());
                MixedState::new(d)
            }
        }
    }

    /// `⟨σ_z ⊗ σ_z⟩` of the emitted state.
    pub fn zz(&self) -> f64 {
        match *self {
            SourceModel::Quantum { visibility, .. } => visibility,
            SourceModel::Classical => 1.0,
        }
    }

    /// `⟨σ_x ⊗ σ_x⟩` of the emitted state.
    pub fn xx(&self) -> f64 {
        match *self {
            SourceModel::Quantum { theta, visibility } => visibility * (2.0 * theta).sin(),
            SourceModel::Classical => 0.0,
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(*self, SourceModel::Quantum { visibility, .. } if visibility == 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SourceModel::Quantum { theta, visibility } => {
                if !theta.is_finite() {
                    return Err(Error::arg("source angle must be finite"));
                }
                if !(0.0..=1.0).contains(&visibility) {
                    return Err(Error::arg(format!("visibility {visibility} outside [0, 1]")));
                }
                Ok(())
            }
            SourceModel::Classical => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalFamily {
    Bilocal,
    LinearB3,
    Chain(ChainVariant),
    Star { linear: bool },
}

/// A fully specified quantum strategy together with its closed-form prediction.
#[derive(Debug, Clone)]
pub struct CanonicalStrategy {
    pub family: CanonicalFamily,
    pub topology: NetworkTopology,
    pub sources: Vec<SourceModel>,
    /// Measurement angle(s): `[ϑ]` for the nonlinear families and the
    /// three-party linear chain, `[ϑ₀, ϑ₁]` for longer linear chains, and
    /// `[ϑ_ī]` per central outcome for the linear star.
    pub varthetas: Vec<f64>,
    /// Common x–y rotation of the linear star's branch observables per outcome.
    pub offsets: Vec<f64>,
    /// `conditioning[ī][j] = (setting for x_j = 0, setting for x_j = 1)`; linear star only.
    pub conditioning: Vec<Vec<(usize, usize)>>,
    pub measurements: Vec<Vec<ProjectiveMeasurement>>,
    /// Closed-form witness value, when one is known for these sources.
    pub predicted_value: Option<f64>,
    vartheta_override: Option<f64>,
}

impl CanonicalStrategy {
    pub fn n(&self) -> usize {
        match self.family {
            CanonicalFamily::Star { .. } => self.sources.len(),
            _ => self.sources.len() + 1,
        }
    }

    pub fn witness_family(&self) -> Family {
        match self.family {
            CanonicalFamily::Bilocal => Family::BilocalIj,
            CanonicalFamily::LinearB3 => Family::LinearB3,
            CanonicalFamily::Chain(ChainVariant::Ij) => Family::ChainIj,
            CanonicalFamily::Chain(ChainVariant::Bn) => Family::LinearBn,
            CanonicalFamily::Star { linear: false } => Family::StarIj,
            CanonicalFamily::Star { linear: true } => Family::StarSvetlichny,
        }
    }

    pub fn states(&self) -> Result<Vec<MixedState>> {
        self.sources.iter().map(SourceModel::state).collect()
    }

    /// Born-rule behavior.
    pub fn behavior(&self) -> Result<Behavior> {
        behavior_from_quantum(&self.topology, &self.states()?, &self.measurements)
    }

    /// The same strategy phrased as a hybrid strategy with only quantum sources.
    pub fn hybrid(&self) -> Result<HybridStrategy> {
        let sources = self.states()?.into_iter().map(SourceKind::Quantum).collect();
        let parties = self
            .measurements
            .iter()
            .map(|ms| {
                let actions: BTreeMap<(usize, Vec<usize>), LocalAction> = ms
                    .iter()
                    .enumerate()
                    .map(|(x, m)| {
                        let act = LocalAction { measurement: Some(m.clone()), box_inputs: vec![], outputs: (0..m.num_outcomes()).collect() };
                        ((x, vec![]), act)
                    })
                    .collect();
                PartyResponse { num_inputs: ms.len(), num_outputs: ms[0].num_outcomes(), actions }
            })
            .collect();
        Ok(HybridStrategy { topology: self.topology.clone(), sources, parties })
    }

    /// Rebuilds with new sources; a caller-fixed ϑ is kept, otherwise the
    /// optimal one for the new sources is used.
    pub fn with_sources(&self, sources: Vec<SourceModel>) -> Result<Self> {
        if sources.len() != self.sources.len() {
            return Err(Error::arg(format!("expected {} sources, got {}", self.sources.len(), sources.len())));
        }
        build(self.family, sources, self.vartheta_override)
    }

    /// Rebuilds with Werner noise of the given visibility on each quantum source.
    pub fn with_visibilities(&self, visibilities: &[f64]) -> Result<Self> {
        if visibilities.len() != self.sources.len() {
            return Err(Error::arg(format!("expected {} visibilities, got {}", self.sources.len(), visibilities.len())));
        }
        let sources = self
            .sources
            .iter()
            .zip(visibilities)
            .map(|(s, &v)| match *s {
                SourceModel::Quantum { theta, .. } => SourceModel::Quantum { theta, visibility: v },
                SourceModel::Classical => SourceModel::Classical,
            })
            .collect();
        self.with_sources(sources)
    }
}

/// Assembles the canonical strategy of `family` for the given sources.
pub fn build(family: CanonicalFamily, sources: Vec<SourceModel>, vartheta: Option<f64>) -> Result<CanonicalStrategy> {
    for s in &sources {
        s.validate()?;
    }
    if let Some(t) = vartheta {
        if !t.is_finite() {
            return Err(Error::arg("measurement angle must be finite"));
        }
    }
    match family {
        CanonicalFamily::Bilocal => build_bilocal(sources, vartheta),
        CanonicalFamily::LinearB3 => build_b3(sources, vartheta),
        CanonicalFamily::Chain(v) => chain::build_chain(v, sources, vartheta),
        CanonicalFamily::Star { linear: false } => build_star(sources, vartheta),
        CanonicalFamily::Star { linear: true } => svetlichny::build_linear_star(sources),
    }
}

pub(crate) fn base(family: CanonicalFamily, topology: NetworkTopology, sources: Vec<SourceModel>) -> CanonicalStrategy {
    CanonicalStrategy {
        family,
        topology,
        sources,
        varthetas: vec![],
        offsets: vec![],
        conditioning: vec![],
        measurements: vec![],
        predicted_value: None,
        vartheta_override: None,
    }
}

pub(crate) fn meas(o: &Observable) -> ProjectiveMeasurement {
    o.to_measurement().expect("a ±1-valued observable yields a projective measurement")
}

/// `A_x = cos ϑ σ_z + (−1)^x sin ϑ σ_x` for `x = 0, 1`.
pub(crate) fn xz_pair(vartheta: f64) -> Vec<ProjectiveMeasurement> {
    vec![meas(&xz_observable(vartheta, 1.0)), meas(&xz_observable(vartheta, -1.0))]
}

pub(crate) fn pauli_obs(m: CMatrix) -> Observable {
    Observable::new(m).expect("Pauli products are Hermitian")
}

/// Bilocal chain with endpoint observables at angle ϑ and a Bell-basis middle party.
pub fn canonical_bilocal(theta1: f64, theta2: f64, vartheta: Option<f64>) -> Result<CanonicalStrategy> {
    build(CanonicalFamily::Bilocal, vec![SourceModel::pure(theta1), SourceModel::pure(theta2)], vartheta)
}

/// Three-party linear chain: Alice `cos ϑ σ_z ± sin ϑ σ_x`, Bob in the Bell
/// basis, Charlie `σ_z, σ_x, −σ_z`.
pub fn canonical_b3(theta1: f64, theta2: f64, vartheta: Option<f64>) -> Result<CanonicalStrategy> {
    build(CanonicalFamily::LinearB3, vec![SourceModel::pure(theta1), SourceModel::pure(theta2)], vartheta)
}

/// Chain of `thetas.len() + 1` parties.
pub fn canonical_chain(thetas: &[f64], variant: ChainVariant) -> Result<CanonicalStrategy> {
    build(CanonicalFamily::Chain(variant), thetas.iter().map(|&t| SourceModel::pure(t)).collect(), None)
}

/// Star with `thetas.len()` branches; `linear` selects the Svetlichny-type construction.
pub fn canonical_star(thetas: &[f64], vartheta: Option<f64>, linear: bool) -> Result<CanonicalStrategy> {
    let v = if linear { None } else { vartheta };
    build(CanonicalFamily::Star { linear }, thetas.iter().map(|&t| SourceModel::pure(t)).collect(), v)
}

/// The predicted nonlinear value is `a |cos ϑ| + b |sin ϑ|`; returns `(a, b)`.
fn nonlinear_coefficients(family: Family, sources: &[SourceModel]) -> Result<(f64, f64)> {
    let prod = |f: &dyn Fn(&SourceModel) -> f64, it: &mut dyn Iterator<Item = &SourceModel>| it.map(f).product::<f64>();
    match family {
        Family::BilocalIj => {
            if sources.len() != 2 {
                return Err(Error::arg("the bilocal network has two sources"));
            }
            let a = prod(&|s| s.zz(), &mut sources.iter()).abs().sqrt();
            let b = prod(&|s| s.xx(), &mut sources.iter()).abs().sqrt();
            Ok((a, b))
        }
        Family::StarIj => {
            if sources.is_empty() {
                return Err(Error::arg("a star has at least one source"));
            }
            let k = sources.len() as f64;
            let a = prod(&|s| s.zz(), &mut sources.iter()).abs().powf(1.0 / k);
            let b = prod(&|s| s.xx(), &mut sources.iter()).abs().powf(1.0 / k);
            Ok((a, b))
        }
        Family::ChainIj => {
            let n = sources.len() + 1;
            if n < 3 || n % 2 == 0 {
                return Err(Error::arg(format!("the chain witness needs an odd party count >= 3, got {n}")));
            }
            let k = ((n + 1) / 2) as f64;
            // I involves source 1 and every source to the right of an even party.
            let a = prod(&|s| s.zz(), &mut sources.iter().enumerate().filter(|(t, _)| *t == 0 || (t + 1) % 2 == 0).map(|p| p.1))
                .abs()
                .powf(1.0 / k);
            let b = prod(&|s| s.xx(), &mut sources.iter()).abs().powf(1.0 / k);
            Ok((a, b))
        }
        other => Err(Error::arg(format!("no optimal-angle rule for {}", other.name()))),
    }
}

/// Angle maximizing the predicted value of a nonlinear witness under Werner
/// noise of the given visibilities.
pub fn optimal_vartheta(family: Family, thetas: &[f64], visibilities: &[f64]) -> Result<f64> {
    if thetas.len() != visibilities.len() {
        return Err(Error::arg("one visibility per source angle is required"));
    }
    let sources: Vec<SourceModel> =
        thetas.iter().zip(visibilities).map(|(&theta, &visibility)| SourceModel::Quantum { theta, visibility }).collect();
    for s in &sources {
        s.validate()?;
    }
    let (a, b) = nonlinear_coefficients(family, &sources)?;
    Ok(b.atan2(a))
}

fn finish_nonlinear(mut s: CanonicalStrategy, family: Family, vartheta: Option<f64>) -> Result<CanonicalStrategy> {
    let (a, b) = nonlinear_coefficients(family, &s.sources)?;
    let t = vartheta.unwrap_or_else(|| b.atan2(a));
    s.predicted_value = Some(a * t.cos().abs() + b * t.sin().abs());
    s.varthetas = vec![t];
    s.vartheta_override = vartheta;
    Ok(s)
}

fn build_bilocal(sources: Vec<SourceModel>, vartheta: Option<f64>) -> Result<CanonicalStrategy> {
    if sources.len() != 2 {
        return Err(Error::arg("the bilocal network has two sources"));
    }
    let mut s = base(CanonicalFamily::Bilocal, make_topology(NetworkKind::Chain, 3)?, sources);
    s = finish_nonlinear(s, Family::BilocalIj, vartheta)?;
    let t = s.varthetas[0];
    s.measurements = vec![xz_pair(t), vec![projective_basis(BasisKind::Bell, 2)?], xz_pair(t)];
    Ok(s)
}

fn build_b3(sources: Vec<SourceModel>, vartheta: Option<f64>) -> Result<CanonicalStrategy> {
    if sources.len() != 2 {
        return Err(Error::arg("the three-party linear chain has two sources"));
    }
    let mut s = base(CanonicalFamily::LinearB3, make_topology(NetworkKind::Chain, 3)?, sources);
    let (zz, xx) = (s.sources[0].zz() * s.sources[1].zz(), s.sources[0].xx() * s.sources[1].xx());
    let t = vartheta.unwrap_or_else(|| xx.atan2(zz));
    s.varthetas = vec![t];
    s.vartheta_override = vartheta;
    if s.sources.iter().all(SourceModel::is_pure) {
        s.predicted_value = Some(2.0 * (t.cos() + t.sin() * xx));
    }
    let c = vec![meas(&pauli_obs(pauli::z())), meas(&pauli_obs(pauli::x())), meas(&pauli_obs(pauli::z().scale_real(-1.0)))];
    s.measurements = vec![xz_pair(t), vec![projective_basis(BasisKind::Bell, 2)?], c];
    Ok(s)
}

fn build_star(sources: Vec<SourceModel>, vartheta: Option<f64>) -> Result<CanonicalStrategy> {
    let n = sources.len();
    if n == 0 {
        return Err(Error::arg("a star has at least one branch"));
    }
    let mut s = base(CanonicalFamily::Star { linear: false }, make_topology(NetworkKind::Star, n)?, sources);
    s = finish_nonlinear(s, Family::StarIj, vartheta)?;
    let t = s.varthetas[0];
    let zs = crate::quantum::tensor_product(&vec![pauli::z(); n])?;
    let xs = crate::quantum::tensor_product(&vec![pauli::x(); n])?;
    let center = vec![meas(&pauli_obs(zs)), meas(&pauli_obs(xs))];
    s.measurements = (0..n).map(|_| xz_pair(t)).chain(std::iter::once(center)).collect();
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    #[test]
    fn bilocal_prediction_special_cases() {
        let s = canonical_bilocal(FRAC_PI_4, FRAC_PI_4, None).unwrap();
        assert!((s.varthetas[0] - FRAC_PI_4).abs() < 1e-15);
        assert!((s.predicted_value.unwrap() - SQRT_2).abs() < 1e-15);
        let half = 0.5f64.asin() / 2.0;
        let s = canonical_bilocal(half, FRAC_PI_4, None).unwrap();
        assert!((s.predicted_value.unwrap() - 1.5f64.sqrt()).abs() < 1e-12);
        let s = canonical_bilocal(1e-9, FRAC_PI_4, None).unwrap();
        assert!((s.predicted_value.unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn optimal_angle_rules() {
        let t = optimal_vartheta(Family::BilocalIj, &[FRAC_PI_4, FRAC_PI_4], &[1.0, 1.0]).unwrap();
        assert!((t - FRAC_PI_4).abs() < 1e-15);
        let t = optimal_vartheta(Family::StarIj, &[FRAC_PI_4; 3], &[0.7; 3]).unwrap();
        assert!((t - FRAC_PI_4).abs() < 1e-12);
        // sin2θ₁ sin2θ₂ = √2 − 1 gives cos ϑ = 2^(−1/4).
        let th = (SQRT_2 - 1.0).asin() / 2.0;
        let t = optimal_vartheta(Family::BilocalIj, &[th, FRAC_PI_4], &[1.0, 1.0]).unwrap();
        assert!((t.cos() - 2f64.powf(-0.25)).abs() < 1e-12);
        assert!(optimal_vartheta(Family::LinearB3, &[0.3, 0.3], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn unit_visibility_matches_pure_sources() {
        let s = canonical_star(&[0.3, 0.6, 1.0], None, false).unwrap();
        let w = s.with_visibilities(&[1.0, 1.0, 1.0]).unwrap();
        assert!(s.behavior().unwrap().max_abs_diff(&w.behavior().unwrap()) < 1e-12);
        assert!(s.with_visibilities(&[1.2, 1.0, 1.0]).is_err());
    }

    #[test]
    fn source_model_json() {
        let q: SourceModel = serde_json::from_str(r#"{"kind":"quantum","theta":0.5}"#).unwrap();
        assert_eq!(q, SourceModel::pure(0.5));
        let c: SourceModel = serde_json::from_str(r#"{"kind":"classical"}"#).unwrap();
        assert_eq!(c, SourceModel::Classical);
    }
}
