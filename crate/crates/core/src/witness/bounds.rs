use std::collections::BTreeSet;
use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::Family;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    AllClassical,
    HybridNs,
    HybridQuantum,
    QuantumMax,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::AllClassical => "all_classical",
            Model::HybridNs => "hybrid_ns",
            Model::HybridQuantum => "hybrid_quantum",
            Model::QuantumMax => "quantum_max",
        }
    }
}

/// One row of the bound table. `parameter` is the classical-source count ℓ,
/// except for the chain `hybrid_ns` rows where it is the isolated-party count |S|.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSpec {
    #[serde(skip)]
    pub family: Option<Family>,
    #[serde(skip)]
    pub n: usize,
    pub model: Model,
    pub parameter: Option<usize>,
    pub threshold: f64,
    pub detectable: bool,
}

fn check_n(family: Family, n: usize) -> Result<()> {
    let ok = match family {
        Family::BilocalIj | Family::LinearB3 => n == 3,
        Family::ChainIj | Family::LinearBn => n >= 3,
        Family::StarIj => n >= 1,
        Family::StarSvetlichny => n >= 2,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::arg(format!("no bounds for {family} with n = {n}")))
    }
}

/// Valid parameters for `(family, n, model)`; empty for the parameterless models.
pub fn parameter_range(family: Family, n: usize, model: Model) -> Result<Vec<usize>> {
    check_n(family, n)?;
    Ok(match (model, family) {
        (Model::AllClassical | Model::QuantumMax, _) => Vec::new(),
        (Model::HybridQuantum, Family::ChainIj) => (1..n).collect(),
        (Model::HybridNs, Family::ChainIj) => {
            let odd = if n % 2 == 1 { n } else { n - 1 };
            (0..=(odd + 1) / 2).collect()
        }
        (_, Family::StarIj) => (1..=n).collect(),
        _ => vec![1],
    })
}

fn quantum_max(family: Family, n: usize) -> f64 {
    match family {
        Family::BilocalIj | Family::ChainIj | Family::StarIj => SQRT_2,
        Family::LinearB3 | Family::LinearBn => 2.0 * SQRT_2,
        Family::StarSvetlichny => 2f64.powi(n as i32 - 1) * SQRT_2,
    }
}

fn raw_threshold(family: Family, n: usize, model: Model, p: usize) -> f64 {
    let two = |e: f64| 2f64.powf(e);
    match (family, model) {
        (_, Model::QuantumMax) => quantum_max(family, n),
        (Family::LinearB3 | Family::LinearBn, _) => 2.0,
        (Family::StarSvetlichny, Model::AllClassical) => two(n.div_ceil(2) as f64),
        (Family::StarSvetlichny, _) => two(n as f64 - 1.0),
        (_, Model::AllClassical) => 1.0,
        (Family::BilocalIj, Model::HybridQuantum) => two(0.25),
        (Family::BilocalIj, Model::HybridNs) => SQRT_2,
        (Family::StarIj, Model::HybridQuantum) => two((n - p) as f64 / (2 * n) as f64),
        (Family::StarIj, Model::HybridNs) => two((n - p) as f64 / n as f64),
        (Family::ChainIj, _) if n % 2 == 0 => match model {
            Model::HybridQuantum if p == 1 => SQRT_2,
            Model::HybridQuantum => raw_threshold(family, n - 1, model, p - 1),
            _ => raw_threshold(family, n - 1, model, p),
        },
        (Family::ChainIj, Model::HybridQuantum) => {
            if chain_qnn_detectable(n, p) {
                two((n - 1) as f64 / (2 * (n + 1)) as f64)
            } else {
                SQRT_2
            }
        }
        (Family::ChainIj, Model::HybridNs) => two(1.0 - 2.0 * p as f64 / (n + 1) as f64),
    }
}

/// Whether `l` classical sources in an odd `n`-party chain bring the hybrid
/// quantum bound below √2: more than half of them, or any one when `n = 3`
/// (the bilocal case).
pub(crate) fn chain_qnn_detectable(n: usize, l: usize) -> bool {
    l >= 1 && (2 * l > n || n == 3)
}

/// Closed-form threshold of `model` for the witness `family` on `n` parties
/// (bilocal, chains, linear) or `n` branches (stars).
pub fn bound_lookup(family: Family, n: usize, model: Model, parameter: Option<usize>) -> Result<BoundSpec> {
    let range = parameter_range(family, n, model)?;
    let p = match (parameter, range.is_empty()) {
        (None, true) => 0,
        (Some(p), false) if range.contains(&p) => p,
        (Some(p), true) => return Err(Error::arg(format!("{} takes no parameter, got {p}", model.name()))),
        (None, false) => return Err(Error::arg(format!("{} for {family} needs a parameter", model.name()))),
        (Some(p), false) => {
            return Err(Error::arg(format!("parameter {p} outside {:?} for {} of {family}", range, model.name())))
        }
    };
    let threshold = raw_threshold(family, n, model, p);
    let detectable = match model {
        Model::QuantumMax => true,
        _ => threshold < quantum_max(family, n),
    };
    Ok(BoundSpec { family: Some(family), n, model, parameter, threshold, detectable })
}

/// Every bound of `family` at size `n`, ordered by model then parameter.
pub fn bound_table(family: Family, n: usize) -> Result<Vec<BoundSpec>> {
    let mut out = Vec::new();
    for model in [Model::AllClassical, Model::HybridQuantum, Model::HybridNs, Model::QuantumMax] {
        let range = parameter_range(family, n, model)?;
        if range.is_empty() {
            out.push(bound_lookup(family, n, model, None)?);
        }
        for p in range {
            out.push(bound_lookup(family, n, model, Some(p))?);
        }
    }
    Ok(out)
}

/// Odd-position parties (1-based) of an `n`-party chain whose sources are all
/// classical, given the 1-based classical source positions.
pub fn isolated_party_count(n: usize, classical_positions: &BTreeSet<usize>) -> usize {
    let m = n.saturating_sub(1);
    (1..=n)
        .step_by(2)
        .filter(|&j| {
            let inc: Vec<usize> = [j.wrapping_sub(1), j].into_iter().filter(|&k| k >= 1 && k <= m).collect();
            !inc.is_empty() && inc.iter().all(|k| classical_positions.contains(k))
        })
        .count()
}

/// Fewest isolated odd parties over all placements of `l` classical sources
/// in an odd `n`-party chain.
pub fn min_isolated_parties(n: usize, l: usize) -> usize {
    l.saturating_sub(n.saturating_sub(3) / 2)
}
