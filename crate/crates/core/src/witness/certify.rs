use std::fmt;

use serde::{Serialize, Serializer};

use super::bounds::{bound_lookup, chain_qnn_detectable, min_isolated_parties, Model};
use super::{Family, WitnessValue};
use crate::{tolerance, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClaimKind {
    /// Not reproducible with classical sources only.
    Nn,
    /// Full quantum network nonlocality (ℓ = 1 quantum).
    Fqnn,
    /// Full network nonlocality (ℓ = 1 no-signaling).
    Fnn,
    /// ℓ-QNN with ℓ >= 2.
    Qnn(usize),
    /// ℓ-NN with ℓ >= 2.
    LevelNn(usize),
}

impl ClaimKind {
    fn quantum(l: usize) -> Self {
        if l == 1 {
            ClaimKind::Fqnn
        } else {
            ClaimKind::Qnn(l)
        }
    }

    fn nonsignaling(l: usize) -> Self {
        if l == 1 {
            ClaimKind::Fnn
        } else {
            ClaimKind::LevelNn(l)
        }
    }
}

impl fmt::Display for ClaimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClaimKind::Nn => f.write_str("NN"),
            ClaimKind::Fqnn => f.write_str("FQNN"),
            ClaimKind::Fnn => f.write_str("FNN"),
            ClaimKind::Qnn(l) => write!(f, "{l}-QNN"),
            ClaimKind::LevelNn(l) => write!(f, "{l}-NN"),
        }
    }
}

impl Serialize for ClaimKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationClaim {
    pub claim: ClaimKind,
    /// Number of sources assumed classical (all of them for NN).
    pub level: usize,
    pub threshold: f64,
    pub margin: f64,
}

/// Every claim whose threshold the witness value exceeds by more than the
/// global tolerance.
pub fn certify(witness: &WitnessValue) -> Result<Vec<CertificationClaim>> {
    let (family, n, value) = (witness.family, witness.n, witness.value);
    let mut claims = Vec::new();
    let tol = tolerance();
    let mut push = |claim: ClaimKind, level: usize, threshold: f64| {
        if value - threshold > tol {
            claims.push(CertificationClaim { claim, level, threshold, margin: value - threshold });
        }
    };
    let sources = family.num_sources(n);
    push(ClaimKind::Nn, sources, bound_lookup(family, n, Model::AllClassical, None)?.threshold);

    let levels: Vec<usize> = match family {
        Family::ChainIj | Family::StarIj => (1..=sources).collect(),
        _ => vec![1],
    };
    for &l in &levels {
        if family == Family::ChainIj {
            // Odd size of the chain the bounds refer to, and ℓ inside it.
            let (odd, lo) = if n % 2 == 1 { (n, l) } else { (n - 1, l.saturating_sub(1)) };
            if !chain_qnn_detectable(odd, lo) {
                continue;
            }
        }
        push(ClaimKind::quantum(l), l, bound_lookup(family, n, Model::HybridQuantum, Some(l))?.threshold);
    }
    for &l in &levels {
        let threshold = match family {
            Family::ChainIj => {
                let (odd, lo) = if n % 2 == 1 { (n, l) } else { (n - 1, l.saturating_sub(1)) };
                if lo == 0 || 4 * lo < 3 * odd - 1 {
                    continue;
                }
                let s = min_isolated_parties(odd, lo);
                bound_lookup(family, n, Model::HybridNs, Some(s))?.threshold
            }
            _ => bound_lookup(family, n, Model::HybridNs, Some(l))?.threshold,
        };
        push(ClaimKind::nonsignaling(l), l, threshold);
    }
    Ok(claims)
}
