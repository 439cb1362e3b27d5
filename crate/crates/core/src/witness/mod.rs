//! Witness evaluation, the bound table and certification.

mod bounds;
mod certify;
mod oracle;
mod svetlichny;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::behavior::{correlator, marginalize_behavior, sign_correlator, Behavior, Weight};
use crate::{Error, Result};

pub use bounds::{bound_lookup, bound_table, isolated_party_count, min_isolated_parties, BoundSpec, Model};
pub use certify::{certify, ClaimKind, CertificationClaim};
pub use oracle::{brute_force_classical_max, OracleConfig};
pub use svetlichny::{
    canonical_conditioning, eval_star_svetlichny, eval_star_svetlichny_on, svetlichny_coefficients, SvetlichnyLayout,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    BilocalIj,
    ChainIj,
    StarIj,
    LinearB3,
    LinearBn,
    StarSvetlichny,
}

impl Family {
    pub const ALL: [Family; 6] =
        [Family::BilocalIj, Family::ChainIj, Family::StarIj, Family::LinearB3, Family::LinearBn, Family::StarSvetlichny];

    pub fn name(&self) -> &'static str {
        match self {
            Family::BilocalIj => "bilocal_ij",
            Family::ChainIj => "chain_ij",
            Family::StarIj => "star_ij",
            Family::LinearB3 => "linear_b3",
            Family::LinearBn => "linear_bn",
            Family::StarSvetlichny => "star_svetlichny",
        }
    }

    /// Number of sources in the network the witness is written for.
    pub fn num_sources(&self, n: usize) -> usize {
        match self {
            Family::BilocalIj | Family::LinearB3 => 2,
            Family::ChainIj | Family::LinearBn => n.saturating_sub(1),
            Family::StarIj | Family::StarSvetlichny => n,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Family::LinearB3 | Family::LinearBn | Family::StarSvetlichny)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL.iter().copied().find(|f| f.name() == s).ok_or_else(|| Error::arg(format!("unknown witness family {s}")))
    }
}

/// A witness evaluated on one behavior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessValue {
    pub family: Family,
    pub n: usize,
    pub value: f64,
    pub components: BTreeMap<String, f64>,
}

impl WitnessValue {
    /// The value rebuilt from the components alone.
    pub fn recompute(&self) -> f64 {
        let c = |k: &str| self.components.get(k).copied().unwrap_or(0.0);
        let ij = |i: f64, j: f64, p: f64| i.abs().powf(p) + j.abs().powf(p);
        match self.family {
            Family::BilocalIj => ij(c("I"), c("J"), 0.5),
            Family::StarIj => ij(c("I"), c("J"), 1.0 / self.n as f64),
            Family::ChainIj if self.n % 2 == 1 => ij(c("I"), c("J"), 2.0 / (self.n + 1) as f64),
            Family::ChainIj => {
                let p = 2.0 / self.n as f64;
                ij(c("I_without_first"), c("J_without_first"), p).min(ij(c("I_without_last"), c("J_without_last"), p))
            }
            Family::LinearB3 | Family::LinearBn => {
                self.components.iter().filter(|(k, _)| k.starts_with("block_")).map(|(_, v)| v).sum()
            }
            Family::StarSvetlichny => self
                .components
                .iter()
                .filter_map(|(k, p)| k.strip_prefix("p_").map(|label| p * c(&format!("s_{label}"))))
                .sum(),
        }
    }
}

fn expect_shape(behavior: &Behavior, shape: &[(usize, usize)], what: &str) -> Result<()> {
    let got = behavior.scenario().shape();
    if got != shape {
        return Err(Error::mismatch(format!("{what} expects (inputs, outputs) {shape:?}, behavior has {got:?}")));
    }
    Ok(())
}

/// Bilocal I–J witness on the scenario (2,2)–(1,4)–(2,2).
///
/// `I = ¼ Σ A_x B⁰ C_z`, `J = ¼ Σ (−1)^{x+z} A_x B¹ C_z` where `B^y` reads bit
/// `y` of Bob's two-bit output; value `√|I| + √|J|`.
pub fn eval_bilocal_ij(behavior: &Behavior) -> Result<WitnessValue> {
    expect_shape(behavior, &[(2, 2), (1, 4), (2, 2)], "bilocal_ij")?;
    let (mut i, mut j) = (0.0, 0.0);
    for x in 0..2 {
        for z in 0..2 {
            let e0 = correlator(behavior, &[x, 0, z], &[Weight::Sign, Weight::BitSign(0), Weight::Sign])?;
            let e1 = correlator(behavior, &[x, 0, z], &[Weight::Sign, Weight::BitSign(1), Weight::Sign])?;
            i += e0 / 4.0;
            j += if (x + z) % 2 == 0 { e1 } else { -e1 } / 4.0;
        }
    }
    Ok(ij_value(Family::BilocalIj, 3, i, j, 0.5))
}

fn ij_value(family: Family, n: usize, i: f64, j: f64, power: f64) -> WitnessValue {
    let components = BTreeMap::from([("I".to_string(), i), ("J".to_string(), j)]);
    WitnessValue { family, n, value: i.abs().powf(power) + j.abs().powf(power), components }
}

/// Chain I–J witness for an odd number `n` of dichotomic two-input parties.
///
/// `I = ∏_{odd} A⁺ ∏_{even} A_{x=0}`, `J = ∏_{odd} A⁻ ∏_{even} A_{x=1}` with
/// `A^± = (A_0 ± A_1)/2`; value `|I|^{2/(n+1)} + |J|^{2/(n+1)}`.
pub fn eval_chain_ij(behavior: &Behavior, n: usize) -> Result<WitnessValue> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::arg(format!("the chain witness needs an odd n >= 3, got {n}; even chains go through eval_chain_ij_even")));
    }
    expect_shape(behavior, &vec![(2, 2); n], "chain_ij")?;
    let (i, j) = chain_ij_parts(behavior, n)?;
    Ok(ij_value(Family::ChainIj, n, i, j, 2.0 / (n + 1) as f64))
}

fn chain_ij_parts(behavior: &Behavior, n: usize) -> Result<(f64, f64)> {
    let odd: Vec<usize> = (0..n).step_by(2).collect();
    let k = odd.len();
    let (mut i, mut j) = (0.0, 0.0);
    for bits in 0..(1usize << k) {
        let mut x = vec![0; n];
        for (b, &p) in odd.iter().enumerate() {
            x[p] = bits >> b & 1;
        }
        i += sign_correlator(behavior, &x)?;
        for p in (1..n).step_by(2) {
            x[p] = 1;
        }
        let e = sign_correlator(behavior, &x)?;
        j += if bits.count_ones() % 2 == 0 { e } else { -e };
    }
    let norm = 0.5f64.powi(k as i32);
    Ok((i * norm, j * norm))
}

/// Even-`n` chains: the witness of the two `(n−1)`-party marginals obtained by
/// dropping the first or the last party at input `fixed_input`; the value is
/// the smaller of the two.
pub fn eval_chain_ij_even(behavior: &Behavior, n: usize, fixed_input: usize) -> Result<WitnessValue> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::arg(format!("expected an even n >= 4, got {n}")));
    }
    expect_shape(behavior, &vec![(2, 2); n], "chain_ij")?;
    let names: Vec<String> = behavior.scenario().parties().iter().map(|p| p.name.clone()).collect();
    let first = marginalize_behavior(behavior, &names[0], fixed_input)?;
    let last = marginalize_behavior(behavior, &names[n - 1], fixed_input)?;
    let (i1, j1) = chain_ij_parts(&first, n - 1)?;
    let (i2, j2) = chain_ij_parts(&last, n - 1)?;
    let p = 2.0 / n as f64;
    let v1 = i1.abs().powf(p) + j1.abs().powf(p);
    let v2 = i2.abs().powf(p) + j2.abs().powf(p);
    let components = BTreeMap::from([
        ("I_without_first".to_string(), i1),
        ("J_without_first".to_string(), j1),
        ("I_without_last".to_string(), i2),
        ("J_without_last".to_string(), j2),
    ]);
    Ok(WitnessValue { family: Family::ChainIj, n, value: v1.min(v2), components })
}

/// Star I–J witness: `n` branches then the centre, all dichotomic with two inputs.
///
/// `I = ∏ A⁺_{xᵢ} B_0`, `J = ∏ A⁻_{xᵢ} B_1`; value `|I|^{1/n} + |J|^{1/n}`.
pub fn eval_star_ij(behavior: &Behavior, n: usize) -> Result<WitnessValue> {
    if n < 1 {
        return Err(Error::arg("a star has at least one branch"));
    }
    expect_shape(behavior, &vec![(2, 2); n + 1], "star_ij")?;
    let (mut i, mut j) = (0.0, 0.0);
    for bits in 0..(1usize << n) {
        let mut x: Vec<usize> = (0..n).map(|b| bits >> b & 1).collect();
        x.push(0);
        i += sign_correlator(behavior, &x)?;
        x[n] = 1;
        let e = sign_correlator(behavior, &x)?;
        j += if bits.count_ones() % 2 == 0 { e } else { -e };
    }
    let norm = 0.5f64.powi(n as i32);
    Ok(ij_value(Family::StarIj, n, i * norm, j * norm, 1.0 / n as f64))
}

/// Terms `(x, z, sign)` of each Bob-outcome block of the three-party linear chain.
pub const B3_BLOCKS: [[(usize, usize, i8); 4]; 4] = [
    [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, -1)],
    [(0, 0, 1), (0, 1, -1), (1, 0, 1), (1, 1, 1)],
    [(0, 1, 1), (0, 2, 1), (1, 1, -1), (1, 2, 1)],
    [(0, 1, -1), (0, 2, 1), (1, 1, 1), (1, 2, 1)],
];

/// Terms `(x₁, xₙ, sign)` for each XOR label `st` (as `2s + t`) of the linear chain.
pub const BN_BLOCKS: [[(usize, usize, i8); 4]; 4] = [
    [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, -1)],
    [(0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, -1)],
    [(0, 2, 1), (0, 3, 1), (1, 2, -1), (1, 3, 1)],
    [(0, 0, 1), (0, 1, 1), (1, 0, -1), (1, 1, 1)],
];

/// Three-party linear chain on (2,2)–(1,4)–(3,2); value `Σ_b ⟨B^b ⊗ block_b⟩`.
pub fn eval_linear_b3(behavior: &Behavior) -> Result<WitnessValue> {
    expect_shape(behavior, &[(2, 2), (1, 4), (3, 2)], "linear_b3")?;
    let mut components = BTreeMap::new();
    let mut value = 0.0;
    for (b, block) in B3_BLOCKS.iter().enumerate() {
        let mut s = 0.0;
        for &(x, z, sign) in block {
            s += sign as f64 * correlator(behavior, &[x, 0, z], &[Weight::Sign, Weight::Indicator(b), Weight::Sign])?;
        }
        components.insert(format!("block_{b}"), s);
        value += s;
    }
    Ok(WitnessValue { family: Family::LinearB3, n: 3, value, components })
}

/// Linear chain of `n >= 3` parties: endpoints (2,2) and (4,2), middles (1,4).
/// Middle outputs are XOR-accumulated into the label `st`; each label weights
/// its own CHSH-type block.
pub fn eval_linear_bn(behavior: &Behavior, n: usize) -> Result<WitnessValue> {
    if n < 3 {
        return Err(Error::arg(format!("the linear chain witness needs n >= 3, got {n}")));
    }
    let mut shape = vec![(2, 2)];
    shape.extend(std::iter::repeat_n((1, 4), n - 2));
    shape.push((4, 2));
    expect_shape(behavior, &shape, "linear_bn")?;
    let sc = behavior.scenario();
    // e[label][x1][xn] = Σ (−1)^{a1 + an} P over outcomes whose middle XOR is `label`.
    let mut e = [[[0.0f64; 4]; 2]; 4];
    for x1 in 0..2 {
        for xn in 0..4 {
            let mut x = vec![0; n];
            x[0] = x1;
            x[n - 1] = xn;
            for (ai, p) in behavior.row(&x).iter().enumerate() {
                let a = sc.decode_outputs(ai);
                let label = a[1..n - 1].iter().fold(0, |acc, &o| acc ^ o);
                let sign = if (a[0] + a[n - 1]) % 2 == 0 { 1.0 } else { -1.0 };
                e[label][x1][xn] += sign * p;
            }
        }
    }
    let mut components = BTreeMap::new();
    let mut value = 0.0;
    for (label, block) in BN_BLOCKS.iter().enumerate() {
        let s: f64 = block.iter().map(|&(x1, xn, sign)| sign as f64 * e[label][x1][xn]).sum();
        components.insert(format!("block_{label:02b}"), s);
        value += s;
    }
    Ok(WitnessValue { family: Family::LinearBn, n, value, components })
}

/// Evaluates `family` with its default layout; the Svetlichny star uses the
/// canonical conditioning and even chains drop an endpoint at input 0.
pub fn evaluate(family: Family, behavior: &Behavior, n: usize) -> Result<WitnessValue> {
    match family {
        Family::BilocalIj => {
            if n != 3 {
                return Err(Error::arg(format!("the bilocal witness has n = 3, got {n}")));
            }
            eval_bilocal_ij(behavior)
        }
        Family::ChainIj if n % 2 == 0 => eval_chain_ij_even(behavior, n, 0),
        Family::ChainIj => eval_chain_ij(behavior, n),
        Family::StarIj => eval_star_ij(behavior, n),
        Family::LinearB3 => {
            if n != 3 {
                return Err(Error::arg(format!("the three-party linear witness has n = 3, got {n}")));
            }
            eval_linear_b3(behavior)
        }
        Family::LinearBn => eval_linear_bn(behavior, n),
        Family::StarSvetlichny => eval_star_svetlichny(behavior, n, &canonical_conditioning(n)?),
    }
}

/// Witness value with its bound table and claims.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    #[serde(flatten)]
    pub witness: WitnessValue,
    pub bounds: Vec<BoundSpec>,
    pub claims: Vec<CertificationClaim>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl WitnessReport {
    pub fn new(witness: WitnessValue) -> Result<Self> {
        let bounds = bound_table(witness.family, witness.n)?;
        let claims = certify(&witness)?;
        Ok(WitnessReport { witness, bounds, claims, warnings: Vec::new() })
    }

    pub fn has_claim(&self, kind: ClaimKind) -> bool {
        self.claims.iter().any(|c| c.claim == kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::Scenario;

    #[test]
    fn deterministic_zero_behaviors() {
        let b = Behavior::deterministic(Scenario::from_shape(&[(2, 2), (1, 4), (2, 2)]).unwrap(), |_, _| 0).unwrap();
        let w = eval_bilocal_ij(&b).unwrap();
        assert_eq!((w.components["I"], w.components["J"], w.value), (1.0, 0.0, 1.0));
        let b = Behavior::deterministic(Scenario::from_shape(&[(2, 2); 5]).unwrap(), |_, _| 0).unwrap();
        assert_eq!(eval_chain_ij(&b, 5).unwrap().value, 1.0);
        assert!(eval_chain_ij(&b, 4).is_err());
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let b = Behavior::uniform(Scenario::from_shape(&[(2, 2), (2, 2), (2, 2)]).unwrap());
        assert!(matches!(eval_bilocal_ij(&b), Err(Error::ScenarioMismatch(_))));
        assert!(matches!(eval_linear_b3(&b), Err(Error::ScenarioMismatch(_))));
        assert!(eval_star_ij(&b, 2).is_ok());
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
            assert_eq!(serde_json::to_string(&f).unwrap(), format!("\"{}\"", f.name()));
        }
        assert!("chsh".parse::<Family>().is_err());
    }
}
