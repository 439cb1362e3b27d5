use std::collections::BTreeMap;

use super::{Family, WitnessValue};
use crate::behavior::{correlator, Behavior, Weight};
use crate::{Error, Result};

/// Coefficient of every input tuple in the `n`-party Svetlichny operator.
///
/// `n = 1` is the single term `A_0`. For `n >= 2` the coefficient of `x` is
/// `(−1)^{k(k−1)/2}` with `k` the number of ones in `x`; this is CHSH at
/// `n = 2`, has biseparable maximum `2^{n−1}` and local maximum `2^{⌈n/2⌉}`.
pub fn svetlichny_coefficients(n: usize) -> Result<Vec<(Vec<usize>, i64)>> {
    if n == 0 {
        return Err(Error::arg("the Svetlichny operator needs at least one party"));
    }
    if n == 1 {
        return Ok(vec![(vec![0], 1)]);
    }
    Ok((0..1usize << n)
        .map(|bits| {
            let x: Vec<usize> = (0..n).map(|j| bits >> (n - 1 - j) & 1).collect();
            let k = bits.count_ones() as usize;
            let c = if (k * k.saturating_sub(1) / 2) % 2 == 0 { 1 } else { -1 };
            (x, c)
        })
        .collect())
}

/// Which party is the centre, which parties enter the operator, and for each
/// central outcome the pair of settings `(x = 0, x = 1)` of every branch.
/// Parties in neither role are summed out at input 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvetlichnyLayout {
    pub center: usize,
    pub branches: Vec<usize>,
    pub conditioning: Vec<Vec<(usize, usize)>>,
}

impl SvetlichnyLayout {
    /// Branches `0..n`, centre `n`.
    pub fn star(n: usize, conditioning: Vec<Vec<(usize, usize)>>) -> Self {
        SvetlichnyLayout { center: n, branches: (0..n).collect(), conditioning }
    }

    fn validate(&self, behavior: &Behavior) -> Result<()> {
        let shape = behavior.scenario().shape();
        let m = shape.len();
        if self.center >= m || self.branches.iter().any(|&b| b >= m || b == self.center) {
            return Err(Error::arg("layout refers to a party outside the scenario"));
        }
        let mut seen = self.branches.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.branches.len() || self.branches.is_empty() {
            return Err(Error::arg("layout branches must be distinct and non-empty"));
        }
        let outcomes = shape[self.center].1;
        if self.conditioning.len() != outcomes {
            return Err(Error::arg(format!(
                "conditioning covers {} central outcomes, the centre has {outcomes}",
                self.conditioning.len()
            )));
        }
        for (o, row) in self.conditioning.iter().enumerate() {
            if row.len() != self.branches.len() {
                return Err(Error::arg(format!("conditioning for outcome {o} has {} entries", row.len())));
            }
            for (&(s0, s1), &b) in row.iter().zip(&self.branches) {
                if s0 >= shape[b].0 || s1 >= shape[b].0 {
                    return Err(Error::arg(format!("conditioning for outcome {o} uses a missing setting of party {b}")));
                }
            }
        }
        for &b in &self.branches {
            if shape[b].1 != 2 {
                return Err(Error::mismatch(format!("branch party {b} is not dichotomic")));
            }
        }
        Ok(())
    }
}

/// Star layout (branches first, centre last) with the given conditioning.
pub fn eval_star_svetlichny(behavior: &Behavior, n: usize, conditioning: &[Vec<(usize, usize)>]) -> Result<WitnessValue> {
    if behavior.scenario().num_parties() != n + 1 {
        return Err(Error::mismatch(format!(
            "a star with {n} branches has {} parties, behavior has {}",
            n + 1,
            behavior.scenario().num_parties()
        )));
    }
    eval_star_svetlichny_on(behavior, &SvetlichnyLayout::star(n, conditioning.to_vec()))
}

/// `Σ_ī Σ_x c(x) ⟨[b = ī] ∏ A_{setting}⟩` with the settings picked per central
/// outcome. Components are `p_ī` and the conditional score `s_ī`.
pub fn eval_star_svetlichny_on(behavior: &Behavior, layout: &SvetlichnyLayout) -> Result<WitnessValue> {
    layout.validate(behavior)?;
    let k = layout.branches.len();
    let coeffs = svetlichny_coefficients(k)?;
    let m = behavior.scenario().num_parties();
    let outcomes = layout.conditioning.len();
    let width = (usize::BITS - (outcomes - 1).leading_zeros()).max(1) as usize;
    let mut components = BTreeMap::new();
    let mut value = 0.0;
    for (o, row) in layout.conditioning.iter().enumerate() {
        let mut weights = vec![Weight::Ignore; m];
        weights[layout.center] = Weight::Indicator(o);
        for &b in &layout.branches {
            weights[b] = Weight::Sign;
        }
        let mut total = 0.0;
        for (x, c) in &coeffs {
            let mut inputs = vec![0; m];
            for (j, &b) in layout.branches.iter().enumerate() {
                inputs[b] = if x[j] == 0 { row[j].0 } else { row[j].1 };
            }
            total += *c as f64 * correlator(behavior, &inputs, &weights)?;
        }
        let mut marginal = vec![Weight::Ignore; m];
        marginal[layout.center] = Weight::Indicator(o);
        let p = correlator(behavior, &vec![0; m], &marginal)?;
        let label = format!("{o:0width$b}");
        components.insert(format!("p_{label}"), p);
        components.insert(format!("s_{label}"), if p > 0.0 { total / p } else { 0.0 });
        value += total;
    }
    Ok(WitnessValue { family: Family::StarSvetlichny, n: k, value, components })
}

/// Settings pairs used by the canonical linear star with `n` branches; they
/// depend on `n` only.
pub fn canonical_conditioning(n: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    let thetas = vec![std::f64::consts::FRAC_PI_4; n];
    Ok(crate::strategy::canonical_star(&thetas, None, true)?.conditioning)
}
