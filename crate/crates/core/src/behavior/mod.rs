//! Conditional probability tables `P(a⃗|x⃗)` and the operations on them.
//!
//! Tables are dense and row-major with the input tuple outermost; inside each
//! tuple the first party is the most significant digit. Outputs are integers
//! `0..k`; multi-bit outputs read big-endian, so outcome label `b⁰b¹` is the
//! integer `2b⁰ + b¹`.

mod born;
mod hybrid;

use serde::{Deserialize, Serialize};

use crate::{tolerance, Error, Result};

pub use born::behavior_from_quantum;
pub use hybrid::{behavior_from_hybrid, behavior_from_pr_chain, HybridStrategy, LocalAction, PartyResponse, SourceKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartySpec {
    pub name: String,
    pub inputs: usize,
    pub outputs: usize,
}

impl PartySpec {
    pub fn new(name: impl Into<String>, inputs: usize, outputs: usize) -> Self {
        PartySpec { name: name.into(), inputs, outputs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawScenario")]
pub struct Scenario {
    parties: Vec<PartySpec>,
}

#[derive(Deserialize)]
struct RawScenario {
    parties: Vec<PartySpec>,
}

impl TryFrom<RawScenario> for Scenario {
    type Error = Error;

    fn try_from(raw: RawScenario) -> Result<Self> {
        Scenario::new(raw.parties)
    }
}

impl Scenario {
    pub fn new(parties: Vec<PartySpec>) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::arg("scenario has no parties"));
        }
        for (i, p) in parties.iter().enumerate() {
            if p.inputs < 1 || p.outputs < 1 {
                return Err(Error::arg(format!("party {} needs at least one input and one output", p.name)));
            }
            if parties[..i].iter().any(|q| q.name == p.name) {
                return Err(Error::arg(format!("duplicate party name {}", p.name)));
            }
        }
        Ok(Scenario { parties })
    }

    /// Scenario with parties named `A1, A2, …` and the given (inputs, outputs).
    pub fn from_shape(shape: &[(usize, usize)]) -> Result<Self> {
        Self::new(shape.iter().enumerate().map(|(i, &(x, a))| PartySpec::new(format!("A{}", i + 1), x, a)).collect())
    }

    pub fn parties(&self) -> &[PartySpec] {
        &self.parties
    }

    pub fn num_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn party_index(&self, name: &str) -> Option<usize> {
        self.parties.iter().position(|p| p.name == name)
    }

    pub fn shape(&self) -> Vec<(usize, usize)> {
        self.parties.iter().map(|p| (p.inputs, p.outputs)).collect()
    }

    pub fn num_input_tuples(&self) -> usize {
        self.parties.iter().map(|p| p.inputs).product()
    }

    pub fn num_output_tuples(&self) -> usize {
        self.parties.iter().map(|p| p.outputs).product()
    }

    pub fn table_len(&self) -> usize {
        self.num_input_tuples() * self.num_output_tuples()
    }

    pub fn encode_inputs(&self, x: &[usize]) -> usize {
        mixed_radix_encode(x, self.parties.iter().map(|p| p.inputs))
    }

    pub fn encode_outputs(&self, a: &[usize]) -> usize {
        mixed_radix_encode(a, self.parties.iter().map(|p| p.outputs))
    }

    pub fn decode_inputs(&self, index: usize) -> Vec<usize> {
        mixed_radix_decode(index, &self.parties.iter().map(|p| p.inputs).collect::<Vec<_>>())
    }

    pub fn decode_outputs(&self, index: usize) -> Vec<usize> {
        mixed_radix_decode(index, &self.parties.iter().map(|p| p.outputs).collect::<Vec<_>>())
    }
}

pub(crate) fn mixed_radix_encode(digits: &[usize], radices: impl Iterator<Item = usize>) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (&d, r)| acc * r + d)
}

pub(crate) fn mixed_radix_decode(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        out[i] = index % radices[i];
        index /= radices[i];
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    scenario: Scenario,
    table: Vec<f64>,
}

impl Behavior {
    /// Validates entries in `[−tol, 1+tol]` and per-input normalization.
    pub fn new(scenario: Scenario, table: Vec<f64>) -> Result<Self> {
        if table.len() != scenario.table_len() {
            return Err(Error::arg(format!(
                "table has {} entries, scenario needs {}",
                table.len(),
                scenario.table_len()
            )));
        }
        let tol = tolerance();
        if let Some(p) = table.iter().find(|p| !p.is_finite() || **p < -tol || **p > 1.0 + tol) {
            return Err(Error::arg(format!("probability {p} outside [0, 1]")));
        }
        let k = scenario.num_output_tuples();
        for (i, row) in table.chunks(k).enumerate() {
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > tol {
                return Err(Error::arg(format!("row for inputs {:?} sums to {s}", scenario.decode_inputs(i))));
            }
        }
        Ok(Behavior { scenario, table })
    }

    pub fn from_fn(scenario: Scenario, mut f: impl FnMut(&[usize], &[usize]) -> f64) -> Result<Self> {
        let (nx, na) = (scenario.num_input_tuples(), scenario.num_output_tuples());
        let mut table = Vec::with_capacity(nx * na);
        for xi in 0..nx {
            let x = scenario.decode_inputs(xi);
            for ai in 0..na {
                table.push(f(&x, &scenario.decode_outputs(ai)));
            }
        }
        Self::new(scenario, table)
    }

    pub fn uniform(scenario: Scenario) -> Self {
        let k = scenario.num_output_tuples() as f64;
        let table = vec![1.0 / k; scenario.table_len()];
        Behavior { scenario, table }
    }

    /// Each party answers with `response(party, input)`.
    pub fn deterministic(scenario: Scenario, response: impl Fn(usize, usize) -> usize) -> Result<Self> {
        Self::from_fn(scenario, |x, a| {
            let hit = a.iter().enumerate().all(|(i, &ai)| response(i, x[i]) == ai);
            if hit {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Output distribution for one input tuple.
    pub fn row(&self, x: &[usize]) -> &[f64] {
        let k = self.scenario.num_output_tuples();
        let i = self.scenario.encode_inputs(x);
        &self.table[i * k..(i + 1) * k]
    }

    pub fn prob(&self, x: &[usize], a: &[usize]) -> f64 {
        self.row(x)[self.scenario.encode_outputs(a)]
    }

    pub fn max_abs_diff(&self, other: &Behavior) -> f64 {
        self.table.iter().zip(&other.table).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Distribution of the parties in `keep` (ascending) for a full input tuple.
    fn marginal_row(&self, x: &[usize], keep: &[usize]) -> Vec<f64> {
        let radices: Vec<usize> = keep.iter().map(|&i| self.scenario.parties[i].outputs).collect();
        let size: usize = radices.iter().product();
        let mut out = vec![0.0; size];
        for (ai, p) in self.row(x).iter().enumerate() {
            let a = self.scenario.decode_outputs(ai);
            let idx = mixed_radix_encode(&keep.iter().map(|&i| a[i]).collect::<Vec<_>>(), radices.iter().copied());
            out[idx] += p;
        }
        out
    }
}

/// How a party's output enters a correlator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Weight {
    /// `(−1)^a` with the parity of all bits of `a`.
    Sign,
    /// `(−1)` to the power of bit `k` of the output label, bit 0 most significant.
    BitSign(usize),
    /// 1 on one outcome, 0 elsewhere.
    Indicator(usize),
    /// 1 on any of the listed outcomes.
    IndicatorSet(Vec<usize>),
    /// Sums the party out.
    Ignore,
}

impl Weight {
    fn value(&self, a: usize, outputs: usize) -> f64 {
        let sign = |bit: usize| if bit & 1 == 1 { -1.0 } else { 1.0 };
        match self {
            Weight::Sign => sign(a.count_ones() as usize),
            Weight::BitSign(k) => {
                let width = usize::BITS - (outputs.max(2) - 1).leading_zeros();
                sign(a >> (width as usize - 1 - k))
            }
            Weight::Indicator(o) => (a == *o) as u8 as f64,
            Weight::IndicatorSet(s) => s.contains(&a) as u8 as f64,
            Weight::Ignore => 1.0,
        }
    }
}

/// `Σ_a ∏ᵢ wᵢ(aᵢ) P(a|x)` for the input tuple `inputs`.
pub fn correlator(behavior: &Behavior, inputs: &[usize], weights: &[Weight]) -> Result<f64> {
    let sc = behavior.scenario();
    if inputs.len() != sc.num_parties() || weights.len() != sc.num_parties() {
        return Err(Error::arg("correlator needs one input and one weight per party"));
    }
    for (i, p) in sc.parties().iter().enumerate() {
        if inputs[i] >= p.inputs {
            return Err(Error::arg(format!("input {} out of range for party {}", inputs[i], p.name)));
        }
        match &weights[i] {
            Weight::BitSign(k) if (1usize << (k + 1)) > p.outputs => {
                return Err(Error::arg(format!("party {} has no output bit {k}", p.name)))
            }
            Weight::Indicator(o) if *o >= p.outputs => {
                return Err(Error::arg(format!("outcome {o} out of range for party {}", p.name)))
            }
            _ => {}
        }
    }
    let tables: Vec<Vec<f64>> = sc
        .parties()
        .iter()
        .zip(weights)
        .map(|(p, w)| (0..p.outputs).map(|a| w.value(a, p.outputs)).collect())
        .collect();
    let mut total = 0.0;
    for (ai, prob) in behavior.row(inputs).iter().enumerate() {
        if *prob == 0.0 {
            continue;
        }
        let a = sc.decode_outputs(ai);
        let w: f64 = a.iter().enumerate().map(|(i, &ai)| tables[i][ai]).product();
        total += w * prob;
    }
    Ok(total)
}

/// Shorthand for the all-`Sign` correlator of dichotomic parties.
pub fn sign_correlator(behavior: &Behavior, inputs: &[usize]) -> Result<f64> {
    correlator(behavior, inputs, &vec![Weight::Sign; inputs.len()])
}

/// A marginal that changes when inputs outside it change.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalingViolation {
    /// Parties whose joint marginal moves.
    pub parties: Vec<String>,
    /// Input tuple at which the deviation from the reference tuple is largest;
    /// the reference keeps the marginal's inputs and sets all others to 0.
    pub inputs: Vec<usize>,
    pub deviation: f64,
}

/// Every non-empty proper party subset whose marginal depends on the inputs
/// of the complementary parties beyond the global tolerance.
pub fn check_no_signaling(behavior: &Behavior) -> Vec<SignalingViolation> {
    let sc = behavior.scenario();
    let m = sc.num_parties();
    let tol = tolerance();
    let mut out = Vec::new();
    for mask in 1..(1usize << m) - 1 {
        let keep: Vec<usize> = (0..m).filter(|i| mask >> (m - 1 - i) & 1 == 1).collect();
        let mut worst = (0.0, Vec::new());
        for xi in 0..sc.num_input_tuples() {
            let x = sc.decode_inputs(xi);
            let mut reference = x.clone();
            for (i, r) in reference.iter_mut().enumerate() {
                if !keep.contains(&i) {
                    *r = 0;
                }
            }
            if reference == x {
                continue;
            }
            let a = behavior.marginal_row(&x, &keep);
            let b = behavior.marginal_row(&reference, &keep);
            let dev = a.iter().zip(&b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            if dev > worst.0 {
                worst = (dev, x);
            }
        }
        if worst.0 > tol {
            out.push(SignalingViolation {
                parties: keep.iter().map(|&i| sc.parties()[i].name.clone()).collect(),
                inputs: worst.1,
                deviation: worst.0,
            });
        }
    }
    out
}

/// Fixes `drop_party`'s input and sums over its outputs.
pub fn marginalize_behavior(behavior: &Behavior, drop_party: &str, fixed_input: usize) -> Result<Behavior> {
    let sc = behavior.scenario();
    let d = sc.party_index(drop_party).ok_or_else(|| Error::arg(format!("no party named {drop_party}")))?;
    if sc.num_parties() < 2 {
        return Err(Error::arg("cannot drop the only party"));
    }
    if fixed_input >= sc.parties()[d].inputs {
        return Err(Error::arg(format!("input {fixed_input} out of range for party {drop_party}")));
    }
    let mut parties = sc.parties().to_vec();
    let dropped = parties.remove(d);
    let reduced = Scenario::new(parties)?;
    let table = {
        let mut t = Vec::with_capacity(reduced.table_len());
        for xi in 0..reduced.num_input_tuples() {
            let mut x = reduced.decode_inputs(xi);
            x.insert(d, fixed_input);
            for ai in 0..reduced.num_output_tuples() {
                let mut a = reduced.decode_outputs(ai);
                a.insert(d, 0);
                let mut s = 0.0;
                for o in 0..dropped.outputs {
                    a[d] = o;
                    s += behavior.prob(&x, &a);
                }
                t.push(s);
            }
        }
        t
    };
    Behavior::new(reduced, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_by_two(n: usize) -> Scenario {
        Scenario::from_shape(&vec![(2, 2); n]).unwrap()
    }

    #[test]
    fn deterministic_zero_correlator_is_one() {
        let b = Behavior::deterministic(two_by_two(3), |_, _| 0).unwrap();
        assert_eq!(sign_correlator(&b, &[1, 0, 1]).unwrap(), 1.0);
    }

    #[test]
    fn uniform_correlator_is_zero() {
        let b = Behavior::uniform(two_by_two(3));
        assert!(sign_correlator(&b, &[0, 1, 1]).unwrap().abs() < 1e-15);
        assert!(check_no_signaling(&b).is_empty());
    }

    #[test]
    fn bit_sign_reads_big_endian_bits() {
        let sc = Scenario::from_shape(&[(1, 4)]).unwrap();
        // Outcome 2 = label "10".
        let b = Behavior::deterministic(sc, |_, _| 2).unwrap();
        assert_eq!(correlator(&b, &[0], &[Weight::BitSign(0)]).unwrap(), -1.0);
        assert_eq!(correlator(&b, &[0], &[Weight::BitSign(1)]).unwrap(), 1.0);
        assert!(correlator(&b, &[0], &[Weight::BitSign(2)]).is_err());
    }

    #[test]
    fn signaling_table_is_reported() {
        // Alice copies Charlie's input; Bob is uniform.
        let b = Behavior::from_fn(two_by_two(3), |x, a| if a[0] == x[2] { 0.25 } else { 0.0 }).unwrap();
        let v = check_no_signaling(&b);
        assert!(v.iter().any(|s| s.parties == vec!["A1".to_string()]));
        assert!(v.iter().all(|s| s.parties.contains(&"A1".to_string())));
    }

    #[test]
    fn dropping_a_constant_party_keeps_the_rest() {
        let base = Behavior::from_fn(two_by_two(2), |x, a| if (a[0] ^ a[1]) == (x[0] & x[1]) { 0.5 } else { 0.0 }).unwrap();
        let sc = two_by_two(3);
        let ext = Behavior::from_fn(sc, |x, a| if a[2] == 0 { base.prob(&x[..2], &a[..2]) } else { 0.0 }).unwrap();
        let m = marginalize_behavior(&ext, "A3", 1).unwrap();
        assert!(m.max_abs_diff(&base) < 1e-15);
        assert!(marginalize_behavior(&ext, "Z", 0).is_err());
        assert!(marginalize_behavior(&ext, "A3", 2).is_err());
    }

    #[test]
    fn invalid_tables_are_rejected() {
        assert!(Behavior::new(two_by_two(1), vec![0.5, 0.4, 0.5, 0.5]).is_err());
        assert!(Behavior::new(two_by_two(1), vec![1.5, -0.5, 0.5, 0.5]).is_err());
        assert!(Behavior::new(two_by_two(1), vec![1.0]).is_err());
        assert!(Scenario::new(vec![PartySpec::new("A", 1, 2), PartySpec::new("A", 1, 2)]).is_err());
    }

    fn random_ns_table() -> impl Strategy<Value = Vec<f64>> {
        // Mixtures of local deterministic points are no-signaling.
        proptest::collection::vec((0.0f64..1.0, 0usize..4, 0usize..4), 1..6).prop_map(|pts| {
        let total: f64 = pts.iter().map(|p| p.0).sum::<f64>().max(1e-9);
        let sc = two_by_two(2);
        let mut t = vec![0.0; sc.table_len()];
        for (w, fa, fb) in pts {
            let d = Behavior::deterministic(sc.clone(), |i, x| if i == 0 { fa >> x & 1 } else { fb >> x & 1 }).unwrap();
            for (ti, di) in t.iter_mut().zip(d.table()) {
                *ti += w / total * di;
            }
        }
        t
        })
    }

    proptest! {
        #[test]
        fn correlator_is_linear_and_bounded(t1 in random_ns_table(), t2 in random_ns_table(), w in 0.0f64..1.0) {
            let sc = two_by_two(2);
            let b1 = Behavior::new(sc.clone(), t1.clone()).unwrap();
            let b2 = Behavior::new(sc.clone(), t2.clone()).unwrap();
            let mix = Behavior::new(sc, t1.iter().zip(&t2).map(|(a, b)| w * a + (1.0 - w) * b).collect()).unwrap();
            for x in [[0, 0], [0, 1], [1, 0], [1, 1]] {
                let c = sign_correlator(&mix, &x).unwrap();
                let lin = w * sign_correlator(&b1, &x).unwrap() + (1.0 - w) * sign_correlator(&b2, &x).unwrap();
                prop_assert!((c - lin).abs() < 1e-12);
                prop_assert!(c.abs() <= 1.0 + 1e-12);
            }
        }

        #[test]
        fn marginal_of_no_signaling_ignores_fixed_input(t in random_ns_table()) {
            let b = Behavior::new(two_by_two(2), t).unwrap();
            let m0 = marginalize_behavior(&b, "A2", 0).unwrap();
            let m1 = marginalize_behavior(&b, "A2", 1).unwrap();
            prop_assert!(m0.max_abs_diff(&m1) < 1e-12);
        }
    }
}
