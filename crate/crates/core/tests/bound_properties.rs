use std::collections::BTreeMap;

use netcert::witness::{bound_lookup, bound_table, certify, min_isolated_parties, ClaimKind, Family, Model, WitnessValue};
use proptest::prelude::*;

const EPS: f64 = 1e-15;

fn sizes(family: Family) -> Vec<usize> {
    match family {
        Family::BilocalIj | Family::LinearB3 => vec![3],
        Family::ChainIj | Family::LinearBn => (3..=7).collect(),
        Family::StarIj => (1..=7).collect(),
        Family::StarSvetlichny => (2..=7).collect(),
    }
}

fn cases() -> Vec<(Family, usize)> {
    Family::ALL.iter().flat_map(|&f| sizes(f).into_iter().map(move |n| (f, n))).collect()
}

fn threshold(f: Family, n: usize, m: Model, p: Option<usize>) -> f64 {
    bound_lookup(f, n, m, p).unwrap().threshold
}

/// Hybrid no-signaling bound with one classical source.
fn ns_one(f: Family, n: usize) -> f64 {
    match f {
        Family::ChainIj => {
            let odd = if n % 2 == 1 { n } else { n - 1 };
            threshold(f, n, Model::HybridNs, Some(min_isolated_parties(odd, 1)))
        }
        _ => threshold(f, n, Model::HybridNs, Some(1)),
    }
}

#[test]
fn nesting_below_the_quantum_maximum() {
    for (f, n) in cases() {
        let ac = threshold(f, n, Model::AllClassical, None);
        let hq = threshold(f, n, Model::HybridQuantum, Some(1));
        let qm = threshold(f, n, Model::QuantumMax, None);
        assert!(ac <= hq + EPS && hq <= qm + EPS, "{f} n={n}: {ac} {hq} {qm}");
    }
}

/// The no-signaling hybrid sits above the quantum maximum for the nonlinear
/// witnesses on two or more sources. Linear witnesses, the Svetlichny star
/// and the one-branch star keep it below: there a single classical source
/// already caps every no-signaling completion.
#[test]
fn no_signaling_hybrid_versus_quantum_maximum() {
    for (f, n) in cases() {
        let qm = threshold(f, n, Model::QuantumMax, None);
        let ns = ns_one(f, n);
        let nonlinear = matches!(f, Family::BilocalIj | Family::ChainIj | Family::StarIj);
        if nonlinear && f.num_sources(n) >= 2 {
            assert!(qm <= ns + EPS, "{f} n={n}: {qm} > {ns}");
        } else {
            assert!(ns < qm, "{f} n={n}");
        }
    }
}

#[test]
fn monotone_in_the_parameter() {
    for (f, n) in cases() {
        for model in [Model::HybridQuantum, Model::HybridNs] {
            let values: Vec<f64> =
                bound_table(f, n).unwrap().into_iter().filter(|b| b.model == model).map(|b| b.threshold).collect();
            assert!(values.windows(2).all(|w| w[1] <= w[0] + EPS), "{f} n={n} {model:?}: {values:?}");
        }
    }
}

#[test]
fn detectable_means_below_the_quantum_maximum() {
    for (f, n) in cases() {
        let qm = threshold(f, n, Model::QuantumMax, None);
        for b in bound_table(f, n).unwrap() {
            if b.model != Model::QuantumMax {
                assert_eq!(b.detectable, b.threshold < qm, "{f} n={n} {:?}", b);
            }
        }
    }
}

proptest! {
    #[test]
    fn claims_have_positive_margin(k in 0usize..32, frac in 0.0f64..1.2) {
        let all = cases();
        let (family, n) = all[k % all.len()];
        let value = frac * threshold(family, n, Model::QuantumMax, None);
        let w = WitnessValue { family, n, value, components: BTreeMap::new() };
        for c in certify(&w).unwrap() {
            prop_assert!(c.margin > 0.0);
            prop_assert!((c.margin - (value - c.threshold)).abs() < 1e-15);
        }
    }

    #[test]
    fn chain_qnn_claims_need_more_than_half(n in 3usize..=9, frac in 0.9f64..1.0) {
        let value = frac * std::f64::consts::SQRT_2;
        let w = WitnessValue { family: Family::ChainIj, n, value, components: BTreeMap::new() };
        let odd = if n % 2 == 1 { n } else { n - 1 };
        for c in certify(&w).unwrap() {
            if matches!(c.claim, ClaimKind::Qnn(_) | ClaimKind::Fqnn) {
                let lo = if n == odd { c.level } else { c.level - 1 };
                prop_assert!(2 * lo > odd || odd == 3, "n={} {:?}", n, c.claim);
            }
        }
    }
}
