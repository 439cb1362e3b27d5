use super::svetlichny::{canonical_conditioning, svetlichny_coefficients};
use super::{eval_linear_b3, eval_linear_bn, Family};
use crate::behavior::{Behavior, Scenario};
use crate::{Error, Result};

/// Limits for [`brute_force_classical_max`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Symbols per classical source.
    pub alphabet: usize,
    /// Points per prior weight; weights are multiples of `1 / (grid − 1)`.
    pub grid: usize,
    /// Maximum number of (response, prior) evaluations.
    pub budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { alphabet: 2, grid: 9, budget: 50_000_000 }
    }
}

/// Largest witness value reachable with classical sources only.
///
/// Linear witnesses are maximized over deterministic vertices. Nonlinear ones
/// enumerate deterministic responses to the local symbols and sweep the
/// source priors over the grid. Exceeding the budget reports the best value
/// seen so far.
pub fn brute_force_classical_max(family: Family, n: usize, config: &OracleConfig) -> Result<f64> {
    match family {
        Family::BilocalIj => {
            if n != 3 {
                return Err(Error::arg("the bilocal witness has n = 3"));
            }
            nonlinear(&[(vec![0], true), (vec![0, 1], false), (vec![1], true)], 2, 0.5, config)
        }
        Family::ChainIj => {
            if n < 3 || n % 2 == 0 {
                return Err(Error::arg(format!("the chain oracle needs an odd n >= 3, got {n}")));
            }
            let parties: Vec<(Vec<usize>, bool)> = (0..n)
                .map(|j| {
                    let src = [j.wrapping_sub(1), j].into_iter().filter(|&s| s < n - 1).collect();
                    (src, j % 2 == 0)
                })
                .collect();
            nonlinear(&parties, n - 1, 2.0 / (n + 1) as f64, config)
        }
        Family::StarIj => {
            if n < 1 {
                return Err(Error::arg("a star has at least one branch"));
            }
            let mut parties: Vec<(Vec<usize>, bool)> = (0..n).map(|i| (vec![i], true)).collect();
            parties.push(((0..n).collect(), false));
            nonlinear(&parties, n, 1.0 / n as f64, config)
        }
        Family::LinearB3 => {
            if n != 3 {
                return Err(Error::arg("the three-party linear witness has n = 3"));
            }
            vertices(&[(2, 2), (1, 4), (3, 2)], config, |b| Ok(eval_linear_b3(b)?.value))
        }
        Family::LinearBn => {
            if n < 3 {
                return Err(Error::arg(format!("the linear chain witness needs n >= 3, got {n}")));
            }
            let mut shape = vec![(2, 2)];
            shape.extend(std::iter::repeat_n((1, 4), n - 2));
            shape.push((4, 2));
            vertices(&shape, config, |b| Ok(eval_linear_bn(b, n)?.value))
        }
        Family::StarSvetlichny => svetlichny_vertices(n, config),
    }
}

/// Every deterministic assignment of outputs to inputs.
fn vertices(shape: &[(usize, usize)], config: &OracleConfig, eval: impl Fn(&Behavior) -> Result<f64>) -> Result<f64> {
    let scenario = Scenario::from_shape(shape)?;
    let counts: Vec<u64> = shape.iter().map(|&(i, o)| (o as u64).pow(i as u32)).collect();
    let total: u64 = counts.iter().product();
    let mut best = f64::NEG_INFINITY;
    for (done, index) in (0..total).enumerate() {
        if done as u64 >= config.budget {
            return Err(Error::BudgetExceeded { budget: config.budget, partial_max: best });
        }
        let mut rest = index;
        let functions: Vec<u64> = counts
            .iter()
            .map(|&c| {
                let f = rest % c;
                rest /= c;
                f
            })
            .collect();
        let b = Behavior::deterministic(scenario.clone(), |party, input| {
            let outputs = shape[party].1 as u64;
            (functions[party] / outputs.pow(input as u32) % outputs) as usize
        })?;
        best = best.max(eval(&b)?);
    }
    Ok(best)
}

/// With a deterministic centre only the settings conditioned on its single
/// outcome matter, so each outcome is maximized separately.
fn svetlichny_vertices(n: usize, config: &OracleConfig) -> Result<f64> {
    let conditioning = canonical_conditioning(n)?;
    let coeffs = svetlichny_coefficients(n)?;
    let mut best = f64::NEG_INFINITY;
    let mut done = 0u64;
    for row in &conditioning {
        for signs in 0..(1usize << (2 * n)) {
            let value = |j: usize, x: usize| if signs >> (2 * j + x) & 1 == 0 { 1i64 } else { -1 };
            if row.iter().enumerate().any(|(j, &(s0, s1))| s0 == s1 && value(j, 0) != value(j, 1)) {
                continue;
            }
            done += 1;
            if done > config.budget {
                return Err(Error::BudgetExceeded { budget: config.budget, partial_max: best });
            }
            let v: i64 = coeffs.iter().map(|(x, c)| c * x.iter().enumerate().map(|(j, &xj)| value(j, xj)).product::<i64>()).sum();
            best = best.max(v as f64);
        }
    }
    Ok(best)
}

/// Points of the probability simplex with `k` weights that are multiples of `1/(grid − 1)`.
fn simplex_grid(k: usize, grid: usize) -> Vec<Vec<f64>> {
    fn rec(k: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            rec(k - 1, left - c, prefix, out);
            prefix.pop();
        }
    }
    let steps = grid - 1;
    let mut raw = Vec::new();
    rec(k, steps, &mut Vec::new(), &mut raw);
    raw.into_iter().map(|c| c.into_iter().map(|v| v as f64 / steps as f64).collect()).collect()
}

/// I–J witnesses factor over parties: `I = Σ_λ p(λ) ∏ gᴵ(λ_local)` and the
/// same for J. A party averaged over its two settings contributes
/// `(±1, 0)` or `(0, ±1)` per local symbol; a party read at fixed settings
/// contributes `(±1, ±1)`.
fn nonlinear(parties: &[(Vec<usize>, bool)], sources: usize, power: f64, config: &OracleConfig) -> Result<f64> {
    let (k, grid) = (config.alphabet, config.grid);
    if k < 1 || grid < 2 {
        return Err(Error::arg("the oracle needs alphabet >= 1 and grid >= 2"));
    }
    let lambdas = k.pow(sources as u32);
    // Local symbol index of every party for each global λ.
    let local: Vec<Vec<usize>> = parties
        .iter()
        .map(|(src, _)| {
            (0..lambdas)
                .map(|l| src.iter().fold(0, |acc, &s| acc * k + l / k.pow((sources - 1 - s) as u32) % k))
                .collect()
        })
        .collect();
    const AVERAGED: [(f64, f64); 4] = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)];
    const FIXED: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
    let combos: Vec<usize> = parties.iter().map(|(src, _)| k.pow(src.len() as u32)).collect();
    let counts: Vec<u64> = combos.iter().map(|&c| 4u64.checked_pow(c as u32).unwrap_or(u64::MAX)).collect();
    let priors = simplex_grid(k, grid);
    let weights: Vec<Vec<f64>> = {
        let mut out = vec![Vec::new()];
        for _ in 0..sources {
            out = out.iter().flat_map(|w| priors.iter().map(move |p| [w.clone(), p.clone()].concat())).collect();
        }
        out.iter()
            .map(|w| {
                (0..lambdas)
                    .map(|l| (0..sources).map(|s| w[s * k + l / k.pow((sources - 1 - s) as u32) % k]).product())
                    .collect()
            })
            .collect()
    };
    let total = counts.iter().try_fold(1u64, |acc, &c| acc.checked_mul(c)).unwrap_or(u64::MAX);

    let mut best = f64::NEG_INFINITY;
    let mut done = 0u64;
    let mut index = vec![0u64; parties.len()];
    let mut gi = vec![0.0; lambdas];
    let mut gj = vec![0.0; lambdas];
    for _ in 0..total {
        for l in 0..lambdas {
            let (mut a, mut b) = (1.0, 1.0);
            for (p, (_, averaged)) in parties.iter().enumerate() {
                let choice = (index[p] >> (2 * local[p][l])) & 3;
                let (x, y) = if *averaged { AVERAGED[choice as usize] } else { FIXED[choice as usize] };
                a *= x;
                b *= y;
            }
            gi[l] = a;
            gj[l] = b;
        }
        for w in &weights {
            done += 1;
            if done > config.budget {
                return Err(Error::BudgetExceeded { budget: config.budget, partial_max: best });
            }
            let i: f64 = w.iter().zip(&gi).map(|(p, g)| p * g).sum();
            let j: f64 = w.iter().zip(&gj).map(|(p, g)| p * g).sum();
            best = best.max(i.abs().powf(power) + j.abs().powf(power));
        }
        for (p, slot) in index.iter_mut().enumerate() {
            *slot += 1;
            if *slot < counts[p] {
                break;
            }
            *slot = 0;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_points() {
        let g = simplex_grid(3, 3);
        assert_eq!(g.len(), 6);
        assert!(g.iter().all(|p| (p.iter().sum::<f64>() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn linear_three_party_is_two() {
        assert_eq!(brute_force_classical_max(Family::LinearB3, 3, &OracleConfig::default()).unwrap(), 2.0);
    }

    #[test]
    fn small_star_and_budget() {
        let cfg = OracleConfig { alphabet: 2, grid: 5, budget: 10_000_000 };
        let v = brute_force_classical_max(Family::StarIj, 1, &cfg).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let tiny = OracleConfig { budget: 10, ..cfg };
        match brute_force_classical_max(Family::BilocalIj, 3, &tiny) {
            Err(Error::BudgetExceeded { budget, partial_max }) => {
                assert_eq!(budget, 10);
                assert!(partial_max <= 1.0 + 1e-12);
            }
            other => panic!("expected a budget error, got {other:?}"),
        }
    }
}
