use super::{base, meas, CanonicalFamily, CanonicalStrategy, SourceModel};
use crate::network::{make_topology, NetworkKind};
use crate::quantum::{ghz_basis, pauli, C64, CMatrix, Observable, ProjectiveMeasurement};
use crate::witness::svetlichny_coefficients;
use crate::{Error, Result};

/// Branch observables `cos φ σ_x + sin φ σ_y` with `φ = offset + (−1)^x vartheta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvetlichnyPhase {
    pub vartheta: f64,
    pub offset: f64,
    /// Svetlichny score of these settings on `(|0…0⟩ + |1…1⟩)/√2`.
    pub score: f64,
}

/// `|Σ_x c(x) e^{iϑ s(x)}|`, `s(x) = Σ_j (−1)^{x_j}`: the best score over the
/// common offset at fixed ϑ.
fn phase_score(coeffs: &[(Vec<usize>, i64)], t: f64) -> (f64, f64) {
    let mut z = C64::new(0.0, 0.0);
    for (x, c) in coeffs {
        let s: i64 = x.iter().map(|&b| if b == 0 { 1 } else { -1 }).sum();
        z += C64::from_polar(*c as f64, t * s as f64);
    }
    (z.norm(), z.arg())
}

/// Maximizes the Svetlichny score over ϑ (grid, then golden-section to 1e−10)
/// and picks the offset in closed form.
pub fn svetlichny_phase(n: usize) -> Result<SvetlichnyPhase> {
    if n < 2 {
        return Err(Error::arg(format!("the Svetlichny star needs n >= 2, got {n}")));
    }
    let coeffs = svetlichny_coefficients(n)?;
    let f = |t: f64| phase_score(&coeffs, t).0;
    let grid = 720;
    let step = std::f64::consts::PI / grid as f64;
    let best = (0..=grid).map(|k| k as f64 * step).fold((0.0, f64::NEG_INFINITY), |acc, t| {
        let v = f(t);
        if v > acc.1 {
            (t, v)
        } else {
            acc
        }
    });
    let (mut a, mut b) = (best.0 - step, best.0 + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    while (b - a).abs() > 1e-10 {
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    let t = (a + b) / 2.0;
    let (score, arg) = phase_score(&coeffs, t);
    Ok(SvetlichnyPhase { vartheta: t, offset: -arg / n as f64, score })
}

fn xy(phi: f64) -> CMatrix {
    &pauli::x().scale_real(phi.cos()) + &pauli::y().scale_real(phi.sin())
}

/// Star with a GHZ-basis centre. For centre outcome `ī = i₁…iₙ` the branches
/// undo the collapse with `U₁ = σ_z^{i₁}` and `U_j = σ_x^{i_j}` (j ≥ 2) and
/// measure `U†(cos φ σ_x + sin φ σ_y)U`.
pub(super) fn build_linear_star(sources: Vec<SourceModel>) -> Result<CanonicalStrategy> {
    let n = sources.len();
    let phase = svetlichny_phase(n)?;
    let mut s = base(CanonicalFamily::Star { linear: true }, make_topology(NetworkKind::Star, n)?, sources);
    let outcomes = 1usize << n;
    let mut settings: Vec<Vec<CMatrix>> = vec![Vec::new(); n];
    let mut conditioning = vec![vec![(0, 0); n]; outcomes];
    for (label, row) in conditioning.iter_mut().enumerate() {
        let bit = |j: usize| label >> (n - 1 - j) & 1;
        for (j, slot) in row.iter_mut().enumerate() {
            let u = match (j, bit(j)) {
                (_, 0) => CMatrix::identity(2),
                (0, _) => pauli::z(),
                _ => pauli::x(),
            };
            let mut pick = |sign: f64| {
                let o = u.adjoint().matmul(&xy(phase.offset + sign * phase.vartheta)).matmul(&u);
                match settings[j].iter().position(|m| m.max_abs_diff(&o) < 1e-12) {
                    Some(k) => k,
                    None => {
                        settings[j].push(o);
                        settings[j].len() - 1
                    }
                }
            };
            *slot = (pick(1.0), pick(-1.0));
        }
    }
    let mut measurements: Vec<Vec<ProjectiveMeasurement>> = Vec::with_capacity(n + 1);
    for list in settings {
        let mut ms: Vec<ProjectiveMeasurement> =
            list.into_iter().map(|m| Observable::new(m).map(|o| meas(&o))).collect::<Result<_>>()?;
        while ms.len() < outcomes {
            ms.push(ms[0].clone());
        }
        measurements.push(ms);
    }
    measurements.push(vec![ghz_basis(n)?]);

    if s.sources.iter().all(SourceModel::is_pure) {
        let thetas: Vec<f64> = s
            .sources
            .iter()
            .map(|m| match *m {
                SourceModel::Quantum { theta, .. } => theta,
                SourceModel::Classical => 0.0,
            })
            .collect();
        s.predicted_value = Some(ghz_branch_weights(&thetas).iter().map(|(p, c)| p * c).sum::<f64>() * phase.score);
    }
    s.varthetas = vec![phase.vartheta; outcomes];
    s.offsets = vec![phase.offset; outcomes];
    s.conditioning = conditioning;
    s.measurements = measurements;
    Ok(s)
}

/// `(p(ī), 2γδ)` per centre outcome for pure generalized EPR sources.
pub(crate) fn ghz_branch_weights(thetas: &[f64]) -> Vec<(f64, f64)> {
    let n = thetas.len();
    let alpha = |j: usize, bit: usize| if bit == 0 { thetas[j].cos() } else { thetas[j].sin() };
    (0..1usize << n)
        .map(|label| {
            let tail = |flip: usize| (1..n).map(|j| alpha(j, (label >> (n - 1 - j) & 1) ^ flip)).product::<f64>();
            let a = alpha(0, 0) * tail(0);
            let b = alpha(0, 1) * tail(1);
            let p = 0.5 * (a * a + b * b);
            let c = if p > 0.0 { 2.0 * a * b / (a * a + b * b) } else { 0.0 };
            (p, c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    #[test]
    fn phases_reach_the_quantum_maximum() {
        for n in 2..=6 {
            let p = svetlichny_phase(n).unwrap();
            let target = 2f64.powi(n as i32 - 1) * SQRT_2;
            assert!((p.score - target).abs() < 1e-9, "n={n}: {}", p.score);
        }
        assert!(svetlichny_phase(1).is_err());
    }

    #[test]
    fn maximal_sources_predict_four_root_two() {
        let s = super::super::canonical_star(&[FRAC_PI_4; 3], None, true).unwrap();
        assert!((s.predicted_value.unwrap() - 4.0 * SQRT_2).abs() < 1e-9);
        assert_eq!(s.conditioning.len(), 8);
        assert!(s.measurements[..3].iter().all(|m| m.len() == 8));
    }

    #[test]
    fn branch_probabilities_sum_to_one() {
        let w = ghz_branch_weights(&[0.3, 0.9, 1.2]);
        assert!((w.iter().map(|p| p.0).sum::<f64>() - 1.0).abs() < 1e-12);
        let u = ghz_branch_weights(&[FRAC_PI_4; 3]);
        assert!(u.iter().all(|(p, c)| (p - 0.125).abs() < 1e-15 && (c - 1.0).abs() < 1e-12));
    }
}
