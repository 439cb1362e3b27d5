use super::{CMatrix, C64};
use crate::{tolerance, Error, Result};

/// Normalized state vector on `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    num_qubits: usize,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::arg(format!("amplitude vector of length {len} is not 2^k with k >= 1")));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > tolerance() {
            return Err(Error::arg(format!("state has squared norm {norm}")));
        }
        Ok(PureState { num_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn density(&self) -> MixedState {
        MixedState { density: CMatrix::projector(&self.amplitudes), num_qubits: self.num_qubits }
    }
}

/// Density matrix on `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedState {
    density: CMatrix,
    num_qubits: usize,
}

impl MixedState {
    /// Validates Hermiticity, unit trace and positivity within the global tolerance.
    pub fn new(density: CMatrix) -> Result<Self> {
        let dim = density.dim();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::arg(format!("density of dimension {dim} is not 2^k with k >= 1")));
        }
        let tol = tolerance();
        if !density.is_hermitian(tol) {
            return Err(Error::arg("density matrix is not Hermitian"));
        }
        let tr = density.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::arg(format!("density matrix has trace {tr}")));
        }
        if density.min_eigenvalue_hermitian() < -tol {
            return Err(Error::arg("density matrix has a negative eigenvalue"));
        }
        Ok(MixedState { num_qubits: dim.trailing_zeros() as usize, density })
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        MixedState { density: CMatrix::identity(dim).scale_real(1.0 / dim as f64), num_qubits }
    }

    pub fn density(&self) -> &CMatrix {
        &self.density
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn expectation(&self, op: &CMatrix) -> f64 {
        self.density.matmul(op).trace().re
    }
}

impl From<PureState> for MixedState {
    fn from(p: PureState) -> Self {
        p.density()
    }
}

impl From<&PureState> for MixedState {
    fn from(p: &PureState) -> Self {
        p.density()
    }
}

/// cos θ |00⟩ + sin θ |11⟩.
pub fn generalized_epr(theta: f64) -> PureState {
    let z = C64::new(0.0, 0.0);
    PureState {
        amplitudes: vec![C64::new(theta.cos(), 0.0), z, z, C64::new(theta.sin(), 0.0)],
        num_qubits: 2,
    }
}

/// v |φ⟩⟨φ| + (1 − v) I/4 for a two-qubit pure state.
pub fn apply_werner_noise(state: &PureState, v: f64) -> Result<MixedState> {
    if !(0.0..=1.0).contains(&v) || v.is_nan() {
        return Err(Error::arg(format!("visibility {v} outside [0, 1]")));
    }
    if state.num_qubits != 2 {
        return Err(Error::arg("Werner noise is defined for two-qubit states"));
    }
    let pure = CMatrix::projector(&state.amplitudes).scale_real(v);
    let noise = CMatrix::identity(4).scale_real((1.0 - v) / 4.0);
    Ok(MixedState { density: &pure + &noise, num_qubits: 2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{pauli, tensor_product};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn amps(s: &PureState) -> Vec<f64> {
        s.amplitudes().iter().map(|a| a.re).collect()
    }

    #[test]
    fn epr_special_angles() {
        assert_eq!(amps(&generalized_epr(0.0)), vec![1.0, 0.0, 0.0, 0.0]);
        let m = amps(&generalized_epr(PI / 4.0));
        assert!((m[0] - FRAC_1_SQRT_2).abs() < 1e-15 && (m[3] - FRAC_1_SQRT_2).abs() < 1e-15);
        let s = amps(&generalized_epr(PI / 6.0));
        assert!((s[0] - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((s[3] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn werner_endpoints_and_zz() {
        let phi = generalized_epr(PI / 4.0);
        let full = apply_werner_noise(&phi, 1.0).unwrap();
        assert!(full.density().max_abs_diff(phi.density().density()) < 1e-15);
        let mixed = apply_werner_noise(&phi, 0.0).unwrap();
        assert!(mixed.density().max_abs_diff(&CMatrix::identity(4).scale_real(0.25)) < 1e-15);
        let half = apply_werner_noise(&phi, 0.5).unwrap();
        let zz = tensor_product(&[pauli::z(), pauli::z()]).unwrap();
        assert!((half.expectation(&zz) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn werner_rejects_out_of_range() {
        let phi = generalized_epr(0.3);
        assert!(apply_werner_noise(&phi, 1.5).is_err());
        assert!(apply_werner_noise(&phi, -0.1).is_err());
    }

    #[test]
    fn pure_state_validation() {
        assert!(PureState::from_real(&[1.0, 1.0]).is_err());
        assert!(PureState::from_real(&[1.0, 0.0, 0.0]).is_err());
        assert_eq!(PureState::from_real(&[0.6, 0.8]).unwrap().num_qubits(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn epr_is_normalized(theta in -10.0f64..10.0) {
            let s = generalized_epr(theta);
            let n: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
            prop_assert!((n - 1.0).abs() < 1e-12);
        }

        #[test]
        fn werner_is_a_valid_density(theta in 0.0f64..1.6, v in 0.0f64..=1.0) {
            let rho = apply_werner_noise(&generalized_epr(theta), v).unwrap();
            let d = rho.density();
            prop_assert!(d.is_hermitian(1e-12));
            prop_assert!((d.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(d.min_eigenvalue_hermitian() >= -1e-12);
        }
    }
}
