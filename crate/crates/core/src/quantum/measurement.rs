use super::{pauli, CMatrix, C64};
use crate::{tolerance, Error, Result};

/// Hermitian operator on `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: CMatrix,
    num_qubits: usize,
}

impl Observable {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.dim();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::arg(format!("observable of dimension {dim} is not 2^k with k >= 1")));
        }
        if !matrix.is_hermitian(tolerance()) {
            return Err(Error::arg("observable is not Hermitian"));
        }
        Ok(Observable { num_qubits: dim.trailing_zeros() as usize, matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// True when every eigenvalue lies in [−1, 1].
    pub fn is_dichotomic(&self) -> bool {
        let tol = tolerance();
        self.matrix.eigenvalues_hermitian().iter().all(|e| e.abs() <= 1.0 + tol)
    }

    pub fn tensor(&self, other: &Observable) -> Observable {
        Observable { matrix: self.matrix.kron(&other.matrix), num_qubits: self.num_qubits + other.num_qubits }
    }

    pub fn negated(&self) -> Observable {
        Observable { matrix: self.matrix.scale_real(-1.0), num_qubits: self.num_qubits }
    }

    /// U† O U.
    pub fn conjugated(&self, unitary: &CMatrix) -> Observable {
        let matrix = unitary.adjoint().matmul(&self.matrix).matmul(unitary);
        Observable { matrix, num_qubits: self.num_qubits }
    }

    /// Two-outcome measurement for a ±1-valued observable: outcome `0` is the
    /// +1 eigenspace, outcome `1` the −1 eigenspace.
    pub fn to_measurement(&self) -> Result<ProjectiveMeasurement> {
        let id = CMatrix::identity(self.matrix.dim());
        let plus = (&id + &self.matrix).scale_real(0.5);
        let minus = (&id - &self.matrix).scale_real(0.5);
        ProjectiveMeasurement::new(vec![plus, minus], vec!["0".into(), "1".into()])
    }
}

/// cos ϑ σ_z + sign · sin ϑ σ_x.
pub fn xz_observable(vartheta: f64, sign: f64) -> Observable {
    let m = &pauli::z().scale_real(vartheta.cos()) + &pauli::x().scale_real(sign * vartheta.sin());
    Observable { matrix: m, num_qubits: 1 }
}

/// cos φ σ_x + sign · sin φ σ_y.
pub fn xy_observable(phi: f64, sign: f64) -> Observable {
    let m = &pauli::x().scale_real(phi.cos()) + &pauli::y().scale_real(sign * phi.sin());
    Observable { matrix: m, num_qubits: 1 }
}

/// Complete set of orthogonal projectors with one bit-string label each.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurement {
    projectors: Vec<CMatrix>,
    outcome_labels: Vec<String>,
}

impl ProjectiveMeasurement {
    pub fn new(projectors: Vec<CMatrix>, outcome_labels: Vec<String>) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::arg("measurement has no projectors"));
        }
        if projectors.len() != outcome_labels.len() {
            return Err(Error::arg("one outcome label per projector is required"));
        }
        let dim = projectors[0].dim();
        if projectors.iter().any(|p| p.dim() != dim) {
            return Err(Error::arg("projectors have different dimensions"));
        }
        for (i, l) in outcome_labels.iter().enumerate() {
            if outcome_labels[..i].contains(l) {
                return Err(Error::arg(format!("duplicate outcome label {l}")));
            }
        }
        let tol = tolerance().max(1e-12);
        let mut sum = CMatrix::zeros(dim);
        for p in &projectors {
            if !p.is_hermitian(tol) {
                return Err(Error::arg("projector is not Hermitian"));
            }
            if p.matmul(p).max_abs_diff(p) > tol {
                return Err(Error::arg("projector is not idempotent"));
            }
            sum = &sum + p;
        }
        if sum.max_abs_diff(&CMatrix::identity(dim)) > tol {
            return Err(Error::arg("projectors do not sum to the identity"));
        }
        Ok(ProjectiveMeasurement { projectors, outcome_labels })
    }

    /// Rank-one projectors onto the given orthonormal vectors.
    pub fn from_states(states: &[Vec<C64>], labels: &[&str]) -> Result<Self> {
        Self::new(
            states.iter().map(|s| CMatrix::projector(s)).collect(),
            labels.iter().map(|s| s.to_string()).collect(),
        )
    }

    /// Single-outcome measurement on a `dim`-dimensional space.
    pub fn trivial(dim: usize) -> Self {
        ProjectiveMeasurement { projectors: vec![CMatrix::identity(dim)], outcome_labels: vec![String::new()] }
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn outcome_labels(&self) -> &[String] {
        &self.outcome_labels
    }

    pub fn num_outcomes(&self) -> usize {
        self.projectors.len()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    /// Same projectors, relabeled and reordered so that outcome `k` carries `labels[k]`.
    pub fn with_order(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.projectors.len() {
            return Err(Error::arg("reordering must mention every outcome once"));
        }
        Self::new(
            order.iter().map(|&i| self.projectors[i].clone()).collect(),
            order.iter().map(|&i| self.outcome_labels[i].clone()).collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Bell,
    Ghz,
}

/// Bell basis (`n = 2` only) or the `n`-qubit GHZ basis.
///
/// Bell labels: `00` ↦ (|00⟩+|11⟩)/√2, `01` ↦ (|00⟩−|11⟩)/√2,
/// `10` ↦ (|01⟩+|10⟩)/√2, `11` ↦ (|01⟩−|10⟩)/√2.
pub fn projective_basis(kind: BasisKind, n: usize) -> Result<ProjectiveMeasurement> {
    match kind {
        BasisKind::Bell => {
            if n != 2 {
                return Err(Error::arg("the Bell basis is a two-qubit measurement"));
            }
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let v = |a: [f64; 4]| a.iter().map(|&x| C64::new(x * h, 0.0)).collect::<Vec<_>>();
            ProjectiveMeasurement::from_states(
                &[v([1.0, 0.0, 0.0, 1.0]), v([1.0, 0.0, 0.0, -1.0]), v([0.0, 1.0, 1.0, 0.0]), v([0.0, 1.0, -1.0, 0.0])],
                &["00", "01", "10", "11"],
            )
        }
        BasisKind::Ghz => ghz_basis(n),
    }
}

/// Projectors onto (|0, i₂…iₙ⟩ + (−1)^{i₁} |1, ī₂…īₙ⟩)/√2, labeled `i₁i₂…iₙ`,
/// listed in increasing label order.
pub fn ghz_basis(n: usize) -> Result<ProjectiveMeasurement> {
    if n < 2 {
        return Err(Error::arg(format!("GHZ basis needs n >= 2, got {n}")));
    }
    let dim = 1usize << n;
    let tail_mask = (1usize << (n - 1)) - 1;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut states = Vec::with_capacity(dim);
    let mut labels = Vec::with_capacity(dim);
    for label in 0..dim {
        let phase_bit = label >> (n - 1);
        let tail = label & tail_mask;
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[tail] = C64::new(h, 0.0);
        let sign = if phase_bit == 1 { -1.0 } else { 1.0 };
        v[(1 << (n - 1)) | (!tail & tail_mask)] = C64::new(sign * h, 0.0);
        states.push(v);
        labels.push(format!("{label:0n$b}"));
    }
    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    ProjectiveMeasurement::from_states(&states, &label_refs)
}
