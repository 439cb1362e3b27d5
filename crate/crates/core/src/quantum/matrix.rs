use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Panics if `data.len() != dim * dim`.
    pub fn from_vec(dim: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), dim * dim, "matrix data has wrong length");
        CMatrix { dim, data }
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Self {
        Self::from_vec(dim, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len());
        let dim = u.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in u {
            for b in v {
                data.push(a * b.conj());
            }
        }
        CMatrix { dim, data }
    }

    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix { dim: self.dim, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn kron(&self, other: &CMatrix) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for r1 in 0..n {
            for c1 in 0..n {
                let a = self.data[r1 * n + c1];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for r2 in 0..m {
                    let row = (r1 * m + r2) * dim + c1 * m;
                    for c2 in 0..m {
                        data[row + c2] = a * other.data[r2 * m + c2];
                    }
                }
            }
        }
        CMatrix { dim, data }
    }

    pub fn matmul(&self, other: &CMatrix) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matmul");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        let n = self.dim;
        (0..n).map(|r| (0..n).map(|c| self.data[r * n + c] * v[c]).sum()).collect()
    }

    /// ⟨v|M|v⟩.
    pub fn expectation(&self, v: &[C64]) -> C64 {
        let mv = self.apply(v);
        v.iter().zip(mv).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Reorders the qubits of a `2^k`-dimensional operator: qubit `perm[i]` of
    /// the input becomes qubit `i` of the output.
    pub fn permute_qubits(&self, perm: &[usize]) -> Self {
        let k = perm.len();
        assert_eq!(1usize << k, self.dim, "permutation length does not match qubit count");
        let map: Vec<usize> = (0..self.dim)
            .map(|new| {
                let mut old = 0usize;
                for (i, &src) in perm.iter().enumerate() {
                    let bit = (new >> (k - 1 - i)) & 1;
                    old |= bit << (k - 1 - src);
                }
                old
            })
            .collect();
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[r * n + c] = self.data[map[r] * n + map[c]];
            }
        }
        out
    }

    /// Smallest eigenvalue of a Hermitian matrix (cyclic Jacobi on the real
    /// symmetric embedding).
    pub fn min_eigenvalue_hermitian(&self) -> f64 {
        self.eigenvalues_hermitian().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn eigenvalues_hermitian(&self) -> Vec<f64> {
        // [[Re, -Im], [Im, Re]] has every eigenvalue of the Hermitian matrix twice.
        let n = self.dim;
        let m = 2 * n;
        let mut a = vec![0.0; m * m];
        for r in 0..n {
            for c in 0..n {
                let z = self.get(r, c);
                a[r * m + c] = z.re;
                a[r * m + c + n] = -z.im;
                a[(r + n) * m + c] = z.im;
                a[(r + n) * m + c + n] = z.re;
            }
        }
        let mut eig = jacobi_eigenvalues(&mut a, m);
        eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
        eig.into_iter().step_by(2).collect()
    }
}

fn jacobi_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

/// Kronecker product of `factors` in list order.
pub fn tensor_product(factors: &[CMatrix]) -> Result<CMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::arg("tensor_product needs at least one factor"))?;
    Ok(rest.iter().fold(first.clone(), |acc, f| acc.kron(f)))
}
