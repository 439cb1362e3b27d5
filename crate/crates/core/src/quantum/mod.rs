//! Dense complex linear algebra for few-qubit states, observables and
//! projective measurements.
//!
//! Qubit ordering is big-endian: in a tensor product the first factor owns the
//! most significant index bit.

mod matrix;
mod measurement;
mod state;

pub use matrix::{tensor_product, CMatrix, C64};
pub use measurement::{
    ghz_basis, projective_basis, xy_observable, xz_observable, BasisKind, Observable,
    ProjectiveMeasurement,
};
pub use state::{apply_werner_noise, generalized_epr, MixedState, PureState};

/// Pauli matrices.
pub mod pauli {
    use super::{CMatrix, C64};

    pub fn identity() -> CMatrix {
        CMatrix::identity(2)
    }

    pub fn x() -> CMatrix {
        CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn y() -> CMatrix {
        let z = C64::new(0.0, 0.0);
        CMatrix::from_vec(2, vec![z, C64::new(0.0, -1.0), C64::new(0.0, 1.0), z])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0])
    }
}
