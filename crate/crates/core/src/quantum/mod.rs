//! Exact finite-dimensional quantum mechanics for small composite systems.

mod discrimination;
mod measurement;
mod operators;
mod state;

pub use discrimination::{
    discrimination_success, helstrom, helstrom_povm, maximally_mixed, trace_distance,
};
pub use measurement::{measure, MeasurementRecord};
pub use operators::{apply_unitary, Povm, UnitaryOp};
pub use state::{tensor, DensityMatrix, StateVector};

use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

/// Complex amplitude type used throughout the crate.
pub type C64 = Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = DMatrix<C64>;
/// Dense complex vector.
pub type CVector = DVector<C64>;

/// Global numeric tolerance for equality, norm, PSD and unitarity checks.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuantumError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid subsystem indices: {0}")]
    InvalidIndices(String),
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("POVM elements do not sum to identity (max deviation {0:.3e})")]
    NotComplete(f64),
    #[error("density matrix trace is {0}, expected 1")]
    BadTrace(f64),
    #[error("factor dimension {0} unsupported (only 2 and 3)")]
    BadFactorDim(usize),
}

pub(crate) fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Row-major strides for a multi-factor index space.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Eigenvalues and eigenvectors of a Hermitian matrix.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    let vals = eig.eigenvalues.iter().cloned().collect();
    (vals, eig.eigenvectors)
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub(crate) fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}
