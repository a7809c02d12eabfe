use super::state::MultiIndex;
use super::{
    hermitian_eigen, identity, max_abs_diff, product, strides, CMatrix, QuantumError,
    StateVector, C64, TOL,
};

/// A unitary acting on a (sub)space of dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    dim: usize,
    mat: CMatrix,
}

impl UnitaryOp {
    pub fn new(mat: CMatrix) -> Result<Self, QuantumError> {
        let dim = mat.nrows();
        if mat.ncols() != dim {
            return Err(QuantumError::DimensionMismatch {
                expected: dim,
                got: mat.ncols(),
            });
        }
        let dev = max_abs_diff(&(mat.adjoint() * &mat), &identity(dim));
        if dev > TOL {
            return Err(QuantumError::NotUnitary(dev));
        }
        Ok(Self { dim, mat })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            mat: identity(dim),
        }
    }

    /// Qubit bit flip.
    pub fn x() -> Self {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        Self {
            dim: 2,
            mat: CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        }
    }

    /// Qubit phase flip.
    pub fn z() -> Self {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        Self {
            dim: 2,
            mat: CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        }
    }

    /// Hadamard.
    pub fn h() -> Self {
        let w = C64::new(1.0 / 2.0f64.sqrt(), 0.0);
        Self {
            dim: 2,
            mat: CMatrix::from_row_slice(2, 2, &[w, w, w, -w]),
        }
    }

    /// X^{x0} Z^{x1} as an operator product (Z applied first).
    pub fn xz(x0: u8, x1: u8) -> Self {
        let mut m = identity(2);
        if x1 == 1 {
            m = Self::z().mat * m;
        }
        if x0 == 1 {
            m = Self::x().mat * m;
        }
        Self { dim: 2, mat: m }
    }

    /// Qutrit phase: |0⟩→(−1)^{x0}|0⟩, |1⟩→(−1)^{x1}|1⟩, |2⟩→|2⟩.
    pub fn qutrit_phase(x0: u8, x1: u8) -> Self {
        let sign = |x: u8| C64::new(if x == 1 { -1.0 } else { 1.0 }, 0.0);
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = sign(x0);
        m[(1, 1)] = sign(x1);
        m[(2, 2)] = C64::new(1.0, 0.0);
        Self { dim: 3, mat: m }
    }

    /// H^b applied to |d⟩, the qubit Bob sends in the unfair protocol.
    pub fn h_pow(b: u8) -> Self {
        if b == 1 {
            Self::h()
        } else {
            Self::identity(2)
        }
    }
}

/// Applies `u` to the listed factors of `state`, identity elsewhere.
///
/// `targets` are factor indices in the order matching the unitary's tensor
/// structure; they must be distinct and `u.dim` must equal the product of the
/// target dimensions.
pub fn apply_unitary(
    state: &StateVector,
    u: &UnitaryOp,
    targets: &[usize],
) -> Result<StateVector, QuantumError> {
    let amps = apply_matrix(state, u.matrix(), targets)?;
    Ok(StateVector::from_parts_unchecked(
        state.dims().to_vec(),
        amps,
    ))
}

/// Applies an arbitrary square matrix to the listed factors (no unitarity
/// requirement); used for POVM elements and Kraus operators.
pub(crate) fn apply_matrix(
    state: &StateVector,
    m: &CMatrix,
    targets: &[usize],
) -> Result<super::CVector, QuantumError> {
    let dims = state.dims();
    if targets.is_empty()
        || targets.iter().any(|&t| t >= dims.len())
        || (1..targets.len()).any(|i| targets[i..].contains(&targets[i - 1]))
    {
        return Err(QuantumError::InvalidIndices(format!(
            "targets {targets:?} for {} factors",
            dims.len()
        )));
    }
    let tdims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
    let tdim = product(&tdims);
    if m.nrows() != tdim || m.ncols() != tdim {
        return Err(QuantumError::DimensionMismatch {
            expected: tdim,
            got: m.nrows(),
        });
    }
    let full_st = strides(dims);
    let rest: Vec<usize> = (0..dims.len()).filter(|f| !targets.contains(f)).collect();
    let rdims: Vec<usize> = rest.iter().map(|&f| dims[f]).collect();

    let amps = state.amplitudes();
    let mut out = amps.clone();
    let t_multis = MultiIndex::all(&tdims);
    for rmulti in MultiIndex::all(&rdims) {
        let base: usize = rest
            .iter()
            .zip(&rmulti)
            .map(|(&f, &l)| l * full_st[f])
            .sum();
        // Global index of target multi-index `tm` within this rest-slice.
        let gidx = |tm: &[usize]| -> usize {
            base + targets
                .iter()
                .zip(tm)
                .map(|(&f, &l)| l * full_st[f])
                .sum::<usize>()
        };
        let slice: Vec<C64> = t_multis.iter().map(|tm| amps[gidx(tm)]).collect();
        for (row, tm) in t_multis.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for col in 0..tdim {
                acc += m[(row, col)] * slice[col];
            }
            out[gidx(tm)] = acc;
        }
    }
    Ok(out)
}

/// A positive operator-valued measure over a fixed-dimension space.
#[derive(Debug, Clone)]
pub struct Povm {
    dim: usize,
    elements: Vec<CMatrix>,
}

impl Povm {
    /// Validates Hermiticity, positivity and completeness of the elements.
    pub fn new(elements: Vec<CMatrix>) -> Result<Self, QuantumError> {
        let dim = elements
            .first()
            .ok_or_else(|| QuantumError::InvalidIndices("empty POVM".into()))?
            .nrows();
        let mut sum = CMatrix::zeros(dim, dim);
        for e in &elements {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(QuantumError::DimensionMismatch {
                    expected: dim,
                    got: e.nrows(),
                });
            }
            let herm = max_abs_diff(e, &e.adjoint());
            if herm > TOL {
                return Err(QuantumError::NotHermitian(herm));
            }
            let (vals, _) = hermitian_eigen(e);
            let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            if min < -TOL {
                return Err(QuantumError::NotPsd(min));
            }
            sum += e;
        }
        let dev = max_abs_diff(&sum, &identity(dim));
        if dev > TOL {
            return Err(QuantumError::NotComplete(dev));
        }
        Ok(Self { dim, elements })
    }

    /// Two-outcome measurement {|ψ⟩⟨ψ|, 1 − |ψ⟩⟨ψ|}.
    pub fn projector_pair(psi: &StateVector) -> Self {
        let p = psi.density().matrix().clone();
        let q = identity(psi.total_dim()) - &p;
        Self {
            dim: psi.total_dim(),
            elements: vec![p, q],
        }
    }

    /// Projective measurement onto an orthonormal list of states.
    pub fn from_basis(states: &[StateVector]) -> Result<Self, QuantumError> {
        let elements = states
            .iter()
            .map(|s| s.density().matrix().clone())
            .collect();
        Self::new(elements)
    }

    /// Computational-basis measurement of a `dim`-level system.
    pub fn computational(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|k| {
                let mut m = CMatrix::zeros(dim, dim);
                m[(k, k)] = C64::new(1.0, 0.0);
                m
            })
            .collect();
        Self { dim, elements }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_flips_a_qubit() {
        let s = apply_unitary(&StateVector::qubit(0), &UnitaryOp::x(), &[0]).unwrap();
        assert!(s.equals_up_to_phase(&StateVector::qubit(1)));
    }

    #[test]
    fn phase_unitary_on_second_qutrit_flips_00_sign() {
        // (x0,x1) = (1,0) on (|00⟩+|22⟩)/√2 → (−|00⟩+|22⟩)/√2
        let phi0 = StateVector::two_level(vec![3, 3], &[0, 0], &[2, 2], 1.0).unwrap();
        let got = apply_unitary(&phi0, &UnitaryOp::qutrit_phase(1, 0), &[1]).unwrap();
        let want = StateVector::two_level(vec![3, 3], &[2, 2], &[0, 0], -1.0).unwrap();
        assert!(got.equals_up_to_phase(&want));
        assert!((got.amplitudes()[0].re + 1.0 / 2.0f64.sqrt()).abs() < TOL);
    }

    #[test]
    fn xz_on_hadamard_zero_gives_hadamard_one() {
        // |⟨H1| X Z |H0⟩| = 1
        let h0 = apply_unitary(&StateVector::qubit(0), &UnitaryOp::h(), &[0]).unwrap();
        let h1 = apply_unitary(&StateVector::qubit(1), &UnitaryOp::h(), &[0]).unwrap();
        let got = apply_unitary(&h0, &UnitaryOp::xz(1, 1), &[0]).unwrap();
        assert!(got.equals_up_to_phase(&h1));
    }

    #[test]
    fn unitary_application_preserves_norm() {
        let s = StateVector::two_level(vec![3, 3], &[0, 0], &[2, 2], 1.0).unwrap();
        let u = UnitaryOp::qutrit_phase(1, 1);
        let t = apply_unitary(&s, &u, &[0]).unwrap();
        assert!((t.norm_sqr() - 1.0).abs() < TOL);
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let s = StateVector::qubit(0);
        let err = apply_unitary(&s, &UnitaryOp::qutrit_phase(0, 0), &[0]).unwrap_err();
        assert!(matches!(err, QuantumError::DimensionMismatch { .. }));
    }

    #[test]
    fn povm_must_sum_to_identity() {
        let p = StateVector::qubit(0).density().matrix().clone();
        assert!(matches!(
            Povm::new(vec![p]),
            Err(QuantumError::NotComplete(_))
        ));
    }

    #[test]
    fn rejects_non_unitary_matrix() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            ],
        );
        assert!(matches!(UnitaryOp::new(m), Err(QuantumError::NotUnitary(_))));
    }
}
