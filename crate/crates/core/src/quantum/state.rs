use super::{max_abs_diff, product, strides, CMatrix, CVector, QuantumError, C64, TOL};

/// A normalized pure state over a list of qubit/qutrit factors.
///
/// Factors are ordered; amplitudes use row-major indexing (factor 0 is the
/// most significant digit of the basis index).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: CVector,
}

impl StateVector {
    /// Builds a state from raw amplitudes, checking length and normalization.
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self, QuantumError> {
        for &d in &dims {
            if d != 2 && d != 3 {
                return Err(QuantumError::BadFactorDim(d));
            }
        }
        let want = product(&dims);
        if amps.len() != want {
            return Err(QuantumError::DimensionMismatch {
                expected: want,
                got: amps.len(),
            });
        }
        let amps = CVector::from_vec(amps);
        let n2 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (n2 - 1.0).abs() > TOL {
            return Err(QuantumError::NotNormalized(n2));
        }
        Ok(Self { dims, amps })
    }

    /// Computational basis state |levels[0] levels[1] ...⟩.
    pub fn basis(dims: Vec<usize>, levels: &[usize]) -> Result<Self, QuantumError> {
        if levels.len() != dims.len() || levels.iter().zip(&dims).any(|(&l, &d)| l >= d) {
            return Err(QuantumError::InvalidIndices(format!(
                "levels {levels:?} for dims {dims:?}"
            )));
        }
        let st = strides(&dims);
        let idx: usize = levels.iter().zip(&st).map(|(&l, &s)| l * s).sum();
        let mut amps = vec![C64::new(0.0, 0.0); product(&dims)];
        amps[idx] = C64::new(1.0, 0.0);
        Ok(Self {
            dims,
            amps: CVector::from_vec(amps),
        })
    }

    /// Single-qubit basis state |b⟩.
    pub fn qubit(b: u8) -> Self {
        Self::basis(vec![2], &[b as usize]).expect("valid qubit level")
    }

    /// Single-qutrit basis state |t⟩, t ∈ {0,1,2}.
    pub fn qutrit(t: usize) -> Self {
        Self::basis(vec![3], &[t]).expect("valid qutrit level")
    }

    /// Equal superposition (|a⟩ + sign·|b⟩)/√2 of two basis states of one space.
    pub fn two_level(dims: Vec<usize>, a: &[usize], b: &[usize], sign: f64) -> Result<Self, QuantumError> {
        let st = strides(&dims);
        let enc = |ls: &[usize]| -> usize { ls.iter().zip(&st).map(|(&l, &s)| l * s).sum() };
        let mut amps = vec![C64::new(0.0, 0.0); product(&dims)];
        let w = 1.0 / 2.0f64.sqrt();
        amps[enc(a)] = C64::new(w, 0.0);
        amps[enc(b)] += C64::new(sign * w, 0.0);
        Self::new(dims, amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, amps: CVector) -> Self {
        Self { dims, amps }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<C64, QuantumError> {
        if self.dims != other.dims {
            return Err(QuantumError::DimensionMismatch {
                expected: self.total_dim(),
                got: other.total_dim(),
            });
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// Equality up to a global phase: |⟨a|b⟩| = 1 within tolerance.
    pub fn equals_up_to_phase(&self, other: &Self) -> bool {
        match self.inner(other) {
            Ok(ip) => (ip.norm() - 1.0).abs() <= TOL,
            Err(_) => false,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Projector |ψ⟩⟨ψ| as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let n = self.total_dim();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.amps[i] * self.amps[j].conj();
            }
        }
        DensityMatrix {
            dims: self.dims.clone(),
            mat: m,
        }
    }

    /// Reduced density matrix over `keep` (strictly increasing factor indices).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix, QuantumError> {
        partial_trace_vec(&self.dims, &self.amps, keep)
    }
}

/// Kronecker product of two pure states; dims are concatenated.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    let mut amps = CVector::zeros(a.total_dim() * b.total_dim());
    for i in 0..a.total_dim() {
        for j in 0..b.total_dim() {
            amps[i * b.total_dim() + j] = a.amps[i] * b.amps[j];
        }
    }
    StateVector { dims, amps }
}

/// A density operator over a list of qubit/qutrit factors.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(dims: Vec<usize>, mat: CMatrix) -> Result<Self, QuantumError> {
        let n = product(&dims);
        if mat.nrows() != n || mat.ncols() != n {
            return Err(QuantumError::DimensionMismatch {
                expected: n,
                got: mat.nrows(),
            });
        }
        let herm_dev = max_abs_diff(&mat, &mat.adjoint());
        if herm_dev > TOL {
            return Err(QuantumError::NotHermitian(herm_dev));
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > TOL {
            return Err(QuantumError::BadTrace(tr));
        }
        let (vals, _) = super::hermitian_eigen(&mat);
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -TOL {
            return Err(QuantumError::NotPsd(min));
        }
        Ok(Self { dims, mat })
    }

    /// Uniform classical mixture of pure states over the same factors.
    pub fn mixture(states: &[StateVector]) -> Result<Self, QuantumError> {
        let dims = states
            .first()
            .ok_or_else(|| QuantumError::InvalidIndices("empty mixture".into()))?
            .dims()
            .to_vec();
        let n = product(&dims);
        let mut mat = CMatrix::zeros(n, n);
        let w = 1.0 / states.len() as f64;
        for s in states {
            if s.dims() != dims {
                return Err(QuantumError::DimensionMismatch {
                    expected: n,
                    got: s.total_dim(),
                });
            }
            mat += s.density().mat * C64::new(w, 0.0);
        }
        Self::new(dims, mat)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Reduced density matrix over `keep` (strictly increasing factor indices).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix, QuantumError> {
        let (kd, rd, kidx, ridx) = split_indices(&self.dims, keep)?;
        let kn = product(&kd);
        let full_st = strides(&self.dims);
        let enc = |kmulti: &[usize], rmulti: &[usize]| -> usize {
            let mut idx = 0;
            for (pos, &f) in kidx.iter().enumerate() {
                idx += kmulti[pos] * full_st[f];
            }
            for (pos, &f) in ridx.iter().enumerate() {
                idx += rmulti[pos] * full_st[f];
            }
            idx
        };
        let mut out = CMatrix::zeros(kn, kn);
        let kms = MultiIndex::all(&kd);
        let rms = MultiIndex::all(&rd);
        for (a, ka) in kms.iter().enumerate() {
            for (b, kb) in kms.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for r in &rms {
                    acc += self.mat[(enc(ka, r), enc(kb, r))];
                }
                out[(a, b)] = acc;
            }
        }
        DensityMatrix::new(kd, out)
    }
}

fn partial_trace_vec(
    dims: &[usize],
    amps: &CVector,
    keep: &[usize],
) -> Result<DensityMatrix, QuantumError> {
    let (kd, rd, kidx, ridx) = split_indices(dims, keep)?;
    let kn = product(&kd);
    let full_st = strides(dims);
    let enc = |kmulti: &[usize], rmulti: &[usize]| -> usize {
        let mut idx = 0;
        for (pos, &f) in kidx.iter().enumerate() {
            idx += kmulti[pos] * full_st[f];
        }
        for (pos, &f) in ridx.iter().enumerate() {
            idx += rmulti[pos] * full_st[f];
        }
        idx
    };
    let mut out = CMatrix::zeros(kn, kn);
    let kms = MultiIndex::all(&kd);
    let rms = MultiIndex::all(&rd);
    for (a, ka) in kms.iter().enumerate() {
        for (b, kb) in kms.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for r in &rms {
                acc += amps[enc(ka, r)] * amps[enc(kb, r)].conj();
            }
            out[(a, b)] = acc;
        }
    }
    DensityMatrix::new(kd, out)
}

/// Splits factor indices into (keep dims, rest dims, keep idx, rest idx).
fn split_indices(
    dims: &[usize],
    keep: &[usize],
) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>), QuantumError> {
    if keep.is_empty() {
        return Err(QuantumError::InvalidIndices("keep is empty".into()));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(QuantumError::InvalidIndices(format!(
            "keep {keep:?} for {} factors (must be strictly increasing)",
            dims.len()
        )));
    }
    let kd: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let ridx: Vec<usize> = (0..dims.len()).filter(|f| !keep.contains(f)).collect();
    let rd: Vec<usize> = ridx.iter().map(|&f| dims[f]).collect();
    Ok((kd, rd, keep.to_vec(), ridx))
}

/// Helper enumerating all multi-indices of a dim list, row-major order.
pub(crate) struct MultiIndex;

impl MultiIndex {
    pub(crate) fn all(dims: &[usize]) -> Vec<Vec<usize>> {
        let total = product(dims);
        let st = strides(dims);
        (0..total)
            .map(|i| dims.iter().zip(&st).map(|(&d, &s)| (i / s) % d).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn basis_tensor_gives_joint_basis_state() {
        let s = tensor(&StateVector::qubit(0), &StateVector::qubit(1));
        assert_eq!(s.dims(), &[2, 2]);
        let want = StateVector::basis(vec![2, 2], &[0, 1]).unwrap();
        assert_eq!(s.amplitudes(), want.amplitudes());
    }

    #[test]
    fn tensor_is_linear_in_first_factor() {
        let w = 1.0 / 2.0f64.sqrt();
        let plus = StateVector::new(vec![2], vec![c(w), c(w)]).unwrap();
        let s = tensor(&plus, &StateVector::qubit(0));
        // (|00⟩ + |10⟩)/√2
        assert!((s.amplitudes()[0].re - w).abs() < TOL);
        assert!((s.amplitudes()[2].re - w).abs() < TOL);
        assert!(s.amplitudes()[1].norm() < TOL && s.amplitudes()[3].norm() < TOL);
    }

    #[test]
    fn two_qutrit_superposition_matches_tensor_sum() {
        // (|00⟩ + |22⟩)/√2 assembled two ways
        let direct = StateVector::two_level(vec![3, 3], &[0, 0], &[2, 2], 1.0).unwrap();
        let w = c(1.0 / 2.0f64.sqrt());
        let t00 = tensor(&StateVector::qutrit(0), &StateVector::qutrit(0));
        let t22 = tensor(&StateVector::qutrit(2), &StateVector::qutrit(2));
        let amps: Vec<C64> = (0..9)
            .map(|i| (t00.amplitudes()[i] + t22.amplitudes()[i]) * w)
            .collect();
        let summed = StateVector::new(vec![3, 3], amps).unwrap();
        assert!(direct.equals_up_to_phase(&summed));
        assert_eq!(direct.amplitudes(), summed.amplitudes());
    }

    #[test]
    fn rejects_unnormalized_amplitudes() {
        let err = StateVector::new(vec![2], vec![c(1.0), c(1.0)]).unwrap_err();
        assert!(matches!(err, QuantumError::NotNormalized(_)));
    }

    #[test]
    fn rejects_wrong_amplitude_count() {
        let err = StateVector::new(vec![2, 2], vec![c(1.0)]).unwrap_err();
        assert!(matches!(err, QuantumError::DimensionMismatch { .. }));
    }

    #[test]
    fn partial_trace_of_product_state_is_pure() {
        let s = StateVector::basis(vec![2, 2], &[0, 0]).unwrap();
        let r = s.partial_trace(&[0]).unwrap();
        assert!((r.matrix()[(0, 0)].re - 1.0).abs() < TOL);
        assert!(r.matrix()[(1, 1)].norm() < TOL);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let bell = StateVector::two_level(vec![2, 2], &[0, 0], &[1, 1], 1.0).unwrap();
        let r = bell.partial_trace(&[0]).unwrap();
        assert!((r.matrix()[(0, 0)].re - 0.5).abs() < TOL);
        assert!((r.matrix()[(1, 1)].re - 0.5).abs() < TOL);
        assert!(r.matrix()[(0, 1)].norm() < TOL);
    }

    #[test]
    fn partial_trace_second_factor_of_phi_b() {
        // tr_1 |φ_b⟩⟨φ_b| = (|b⟩⟨b| + |2⟩⟨2|)/2
        for b in 0..2usize {
            let phi = StateVector::two_level(vec![3, 3], &[b, b], &[2, 2], 1.0).unwrap();
            let r = phi.partial_trace(&[1]).unwrap();
            assert!((r.matrix()[(b, b)].re - 0.5).abs() < TOL);
            assert!((r.matrix()[(2, 2)].re - 0.5).abs() < TOL);
            assert!((r.trace() - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn partial_trace_rejects_bad_indices() {
        let s = StateVector::basis(vec![2, 2], &[0, 0]).unwrap();
        assert!(s.partial_trace(&[]).is_err());
        assert!(s.partial_trace(&[2]).is_err());
        assert!(s.partial_trace(&[1, 0]).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let good = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.0), c(0.0), c(0.5)]);
        assert!(DensityMatrix::new(vec![2], good).is_ok());
        let bad_trace = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(1.0)]);
        assert!(matches!(
            DensityMatrix::new(vec![2], bad_trace),
            Err(QuantumError::BadTrace(_))
        ));
        let not_psd = CMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
        assert!(matches!(
            DensityMatrix::new(vec![2], not_psd),
            Err(QuantumError::NotPsd(_))
        ));
    }
}
