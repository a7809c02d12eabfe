use super::{hermitian_eigen, identity, CMatrix, DensityMatrix, Povm, QuantumError, C64, TOL};

/// Trace distance (1/2)‖ρ0 − ρ1‖₁, computed from the eigenvalues of the
/// Hermitian difference. Always in [0, 1].
pub fn trace_distance(r0: &DensityMatrix, r1: &DensityMatrix) -> Result<f64, QuantumError> {
    if r0.dims() != r1.dims() {
        return Err(QuantumError::DimensionMismatch {
            expected: r0.matrix().nrows(),
            got: r1.matrix().nrows(),
        });
    }
    let diff = r0.matrix() - r1.matrix();
    let (vals, _) = hermitian_eigen(&diff);
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}

/// Maximum success probability of discriminating ρ0 from ρ1 under a uniform
/// prior: 1/2 + (1/2)·trace_distance.
pub fn helstrom(r0: &DensityMatrix, r1: &DensityMatrix) -> Result<f64, QuantumError> {
    Ok(0.5 + 0.5 * trace_distance(r0, r1)?)
}

/// The optimal two-outcome measurement achieving the Helstrom bound: outcome
/// 0 projects onto the positive eigenspace of (ρ0 − ρ1), outcome 1 onto the
/// rest (zero eigenvalues are assigned to outcome 1; any split of the kernel
/// attains the bound).
pub fn helstrom_povm(r0: &DensityMatrix, r1: &DensityMatrix) -> Result<Povm, QuantumError> {
    if r0.dims() != r1.dims() {
        return Err(QuantumError::DimensionMismatch {
            expected: r0.matrix().nrows(),
            got: r1.matrix().nrows(),
        });
    }
    let diff = r0.matrix() - r1.matrix();
    let (vals, vecs) = hermitian_eigen(&diff);
    let n = diff.nrows();
    let mut p0 = CMatrix::zeros(n, n);
    for (k, &v) in vals.iter().enumerate() {
        if v <= TOL {
            continue;
        }
        let col = vecs.column(k);
        for i in 0..n {
            for j in 0..n {
                p0[(i, j)] += col[i] * col[j].conj();
            }
        }
    }
    let p1 = identity(n) - &p0;
    Povm::new(vec![p0, p1])
}

/// Success probability of a given two-outcome POVM at discriminating ρ0 from
/// ρ1 (uniform prior, outcome k ⇒ guess ρk).
pub fn discrimination_success(
    povm: &Povm,
    r0: &DensityMatrix,
    r1: &DensityMatrix,
) -> Result<f64, QuantumError> {
    if povm.len() != 2 {
        return Err(QuantumError::InvalidIndices(
            "two-outcome POVM required".into(),
        ));
    }
    let tr = |e: &CMatrix, r: &DensityMatrix| -> f64 { (e * r.matrix()).trace().re };
    Ok(0.5 * tr(&povm.elements()[0], r0) + 0.5 * tr(&povm.elements()[1], r1))
}

/// The maximally mixed state 1/d over the given factors.
pub fn maximally_mixed(dims: Vec<usize>) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let m = identity(n) * C64::new(1.0 / n as f64, 0.0);
    DensityMatrix::new(dims, m).expect("1/d is a valid density matrix")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::StateVector;

    #[test]
    fn identical_states_have_zero_distance() {
        let r = StateVector::qubit(0).density();
        assert!(trace_distance(&r, &r).unwrap().abs() < TOL);
        assert!((helstrom(&r, &r).unwrap() - 0.5).abs() < TOL);
    }

    #[test]
    fn orthogonal_pure_states_are_perfectly_distinguishable() {
        let r0 = StateVector::qubit(0).density();
        let r1 = StateVector::qubit(1).density();
        assert!((trace_distance(&r0, &r1).unwrap() - 1.0).abs() < TOL);
        assert!((helstrom(&r0, &r1).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn qutrit_reduced_views_have_distance_half_and_helstrom_three_quarters() {
        // ρ_b = (|b⟩⟨b| + |2⟩⟨2|)/2 from the two-qutrit protocol.
        let reduced = |b: usize| {
            StateVector::two_level(vec![3, 3], &[b, b], &[2, 2], 1.0)
                .unwrap()
                .partial_trace(&[1])
                .unwrap()
        };
        let r0 = reduced(0);
        let r1 = reduced(1);
        assert!((trace_distance(&r0, &r1).unwrap() - 0.5).abs() < TOL);
        assert!((helstrom(&r0, &r1).unwrap() - 0.75).abs() < TOL);
    }

    #[test]
    fn helstrom_povm_attains_the_bound() {
        let reduced = |b: usize| {
            StateVector::two_level(vec![3, 3], &[b, b], &[2, 2], 1.0)
                .unwrap()
                .partial_trace(&[1])
                .unwrap()
        };
        let r0 = reduced(0);
        let r1 = reduced(1);
        let povm = helstrom_povm(&r0, &r1).unwrap();
        let p = discrimination_success(&povm, &r0, &r1).unwrap();
        assert!((p - helstrom(&r0, &r1).unwrap()).abs() < TOL);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let r2 = StateVector::qubit(0).density();
        let r3 = StateVector::qutrit(0).density();
        assert!(trace_distance(&r2, &r3).is_err());
        assert!(helstrom(&r2, &r3).is_err());
    }

    #[test]
    fn mixed_qubit_is_indistinguishable_from_itself_rotated() {
        let m = maximally_mixed(vec![2]);
        assert!(trace_distance(&m, &m).unwrap() < TOL);
    }
}
