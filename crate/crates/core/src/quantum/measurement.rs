use super::operators::apply_matrix;
use super::{hermitian_eigen, CMatrix, Povm, QuantumError, StateVector, C64, TOL};
use rand::Rng;

/// Outcome of a sampled measurement, including the Born probabilities of all
/// outcomes (recorded into transcripts by the protocol engine).
#[derive(Debug, Clone)]
pub struct MeasurementRecord {
    pub outcome: usize,
    pub probabilities: Vec<f64>,
    pub post_state: StateVector,
}

/// Samples a POVM on the listed factors of `state` with Born probabilities.
///
/// The outcome is drawn only among positive-probability outcomes, so the
/// post-measurement renormalization never divides by zero. The post-state is
/// E_k|ψ⟩/‖·‖ when E_k is a projector and √E_k|ψ⟩/‖·‖ in general.
pub fn measure<R: Rng>(
    state: &StateVector,
    povm: &Povm,
    targets: &[usize],
    rng: &mut R,
) -> Result<MeasurementRecord, QuantumError> {
    let mut probs = Vec::with_capacity(povm.len());
    for e in povm.elements() {
        let w = apply_matrix(state, e, targets)?;
        let p = state
            .amplitudes()
            .iter()
            .zip(w.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum::<f64>();
        probs.push(p.max(0.0));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(QuantumError::NotComplete(total - 1.0));
    }

    let u: f64 = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut outcome = None;
    for (k, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        outcome = Some(k);
        if u < acc {
            break;
        }
    }
    let outcome = outcome.expect("at least one positive-probability outcome");

    let kraus = kraus_of(&povm.elements()[outcome]);
    let mut post = apply_matrix(state, &kraus, targets)?;
    let norm = post.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    post.iter_mut().for_each(|a| *a /= C64::new(norm, 0.0));
    Ok(MeasurementRecord {
        outcome,
        probabilities: probs,
        post_state: StateVector::from_parts_unchecked(state.dims().to_vec(), post),
    })
}

/// √E for a PSD element; equals E itself when E is a projector.
fn kraus_of(e: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(e);
    // Projector check: all eigenvalues 0 or 1.
    if vals.iter().all(|&v| v.abs() < TOL || (v - 1.0).abs() < TOL) {
        return e.clone();
    }
    let n = e.nrows();
    let mut root = CMatrix::zeros(n, n);
    for (k, &v) in vals.iter().enumerate() {
        if v <= 0.0 {
            continue;
        }
        let col = vecs.column(k);
        let s = C64::new(v.sqrt(), 0.0);
        for i in 0..n {
            for j in 0..n {
                root[(i, j)] += s * col[i] * col[j].conj();
            }
        }
    }
    root
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{apply_unitary, UnitaryOp};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orthogonal_state_yields_outcome_one_with_certainty() {
        // (−|bb⟩+|22⟩)/√2 measured with {|φ_b⟩⟨φ_b|, 1−Π} → outcome 1
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for b in 0..2usize {
            let phi = StateVector::two_level(vec![3, 3], &[b, b], &[2, 2], 1.0).unwrap();
            let povm = Povm::projector_pair(&phi);
            let flipped = StateVector::two_level(vec![3, 3], &[2, 2], &[b, b], -1.0).unwrap();
            let rec = measure(&flipped, &povm, &[0, 1], &mut rng).unwrap();
            assert_eq!(rec.outcome, 1);
            assert!(rec.probabilities[0].abs() < TOL);
            assert!((rec.probabilities[1] - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn matching_state_yields_outcome_zero_with_certainty() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for b in 0..2usize {
            let phi = StateVector::two_level(vec![3, 3], &[b, b], &[2, 2], 1.0).unwrap();
            let povm = Povm::projector_pair(&phi);
            let rec = measure(&phi, &povm, &[0, 1], &mut rng).unwrap();
            assert_eq!(rec.outcome, 0);
            assert!((rec.probabilities[0] - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn hadamard_state_measures_half_half() {
        let h0 = apply_unitary(&StateVector::qubit(0), &UnitaryOp::h(), &[0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rec = measure(&h0, &Povm::computational(2), &[0], &mut rng).unwrap();
        assert!((rec.probabilities[0] - 0.5).abs() < TOL);
        assert!((rec.probabilities[1] - 0.5).abs() < TOL);
        // Post-state collapses to the observed basis state.
        let want = StateVector::qubit(rec.outcome as u8);
        assert!(rec.post_state.equals_up_to_phase(&want));
    }

    #[test]
    fn outcome_frequencies_track_born_rule() {
        let h0 = apply_unitary(&StateVector::qubit(0), &UnitaryOp::h(), &[0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 20_000;
        let mut zeros = 0;
        for _ in 0..n {
            if measure(&h0, &Povm::computational(2), &[0], &mut rng)
                .unwrap()
                .outcome
                == 0
            {
                zeros += 1;
            }
        }
        let f = zeros as f64 / n as f64;
        assert!((f - 0.5).abs() < 0.02, "frequency {f}");
    }

    #[test]
    fn measurement_on_subsystem_of_entangled_pair() {
        // Measuring Alice's half of |Φ+⟩ collapses Bob's half to match.
        let bell = StateVector::two_level(vec![2, 2], &[0, 0], &[1, 1], 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rec = measure(&bell, &Povm::computational(2), &[0], &mut rng).unwrap();
        let k = rec.outcome;
        let want = StateVector::basis(vec![2, 2], &[k, k]).unwrap();
        assert!(rec.post_state.equals_up_to_phase(&want));
    }
}
