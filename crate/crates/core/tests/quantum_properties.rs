//! Property tests for the quantum layer: norm preservation under random
//! unitaries, Born-rule completeness, partial-trace consistency, and the
//! Helstrom bound against every implemented discrimination measurement.

use ltot_core::quantum::{
    apply_unitary, discrimination_success, helstrom, helstrom_povm, measure, tensor,
    trace_distance, DensityMatrix, Povm, StateVector, UnitaryOp, C64, TOL,
};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_state(dims: Vec<usize>, seed: u64) -> StateVector {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: usize = dims.iter().product();
    let mut amps: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= C64::new(norm, 0.0));
    StateVector::new(dims, amps).expect("normalized by construction")
}

fn random_unitary(dim: usize, seed: u64) -> UnitaryOp {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    let qr = m.qr();
    UnitaryOp::new(qr.q()).expect("Q factor is unitary")
}

fn random_density(dim: usize, seed: u64) -> DensityMatrix {
    // Mix a few random pure states.
    let states: Vec<StateVector> = (0..3)
        .map(|k| random_state(vec![dim], seed.wrapping_mul(31).wrapping_add(k)))
        .collect();
    DensityMatrix::mixture(&states).expect("mixture is a density matrix")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitaries_preserve_norm(seed in 0u64..1_000_000, dim in prop::sample::select(vec![2usize, 3])) {
        let joint = tensor(&random_state(vec![dim], seed), &random_state(vec![dim], seed ^ 1));
        let u = random_unitary(dim, seed ^ 2);
        for target in 0..2usize {
            let out = apply_unitary(&joint, &u, &[target]).unwrap();
            prop_assert!((out.norm_sqr() - 1.0).abs() < TOL);
        }
        let u2 = random_unitary(dim * dim, seed ^ 3);
        let out = apply_unitary(&joint, &u2, &[0, 1]).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < TOL);
    }

    #[test]
    fn born_probabilities_sum_to_one(seed in 0u64..1_000_000, dim in prop::sample::select(vec![2usize, 3])) {
        let state = random_state(vec![dim, dim], seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 99);
        let rec = measure(&state, &Povm::computational(dim), &[1], &mut rng).unwrap();
        let total: f64 = rec.probabilities.iter().sum();
        prop_assert!((total - 1.0).abs() < TOL);
        prop_assert!((rec.post_state.norm_sqr() - 1.0).abs() < TOL);
    }

    #[test]
    fn reduced_matrices_have_unit_trace(seed in 0u64..1_000_000) {
        let state = random_state(vec![2, 3], seed);
        for keep in [vec![0usize], vec![1], vec![0, 1]] {
            let reduced = state.partial_trace(&keep).unwrap();
            prop_assert!((reduced.trace() - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn trace_distance_is_a_bounded_metric(seed in 0u64..1_000_000, dim in prop::sample::select(vec![2usize, 3])) {
        let r0 = random_density(dim, seed);
        let r1 = random_density(dim, seed ^ 7);
        let d01 = trace_distance(&r0, &r1).unwrap();
        let d10 = trace_distance(&r1, &r0).unwrap();
        prop_assert!((0.0..=1.0 + TOL).contains(&d01));
        prop_assert!((d01 - d10).abs() < TOL);
        prop_assert!(trace_distance(&r0, &r0).unwrap() < TOL);
    }

    #[test]
    fn helstrom_povm_is_optimal_among_projective_guesses(seed in 0u64..1_000_000, dim in prop::sample::select(vec![2usize, 3])) {
        let r0 = random_density(dim, seed);
        let r1 = random_density(dim, seed ^ 13);
        let bound = helstrom(&r0, &r1).unwrap();
        let optimal = helstrom_povm(&r0, &r1).unwrap();
        prop_assert!((discrimination_success(&optimal, &r0, &r1).unwrap() - bound).abs() < TOL);
        // A random projective two-outcome guess never beats the bound.
        let u = random_unitary(dim, seed ^ 17);
        let basis_state = apply_unitary(&StateVector::basis(vec![dim], &[0]).unwrap(), &u, &[0]).unwrap();
        let guess = Povm::projector_pair(&basis_state);
        prop_assert!(discrimination_success(&guess, &r0, &r1).unwrap() <= bound + TOL);
    }
}

#[test]
fn honest_rot_outputs_are_uniform_over_eight_combinations() {
    use ltot_core::engine::{run_protocol, ChannelConfig};
    use ltot_core::protocols::{ProtocolParams, ProtocolRegistry};
    use ltot_core::stats::{chi_square, chi_square_crit_01};

    let registry = ProtocolRegistry::standard();
    for name in ["cks10-rot", "unfair-lt-rot", "role-switch", "combined-rot"] {
        let p = registry.build(name, &ProtocolParams::default()).unwrap();
        let mut counts = [0u64; 8];
        let n = 16_000u64;
        for seed in 0..n {
            let (outcome, _) = run_protocol(
                p.as_ref(),
                p.honest_alice(),
                p.honest_bob(),
                &ChannelConfig::lossless(),
                seed,
            )
            .unwrap();
            let rot = outcome.rot_output().unwrap();
            counts[usize::from(rot.x0 * 4 + rot.x1 * 2 + rot.b)] += 1;
        }
        let expected = [n as f64 / 8.0; 8];
        let stat = chi_square(&counts, &expected);
        assert!(
            stat < chi_square_crit_01(7),
            "{name}: chi2 {stat:.2}, counts {counts:?}"
        );
    }
}
