//! The composition calculus: cheating probabilities of the arbitrated OT
//! built from a weak coin flip and a pair of mirrored randomized OTs.

use crate::types::DomainError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionResult {
    pub a_wcf: f64,
    pub b_wcf: f64,
    pub a_rot: f64,
    pub b_rot: f64,
    pub a_ot: f64,
    pub b_ot: f64,
    pub eps_ot: f64,
    pub eps_rot: f64,
    pub fair: bool,
}

fn check_range(v: f64) -> Result<f64, DomainError> {
    if !(0.5..=1.0).contains(&v) {
        return Err(DomainError::ProbabilityRange(v));
    }
    Ok(v)
}

/// A_OT = A_WCF·|A_ROT − B_ROT| + min(A_ROT, B_ROT), and symmetrically for
/// B_OT with B_WCF. The resulting bias never exceeds the inner one, with
/// equality exactly when the coin flip is fully broken or the inner protocol
/// is already fair.
pub fn compose_theorem1(
    a_wcf: f64,
    b_wcf: f64,
    a_rot: f64,
    b_rot: f64,
) -> Result<CompositionResult, DomainError> {
    for v in [a_wcf, b_wcf, a_rot, b_rot] {
        check_range(v)?;
    }
    let gap = (a_rot - b_rot).abs();
    let base = a_rot.min(b_rot);
    let a_ot = a_wcf * gap + base;
    let b_ot = b_wcf * gap + base;
    let eps_ot = a_ot.max(b_ot) - 0.5;
    let eps_rot = a_rot.max(b_rot) - 0.5;
    Ok(CompositionResult {
        a_wcf,
        b_wcf,
        a_rot,
        b_rot,
        a_ot,
        b_ot,
        eps_ot,
        eps_rot,
        fair: (a_ot - b_ot).abs() <= 1e-12,
    })
}

/// True iff the composition strictly improves the bias; provably equivalent
/// to (ε_WCF < 1/2 and A_ROT ≠ B_ROT).
pub fn strict_improvement_check(
    a_wcf: f64,
    b_wcf: f64,
    a_rot: f64,
    b_rot: f64,
) -> Result<bool, DomainError> {
    let r = compose_theorem1(a_wcf, b_wcf, a_rot, b_rot)?;
    Ok(r.eps_ot < r.eps_rot)
}

/// The probability grid used by the property sweeps: [1/2, 1] at the given
/// step (21 points at step 0.025).
pub fn probability_grid(step: f64) -> Vec<f64> {
    let n = ((0.5 / step).round() as usize).max(1);
    (0..=n).map(|i| 0.5 + i as f64 * step).collect()
}

/// Exhaustive check of the strict-improvement equivalence over a fair-WCF
/// grid: eps_ot < eps_rot ⟺ (eps_wcf < 1/2 ∧ a_rot ≠ b_rot).
pub fn strict_improvement_equivalence_holds(step: f64) -> bool {
    let grid = probability_grid(step);
    for &w in &grid {
        for &a in &grid {
            for &b in &grid {
                let improved = strict_improvement_check(w, w, a, b).expect("grid in range");
                let expected = (w - 0.5) < 0.5 && a != b;
                if improved != expected {
                    return false;
                }
            }
        }
    }
    true
}

/// Exhaustive check that a fair coin flip yields a fair OT and that swapping
/// the two forcing probabilities swaps the two OT probabilities exactly.
pub fn fairness_and_symmetry_hold(step: f64) -> bool {
    let grid = probability_grid(step);
    for &wa in &grid {
        for &wb in &grid {
            for &a in &grid {
                for &b in &grid {
                    let r = compose_theorem1(wa, wb, a, b).expect("grid in range");
                    let s = compose_theorem1(wb, wa, a, b).expect("grid in range");
                    if r.a_ot != s.b_ot || r.b_ot != s.a_ot {
                        return false;
                    }
                    if wa == wb && (r.a_ot - r.b_ot).abs() > 1e-12 {
                        return false;
                    }
                    if r.eps_ot > r.eps_rot + 1e-15 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corollary_numbers() {
        let r = compose_theorem1(0.8536, 0.8536, 1.0, 0.5).unwrap();
        assert!((r.a_ot - 0.9268).abs() < 1e-12);
        assert!((r.b_ot - 0.9268).abs() < 1e-12);
        assert!((r.eps_ot - 0.4268).abs() < 1e-12);
        assert!(r.fair);
    }

    #[test]
    fn broken_coin_flip_gains_nothing() {
        let r = compose_theorem1(1.0, 1.0, 0.8, 0.6).unwrap();
        assert!((r.a_ot - 0.8).abs() < 1e-12);
        assert!((r.b_ot - 0.8).abs() < 1e-12);
        assert!((r.eps_ot - r.eps_rot).abs() < 1e-15);
    }

    #[test]
    fn ideal_coin_flip_reaches_the_quarter_floor() {
        let r = compose_theorem1(0.5, 0.5, 1.0, 0.5).unwrap();
        assert!((r.a_ot - 0.75).abs() < 1e-12);
        assert!((r.b_ot - 0.75).abs() < 1e-12);
        assert!((r.eps_ot - 0.25).abs() < 1e-12);
    }

    #[test]
    fn strict_improvement_examples() {
        assert!(strict_improvement_check(0.9, 0.9, 1.0, 0.5).unwrap());
        assert!(!strict_improvement_check(1.0, 1.0, 1.0, 0.5).unwrap());
        assert!(!strict_improvement_check(0.7, 0.7, 0.8, 0.8).unwrap());
    }

    #[test]
    fn out_of_range_inputs_are_rejected() {
        assert!(compose_theorem1(0.4, 0.6, 0.6, 0.6).is_err());
        assert!(compose_theorem1(0.6, 1.2, 0.6, 0.6).is_err());
    }

    #[test]
    fn grid_properties_hold_at_spec_granularity() {
        assert_eq!(probability_grid(0.025).len(), 21);
        assert!(strict_improvement_equivalence_holds(0.025));
        assert!(fairness_and_symmetry_hold(0.025));
    }
}
