//! The composition calculus, Monte Carlo cheating estimation, and sweeps.

mod compose;
mod estimate;

pub use compose::{
    compose_theorem1, fairness_and_symmetry_hold, probability_grid,
    strict_improvement_check, strict_improvement_equivalence_holds, CompositionResult,
};
pub use estimate::{estimate_cheating, loss_gain_curve, EstimateError, LossGainPoint};

pub use crate::stats::TrialStats;
