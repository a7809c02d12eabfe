//! The coin-flip-arbitrated randomized OT ("combined-rot").
//!
//! A weak coin flip picks between two randomized OT branches with mirrored
//! cheating profiles (x, y) and (y, x), x ≥ y. A cheater can steer toward its
//! favorable branch only as far as the coin flip allows, which is exactly
//! what the composition formula accounts for.

use crate::engine::{
    Action, Event, PartyCtx, Protocol, ProtocolHandle, ProtocolKind, StepError, Strategy,
};
use crate::types::{CheatProfile, Role, WcfSpec};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CombineError {
    #[error("branch {0} has no declared cheating profile")]
    MissingProfile(String),
    #[error("branch profiles are not mirrored: ({0:.4},{1:.4}) vs ({2:.4},{3:.4})")]
    NotMirrored(f64, f64, f64, f64),
    #[error("branch 0 must satisfy x ≥ y, got ({0:.4},{1:.4})")]
    WrongOrder(f64, f64),
    #[error("branches must not carry their own coin-flip stage")]
    NestedWcf,
}

pub struct CombinedRot {
    spec: WcfSpec,
    branch0: ProtocolHandle,
    branch1: ProtocolHandle,
    x: f64,
    y: f64,
}

impl CombinedRot {
    /// Combines two branches whose declared profiles are (x, y) and (y, x)
    /// with x ≥ y; branch 0 runs on outcome c = 0.
    pub fn new(
        spec: WcfSpec,
        branch0: ProtocolHandle,
        branch1: ProtocolHandle,
    ) -> Result<Self, CombineError> {
        let p0 = branch0
            .declared_profile()
            .ok_or_else(|| CombineError::MissingProfile(branch0.name()))?;
        let p1 = branch1
            .declared_profile()
            .ok_or_else(|| CombineError::MissingProfile(branch1.name()))?;
        if p0.alice < p0.bob {
            return Err(CombineError::WrongOrder(p0.alice, p0.bob));
        }
        if (p0.alice - p1.bob).abs() > 1e-12 || (p0.bob - p1.alice).abs() > 1e-12 {
            return Err(CombineError::NotMirrored(p0.alice, p0.bob, p1.alice, p1.bob));
        }
        if branch0.wcf().is_some() || branch1.wcf().is_some() {
            return Err(CombineError::NestedWcf);
        }
        Ok(Self {
            spec,
            branch0,
            branch1,
            x: p0.alice,
            y: p0.bob,
        })
    }

    /// Builds both branches from one base protocol per the role-switch
    /// construction: the branch with the larger Alice-side power runs on c = 0.
    pub fn from_base(spec: WcfSpec, base: ProtocolHandle) -> Result<Self, CombineError> {
        let profile = base
            .declared_profile()
            .ok_or_else(|| CombineError::MissingProfile(base.name()))?;
        let switched: ProtocolHandle =
            std::sync::Arc::new(super::reductions::RoleSwitch::new(base.clone()));
        if profile.alice >= profile.bob {
            Self::new(spec, base, switched)
        } else {
            Self::new(spec, switched, base)
        }
    }

    pub fn branch_profiles(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    pub fn wcf_spec(&self) -> WcfSpec {
        self.spec
    }
}

impl Protocol for CombinedRot {
    fn name(&self) -> String {
        format!(
            "combined-rot[{} | {}]",
            self.branch0.name(),
            self.branch1.name()
        )
    }

    fn wcf(&self) -> Option<WcfSpec> {
        Some(self.spec)
    }

    fn declared_profile(&self) -> Option<CheatProfile> {
        let a = self.spec.alice_force * (self.x - self.y) + self.y;
        let b = self.spec.bob_force * (self.x - self.y) + self.y;
        CheatProfile::new(a, b).ok()
    }

    fn round_limit(&self) -> u32 {
        self.branch0.round_limit().max(self.branch1.round_limit()) + 4
    }

    fn kind(&self) -> ProtocolKind<'_> {
        ProtocolKind::Combined {
            branch0: &self.branch0,
            branch1: &self.branch1,
        }
    }

    fn honest_alice(&self) -> Box<dyn Strategy> {
        Box::new(BranchSelect::honest(
            Role::Alice,
            self.branch0.clone(),
            self.branch1.clone(),
        ))
    }

    fn honest_bob(&self) -> Box<dyn Strategy> {
        Box::new(BranchSelect::honest(
            Role::Bob,
            self.branch0.clone(),
            self.branch1.clone(),
        ))
    }
}

type BranchFactory = Box<dyn Fn() -> Box<dyn Strategy> + Send>;

/// Dispatches to one of two inner strategies once the coin flip lands. The
/// coin outcome survives restarts: only the branch protocol's own attempt
/// state is reset.
pub struct BranchSelect {
    stance: crate::engine::WcfStance,
    on_zero: BranchFactory,
    on_one: BranchFactory,
    inner: Option<Box<dyn Strategy>>,
}

impl BranchSelect {
    pub fn honest(role: Role, branch0: ProtocolHandle, branch1: ProtocolHandle) -> Self {
        let mk = |p: ProtocolHandle| -> BranchFactory {
            Box::new(move || match role {
                Role::Alice => p.honest_alice(),
                Role::Bob => p.honest_bob(),
            })
        };
        Self {
            stance: crate::engine::WcfStance::Honest,
            on_zero: mk(branch0),
            on_one: mk(branch1),
            inner: None,
        }
    }

    /// An arbitrary pair of branch strategies with an explicit coin-flip
    /// stance; this is how combined attacks are assembled.
    pub fn with_branches(
        stance: crate::engine::WcfStance,
        on_zero: BranchFactory,
        on_one: BranchFactory,
    ) -> Self {
        Self {
            stance,
            on_zero,
            on_one,
            inner: None,
        }
    }
}

impl Strategy for BranchSelect {
    fn wcf_stance(&mut self) -> crate::engine::WcfStance {
        self.stance
    }

    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        match event {
            Event::WcfOutcome(c) => {
                self.inner = Some(if c == 0 {
                    (self.on_zero)()
                } else {
                    (self.on_one)()
                });
                Ok(Action::Pass)
            }
            other => match self.inner.as_mut() {
                Some(inner) => inner.step(ctx, other),
                None => Err(StepError::Protocol(
                    "branch event before the coin flip".into(),
                )),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run_protocol, ChannelConfig};
    use crate::protocols::unfair::UnfairRot;
    use std::sync::Arc;

    fn combined() -> CombinedRot {
        CombinedRot::from_base(WcfSpec::fair(0.3536).unwrap(), Arc::new(UnfairRot)).unwrap()
    }

    #[test]
    fn built_from_base_orders_branches() {
        let c = combined();
        let (x, y) = c.branch_profiles();
        assert!((x - 1.0).abs() < 1e-12);
        assert!((y - 0.5).abs() < 1e-12);
        // The unfair protocol has alice < bob, so branch 0 is the switched one.
        assert!(c.name().contains("role-switch"));
    }

    #[test]
    fn honest_runs_complete_correctly_on_both_branches() {
        let c = combined();
        let mut seen = [false, false];
        for seed in 0..64 {
            let (outcome, transcript) = run_protocol(
                &c,
                c.honest_alice(),
                c.honest_bob(),
                &ChannelConfig::lossless(),
                seed,
            )
            .unwrap();
            let rot = outcome.rot_output().unwrap();
            assert!(rot.is_correct(), "seed {seed}");
            let lines = transcript.to_lines();
            if lines.contains("wcf c=0") {
                seen[0] = true;
            } else {
                seen[1] = true;
            }
        }
        assert!(seen[0] && seen[1], "both branches exercised");
    }

    #[test]
    fn declared_profile_follows_the_formula() {
        let c = combined();
        let p = c.declared_profile().unwrap();
        // 0.8536 · 0.5 + 0.5 on both sides.
        assert!((p.alice - 0.9268).abs() < 1e-12);
        assert!((p.bob - 0.9268).abs() < 1e-12);
        assert!(p.is_fair());
    }

    #[test]
    fn rejects_unordered_branches() {
        let spec = WcfSpec::default();
        let base = Arc::new(UnfairRot);
        let switched: ProtocolHandle =
            Arc::new(super::super::reductions::RoleSwitch::new(base.clone()));
        // Branch 0 = unfair (1/2, 1) violates x ≥ y.
        let err = CombinedRot::new(spec, base, switched)
            .err()
            .expect("must reject");
        assert!(matches!(err, CombineError::WrongOrder(_, _)));
    }
}
