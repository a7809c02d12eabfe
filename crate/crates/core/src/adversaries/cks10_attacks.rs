//! Cheating strategies against the two-qutrit protocol.

use crate::engine::{keys, Action, Event, Message, PartyCtx, StepError, Strategy};
use crate::protocols::cks10::{alice_view, phase_unitary};
use crate::quantum::{helstrom_povm, Povm, StateVector};

/// Dishonest Alice measuring every incoming qutrit in the computational
/// basis. Outcomes 0/1 reveal b; outcome 2 is answered with a false loss
/// declaration while restart budget remains, and with honest-compatible play
/// plus a uniform guess on the final allowed attempt. Bob never aborts.
pub struct LostMessageAlice {
    /// Restarts the attacker is willing to burn; attempt indices 0..=budget.
    budget: u32,
}

impl LostMessageAlice {
    pub fn new(budget: u32) -> Self {
        Self { budget }
    }

    /// Success probability with `budget` restarts over a lossless channel:
    /// 1 − 2^−(budget+2). Each attempt reveals b with probability 1/2; if all
    /// budget+1 attempts fail, the uniform guess still wins half the time.
    pub fn predicted_success(budget: u32) -> f64 {
        1.0 - 0.5f64.powi(budget as i32 + 2)
    }
}

impl Strategy for LostMessageAlice {
    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        match event {
            Event::Start | Event::Restarted => Ok(Action::Pass),
            Event::Received(Message::Quantum(ids)) if ids.len() == 1 => {
                let outcome = ctx.measure(&Povm::computational(3), &[ids[0]])?;
                if outcome == 2 && ctx.attempt() < self.budget {
                    return Ok(Action::Send(Message::LossDeclaration));
                }
                let guess = if outcome == 2 {
                    ctx.rand_bit()
                } else {
                    outcome as u8
                };
                ctx.set_output(keys::B_GUESS, guess);
                // Honest-compatible continuation so Bob completes his
                // measurement without noticing anything.
                let (x0, x1) = (ctx.rand_bit(), ctx.rand_bit());
                ctx.apply(&phase_unitary(x0, x1), &[ids[0]])?;
                ctx.set_output(keys::X0, x0);
                ctx.set_output(keys::X1, x1);
                Ok(Action::Send(Message::Quantum(ids)))
            }
            Event::PeerDone => Ok(Action::Done),
            other => Err(StepError::Protocol(format!("unexpected event {other:?}"))),
        }
    }
}

/// Dishonest Alice performing the optimal single-copy discrimination of her
/// two possible reduced views, with no loss abuse. The optimal measurement is
/// the computational basis (outcome 2 is uninformative), worth exactly 3/4.
pub struct HelstromAlice {
    povm: Povm,
}

impl HelstromAlice {
    pub fn new() -> Self {
        let povm = helstrom_povm(&alice_view(0), &alice_view(1))
            .expect("reduced views share dimensions");
        Self { povm }
    }
}

impl Default for HelstromAlice {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for HelstromAlice {
    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        match event {
            Event::Start | Event::Restarted => Ok(Action::Pass),
            Event::Received(Message::Quantum(ids)) if ids.len() == 1 => {
                let outcome = ctx.measure(&self.povm, &[ids[0]])?;
                ctx.set_output(keys::B_GUESS, outcome as u8);
                let (x0, x1) = (ctx.rand_bit(), ctx.rand_bit());
                ctx.apply(&phase_unitary(x0, x1), &[ids[0]])?;
                ctx.set_output(keys::X0, x0);
                ctx.set_output(keys::X1, x1);
                Ok(Action::Send(Message::Quantum(ids)))
            }
            Event::PeerDone => Ok(Action::Done),
            other => Err(StepError::Protocol(format!("unexpected event {other:?}"))),
        }
    }
}

/// The entangled state a parity-cheating Bob sends instead of |φ_b⟩:
/// (|00⟩ + |11⟩)/√2 over two qutrits, with no |22⟩ component.
pub fn parity_probe() -> StateVector {
    StateVector::two_level(vec![3, 3], &[0, 0], &[1, 1], 1.0).expect("valid probe state")
}

/// The two orthogonal states Alice's phases produce on the probe, indexed by
/// x0 ⊕ x1 (up to a global sign).
pub fn parity_class(parity: u8) -> StateVector {
    let sign = if parity == 1 { -1.0 } else { 1.0 };
    StateVector::two_level(vec![3, 3], &[0, 0], &[1, 1], sign).expect("valid parity class")
}

/// Dishonest Bob learning x0 ⊕ x1 with certainty: he sends half of the probe
/// state; Alice's phases flip the relative sign exactly when x0 ≠ x1, and the
/// two classes are orthogonal.
pub struct ParityBob {
    kept: Option<crate::engine::FactorId>,
}

impl ParityBob {
    pub fn new() -> Self {
        Self { kept: None }
    }
}

impl Default for ParityBob {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for ParityBob {
    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        match event {
            Event::Start | Event::Restarted => {
                let ids = ctx.prepare(parity_probe());
                self.kept = Some(ids[0]);
                Ok(Action::Send(Message::Quantum(vec![ids[1]])))
            }
            Event::Received(Message::Quantum(ids)) if ids.len() == 1 => {
                let kept = self
                    .kept
                    .ok_or_else(|| StepError::Protocol("return before send".into()))?;
                let povm = Povm::projector_pair(&parity_class(0));
                let outcome = ctx.measure(&povm, &[kept, ids[0]])?;
                ctx.set_output(keys::PARITY_GUESS, outcome as u8);
                Ok(Action::Done)
            }
            Event::PeerDone => Ok(Action::Done),
            other => Err(StepError::Protocol(format!("unexpected event {other:?}"))),
        }
    }
}
