//! Cheating strategies against the unfair qubit protocol.

use crate::engine::{keys, Action, Event, FactorId, Message, PartyCtx, StepError, Strategy};
use crate::quantum::{apply_unitary, Povm, StateVector, UnitaryOp};

/// |Φ+⟩ = (|00⟩ + |11⟩)/√2.
pub fn epr_pair() -> StateVector {
    StateVector::two_level(vec![2, 2], &[0, 0], &[1, 1], 1.0).expect("valid EPR pair")
}

/// The Bell state (1 ⊗ X^{x0} Z^{x1})|Φ+⟩ Bob holds after Alice's unitary.
pub fn bell_state(x0: u8, x1: u8) -> StateVector {
    apply_unitary(&epr_pair(), &UnitaryOp::xz(x0, x1), &[1]).expect("1-qubit op on pair")
}

/// Bell-basis measurement ordered so outcome k encodes (x0, x1) = (k≫1, k&1).
pub fn bell_povm() -> Povm {
    let states: Vec<StateVector> = (0..4u8).map(|k| bell_state(k >> 1, k & 1)).collect();
    Povm::from_basis(&states).expect("Bell states are orthonormal")
}

/// Dishonest Bob recovering both of Alice's bits with certainty: he sends
/// half of an EPR pair instead of H^b|d⟩; each (x0, x1) leaves him a distinct
/// Bell state. Loss-tolerance changes nothing — every restart just gets a
/// fresh pair.
pub struct EprBob {
    kept: Option<FactorId>,
}

impl EprBob {
    pub fn new() -> Self {
        Self { kept: None }
    }
}

impl Default for EprBob {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for EprBob {
    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        match event {
            Event::Start | Event::Restarted => {
                let ids = ctx.prepare(epr_pair());
                self.kept = Some(ids[0]);
                Ok(Action::Send(Message::Quantum(vec![ids[1]])))
            }
            Event::Received(Message::Quantum(ids)) if ids.len() == 1 => {
                let kept = self
                    .kept
                    .ok_or_else(|| StepError::Protocol("return before send".into()))?;
                let k = ctx.measure(&bell_povm(), &[kept, ids[0]])? as u8;
                let (x0, x1) = (k >> 1, k & 1);
                ctx.set_output(keys::X0_GUESS, x0);
                ctx.set_output(keys::X1_GUESS, x1);
                ctx.set_output(keys::PARITY_GUESS, x0 ^ x1);
                Ok(Action::Done)
            }
            Event::PeerDone => Ok(Action::Done),
            other => Err(StepError::Protocol(format!("unexpected event {other:?}"))),
        }
    }
}

/// Dishonest Alice against the unfair protocol. Her two candidate views are
/// identical (both 1/2), so nothing beats a uniform guess; this strategy can
/// also burn loss declarations first to demonstrate that restarts accumulate
/// no information (b and d are redrawn each attempt).
pub struct GuessAlice {
    declared_losses: u32,
}

impl GuessAlice {
    pub fn new() -> Self {
        Self { declared_losses: 0 }
    }

    /// Declare the first `n` received qubits lost, then play honestly.
    pub fn with_declared_losses(n: u32) -> Self {
        Self { declared_losses: n }
    }
}

impl Default for GuessAlice {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for GuessAlice {
    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        match event {
            Event::Start | Event::Restarted => Ok(Action::Pass),
            Event::Received(Message::Quantum(ids)) if ids.len() == 1 => {
                if ctx.attempt() < self.declared_losses {
                    // Measure first, then lie about the loss: the outcome is
                    // provably independent of b, so the guess below stays 1/2.
                    let _ = ctx.measure(&Povm::computational(2), &[ids[0]])?;
                    return Ok(Action::Send(Message::LossDeclaration));
                }
                let (x0, x1) = (ctx.rand_bit(), ctx.rand_bit());
                ctx.apply(&UnitaryOp::xz(x0, x1), &[ids[0]])?;
                ctx.set_output(keys::X0, x0);
                ctx.set_output(keys::X1, x1);
                let guess = ctx.rand_bit();
                ctx.set_output(keys::B_GUESS, guess);
                Ok(Action::Send(Message::Quantum(ids)))
            }
            Event::PeerDone => Ok(Action::Done),
            other => Err(StepError::Protocol(format!("unexpected event {other:?}"))),
        }
    }
}
