//! The two-qutrit randomized OT protocol ("cks10-rot" in the registry).
//!
//! Bob prepares |φ_b⟩ = (|bb⟩ + |22⟩)/√2 and sends Alice one qutrit; Alice
//! applies a random phase pattern and returns it; Bob's two-outcome projective
//! measurement recovers x_b exactly. The protocol restarts from the beginning
//! on any lost quantum message — which is precisely its weakness.

use crate::engine::{
    keys, Action, Event, FactorId, Message, PartyCtx, Protocol, ProtocolKind, StepError, Strategy,
};
use crate::quantum::{Povm, StateVector, UnitaryOp};
use crate::types::CheatProfile;

/// |φ_b⟩ = (|bb⟩ + |22⟩)/√2 over two qutrits.
pub fn phi(b: u8) -> StateVector {
    StateVector::two_level(vec![3, 3], &[b as usize, b as usize], &[2, 2], 1.0)
        .expect("valid two-qutrit superposition")
}

/// Alice's phase unitary: |0⟩→(−1)^{x0}|0⟩, |1⟩→(−1)^{x1}|1⟩, |2⟩→|2⟩.
pub fn phase_unitary(x0: u8, x1: u8) -> UnitaryOp {
    UnitaryOp::qutrit_phase(x0, x1)
}

/// Bob's decoding measurement {Π_0 = |φ_b⟩⟨φ_b|, Π_1 = 1 − Π_0}; outcome k
/// means x_b = k.
pub fn decode_povm(b: u8) -> Povm {
    Povm::projector_pair(&phi(b))
}

/// Honest Alice's reduced view of the first message: (|b⟩⟨b| + |2⟩⟨2|)/2.
/// The two views for b = 0, 1 are distinguishable — the protocol leaks.
pub fn alice_view(b: u8) -> crate::quantum::DensityMatrix {
    phi(b).partial_trace(&[1]).expect("reduced view")
}

pub struct QutritRot;

impl Protocol for QutritRot {
    fn name(&self) -> String {
        "cks10-rot".into()
    }

    fn declared_profile(&self) -> Option<CheatProfile> {
        Some(CheatProfile::new(0.75, 1.0).expect("valid profile"))
    }

    fn kind(&self) -> ProtocolKind<'_> {
        ProtocolKind::QutritRot
    }

    fn honest_alice(&self) -> Box<dyn Strategy> {
        Box::new(QutritRotAlice::new())
    }

    fn honest_bob(&self) -> Box<dyn Strategy> {
        Box::new(QutritRotBob::new())
    }
}

pub struct QutritRotBob {
    pinned_b: Option<u8>,
    b: u8,
    kept: Option<FactorId>,
}

impl QutritRotBob {
    pub fn new() -> Self {
        Self {
            pinned_b: None,
            b: 0,
            kept: None,
        }
    }

    /// Fixed index instead of a fresh draw; used by exhaustive tests.
    pub fn pinned(b: u8) -> Self {
        Self {
            pinned_b: Some(b),
            b: 0,
            kept: None,
        }
    }
}

impl Default for QutritRotBob {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for QutritRotBob {
    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        match event {
            Event::Start | Event::Restarted => {
                self.b = self.pinned_b.unwrap_or_else(|| ctx.rand_bit());
                let ids = ctx.prepare(phi(self.b));
                self.kept = Some(ids[0]);
                Ok(Action::Send(Message::Quantum(vec![ids[1]])))
            }
            Event::Received(Message::Quantum(ids)) if ids.len() == 1 => {
                let kept = self
                    .kept
                    .ok_or_else(|| StepError::Protocol("qutrit returned before send".into()))?;
                let m = ctx.measure(&decode_povm(self.b), &[kept, ids[0]])?;
                ctx.set_output(keys::B, self.b);
                ctx.set_output(keys::XB, m as u8);
                Ok(Action::Done)
            }
            Event::PeerDone => Ok(Action::Done),
            other => Err(StepError::Protocol(format!("unexpected event {other:?}"))),
        }
    }
}

pub struct QutritRotAlice {
    pinned: Option<(u8, u8)>,
}

impl QutritRotAlice {
    pub fn new() -> Self {
        Self { pinned: None }
    }

    pub fn pinned(x0: u8, x1: u8) -> Self {
        Self {
            pinned: Some((x0, x1)),
        }
    }
}

impl Default for QutritRotAlice {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for QutritRotAlice {
    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        match event {
            Event::Start | Event::Restarted => Ok(Action::Pass),
            Event::Received(Message::Quantum(ids)) if ids.len() == 1 => {
                let (x0, x1) = self
                    .pinned
                    .unwrap_or_else(|| (ctx.rand_bit(), ctx.rand_bit()));
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
