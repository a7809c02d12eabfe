//! The unfair loss-tolerant randomized OT ("unfair-lt-rot").
//!
//! Bob sends the qubit H^b|d⟩; Alice applies X^{x0} Z^{x1}; the returned qubit
//! is H^b|x_b ⊕ d⟩ up to global phase, so Bob's two-outcome measurement in the
//! basis {H^b|d⟩, H^b|d⊕1⟩} recovers x_b exactly. Alice's incoming marginal is
//! 1/2 for both values of b, so she learns nothing — even across restarts,
//! since b and d are redrawn fresh each attempt.

use crate::engine::{
    keys, Action, Event, FactorId, Message, PartyCtx, Protocol, ProtocolKind, StepError, Strategy,
};
use crate::quantum::{apply_unitary, Povm, StateVector, UnitaryOp};
use crate::types::CheatProfile;

/// H^b|d⟩.
pub fn encoded_qubit(b: u8, d: u8) -> StateVector {
    apply_unitary(&StateVector::qubit(d), &UnitaryOp::h_pow(b), &[0]).expect("1-qubit op")
}

/// Bob's decoding basis {H^b|d⟩, H^b|d⊕1⟩}; outcome k means x_b = k.
pub fn decode_povm(b: u8, d: u8) -> Povm {
    Povm::from_basis(&[encoded_qubit(b, d), encoded_qubit(b, d ^ 1)]).expect("orthonormal basis")
}

/// Honest Alice's view of the first message, averaged over Bob's d: exactly
/// 1/2 regardless of b.
pub fn alice_view(b: u8) -> crate::quantum::DensityMatrix {
    crate::quantum::DensityMatrix::mixture(&[encoded_qubit(b, 0), encoded_qubit(b, 1)])
        .expect("uniform mixture")
}

pub struct UnfairRot;

impl Protocol for UnfairRot {
    fn name(&self) -> String {
        "unfair-lt-rot".into()
    }

    fn declared_profile(&self) -> Option<CheatProfile> {
        Some(CheatProfile::new(0.5, 1.0).expect("valid profile"))
    }

    fn kind(&self) -> ProtocolKind<'_> {
        ProtocolKind::UnfairRot
    }

    fn honest_alice(&self) -> Box<dyn Strategy> {
        Box::new(UnfairAlice::new())
    }

    fn honest_bob(&self) -> Box<dyn Strategy> {
        Box::new(UnfairBob::new())
    }
}

pub struct UnfairBob {
    pinned: Option<(u8, u8)>,
    b: u8,
    d: u8,
    sent: Option<FactorId>,
}

impl UnfairBob {
    pub fn new() -> Self {
        Self {
            pinned: None,
            b: 0,
            d: 0,
            sent: None,
        }
    }

    pub fn pinned(b: u8, d: u8) -> Self {
        Self {
            pinned: Some((b, d)),
            b: 0,
            d: 0,
            sent: None,
        }
    }
}

impl Default for UnfairBob {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for UnfairBob {
    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        match event {
            Event::Start | Event::Restarted => {
                let (b, d) = self
                    .pinned
                    .unwrap_or_else(|| (ctx.rand_bit(), ctx.rand_bit()));
                self.b = b;
                self.d = d;
                let ids = ctx.prepare(encoded_qubit(b, d));
                self.sent = Some(ids[0]);
                Ok(Action::Send(Message::Quantum(ids)))
            }
            Event::Received(Message::Quantum(ids)) if ids.len() == 1 => {
                let m = ctx.measure(&decode_povm(self.b, self.d), &[ids[0]])?;
                ctx.set_output(keys::B, self.b);
                ctx.set_output(keys::XB, m as u8);
                Ok(Action::Done)
            }
            Event::PeerDone => Ok(Action::Done),
            other => Err(StepError::Protocol(format!("unexpected event {other:?}"))),
        }
    }
}

pub struct UnfairAlice {
    pinned: Option<(u8, u8)>,
}

impl UnfairAlice {
    pub fn new() -> Self {
        Self { pinned: None }
    }

    pub fn pinned(x0: u8, x1: u8) -> Self {
        Self {
            pinned: Some((x0, x1)),
        }
    }
}

impl Default for UnfairAlice {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for UnfairAlice {
    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        match event {
            Event::Start | Event::Restarted => Ok(Action::Pass),
            Event::Received(Message::Quantum(ids)) if ids.len() == 1 => {
                let (x0, x1) = self
                    .pinned
                    .unwrap_or_else(|| (ctx.rand_bit(), ctx.rand_bit()));
                ctx.apply(&UnitaryOp::xz(x0, x1), &[ids[0]])?;
                ctx.set_output(keys::X0, x0);
                ctx.set_output(keys::X1, x1);
                Ok(Action::Send(Message::Quantum(ids)))
            }
            Event::PeerDone => Ok(Action::Done),
            other => Err(StepError::Protocol(format!("unexpected event {other:?}"))),
        }
    }
}
