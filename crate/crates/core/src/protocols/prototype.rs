//! The flawed reveal-everything prototype ("prototype-rot").
//!
//! After the coin flip, the winner's side is revealed outright: c = 0 makes
//! Bob announce b (Alice replies x_b), c = 1 makes Alice announce both bits.
//! It completes as a randomized OT but leaks: each honest party identifies the
//! other's secret with probability 3/4. Retained solely to demonstrate that
//! violation; the honest strategies therefore record their best guesses.

use crate::engine::{
    keys, Action, Event, Message, PartyCtx, Protocol, ProtocolKind, StepError, Strategy,
};
use crate::types::{CheatProfile, WcfSpec};

pub struct PrototypeRot {
    spec: WcfSpec,
}

impl PrototypeRot {
    pub fn new(spec: WcfSpec) -> Self {
        Self { spec }
    }
}

impl Protocol for PrototypeRot {
    fn name(&self) -> String {
        "prototype-rot".into()
    }

    fn wcf(&self) -> Option<WcfSpec> {
        Some(self.spec)
    }

    fn declared_profile(&self) -> Option<CheatProfile> {
        // Forcing the favorable branch reveals the secret outright; the other
        // branch leaves a uniform guess.
        let a = self.spec.alice_force + (1.0 - self.spec.alice_force) * 0.5;
        let b = self.spec.bob_force + (1.0 - self.spec.bob_force) * 0.5;
        CheatProfile::new(a, b).ok()
    }

    fn kind(&self) -> ProtocolKind<'_> {
        ProtocolKind::Prototype
    }

    fn honest_alice(&self) -> Box<dyn Strategy> {
        Box::new(ProtoAlice::new())
    }

    fn honest_bob(&self) -> Box<dyn Strategy> {
        Box::new(ProtoBob::new())
    }
}

pub struct ProtoAlice {
    c: u8,
    x0: u8,
    x1: u8,
}

impl ProtoAlice {
    pub fn new() -> Self {
        Self { c: 0, x0: 0, x1: 0 }
    }
}

impl Default for ProtoAlice {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for ProtoAlice {
    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        match event {
            Event::WcfOutcome(c) => {
                self.c = c;
                self.x0 = ctx.rand_bit();
                self.x1 = ctx.rand_bit();
                Ok(Action::Pass)
            }
            Event::Start => {
                if self.c == 1 {
                    ctx.set_output(keys::X0, self.x0);
                    ctx.set_output(keys::X1, self.x1);
                    // Nothing about b reaches Alice on this branch.
                    let guess = ctx.rand_bit();
                    ctx.set_output(keys::B_GUESS, guess);
                    Ok(Action::Send(Message::bits(&[self.x0, self.x1])))
                } else {
                    Ok(Action::Pass)
                }
            }
            Event::Received(Message::Classical(bits)) if self.c == 0 && bits.len() == 1 => {
                let b = bits[0] & 1;
                ctx.set_output(keys::X0, self.x0);
                ctx.set_output(keys::X1, self.x1);
                // The branch handed Alice the index in the clear.
                ctx.set_output(keys::B_GUESS, b);
                let xb = if b == 0 { self.x0 } else { self.x1 };
                Ok(Action::Send(Message::bit(xb)))
            }
            Event::PeerDone => Ok(Action::Done),
            other => Err(StepError::Protocol(format!("unexpected event {other:?}"))),
        }
    }
}

pub struct ProtoBob {
    c: u8,
    b: u8,
}

impl ProtoBob {
    pub fn new() -> Self {
        Self { c: 0, b: 0 }
    }
}

impl Default for ProtoBob {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for ProtoBob {
    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        match event {
            Event::WcfOutcome(c) => {
                self.c = c;
                self.b = ctx.rand_bit();
                Ok(Action::Pass)
            }
            Event::Start => {
                if self.c == 0 {
                    Ok(Action::Send(Message::bit(self.b)))
                } else {
                    Ok(Action::Pass)
                }
            }
            Event::Received(Message::Classical(bits)) => {
                if self.c == 0 {
                    if bits.len() != 1 {
                        return Err(StepError::Protocol("expected x_b reply".into()));
                    }
                    let xb = bits[0] & 1;
                    ctx.set_output(keys::B, self.b);
                    ctx.set_output(keys::XB, xb);
                    // Bob knows x_b only; his parity view is a coin flip on
                    // the unseen bit.
                    let guess_other = ctx.rand_bit();
                    ctx.set_output(keys::PARITY_GUESS, xb ^ guess_other);
                    Ok(Action::Done)
                } else {
                    if bits.len() != 2 {
                        return Err(StepError::Protocol("expected both bits".into()));
                    }
                    let (x0, x1) = (bits[0] & 1, bits[1] & 1);
                    let xb = if self.b == 0 { x0 } else { x1 };
                    ctx.set_output(keys::B, self.b);
                    ctx.set_output(keys::XB, xb);
                    // The branch handed Bob both bits; the parity is certain.
                    ctx.set_output(keys::PARITY_GUESS, x0 ^ x1);
                    Ok(Action::Done)
                }
            }
            Event::PeerDone => Ok(Action::Done),
            other => Err(StepError::Protocol(format!("unexpected event {other:?}"))),
        }
    }
}
