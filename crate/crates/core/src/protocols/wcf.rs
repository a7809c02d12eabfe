//! The weak coin-flip black box ("wcf-black-box").
//!
//! Modeled as an oracle rather than a quantum subprotocol: honest parties get
//! a uniform common bit, a cheater forces its preferred outcome with exactly
//! the configured probability, and nobody ever aborts.

use crate::engine::{keys, Action, Event, PartyCtx, Protocol, ProtocolKind, StepError, Strategy};
use crate::types::WcfSpec;

pub struct WcfBlackBox {
    spec: WcfSpec,
}

impl WcfBlackBox {
    pub fn new(spec: WcfSpec) -> Self {
        Self { spec }
    }
}

impl Protocol for WcfBlackBox {
    fn name(&self) -> String {
        "wcf-black-box".into()
    }

    fn wcf(&self) -> Option<WcfSpec> {
        Some(self.spec)
    }

    fn kind(&self) -> ProtocolKind<'_> {
        ProtocolKind::WcfBlackBox
    }

    fn honest_alice(&self) -> Box<dyn Strategy> {
        Box::new(WcfHonest)
    }

    fn honest_bob(&self) -> Box<dyn Strategy> {
        Box::new(WcfHonest)
    }
}

/// Accepts the oracle's outcome as its own output.
pub struct WcfHonest;

impl Strategy for WcfHonest {
    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        match event {
            Event::WcfOutcome(c) => {
                ctx.set_output(keys::C, c);
                Ok(Action::Done)
            }
            Event::PeerDone => Ok(Action::Done),
            Event::Start | Event::Restarted => Ok(Action::Pass),
            other => Err(StepError::Protocol(format!("unexpected event {other:?}"))),
        }
    }
}
