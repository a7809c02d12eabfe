//! The three reductions: randomized OT from OT, OT from randomized OT
//! (derandomization), and the sender/receiver role switch.
//!
//! Each is a protocol transformer: the descriptor wraps an inner descriptor
//! and its strategies wrap inner strategies, so loss behavior passes through
//! unchanged. The added messages are classical and are resent if lost.

use crate::engine::{
    keys, Action, Event, Message, PartyCtx, Protocol, ProtocolHandle, ProtocolKind, StepError,
    Strategy, WcfStance,
};
use crate::types::{CheatProfile, OtInputs, RotOutput, WcfSpec};

// ---------------------------------------------------------------------------
// Pure output algebra, shared by the wrappers and the exhaustive oracles.
// ---------------------------------------------------------------------------

/// Outputs of the role-switched protocol given the inner run's outputs and
/// Alice's masking bit d: Alice gets (x'0, x'1) = (d, d ⊕ b), Bob gets
/// (b', m) = (x0 ⊕ x1, d ⊕ x_b ⊕ x0).
pub fn role_switch_outputs(inner: RotOutput, d: u8) -> RotOutput {
    RotOutput {
        x0: d,
        x1: d ^ inner.b,
        b: inner.x0 ^ inner.x1,
        xb: d ^ inner.xb ^ inner.x0,
    }
}

/// Derandomization bookkeeping: Bob's announced match flag, Alice's flip mask
/// and both parties' final bits, given desired inputs and the random inner
/// outputs.
pub struct Derandomized {
    pub match_flag: u8,
    pub flip_mask: (u8, u8),
    pub alice_bits: (u8, u8),
    pub bob_xb: u8,
}

pub fn derandomize(desired: OtInputs, rot: RotOutput) -> Derandomized {
    let match_flag = rot.b ^ desired.b;
    let (a0, a1) = if match_flag == 1 {
        (rot.x1, rot.x0)
    } else {
        (rot.x0, rot.x1)
    };
    let flip_mask = (a0 ^ desired.x0, a1 ^ desired.x1);
    let flip_for_bob = if desired.b == 0 {
        flip_mask.0
    } else {
        flip_mask.1
    };
    Derandomized {
        match_flag,
        flip_mask,
        alice_bits: (desired.x0, desired.x1),
        bob_xb: rot.xb ^ flip_for_bob,
    }
}

// ---------------------------------------------------------------------------
// Role switch
// ---------------------------------------------------------------------------

/// Runs the inner randomized OT with the roles exchanged, then one classical
/// bit from Alice re-derives standard outputs. A profile (α, β) becomes (β, α).
pub struct RoleSwitch {
    inner: ProtocolHandle,
}

impl RoleSwitch {
    pub fn new(inner: ProtocolHandle) -> Self {
        Self { inner }
    }

    pub fn inner(&self) -> &ProtocolHandle {
        &self.inner
    }
}

impl Protocol for RoleSwitch {
    fn name(&self) -> String {
        format!("role-switch({})", self.inner.name())
    }

    fn wcf(&self) -> Option<WcfSpec> {
        self.inner.wcf()
    }

    fn declared_profile(&self) -> Option<CheatProfile> {
        self.inner.declared_profile().map(|p| p.swapped())
    }

    fn round_limit(&self) -> u32 {
        self.inner.round_limit() + 8
    }

    fn kind(&self) -> ProtocolKind<'_> {
        ProtocolKind::RoleSwitch { inner: &self.inner }
    }

    fn honest_alice(&self) -> Box<dyn Strategy> {
        Box::new(SwitchedAlice::new(self.inner.honest_bob()))
    }

    fn honest_bob(&self) -> Box<dyn Strategy> {
        Box::new(SwitchedBob::new(self.inner.honest_alice()))
    }
}

/// Outer Alice running the inner protocol's Bob part. Works for honest and
/// adversarial inners: an inner that never produces (b, x_b) — an attacker —
/// still completes the classical step with a random bit, and its parity guess
/// becomes the outer index guess.
pub struct SwitchedAlice {
    inner: Box<dyn Strategy>,
    pinned_d: Option<u8>,
    announced: bool,
}

impl SwitchedAlice {
    pub fn new(inner: Box<dyn Strategy>) -> Self {
        Self {
            inner,
            pinned_d: None,
            announced: false,
        }
    }

    pub fn with_pinned_d(inner: Box<dyn Strategy>, d: u8) -> Self {
        Self {
            inner,
            pinned_d: Some(d),
            announced: false,
        }
    }
}

impl Strategy for SwitchedAlice {
    fn wcf_stance(&mut self) -> WcfStance {
        self.inner.wcf_stance()
    }

    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        if matches!(event, Event::Start | Event::Restarted) {
            self.announced = false;
        }
        if self.announced {
            return match event {
                Event::PeerDone => Ok(Action::Done),
                other => Err(StepError::Protocol(format!(
                    "unexpected event after announcement: {other:?}"
                ))),
            };
        }
        let action = self.inner.step(ctx, event)?;
        if !matches!(action, Action::Done) {
            return Ok(action);
        }
        // Inner finished with this party's view of (b, x_b).
        self.announced = true;
        let inner_b = ctx.output(keys::B);
        let inner_xb = ctx.output(keys::XB);
        let parity_guess = ctx.output(keys::PARITY_GUESS);
        ctx.clear_outputs();
        let d = self.pinned_d.unwrap_or_else(|| ctx.rand_bit());
        // An adversarial inner surfaces its parity goal as the outer index
        // goal; one that also produced (b, x_b) still completes honestly.
        if let Some(g) = parity_guess {
            ctx.set_output(keys::B_GUESS, g);
        }
        match (inner_b, inner_xb) {
            (Some(b), Some(xb)) => {
                ctx.set_output(keys::X0, d);
                ctx.set_output(keys::X1, d ^ b);
                Ok(Action::Send(Message::bit(d ^ xb)))
            }
            // Keep the exchange shape with an arbitrary bit.
            _ => Ok(Action::Send(Message::bit(d))),
        }
    }
}

/// Outer Bob running the inner protocol's Alice part.
pub struct SwitchedBob {
    inner: Box<dyn Strategy>,
    inner_done: bool,
}

impl SwitchedBob {
    pub fn new(inner: Box<dyn Strategy>) -> Self {
        Self {
            inner,
            inner_done: false,
        }
    }

    fn finish(&mut self, ctx: &mut PartyCtx<'_>, masked: u8) -> Result<Action, StepError> {
        let inner_x0 = ctx.output(keys::X0);
        let inner_x1 = ctx.output(keys::X1);
        let b_guess = ctx.output(keys::B_GUESS);
        ctx.clear_outputs();
        // An adversarial inner's index guess is the outer parity goal; honest
        // outputs are re-derived alongside when present.
        if let Some(g) = b_guess {
            ctx.set_output(keys::PARITY_GUESS, g);
        }
        if let (Some(x0), Some(x1)) = (inner_x0, inner_x1) {
            ctx.set_output(keys::B, x0 ^ x1);
            ctx.set_output(keys::XB, masked ^ x0);
        }
        Ok(Action::Done)
    }
}

impl Strategy for SwitchedBob {
    fn wcf_stance(&mut self) -> WcfStance {
        self.inner.wcf_stance()
    }

    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        if matches!(event, Event::Start | Event::Restarted) {
            self.inner_done = false;
        }
        match event {
            Event::Received(Message::Classical(bits)) if bits.len() == 1 => {
                // Alice's masked bit d ⊕ x_b ends the inner phase.
                if !self.inner_done {
                    let flush = self.inner.step(ctx, Event::PeerDone)?;
                    if !matches!(flush, Action::Done) {
                        return Err(StepError::Protocol(
                            "inner strategy did not finish at the masking step".into(),
                        ));
                    }
                    self.inner_done = true;
                }
                self.finish(ctx, bits[0] & 1)
            }
            other => {
                if self.inner_done {
                    return match other {
                        Event::PeerDone => Ok(Action::Done),
                        ev => Err(StepError::Protocol(format!(
                            "unexpected event after inner completion: {ev:?}"
                        ))),
                    };
                }
                let action = self.inner.step(ctx, other)?;
                if matches!(action, Action::Done) {
                    // Adversarial inners may finish early; hold until the
                    // masked bit arrives.
                    self.inner_done = true;
                    return Ok(Action::Pass);
                }
                Ok(action)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// OT from randomized OT (derandomization)
// ---------------------------------------------------------------------------

/// Derandomizes a randomized OT into an OT on chosen inputs: Bob announces
/// whether his random index matched (Alice swaps her bits if not), Alice
/// announces which of her bits to flip. Desired inputs are fixed per run and
/// survive inner restarts; `None` draws them uniformly at run start.
pub struct OtFromRot {
    inner: ProtocolHandle,
    desired: Option<OtInputs>,
}

impl OtFromRot {
    pub fn new(inner: ProtocolHandle, desired: Option<OtInputs>) -> Self {
        Self { inner, desired }
    }
}

impl Protocol for OtFromRot {
    fn name(&self) -> String {
        format!("ot-from-rot({})", self.inner.name())
    }

    fn wcf(&self) -> Option<WcfSpec> {
        self.inner.wcf()
    }

    fn declared_profile(&self) -> Option<CheatProfile> {
        self.inner.declared_profile()
    }

    fn round_limit(&self) -> u32 {
        self.inner.round_limit() + 8
    }

    fn kind(&self) -> ProtocolKind<'_> {
        ProtocolKind::OtFromRot { inner: &self.inner }
    }

    fn honest_alice(&self) -> Box<dyn Strategy> {
        Box::new(DerandAlice::new(
            self.inner.honest_alice(),
            self.desired.map(|i| (i.x0, i.x1)),
        ))
    }

    fn honest_bob(&self) -> Box<dyn Strategy> {
        Box::new(DerandBob::new(
            self.inner.honest_bob(),
            self.desired.map(|i| i.b),
        ))
    }

    fn honest_alice_for_inputs(&self, bits: (u8, u8)) -> Option<Box<dyn Strategy>> {
        Some(Box::new(DerandAlice::new(
            self.inner.honest_alice(),
            Some(bits),
        )))
    }

    fn honest_bob_for_input(&self, b: u8) -> Option<Box<dyn Strategy>> {
        Some(Box::new(DerandBob::new(self.inner.honest_bob(), Some(b))))
    }
}

pub struct DerandAlice {
    inner: Box<dyn Strategy>,
    desired: Option<(u8, u8)>,
    chosen: Option<(u8, u8)>,
    inner_done: bool,
}

impl DerandAlice {
    pub fn new(inner: Box<dyn Strategy>, desired: Option<(u8, u8)>) -> Self {
        Self {
            inner,
            desired,
            chosen: None,
            inner_done: false,
        }
    }

    fn choose(&mut self, ctx: &mut PartyCtx<'_>) -> (u8, u8) {
        if self.chosen.is_none() {
            let v = self
                .desired
                .unwrap_or_else(|| (ctx.rand_bit(), ctx.rand_bit()));
            self.chosen = Some(v);
        }
        self.chosen.expect("set above")
    }
}

impl Strategy for DerandAlice {
    fn wcf_stance(&mut self) -> WcfStance {
        self.inner.wcf_stance()
    }

    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        let desired = self.choose(ctx);
        if matches!(event, Event::Start | Event::Restarted) {
            self.inner_done = false;
        }
        match event {
            Event::Received(Message::Classical(bits)) if bits.len() == 1 && !self.inner_done => {
                // Bob's match flag; the inner protocol is over.
                let flush = self.inner.step(ctx, Event::PeerDone)?;
                if !matches!(flush, Action::Done) {
                    return Err(StepError::Protocol(
                        "inner strategy did not finish at the announcement step".into(),
                    ));
                }
                self.inner_done = true;
                let r0 = ctx.output(keys::X0).ok_or_else(|| {
                    StepError::Protocol("inner run produced no x0".into())
                })?;
                let r1 = ctx.output(keys::X1).ok_or_else(|| {
                    StepError::Protocol("inner run produced no x1".into())
                })?;
                let (a0, a1) = if bits[0] & 1 == 1 { (r1, r0) } else { (r0, r1) };
                let mask = (a0 ^ desired.0, a1 ^ desired.1);
                ctx.clear_outputs();
                ctx.set_output(keys::X0, desired.0);
                ctx.set_output(keys::X1, desired.1);
                Ok(Action::Send(Message::bits(&[mask.0, mask.1])))
            }
            Event::PeerDone if self.inner_done => Ok(Action::Done),
            other => {
                let action = self.inner.step(ctx, other)?;
                if matches!(action, Action::Done) {
                    return Err(StepError::Protocol(
                        "inner finished before Bob's announcement".into(),
                    ));
                }
                Ok(action)
            }
        }
    }
}

pub struct DerandBob {
    inner: Box<dyn Strategy>,
    desired: Option<u8>,
    chosen: Option<u8>,
    received: Option<u8>,
    announced: bool,
}

impl DerandBob {
    pub fn new(inner: Box<dyn Strategy>, desired: Option<u8>) -> Self {
        Self {
            inner,
            desired,
            chosen: None,
            received: None,
            announced: false,
        }
    }

    fn choose(&mut self, ctx: &mut PartyCtx<'_>) -> u8 {
        if self.chosen.is_none() {
            let v = self.desired.unwrap_or_else(|| ctx.rand_bit());
            self.chosen = Some(v);
        }
        self.chosen.expect("set above")
    }
}

impl Strategy for DerandBob {
    fn wcf_stance(&mut self) -> WcfStance {
        self.inner.wcf_stance()
    }

    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        let desired = self.choose(ctx);
        if matches!(event, Event::Start | Event::Restarted) {
            self.announced = false;
            self.received = None;
        }
        match event {
            Event::Received(Message::Classical(bits)) if self.announced && bits.len() == 2 => {
                // Alice's flip mask completes the exchange.
                let y = self
                    .received
                    .ok_or_else(|| StepError::Protocol("mask before inner output".into()))?;
                let flip = if desired == 0 { bits[0] } else { bits[1] } & 1;
                ctx.clear_outputs();
                ctx.set_output(keys::B, desired);
                ctx.set_output(keys::XB, y ^ flip);
                Ok(Action::Done)
            }
            other => {
                if self.announced {
                    return Err(StepError::Protocol(format!(
                        "unexpected event after announcement: {other:?}"
                    )));
                }
                let action = self.inner.step(ctx, other)?;
                if !matches!(action, Action::Done) {
                    return Ok(action);
                }
                // Inner run finished: announce whether the random index
                // matched the desired one.
                let b_r = ctx
                    .output(keys::B)
                    .ok_or_else(|| StepError::Protocol("inner run produced no b".into()))?;
                let y = ctx
                    .output(keys::XB)
                    .ok_or_else(|| StepError::Protocol("inner run produced no xb".into()))?;
                self.received = Some(y);
                self.announced = true;
                Ok(Action::Send(Message::bit(b_r ^ desired)))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Randomized OT from OT
// ---------------------------------------------------------------------------

/// Wraps an OT that takes inputs: both parties draw their inputs uniformly at
/// run start, then the inner protocol runs unchanged.
pub struct RotFromOt {
    inner: ProtocolHandle,
}

impl RotFromOt {
    pub fn new(inner: ProtocolHandle) -> Self {
        Self { inner }
    }
}

impl Protocol for RotFromOt {
    fn name(&self) -> String {
        format!("rot-from-ot({})", self.inner.name())
    }

    fn wcf(&self) -> Option<WcfSpec> {
        self.inner.wcf()
    }

    fn declared_profile(&self) -> Option<CheatProfile> {
        self.inner.declared_profile()
    }

    fn round_limit(&self) -> u32 {
        self.inner.round_limit() + 4
    }

    fn kind(&self) -> ProtocolKind<'_> {
        ProtocolKind::RotFromOt { inner: &self.inner }
    }

    fn honest_alice(&self) -> Box<dyn Strategy> {
        Box::new(RandomInputAlice {
            protocol: self.inner.clone(),
            inner: None,
        })
    }

    fn honest_bob(&self) -> Box<dyn Strategy> {
        Box::new(RandomInputBob {
            protocol: self.inner.clone(),
            inner: None,
        })
    }
}

struct RandomInputAlice {
    protocol: ProtocolHandle,
    inner: Option<Box<dyn Strategy>>,
}

impl Strategy for RandomInputAlice {
    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        if self.inner.is_none() {
            let bits = (ctx.rand_bit(), ctx.rand_bit());
            self.inner = Some(self.protocol.honest_alice_for_inputs(bits).ok_or_else(|| {
                StepError::Protocol(format!("{} does not take inputs", self.protocol.name()))
            })?);
        }
        self.inner.as_mut().expect("initialized above").step(ctx, event)
    }
}

struct RandomInputBob {
    protocol: ProtocolHandle,
    inner: Option<Box<dyn Strategy>>,
}

impl Strategy for RandomInputBob {
    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError> {
        if self.inner.is_none() {
            let b = ctx.rand_bit();
            self.inner = Some(self.protocol.honest_bob_for_input(b).ok_or_else(|| {
                StepError::Protocol(format!("{} does not take inputs", self.protocol.name()))
            })?);
        }
        self.inner.as_mut().expect("initialized above").step(ctx, event)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run_protocol, ChannelConfig};
    use crate::protocols::unfair::{UnfairAlice, UnfairBob, UnfairRot};
    use std::sync::Arc;

    #[test]
    fn role_switch_algebra_truth_table() {
        // Independent oracle: enumerate all 16 tuples and check the three
        // output identities directly.
        for b in 0..2u8 {
            for x0 in 0..2u8 {
                for x1 in 0..2u8 {
                    for d in 0..2u8 {
                        let xb = if b == 0 { x0 } else { x1 };
                        let inner = RotOutput { x0, x1, b, xb };
                        let out = role_switch_outputs(inner, d);
                        assert_eq!(out.x0 ^ out.x1, b, "x'0 ⊕ x'1 = b");
                        assert_eq!(out.b, x0 ^ x1, "b' = x0 ⊕ x1");
                        assert!(out.is_correct(), "m = x'_{{b'}} for ({b},{x0},{x1},{d})");
                    }
                }
            }
        }
    }

    #[test]
    fn role_switch_engine_matches_algebra_exhaustively() {
        for b in 0..2u8 {
            for x0 in 0..2u8 {
                for x1 in 0..2u8 {
                    for d in 0..2u8 {
                        let switched = RoleSwitch::new(Arc::new(UnfairRot));
                        let alice = SwitchedAlice::with_pinned_d(
                            Box::new(UnfairBob::pinned(b, 0)),
                            d,
                        );
                        let bob = SwitchedBob::new(Box::new(UnfairAlice::pinned(x0, x1)));
                        let (outcome, _) = run_protocol(
                            &switched,
                            Box::new(alice),
                            Box::new(bob),
                            &ChannelConfig::lossless(),
                            11,
                        )
                        .unwrap();
                        let got = outcome.rot_output().unwrap();
                        let xb = if b == 0 { x0 } else { x1 };
                        let want = role_switch_outputs(RotOutput { x0, x1, b, xb }, d);
                        assert_eq!(got, want, "({b},{x0},{x1},{d})");
                    }
                }
            }
        }
    }

    #[test]
    fn role_switch_swaps_declared_profile() {
        let switched = RoleSwitch::new(Arc::new(UnfairRot));
        let p = switched.declared_profile().unwrap();
        assert!((p.alice - 1.0).abs() < 1e-12);
        assert!((p.bob - 0.5).abs() < 1e-12);
    }

    #[test]
    fn derandomize_oracle_exhaustive() {
        // All 64 (desired, random outputs) combinations end with Bob holding
        // the desired x_b and Alice holding her desired bits.
        for dx0 in 0..2u8 {
            for dx1 in 0..2u8 {
                for db in 0..2u8 {
                    let desired = OtInputs::new(dx0, dx1, db).unwrap();
                    for rx0 in 0..2u8 {
                        for rx1 in 0..2u8 {
                            for rb in 0..2u8 {
                                let rxb = if rb == 0 { rx0 } else { rx1 };
                                let rot = RotOutput {
                                    x0: rx0,
                                    x1: rx1,
                                    b: rb,
                                    xb: rxb,
                                };
                                let d = derandomize(desired, rot);
                                assert_eq!(d.alice_bits, (dx0, dx1));
                                assert_eq!(d.bob_xb, desired.alice_bit(db));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn derandomize_spec_walkthrough() {
        // desired (x0,x1,b) = (1,0,1), random outputs alice (0,0), bob (0,0):
        // Bob announces a mismatch, the swap is a no-op, Alice's mask is
        // (1,0), and Bob ends with x_1 = 0.
        let desired = OtInputs::new(1, 0, 1).unwrap();
        let rot = RotOutput {
            x0: 0,
            x1: 0,
            b: 0,
            xb: 0,
        };
        let d = derandomize(desired, rot);
        assert_eq!(d.match_flag, 1);
        assert_eq!(d.flip_mask, (1, 0));
        assert_eq!(d.alice_bits, (1, 0));
        assert_eq!(d.bob_xb, 0);
    }

    #[test]
    fn ot_from_rot_engine_exhaustive_against_oracle() {
        for dx0 in 0..2u8 {
            for dx1 in 0..2u8 {
                for db in 0..2u8 {
                    let desired = OtInputs::new(dx0, dx1, db).unwrap();
                    for rx0 in 0..2u8 {
                        for rx1 in 0..2u8 {
                            for rb in 0..2u8 {
                                let ot = OtFromRot::new(Arc::new(UnfairRot), Some(desired));
                                let alice = DerandAlice::new(
                                    Box::new(UnfairAlice::pinned(rx0, rx1)),
                                    Some((dx0, dx1)),
                                );
                                let bob = DerandBob::new(
                                    Box::new(UnfairBob::pinned(rb, 0)),
                                    Some(db),
                                );
                                let (outcome, _) = run_protocol(
                                    &ot,
                                    Box::new(alice),
                                    Box::new(bob),
                                    &ChannelConfig::lossless(),
                                    21,
                                )
                                .unwrap();
                                let got = outcome.rot_output().unwrap();
                                assert_eq!((got.x0, got.x1), (dx0, dx1));
                                assert_eq!(got.b, db);
                                assert_eq!(got.xb, desired.alice_bit(db));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rot_from_ot_round_trip_is_correct() {
        // Randomized OT from the derandomized unfair protocol.
        let ot = Arc::new(OtFromRot::new(Arc::new(UnfairRot), None));
        let rot = RotFromOt::new(ot);
        for seed in 0..32 {
            let (outcome, _) = run_protocol(
                &rot,
                rot.honest_alice(),
                rot.honest_bob(),
                &ChannelConfig::lossless(),
                seed,
            )
            .unwrap();
            assert!(outcome.rot_output().unwrap().is_correct(), "seed {seed}");
        }
    }

    #[test]
    fn classical_loss_resends_but_preserves_outputs() {
        let desired = OtInputs::new(1, 0, 1).unwrap();
        let ot = OtFromRot::new(Arc::new(UnfairRot), Some(desired));
        let lossless = ChannelConfig::lossless();
        let mut lossy = ChannelConfig::lossless();
        lossy.classical_loss_rate = 0.5;
        for seed in 0..16 {
            let (out_a, tr_a) =
                run_protocol(&ot, ot.honest_alice(), ot.honest_bob(), &lossless, seed).unwrap();
            let (out_b, tr_b) =
                run_protocol(&ot, ot.honest_alice(), ot.honest_bob(), &lossy, seed).unwrap();
            assert_eq!(out_a, out_b, "outputs must not depend on classical loss");
            assert_eq!(tr_a.restart_count(), tr_b.restart_count());
            assert_eq!(tr_a.resend_count(), 0);
        }
        // At 50% loss, 16 runs with several classical messages each resend
        // at least once.
        let total: usize = (0..16)
            .map(|seed| {
                run_protocol(&ot, ot.honest_alice(), ot.honest_bob(), &lossy, seed)
                    .unwrap()
                    .1
                    .resend_count()
            })
            .sum();
        assert!(total > 0, "expected at least one resend across runs");
    }
}
