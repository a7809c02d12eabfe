use super::channel::ChannelConfig;
use super::joint::JointState;
use super::message::Message;
use super::protocol::Protocol;
use super::strategy::{Action, Event, PartyCtx, PartyOutput, Strategy, WcfStance};
use super::transcript::{Transcript, TranscriptEvent};
use crate::stats::stream_seed;
use crate::types::{Role, RotOutput, WcfSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Hard cap on attempts for unbounded-restart runs; prevents non-termination
/// when loss_rate is 1.
const ATTEMPT_HARD_CAP: u32 = 1_000_000;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EngineError {
    #[error("channel config invalid: {0}")]
    BadChannel(String),
    #[error("run exceeded the attempt hard cap ({0} attempts)")]
    AttemptLimit(u32),
    #[error("protocol stalled: both parties passed with no pending messages")]
    Stalled,
}

/// Completed outputs for both parties, or an abort attributed to one party.
#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolOutcome {
    Completed {
        alice: PartyOutput,
        bob: PartyOutput,
    },
    Aborted {
        by: Role,
    },
}

impl ProtocolOutcome {
    pub fn is_completed(&self) -> bool {
        matches!(self, ProtocolOutcome::Completed { .. })
    }

    pub fn aborted_by(&self) -> Option<Role> {
        match self {
            ProtocolOutcome::Aborted { by } => Some(*by),
            _ => None,
        }
    }

    pub fn outputs(&self) -> Option<(&PartyOutput, &PartyOutput)> {
        match self {
            ProtocolOutcome::Completed { alice, bob } => Some((alice, bob)),
            _ => None,
        }
    }

    /// Reads the standard randomized-OT output bits, if all are present.
    pub fn rot_output(&self) -> Option<RotOutput> {
        use super::strategy::keys;
        let (alice, bob) = self.outputs()?;
        Some(RotOutput {
            x0: alice.bit(keys::X0)?,
            x1: alice.bit(keys::X1)?,
            b: bob.bit(keys::B)?,
            xb: bob.bit(keys::XB)?,
        })
    }
}

enum Flow {
    Continue,
    Restart,
    Complete,
    Abort(Role, String),
}

struct Run<'a> {
    channel: &'a ChannelConfig,
    joint: JointState,
    rng_channel: ChaCha8Rng,
    rng_alice: ChaCha8Rng,
    rng_bob: ChaCha8Rng,
    out_alice: PartyOutput,
    out_bob: PartyOutput,
    done_alice: bool,
    done_bob: bool,
    transcript: Transcript,
    attempt: u32,
    restarts_used: u32,
    round: u32,
    round_limit: u32,
    pending: std::collections::VecDeque<(Role, Event)>,
}

impl Run<'_> {
    fn done(&self, who: Role) -> bool {
        match who {
            Role::Alice => self.done_alice,
            Role::Bob => self.done_bob,
        }
    }

    fn set_done(&mut self, who: Role) {
        match who {
            Role::Alice => self.done_alice = true,
            Role::Bob => self.done_bob = true,
        }
    }

    fn step(
        &mut self,
        who: Role,
        strategy: &mut dyn Strategy,
        event: Event,
    ) -> Result<Action, super::strategy::StepError> {
        self.round += 1;
        let (rng, outputs) = match who {
            Role::Alice => (&mut self.rng_alice, &mut self.out_alice),
            Role::Bob => (&mut self.rng_bob, &mut self.out_bob),
        };
        let mut ctx = PartyCtx {
            role: who,
            attempt: self.attempt,
            round: self.round,
            joint: &mut self.joint,
            rng,
            outputs,
            transcript: &mut self.transcript,
        };
        strategy.step(&mut ctx, event)
    }

    /// Applies one action; the opening event is needed to validate `Pass`.
    fn handle(&mut self, who: Role, action: Action, event_was_opening: bool) -> Flow {
        match action {
            Action::Pass => {
                if event_was_opening {
                    Flow::Continue
                } else {
                    Flow::Abort(who, "passed on a message that required a response".into())
                }
            }
            Action::Send(msg) => self.handle_send(who, msg),
            Action::Done => {
                self.transcript.push(TranscriptEvent::Done {
                    attempt: self.attempt,
                    party: who,
                });
                self.set_done(who);
                if self.done(who.peer()) {
                    Flow::Complete
                } else {
                    self.pending.push_back((who.peer(), Event::PeerDone));
                    Flow::Continue
                }
            }
            Action::Abort => {
                Flow::Abort(who, "strategy aborted".into())
            }
        }
    }

    fn handle_send(&mut self, who: Role, msg: Message) -> Flow {
        if self.done(who.peer()) {
            return Flow::Abort(who, "message sent to a finished party".into());
        }
        match msg {
            Message::Classical(bits) => {
                // Classical loss never restarts anything: the engine records
                // the lost copies and the transparent resends.
                while self.channel.classical_loss_rate > 0.0
                    && self.rng_channel.gen_bool(self.channel.classical_loss_rate)
                {
                    self.transcript.push(TranscriptEvent::Message {
                        attempt: self.attempt,
                        round: self.round,
                        from: who,
                        kind: "classical",
                        len: bits.len(),
                        lost: true,
                    });
                    self.transcript.push(TranscriptEvent::Resend {
                        attempt: self.attempt,
                        round: self.round,
                        from: who,
                    });
                }
                self.transcript.push(TranscriptEvent::Message {
                    attempt: self.attempt,
                    round: self.round,
                    from: who,
                    kind: "classical",
                    len: bits.len(),
                    lost: false,
                });
                self.pending.push_back((who.peer(), Event::Received(Message::Classical(bits))));
                Flow::Continue
            }
            Message::Quantum(ids) => {
                let lost = self.channel.loss_rate > 0.0
                    && self.rng_channel.gen_bool(self.channel.loss_rate);
                self.transcript.push(TranscriptEvent::Message {
                    attempt: self.attempt,
                    round: self.round,
                    from: who,
                    kind: "quantum",
                    len: ids.len(),
                    lost,
                });
                if lost {
                    return self.lost_quantum_message(who);
                }
                if let Err(e) = self.joint.transfer(&ids, who) {
                    return Flow::Abort(who, format!("invalid quantum payload: {e:?}"));
                }
                self.pending.push_back((who.peer(), Event::Received(Message::Quantum(ids))));
                Flow::Continue
            }
            Message::LossDeclaration => {
                if !self.channel.adversarial_loss_allowed {
                    return Flow::Abort(
                        who,
                        "loss declaration without a lost message is not allowed".into(),
                    );
                }
                self.transcript.push(TranscriptEvent::LossDeclared {
                    attempt: self.attempt,
                    round: self.round,
                    by: who,
                });
                // The declared-lost message was sent by the peer.
                self.lost_quantum_message(who.peer())
            }
        }
    }

    /// A quantum message from `sender` is gone; restart or attribute an abort.
    fn lost_quantum_message(&mut self, sender: Role) -> Flow {
        if self.channel.max_restarts.exhausted_by(self.restarts_used) {
            return Flow::Abort(sender, "restart budget exhausted".into());
        }
        self.restarts_used += 1;
        self.attempt += 1;/* restart markers only follow loss events */
        self.transcript.push(TranscriptEvent::Restart {
            attempt: self.attempt,
        });
        self.joint.reset();
        self.out_alice.clear();
        self.out_bob.clear();
        self.done_alice = false;
        self.done_bob = false;
        self.pending.clear();
        self.round = 0;
        Flow::Restart
    }
}

fn sample_wcf(spec: WcfSpec, alice: WcfStance, bob: WcfStance, rng: &mut ChaCha8Rng) -> u8 {
    match (alice, bob) {
        (WcfStance::Honest, WcfStance::Honest) => rng.gen_range(0..2u8),
        (WcfStance::Force, WcfStance::Honest) => u8::from(!rng.gen_bool(spec.alice_force)),
        (WcfStance::Honest, WcfStance::Force) => u8::from(rng.gen_bool(spec.bob_force)),
        // No security guarantees when both parties cheat; Alice's forcing
        // probability arbitrates.
        (WcfStance::Force, WcfStance::Force) => u8::from(!rng.gen_bool(spec.alice_force)),
    }
}

/// Executes one run. Deterministic given (protocol, strategies, channel, seed).
pub fn run_protocol(
    protocol: &dyn Protocol,
    mut alice: Box<dyn Strategy>,
    mut bob: Box<dyn Strategy>,
    channel: &ChannelConfig,
    seed: u64,
) -> Result<(ProtocolOutcome, Transcript), EngineError> {
    channel.validate().map_err(EngineError::BadChannel)?;
    let mut run = Run {
        channel,
        joint: JointState::new(),
        rng_channel: ChaCha8Rng::seed_from_u64(stream_seed(seed, 0)),
        rng_alice: ChaCha8Rng::seed_from_u64(stream_seed(seed, 1)),
        rng_bob: ChaCha8Rng::seed_from_u64(stream_seed(seed, 2)),
        out_alice: PartyOutput::default(),
        out_bob: PartyOutput::default(),
        done_alice: false,
        done_bob: false,
        transcript: Transcript::new(seed, protocol.name()),
        attempt: 0,
        restarts_used: 0,
        round: 0,
        round_limit: protocol.round_limit(),
        pending: std::collections::VecDeque::new(),
    };

    let finish = |run: &mut Run<'_>, outcome: ProtocolOutcome| {
        run.transcript.outcome = match &outcome {
            ProtocolOutcome::Completed { .. } => "completed".to_string(),
            ProtocolOutcome::Aborted { by } => format!("aborted-by-{}", by.letter()),
        };
        run.transcript.final_state = run.joint.summary();
        outcome
    };

    macro_rules! flow {
        ($run:expr, $who:expr, $action:expr, $opening:expr, $restart_label:lifetime) => {
            match $run.handle($who, $action, $opening) {
                Flow::Continue => {}
                Flow::Restart => continue $restart_label,
                Flow::Complete => {
                    let outcome = ProtocolOutcome::Completed {
                        alice: std::mem::take(&mut $run.out_alice),
                        bob: std::mem::take(&mut $run.out_bob),
                    };
                    return Ok((finish(&mut $run, outcome), $run.transcript));
                }
                Flow::Abort(by, note) => {
                    $run.transcript.push(TranscriptEvent::Abort {
                        attempt: $run.attempt,
                        by,
                        note,
                    });
                    let outcome = ProtocolOutcome::Aborted { by };
                    return Ok((finish(&mut $run, outcome), $run.transcript));
                }
            }
        };
    }

    macro_rules! step_or_abort {
        ($run:expr, $who:expr, $strat:expr, $event:expr) => {
            match $run.step($who, $strat.as_mut(), $event) {
                Ok(action) => action,
                Err(e) => {
                    $run.transcript.push(TranscriptEvent::Abort {
                        attempt: $run.attempt,
                        by: $who,
                        note: format!("strategy error: {e}"),
                    });
                    let outcome = ProtocolOutcome::Aborted { by: $who };
                    return Ok((finish(&mut $run, outcome), $run.transcript));
                }
            }
        };
    }

    // Weak coin-flip stage: once per run, before any attempt.
    if let Some(spec) = protocol.wcf() {
        let sa = alice.wcf_stance();
        let sb = bob.wcf_stance();
        let c = sample_wcf(spec, sa, sb, &mut run.rng_channel);
        run.transcript.push(TranscriptEvent::Wcf { outcome: c });
        'wcf: loop {
            for who in [Role::Alice, Role::Bob] {
                let strat: &mut Box<dyn Strategy> = match who {
                    Role::Alice => &mut alice,
                    Role::Bob => &mut bob,
                };
                let action = step_or_abort!(run, who, strat, Event::WcfOutcome(c));
                if !matches!(action, Action::Pass | Action::Done) {
                    flow!(
                        run,
                        who,
                        Action::Abort,
                        false,
                        'wcf
                    );
                }
                flow!(run, who, action, true, 'wcf);
            }
            break 'wcf;
        }
    }

    'attempts: loop {
        if run.attempt >= ATTEMPT_HARD_CAP {
            return Err(EngineError::AttemptLimit(ATTEMPT_HARD_CAP));
        }
        let opening = if run.attempt == 0 {
            Event::Start
        } else {
            Event::Restarted
        };
        // Openings: both parties are notified; either may move first.
        for who in [Role::Alice, Role::Bob] {
            if run.done(who) {
                continue;
            }
            let strat: &mut Box<dyn Strategy> = match who {
                Role::Alice => &mut alice,
                Role::Bob => &mut bob,
            };
            let action = step_or_abort!(run, who, strat, opening.clone());
            flow!(run, who, action, true, 'attempts);
        }
        // Message pump: deliveries strictly alternate until the attempt ends.
        while let Some((who, event)) = run.pending.pop_front() {
            if run.round > run.round_limit {
                flow!(run, who, Action::Abort, false, 'attempts);
            }
            if run.done(who) {
                // A message routed to a finished party: its sender broke the
                // protocol shape.
                flow!(run, who.peer(), Action::Abort, false, 'attempts);
            }
            let strat: &mut Box<dyn Strategy> = match who {
                Role::Alice => &mut alice,
                Role::Bob => &mut bob,
            };
            let opening_event = matches!(event, Event::Start | Event::Restarted);
            let action = step_or_abort!(run, who, strat, event);
            flow!(run, who, action, opening_event, 'attempts);
        }
        debug_assert!(!(run.done_alice && run.done_bob));
        return Err(EngineError::Stalled);
    }
}
