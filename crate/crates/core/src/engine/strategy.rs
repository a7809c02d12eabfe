use super::joint::{JointError, JointState};
use super::message::{FactorId, Message};
use super::transcript::{Transcript, TranscriptEvent};
use crate::quantum::{Povm, QuantumError, StateVector, UnitaryOp};
use crate::types::Role;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// What a strategy sees at each step.
#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    /// Opening of the first attempt. Both parties receive it; a party that
    /// does not open the protocol answers `Pass`.
    Start,
    /// Opening of a fresh attempt after a lost quantum message. All
    /// per-attempt state and outputs have been wiped.
    Restarted,
    /// Common outcome of the protocol's weak coin-flip stage.
    WcfOutcome(u8),
    Received(Message),
    /// The peer declared its outputs; respond `Done` (or `Abort`).
    PeerDone,
}

/// What a strategy does with its turn.
#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    /// Nothing to do for this opening event.
    Pass,
    Send(Message),
    /// Outputs (already written through the context) are final.
    Done,
    Abort,
}

/// Behavior inside the protocol's weak coin-flip stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WcfStance {
    Honest,
    /// Force the party's preferred outcome (0 for Alice, 1 for Bob) with the
    /// black box's forcing probability.
    Force,
}

/// Named output bits declared by one party.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PartyOutput(pub BTreeMap<String, u8>);

impl PartyOutput {
    pub fn set(&mut self, key: &str, bit: u8) {
        self.0.insert(key.to_string(), bit & 1);
    }

    pub fn bit(&self, key: &str) -> Option<u8> {
        self.0.get(key).copied()
    }

    pub fn clear(&mut self) {
        self.0.clear();
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepError {
    Quantum(QuantumError),
    Ownership(String),
    /// The strategy observed something a conforming peer would never send.
    Protocol(String),
}

impl From<JointError> for StepError {
    fn from(e: JointError) -> Self {
        match e {
            JointError::Ownership(s) => StepError::Ownership(s),
            JointError::Quantum(q) => StepError::Quantum(q),
        }
    }
}

impl std::fmt::Display for StepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StepError::Quantum(q) => write!(f, "quantum: {q}"),
            StepError::Ownership(s) => write!(f, "ownership: {s}"),
            StepError::Protocol(s) => write!(f, "protocol: {s}"),
        }
    }
}

/// A party's view of the engine during one step: local quantum operations,
/// its own randomness stream, and its declared outputs.
pub struct PartyCtx<'a> {
    pub(super) role: Role,
    pub(super) attempt: u32,
    pub(super) round: u32,
    pub(super) joint: &'a mut JointState,
    pub(super) rng: &'a mut ChaCha8Rng,
    pub(super) outputs: &'a mut PartyOutput,
    pub(super) transcript: &'a mut Transcript,
}

impl PartyCtx<'_> {
    pub fn role(&self) -> Role {
        self.role
    }

    /// Zero-based attempt index (equals the number of restarts so far).
    pub fn attempt(&self) -> u32 {
        self.attempt
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        self.rng
    }

    pub fn rand_bit(&mut self) -> u8 {
        self.rng.gen_range(0..2u8)
    }

    /// Tensors a locally prepared state into the joint state.
    pub fn prepare(&mut self, sv: StateVector) -> Vec<FactorId> {
        self.joint.prepare(self.role, sv)
    }

    pub fn apply(&mut self, u: &UnitaryOp, ids: &[FactorId]) -> Result<(), StepError> {
        self.joint.apply(self.role, u, ids).map_err(Into::into)
    }

    /// Samples a POVM on held factors; Born probabilities are recorded in the
    /// transcript.
    pub fn measure(&mut self, povm: &Povm, ids: &[FactorId]) -> Result<usize, StepError> {
        let rec = self.joint.measure(self.role, povm, ids, self.rng)?;
        self.transcript.push(TranscriptEvent::Measurement {
            attempt: self.attempt,
            round: self.round,
            party: self.role,
            outcome: rec.outcome,
            probabilities: rec.probabilities.clone(),
        });
        Ok(rec.outcome)
    }

    pub fn owned_factors(&self) -> Vec<FactorId> {
        self.joint.owned_by(self.role)
    }

    pub fn set_output(&mut self, key: &str, bit: u8) {
        self.outputs.set(key, bit);
    }

    pub fn output(&self, key: &str) -> Option<u8> {
        self.outputs.bit(key)
    }

    pub fn clear_outputs(&mut self) {
        self.outputs.clear();
    }
}

/// A party's reactive state machine driving one protocol execution.
///
/// Honest strategies follow their protocol's step list exactly; adversarial
/// ones may do anything expressible through the context, but only with the
/// factors they hold.
pub trait Strategy: Send {
    /// Stance for the protocol's weak coin-flip stage, if it has one.
    fn wcf_stance(&mut self) -> WcfStance {
        WcfStance::Honest
    }

    fn step(&mut self, ctx: &mut PartyCtx<'_>, event: Event) -> Result<Action, StepError>;
}

/// Output keys shared by every randomized-OT shaped protocol in the registry.
pub mod keys {
    /// Alice's first generated bit.
    pub const X0: &str = "x0";
    /// Alice's second generated bit.
    pub const X1: &str = "x1";
    /// Bob's index bit.
    pub const B: &str = "b";
    /// Bob's received bit x_b.
    pub const XB: &str = "xb";
    /// Common weak coin-flip outcome.
    pub const C: &str = "c";
    /// A cheating (or prototype-honest) Alice's guess of Bob's index.
    pub const B_GUESS: &str = "b_guess";
    /// A cheating (or prototype-honest) Bob's guess of x0 ⊕ x1.
    pub const PARITY_GUESS: &str = "parity_guess";
    /// A cheating Bob's reconstruction of Alice's individual bits.
    pub const X0_GUESS: &str = "x0_guess";
    pub const X1_GUESS: &str = "x1_guess";
}
