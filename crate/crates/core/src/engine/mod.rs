//! Two-party protocol execution over a lossy channel.
//!
//! The engine owns a single simulated joint quantum state. Each party's
//! strategy addresses only the factors it currently holds; sending a quantum
//! payload transfers factor ownership. Lost quantum messages restart the
//! attempt with fresh randomness, classical messages are resent transparently.

mod channel;
mod joint;
mod message;
mod protocol;
mod runner;
mod strategy;
mod transcript;
mod trials;

pub use channel::{ChannelConfig, RestartLimit};
pub use joint::JointState;
pub use message::{FactorId, Message};
pub use protocol::{Protocol, ProtocolHandle, ProtocolKind};
pub use runner::{run_protocol, EngineError, ProtocolOutcome};
pub use strategy::{keys, Action, Event, PartyCtx, PartyOutput, StepError, Strategy, WcfStance};
pub use transcript::{Transcript, TranscriptEvent};
pub use trials::{run_trials, StrategyFactory};
