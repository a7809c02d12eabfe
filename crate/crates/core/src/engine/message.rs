use serde::{Deserialize, Serialize};

/// Stable handle to one factor of the simulated joint state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorId(pub u64);

/// One message over the channel.
#[derive(Debug, Clone, PartialEq)]
pub enum Message {
    /// Classical bits; resent transparently if lost.
    Classical(Vec<u8>),
    /// Subsystem handles currently held by the sender; ownership transfers on
    /// delivery, and genuine loss triggers the protocol's restart rule.
    Quantum(Vec<FactorId>),
    /// "Sorry, your message was lost" — carries nothing else.
    LossDeclaration,
}

impl Message {
    pub fn bits(bits: &[u8]) -> Self {
        Message::Classical(bits.to_vec())
    }

    pub fn bit(b: u8) -> Self {
        Message::Classical(vec![b])
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Message::Classical(_) => "classical",
            Message::Quantum(_) => "quantum",
            Message::LossDeclaration => "loss-declaration",
        }
    }
}
