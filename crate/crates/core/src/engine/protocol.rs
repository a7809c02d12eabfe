use super::strategy::Strategy;
use crate::types::{CheatProfile, WcfSpec};
use std::sync::Arc;

pub type ProtocolHandle = Arc<dyn Protocol>;

/// An immutable protocol descriptor: honest strategy constructors plus the
/// structural facts the engine and the attack resolver need.
pub trait Protocol: Send + Sync {
    /// Self-describing name (composed descriptors include their inner name).
    fn name(&self) -> String;

    /// Black-box weak coin-flip stage executed once per run, if any.
    fn wcf(&self) -> Option<WcfSpec> {
        None
    }

    /// Analytically known cheating probabilities, where established.
    fn declared_profile(&self) -> Option<CheatProfile> {
        None
    }

    /// Upper bound on strategy steps per attempt; exceeding it aborts the run.
    fn round_limit(&self) -> u32 {
        64
    }

    fn honest_alice(&self) -> Box<dyn Strategy>;

    fn honest_bob(&self) -> Box<dyn Strategy>;

    /// Structure accessor used to resolve composed attacks and reductions.
    fn kind(&self) -> ProtocolKind<'_> {
        ProtocolKind::Other
    }

    /// For protocols with inputs: Alice's honest strategy for chosen bits.
    fn honest_alice_for_inputs(&self, _bits: (u8, u8)) -> Option<Box<dyn Strategy>> {
        None
    }

    /// For protocols with inputs: Bob's honest strategy for a chosen index.
    fn honest_bob_for_input(&self, _b: u8) -> Option<Box<dyn Strategy>> {
        None
    }
}

/// The shape of a descriptor, exposed so attack construction can recurse
/// through reductions without downcasting.
pub enum ProtocolKind<'a> {
    /// The two-qutrit randomized OT (not loss-tolerant).
    QutritRot,
    /// The unfair qubit randomized OT with profile (1/2, 1).
    UnfairRot,
    WcfBlackBox,
    /// The flawed reveal-everything prototype.
    Prototype,
    RoleSwitch {
        inner: &'a ProtocolHandle,
    },
    Combined {
        /// Branch executed on c = 0; holds the larger Alice-side power x.
        branch0: &'a ProtocolHandle,
        /// Branch executed on c = 1.
        branch1: &'a ProtocolHandle,
    },
    RotFromOt {
        inner: &'a ProtocolHandle,
    },
    OtFromRot {
        inner: &'a ProtocolHandle,
    },
    Other,
}
