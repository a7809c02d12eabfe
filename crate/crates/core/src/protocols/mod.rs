//! Protocol descriptors and honest strategies: the two quantum randomized OT
//! protocols, the coin-flip black box, the flawed prototype, the arbitrated
//! combination, and the three reductions connecting them.

pub mod cks10;
pub mod combined;
pub mod prototype;
pub mod reductions;
mod registry;
pub mod unfair;
pub mod wcf;

pub use combined::{BranchSelect, CombineError, CombinedRot};
pub use registry::{ProtocolParams, ProtocolRegistry, RegistryError};

pub use crate::types::{CheatProfile, OtInputs, RotOutput, WcfSpec};
