//! Domain types shared across the engine, protocols and analysis.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Alice,
    Bob,
}

impl Role {
    pub fn peer(self) -> Role {
        match self {
            Role::Alice => Role::Bob,
            Role::Bob => Role::Alice,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Role::Alice => "A",
            Role::Bob => "B",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Alice => write!(f, "Alice"),
            Role::Bob => write!(f, "Bob"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DomainError {
    #[error("probability {0} outside [1/2, 1]")]
    ProbabilityRange(f64),
    #[error("bit value {0} outside {{0, 1}}")]
    BitRange(u8),
}

fn check_prob(p: f64) -> Result<f64, DomainError> {
    if !(0.5..=1.0).contains(&p) {
        return Err(DomainError::ProbabilityRange(p));
    }
    Ok(p)
}

fn check_bit(b: u8) -> Result<u8, DomainError> {
    if b > 1 {
        return Err(DomainError::BitRange(b));
    }
    Ok(b)
}

/// Black-box weak coin-flip parameters: the probability each dishonest party
/// can force its preferred outcome (c = 0 for Alice, c = 1 for Bob).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WcfSpec {
    pub alice_force: f64,
    pub bob_force: f64,
}

impl WcfSpec {
    pub fn new(alice_force: f64, bob_force: f64) -> Result<Self, DomainError> {
        Ok(Self {
            alice_force: check_prob(alice_force)?,
            bob_force: check_prob(bob_force)?,
        })
    }

    /// A fair spec with both forcing probabilities equal to 1/2 + bias.
    pub fn fair(bias: f64) -> Result<Self, DomainError> {
        Self::new(0.5 + bias, 0.5 + bias)
    }

    pub fn bias(&self) -> f64 {
        self.alice_force.max(self.bob_force) - 0.5
    }
}

impl Default for WcfSpec {
    fn default() -> Self {
        Self {
            alice_force: 0.5,
            bob_force: 0.5,
        }
    }
}

/// A pair of maximum cheating probabilities (Alice learning the receiver's
/// index, Bob learning the sender's XOR) and the derived bias.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheatProfile {
    pub alice: f64,
    pub bob: f64,
}

impl CheatProfile {
    pub fn new(alice: f64, bob: f64) -> Result<Self, DomainError> {
        Ok(Self {
            alice: check_prob(alice)?,
            bob: check_prob(bob)?,
        })
    }

    pub fn bias(&self) -> f64 {
        self.alice.max(self.bob) - 0.5
    }

    pub fn swapped(&self) -> Self {
        Self {
            alice: self.bob,
            bob: self.alice,
        }
    }

    pub fn is_fair(&self) -> bool {
        (self.alice - self.bob).abs() <= 1e-12
    }
}

/// Chosen inputs for an oblivious-transfer run: Alice's two bits and Bob's
/// index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OtInputs {
    pub x0: u8,
    pub x1: u8,
    pub b: u8,
}

impl OtInputs {
    pub fn new(x0: u8, x1: u8, b: u8) -> Result<Self, DomainError> {
        Ok(Self {
            x0: check_bit(x0)?,
            x1: check_bit(x1)?,
            b: check_bit(b)?,
        })
    }

    pub fn alice_bit(&self, index: u8) -> u8 {
        if index == 0 {
            self.x0
        } else {
            self.x1
        }
    }
}

/// Completed outputs of a randomized oblivious transfer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotOutput {
    pub x0: u8,
    pub x1: u8,
    pub b: u8,
    pub xb: u8,
}

impl RotOutput {
    /// Honest completion requires Bob's received bit to match Alice's.
    pub fn is_correct(&self) -> bool {
        self.xb == if self.b == 0 { self.x0 } else { self.x1 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wcf_spec_rejects_out_of_range() {
        assert!(WcfSpec::new(0.4, 0.6).is_err());
        assert!(WcfSpec::new(0.6, 1.1).is_err());
        assert!(WcfSpec::new(0.5, 1.0).is_ok());
    }

    #[test]
    fn cheat_profile_bias() {
        let p = CheatProfile::new(1.0, 0.5).unwrap();
        assert!((p.bias() - 0.5).abs() < 1e-12);
        assert_eq!(p.swapped(), CheatProfile::new(0.5, 1.0).unwrap());
        assert!(!p.is_fair());
        assert!(CheatProfile::new(0.75, 0.75).unwrap().is_fair());
    }

    #[test]
    fn rot_output_correctness() {
        assert!(RotOutput { x0: 1, x1: 0, b: 0, xb: 1 }.is_correct());
        assert!(!RotOutput { x0: 1, x1: 0, b: 1, xb: 1 }.is_correct());
    }
}
