use serde::{Deserialize, Serialize};

/// Cap on quantum-loss restarts for one protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RestartLimit {
    Bounded(u32),
    Unbounded,
}

impl RestartLimit {
    pub fn exhausted_by(&self, restarts_used: u32) -> bool {
        match self {
            RestartLimit::Bounded(r) => restarts_used >= *r,
            RestartLimit::Unbounded => false,
        }
    }
}

/// Lossy-channel parameters for one run.
///
/// `loss_rate` applies to quantum messages and triggers the protocol's
/// restart rule; `classical_loss_rate` only forces transparent resends.
/// A dishonest party may declare a received quantum message lost exactly when
/// `adversarial_loss_allowed` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub loss_rate: f64,
    pub classical_loss_rate: f64,
    pub adversarial_loss_allowed: bool,
    pub max_restarts: RestartLimit,
}

impl ChannelConfig {
    pub fn lossless() -> Self {
        Self {
            loss_rate: 0.0,
            classical_loss_rate: 0.0,
            adversarial_loss_allowed: true,
            max_restarts: RestartLimit::Unbounded,
        }
    }

    pub fn with_loss(loss_rate: f64, max_restarts: u32) -> Self {
        Self {
            loss_rate,
            classical_loss_rate: 0.0,
            adversarial_loss_allowed: true,
            max_restarts: RestartLimit::Bounded(max_restarts),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.loss_rate) {
            return Err(format!("loss_rate {} outside [0,1]", self.loss_rate));
        }
        if !(0.0..1.0).contains(&self.classical_loss_rate) {
            return Err(format!(
                "classical_loss_rate {} outside [0,1) (1 would never deliver)",
                self.classical_loss_rate
            ));
        }
        Ok(())
    }
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self::lossless()
    }
}
