//! Resolved run configuration: built-in defaults, overridden by an optional
//! TOML config file, overridden by command-line flags.

use anyhow::{bail, Context, Result};
use ltot_core::engine::{ChannelConfig, RestartLimit};
use ltot_core::protocols::{ProtocolParams, WcfSpec};
use ltot_core::types::OtInputs;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub protocol: String,
    pub alice: String,
    pub bob: String,
    pub trials: u64,
    pub seed: u64,
    pub loss_rate: f64,
    pub classical_loss_rate: f64,
    /// A number, or "unbounded".
    pub max_restarts: String,
    pub adversarial_loss: bool,
    pub wcf_a: f64,
    pub wcf_b: f64,
    /// Inner protocol for the transformer entries.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    /// Chosen OT inputs (all three or none).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x1: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<u8>,
    /// False loss declarations for the guessing attacker.
    pub declared_losses: u32,
    pub format: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            protocol: "unfair-lt-rot".into(),
            alice: "honest".into(),
            bob: "honest".into(),
            trials: 10_000,
            seed: 1,
            loss_rate: 0.0,
            classical_loss_rate: 0.0,
            max_restarts: "unbounded".into(),
            adversarial_loss: true,
            wcf_a: 0.8536,
            wcf_b: 0.8536,
            base: None,
            x0: None,
            x1: None,
            b: None,
            declared_losses: 0,
            format: "json".into(),
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
    }

    pub fn restart_limit(&self) -> Result<RestartLimit> {
        if self.max_restarts == "unbounded" {
            return Ok(RestartLimit::Unbounded);
        }
        let n: u32 = self
            .max_restarts
            .parse()
            .with_context(|| format!("max_restarts must be a number or \"unbounded\", got {:?}", self.max_restarts))?;
        Ok(RestartLimit::Bounded(n))
    }

    pub fn channel(&self) -> Result<ChannelConfig> {
        let channel = ChannelConfig {
            loss_rate: self.loss_rate,
            classical_loss_rate: self.classical_loss_rate,
            adversarial_loss_allowed: self.adversarial_loss,
            max_restarts: self.restart_limit()?,
        };
        channel.validate().map_err(anyhow::Error::msg)?;
        Ok(channel)
    }

    pub fn protocol_params(&self) -> Result<ProtocolParams> {
        let wcf = WcfSpec::new(self.wcf_a, self.wcf_b)
            .map_err(|e| anyhow::anyhow!("wcf parameters: {e}"))?;
        let ot_inputs = match (self.x0, self.x1, self.b) {
            (None, None, None) => None,
            (Some(x0), Some(x1), Some(b)) => Some(
                OtInputs::new(x0, x1, b).map_err(|e| anyhow::anyhow!("ot inputs: {e}"))?,
            ),
            _ => bail!("provide all of --x0, --x1, --b or none"),
        };
        Ok(ProtocolParams {
            wcf,
            ot_inputs,
            base: self.base.clone(),
        })
    }

    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = RunConfig::default();
        assert!(c.channel().is_ok());
        assert!(c.protocol_params().is_ok());
    }

    #[test]
    fn restart_limit_parses_both_forms() {
        let mut c = RunConfig::default();
        assert_eq!(c.restart_limit().unwrap(), RestartLimit::Unbounded);
        c.max_restarts = "5".into();
        assert_eq!(c.restart_limit().unwrap(), RestartLimit::Bounded(5));
        c.max_restarts = "never".into();
        assert!(c.restart_limit().is_err());
    }

    #[test]
    fn partial_ot_inputs_are_rejected() {
        let mut c = RunConfig::default();
        c.x0 = Some(1);
        assert!(c.protocol_params().is_err());
        c.x1 = Some(0);
        c.b = Some(1);
        assert!(c.protocol_params().is_ok());
    }
}
