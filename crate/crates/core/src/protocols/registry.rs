//! Runtime protocol registry keyed by canonical names.

use super::combined::CombinedRot;
use super::prototype::PrototypeRot;
use super::reductions::{OtFromRot, RoleSwitch, RotFromOt};
use super::unfair::UnfairRot;
use super::wcf::WcfBlackBox;
use crate::engine::ProtocolHandle;
use crate::types::{OtInputs, WcfSpec};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

const MAX_COMPOSITION_DEPTH: u32 = 8;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RegistryError {
    #[error("unknown protocol {0:?} (see `list` for registered names)")]
    UnknownProtocol(String),
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("composition too deep (limit {MAX_COMPOSITION_DEPTH})")]
    TooDeep,
}

/// Construction-time parameters shared by all builders.
#[derive(Debug, Clone)]
pub struct ProtocolParams {
    pub wcf: WcfSpec,
    /// Desired OT inputs where the protocol takes inputs; `None` draws them
    /// uniformly per run.
    pub ot_inputs: Option<OtInputs>,
    /// Inner protocol name for transformer entries (role-switch, combined-rot,
    /// ot-from-rot, rot-from-ot).
    pub base: Option<String>,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        Self {
            wcf: WcfSpec::fair(0.3536).expect("valid default spec"),
            ot_inputs: None,
            base: None,
        }
    }
}

type Builder =
    fn(&ProtocolRegistry, &ProtocolParams, u32) -> Result<ProtocolHandle, RegistryError>;

pub struct ProtocolRegistry {
    builders: BTreeMap<&'static str, Builder>,
}

impl ProtocolRegistry {
    /// The canonical registry: every protocol this crate implements.
    pub fn standard() -> Self {
        let mut builders: BTreeMap<&'static str, Builder> = BTreeMap::new();
        builders.insert("cks10-rot", |_, _, _| Ok(Arc::new(super::cks10::QutritRot)));
        builders.insert("unfair-lt-rot", |_, _, _| Ok(Arc::new(UnfairRot)));
        builders.insert("wcf-black-box", |_, p, _| {
            Ok(Arc::new(WcfBlackBox::new(p.wcf)))
        });
        builders.insert("prototype-rot", |_, p, _| {
            Ok(Arc::new(PrototypeRot::new(p.wcf)))
        });
        builders.insert("role-switch", |reg, p, depth| {
            let inner = reg.build_inner(p, depth, "unfair-lt-rot")?;
            Ok(Arc::new(RoleSwitch::new(inner)))
        });
        builders.insert("combined-rot", |reg, p, depth| {
            let base = reg.build_inner(p, depth, "unfair-lt-rot")?;
            CombinedRot::from_base(p.wcf, base)
                .map(|c| Arc::new(c) as ProtocolHandle)
                .map_err(|e| RegistryError::InvalidComposition(e.to_string()))
        });
        builders.insert("ot-from-rot", |reg, p, depth| {
            let inner = reg.build_inner(p, depth, "unfair-lt-rot")?;
            Ok(Arc::new(OtFromRot::new(inner, p.ot_inputs)))
        });
        builders.insert("rot-from-ot", |reg, p, depth| {
            // Default inner: the derandomized unfair protocol, so the
            // round trip rot → ot → rot exercises both reductions.
            let inner = match &p.base {
                Some(name) => reg.build_at(name, &p.clear_base(), depth)?,
                None => {
                    let inner_params = ProtocolParams {
                        base: None,
                        ..p.clone()
                    };
                    reg.build_at("ot-from-rot", &inner_params, depth)?
                }
            };
            Ok(Arc::new(RotFromOt::new(inner)))
        });
        Self { builders }
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.builders.keys().copied().collect()
    }

    pub fn build(&self, name: &str, params: &ProtocolParams) -> Result<ProtocolHandle, RegistryError> {
        self.build_at(name, params, 0)
    }

    fn build_at(
        &self,
        name: &str,
        params: &ProtocolParams,
        depth: u32,
    ) -> Result<ProtocolHandle, RegistryError> {
        if depth >= MAX_COMPOSITION_DEPTH {
            return Err(RegistryError::TooDeep);
        }
        let builder = self
            .builders
            .get(name)
            .ok_or_else(|| RegistryError::UnknownProtocol(name.to_string()))?;
        builder(self, params, depth + 1)
    }

    fn build_inner(
        &self,
        params: &ProtocolParams,
        depth: u32,
        default: &str,
    ) -> Result<ProtocolHandle, RegistryError> {
        let name = params.base.clone().unwrap_or_else(|| default.to_string());
        self.build_at(&name, &params.clear_base(), depth)
    }
}

impl ProtocolParams {
    /// Same parameters with the `base` consumed; inner builds use defaults.
    fn clear_base(&self) -> ProtocolParams {
        ProtocolParams {
            base: None,
            ..self.clone()
        }
    }
}
