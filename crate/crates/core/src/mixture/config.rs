//! Declarative class definitions.
//!
//! ```toml
//! prior = "elias-gamma"          # or "uniform"; ignored when weights are given
//! weights = ["1/2", "1/4"]       # optional explicit prior
//!
//! [[component]]
//! kind = "bernoulli"
//! theta = "1/2"
//!
//! [[component]]
//! kind = "bernoulli"
//! theta = "1"
//! ```
//!
//! A class may instead be the program class:
//!
//! ```toml
//! [programs]
//! max_len = 12
//! step_budget = 64
//! cycles = 2
//! actions = 2
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{program_class, Mixture, MixtureError, PriorScheme};
use crate::environments::{EnvError, EnvSpec};
use crate::scalar::parse_rational;
use crate::solomonoff::ApproximationParams;

pub type ComponentConfig = EnvSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramClassConfig {
    pub max_len: usize,
    pub step_budget: u64,
    pub cycles: usize,
    #[serde(default = "two")]
    pub actions: usize,
}

fn two() -> usize {
    2
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassConfig {
    #[serde(default)]
    pub prior: PriorScheme,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    #[serde(default, rename = "component", skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<ComponentConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub programs: Option<ProgramClassConfig>,
}

#[derive(Debug, Error)]
pub enum ClassConfigError {
    #[error("class config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("class config field `weights[{0}]`: not a rational number")]
    Weight(usize),
    #[error("class config field `component`: {0}")]
    Component(#[from] EnvError),
    #[error("class config: give either `component` entries or `programs`, not both or neither")]
    Shape,
    #[error("class config: {0}")]
    Mixture(#[from] MixtureError),
}

impl ClassConfig {
    pub fn from_toml(text: &str) -> Result<Self, ClassConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn build(&self) -> Result<Mixture, ClassConfigError> {
        match (&self.programs, self.components.is_empty()) {
            (Some(p), true) => Ok(program_class(
                ApproximationParams::new(p.max_len, p.step_budget),
                p.cycles,
                p.actions,
            )?),
            (None, false) => {
                let components = self
                    .components
                    .iter()
                    .map(|c| c.build(0))
                    .collect::<Result<Vec<_>, _>>()?;
                match &self.weights {
                    Some(ws) => {
                        let prior = ws
                            .iter()
                            .enumerate()
                            .map(|(i, w)| {
                                parse_rational(w)
                                    .map(|r| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
                                    .ok_or(ClassConfigError::Weight(i))
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(Mixture::new(components, prior)?)
                    }
                    None => Ok(Mixture::with_scheme(components, self.prior)?),
                }
            }
            _ => Err(ClassConfigError::Shape),
        }
    }
}
