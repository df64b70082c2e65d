//! A desk-scale laboratory for Solomonoff induction and the AIXI agent.
//!
//! Everything runs over one small reference machine ([`machine`]): the
//! bounded universal prior and complexity bounds ([`solomonoff`]), online
//! sequence prediction over its programs ([`stream`]), Bayesian mixtures of
//! chronological environments ([`mixture`]), expectimax agents ([`agent`]),
//! a suite of concrete environments ([`environments`]), a universal
//! intelligence score ([`ior`]) and reproducible experiment pipelines
//! ([`experiments`]).

pub mod agent;
pub mod bits;
pub mod environments;
pub mod experiments;
pub mod interaction;
pub mod ior;
pub mod machine;
pub mod mixture;
pub mod output;
pub mod scalar;
pub mod solomonoff;
pub mod stream;

use thiserror::Error;

/// Any failure surfaced by the pipelines and output writers.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Mixture(#[from] mixture::MixtureError),
    #[error(transparent)]
    Agent(#[from] agent::AgentError),
    #[error(transparent)]
    Environment(#[from] environments::EnvError),
    #[error(transparent)]
    Solomonoff(#[from] solomonoff::SolomonoffError),
    #[error(transparent)]
    Ior(#[from] ior::IorError),
    #[error(transparent)]
    Experiment(#[from] experiments::ExperimentError),
}
