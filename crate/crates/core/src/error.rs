use thiserror::Error;

use crate::grr::GrrError;
use crate::mukai::MukaiError;
use crate::ring::RingError;
use crate::spaces::SpaceError;
use crate::verlinde::VerlindeError;

/// Any kernel failure, for callers that chain several modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Grr(#[from] GrrError),
    #[error(transparent)]
    Mukai(#[from] MukaiError),
    #[error(transparent)]
    Verlinde(#[from] VerlindeError),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
}
