use srgg_core::bignet::BignetError;
use srgg_core::data::DataError;
use srgg_core::distance::DistanceError;
use srgg_core::io::IoError;
use srgg_core::mcmc::McmcError;
use srgg_core::posterior::PosteriorError;
use thiserror::Error;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SHAPE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Mcmc(#[from] McmcError),
    #[error(transparent)]
    Distance(#[from] DistanceError),
    #[error(transparent)]
    Bignet(#[from] BignetError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Shape(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Data(e) => match e {
                DataError::LengthMismatch { .. } | DataError::Ragged { .. } | DataError::TooManyRows { .. } => {
                    EXIT_SHAPE
                }
                DataError::DegenerateRanks => EXIT_NUMERIC,
                _ => EXIT_INPUT,
            },
            Self::Io(_) | Self::Input(_) => EXIT_INPUT,
            Self::Mcmc(e) => match e {
                McmcError::Config(_) => EXIT_INPUT,
                McmcError::EmptyPostBurnin { .. } => EXIT_SHAPE,
                McmcError::Posterior(PosteriorError::InvalidConfig(_)) => EXIT_INPUT,
                McmcError::Posterior(PosteriorError::DimensionMismatch { .. }) => EXIT_SHAPE,
                _ => EXIT_NUMERIC,
            },
            Self::Distance(e) => match e {
                DistanceError::EmptyTrace | DistanceError::EmptyPostBurnin { .. } => EXIT_INPUT,
                DistanceError::LengthMismatch { .. } | DistanceError::DimensionMismatch { .. } => EXIT_SHAPE,
                DistanceError::ZeroUncertainty | DistanceError::NonpositiveScale(_) => EXIT_NUMERIC,
            },
            Self::Bignet(e) => match e {
                BignetError::DimensionMismatch { .. } => EXIT_SHAPE,
                BignetError::InvalidCorrelationEntry { .. } => EXIT_INPUT,
                BignetError::DegenerateClass(_) => EXIT_NUMERIC,
            },
            Self::Shape(_) => EXIT_SHAPE,
        }
    }
}
