use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("matrix is not skew-symmetric (symmetric part norm {0:e})")]
    NotSkewSymmetric(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AllocationError {
    #[error(
        "allocation matrix is rank deficient (rank {rank}, smallest singular value {sigma_min:e})"
    )]
    RankDeficient { rank: usize, sigma_min: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlannerError {
    #[error("segment duration must be positive, got {0}")]
    NonPositiveDuration(f64),
    #[error("rotation endpoints are antipodal (angle {0} rad)")]
    AntipodalEndpoints(f64),
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("failed to read scenario {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("scenario parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unsupported scenario format {0:?} (expected {expected:?})", expected = crate::harness::scenario::FORMAT_TAG)]
    Format(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Allocation(#[from] AllocationError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulationError {
    #[error("non-finite vehicle state: {0}")]
    NonFiniteState(String),
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("cannot compute metrics from an empty log")]
    EmptyLog,
}
