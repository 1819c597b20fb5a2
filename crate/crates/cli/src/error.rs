use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] disagree_core::Error),
    #[error("MissingMarket: scenario has no market and its investor pool cannot form one")]
    MissingMarket,
    #[error("UnknownInvestor: no investor named {0:?}")]
    UnknownInvestor(String),
    #[error("AmbiguousInvestor: scenario has {0} investors; pass --investor")]
    AmbiguousInvestor(usize),
    #[error("MissingTrueDistribution: scenario has no true_distribution")]
    MissingTrueDistribution,
    #[error("MissingSimulation: scenario has no simulation block")]
    MissingSimulation,
    #[error("MissingGrid: no {0} grid in the scenario or on the command line")]
    MissingGrid(&'static str),
    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),
    #[error("Json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("Csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("Io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
