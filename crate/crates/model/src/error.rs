use thiserror::Error;

/// Validation and domain errors for model parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// A parameter failed its validity constraint.
    #[error("invalid parameter {name}: {value} ({constraint})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    /// A quantity is undefined for the given parameters, e.g. association
    /// probabilities when both tiers have zero density.
    #[error("undefined for these parameters: {0}")]
    Undefined(&'static str),
}
