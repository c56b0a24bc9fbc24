//! Error type shared across the crate.
//!
//! Every fallible operation returns [`Result`]. Variants distinguish the cases
//! callers are expected to branch on: size-cap refusals (fall back to Monte
//! Carlo), unsupported order models (fall back to the brute-force oracle), and
//! contract violations (caller bugs — never silently absorbed).

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by model construction, policy evaluation, and the harness.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A distribution failed validation (ordering, range, or normalization).
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// An instance failed validation (dimension, order model, or profit-kind
    /// specific constraints such as binary supports for last-success).
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// A policy is malformed or does not match the instance it is run on.
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    /// A caller broke a documented precondition.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// An exact enumeration would exceed its configured size cap. Callers that
    /// can estimate instead (Monte Carlo) should treat this as the fallback
    /// signal.
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    /// The requested computation does not support this arrival-order model
    /// (e.g. the backward-induction solver requires a fixed arrival order).
    #[error("unsupported order model: {0}")]
    UnsupportedOrder(String),

    /// An experiment configuration is inconsistent or incomplete.
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}
