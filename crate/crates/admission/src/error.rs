//! Error type shared across the crate.
//!
//! Every variant renders as a single line starting with a stable
//! machine-parsable code, so front-ends can map failures to exit codes
//! without string matching on prose.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid_capacity: capacity must be positive, got {0}")]
    InvalidCapacity(String),
    #[error("bid_exceeds_capacity: bid {bid} at index {index} exceeds capacity {capacity}")]
    BidExceedsCapacity {
        /// 1-based bidder index, matching external numbering.
        index: usize,
        bid: String,
        capacity: String,
    },
    #[error("negative_bid: bid {bid} at index {index} is negative")]
    NegativeBid { index: usize, bid: String },
    #[error("bid_out_of_range: bid {bid} at index {index} lies outside [0, 1]")]
    BidOutOfRange { index: usize, bid: String },
    #[error("empty_profile: at least one bidder is required")]
    EmptyProfile,
    #[error("rank_out_of_range: rank {rank} exceeds maximum {max}")]
    RankOutOfRange { rank: usize, max: usize },
    #[error("invalid_drop: d_{index} = {value} lies outside (0, 1)")]
    InvalidDrop { index: usize, value: String },
    #[error("drop_schedule_too_short: profile of {users} users needs {needed} drop parameters, got {got}")]
    DropScheduleTooShort {
        users: usize,
        needed: usize,
        got: usize,
    },
    #[error("missing_drop_schedule: this mechanism requires a drop schedule")]
    MissingDropSchedule,
    #[error("nondeterministic_mechanism: {0} has no single winning set to scan")]
    NondeterministicMechanism(String),
    #[error("invalid_distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid_outcome: {0}")]
    InvalidOutcome(String),
    #[error("invalid_utility: {0}")]
    InvalidUtility(String),
    #[error("invalid_parameter: {0}")]
    InvalidParameter(String),
    #[error("parse_error: {0}")]
    Parse(String),
    #[error("json_error: {0}")]
    Json(String),
}

impl Error {
    /// The stable reason code, i.e. the token before the first `:` of the
    /// rendered message.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidCapacity(_) => "invalid_capacity",
            Error::BidExceedsCapacity { .. } => "bid_exceeds_capacity",
            Error::NegativeBid { .. } => "negative_bid",
            Error::BidOutOfRange { .. } => "bid_out_of_range",
            Error::EmptyProfile => "empty_profile",
            Error::RankOutOfRange { .. } => "rank_out_of_range",
            Error::InvalidDrop { .. } => "invalid_drop",
            Error::DropScheduleTooShort { .. } => "drop_schedule_too_short",
            Error::MissingDropSchedule => "missing_drop_schedule",
            Error::NondeterministicMechanism(_) => "nondeterministic_mechanism",
            Error::InvalidDistribution(_) => "invalid_distribution",
            Error::InvalidOutcome(_) => "invalid_outcome",
            Error::InvalidUtility(_) => "invalid_utility",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Parse(_) => "parse_error",
            Error::Json(_) => "json_error",
        }
    }
}
