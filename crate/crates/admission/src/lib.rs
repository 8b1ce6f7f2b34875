//! Non-monetary admission control auctions for a capacity-constrained
//! access point.
//!
//! Users bid the service rate they need (normalized so capacity is 1) and
//! the access point decides whom to serve and at what rate, without side
//! payments. The crate implements four mechanisms over exact rational
//! arithmetic — a randomized uniform-price auction, its deterministic
//! truthful refinement with dropped thresholds, and two omniscient
//! baselines — together with executable property checks (feasibility,
//! incentive compatibility by brute-force deviation search, monotonicity,
//! anonymity, scalability) and seeded Monte Carlo experiments.
//!
//! All arithmetic is exact: bids, assigned rates, probabilities, and
//! thresholds are rationals, so boundary comparisons and tie detection
//! never depend on rounding. The numeric tower is generic over the integer
//! component of the rational (see [`scalar::RatioInt`]); the [`Int`] and
//! [`Rate`] aliases fix the default to arbitrary precision.

pub mod drop_schedule;
pub mod error;
pub mod experiments;
pub mod io;
pub mod mechanisms;
pub mod outcome;
pub mod profile;
pub mod scalar;
pub mod utility;
pub mod verifier;

/// Canonical integer component: arbitrary precision, never overflows.
pub type Int = num::BigInt;

/// Canonical exact scalar for bids, rates, probabilities, and thresholds.
pub type Rate = num::rational::Ratio<Int>;

pub type Result<T> = std::result::Result<T, error::Error>;

pub use drop_schedule::DropSchedule;
pub use error::Error;
pub use mechanisms::Mechanism;
pub use outcome::{Outcome, OutcomeDistribution};
pub use profile::{BidProfile, SortedProfile};
pub use utility::UtilitySpec;
