//! Executable property checks.
//!
//! Each check runs a mechanism on concrete inputs — a single profile, an
//! exhaustive bid grid, or caller-supplied random instances — and returns a
//! [`PropertyReport`]. A failed report always carries a counterexample that
//! can be re-verified independently (for deviation searches, by re-evaluating
//! the two payoffs).

mod checks;
mod deviation;

pub use checks::{
    check_all_or_none, check_feasibility, check_monotonicity, check_permutation_equivariance,
    check_scalability, check_single_price, extract_win_interval, structural_suite,
};
pub use deviation::{brute_force_ic, evaluate_expected_utility, grid_utility_family};

use num::rational::Ratio;

use crate::error::Error;
use crate::mechanisms::Mechanism;
use crate::scalar::{ratio, RatioInt};
use crate::utility::UtilitySpec;
use crate::{Int, Result};

/// Upper bound on exhaustively enumerated grid tuples per check.
const MAX_ENUMERATION: u64 = 5_000_000;

/// Result of one property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport<I: RatioInt = Int> {
    pub property_id: String,
    pub mechanism: Option<Mechanism>,
    pub passed: bool,
    /// Number of elementary comparisons the check performed.
    pub cases: u64,
    pub counterexample: Option<Counterexample<I>>,
}

impl<I: RatioInt> PropertyReport<I> {
    pub fn passed(property_id: &str, mechanism: Option<Mechanism>, cases: u64) -> Self {
        Self {
            property_id: property_id.to_string(),
            mechanism,
            passed: true,
            cases,
            counterexample: None,
        }
    }

    pub fn failed(
        property_id: &str,
        mechanism: Option<Mechanism>,
        cases: u64,
        counterexample: Counterexample<I>,
    ) -> Self {
        Self {
            property_id: property_id.to_string(),
            mechanism,
            passed: false,
            cases,
            counterexample: Some(counterexample),
        }
    }
}

/// Evidence that a property fails, specific enough to re-check by hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample<I: RatioInt = Int> {
    /// A profitable lie: with the profile as true requirements, `user`
    /// gains by bidding `deviation` under `utility`.
    Deviation {
        profile: Vec<Ratio<I>>,
        user: usize,
        deviation: Ratio<I>,
        utility: UtilitySpec<I>,
        truthful_payoff: Ratio<I>,
        deviating_payoff: Ratio<I>,
    },
    /// Raising the bid raised the admission probability.
    Monotonicity {
        others: Vec<Ratio<I>>,
        lower_bid: Ratio<I>,
        higher_bid: Ratio<I>,
        lower_probability: Ratio<I>,
        higher_probability: Ratio<I>,
    },
    /// A profile violating a structural property; `reason` names it.
    Structural {
        profile: Vec<Ratio<I>>,
        reason: String,
    },
    /// A scanned bid breaking the win-interval shape.
    WinInterval {
        others: Vec<Ratio<I>>,
        bid: Ratio<I>,
        reason: String,
    },
    /// A relabeling under which the outcome distribution changed.
    Permutation {
        profile: Vec<Ratio<I>>,
        permutation: Vec<usize>,
    },
}

/// An exhaustive bid grid: the points `{0, 1/k, 2/k, ..., 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BidGrid {
    denominator: u64,
}

impl BidGrid {
    pub fn new(denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidParameter(
                "grid step must be 1/k with k >= 1".into(),
            ));
        }
        Ok(Self { denominator })
    }

    /// Parses the `1/k` form used on the command line.
    pub fn parse(s: &str) -> Result<Self> {
        let invalid =
            || Error::InvalidParameter(format!("grid step `{s}` is not of the form 1/k"));
        let (num, den) = s.split_once('/').ok_or_else(invalid)?;
        if num.trim() != "1" {
            return Err(invalid());
        }
        let k: u64 = den.trim().parse().map_err(|_| invalid())?;
        BidGrid::new(k)
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn step<I: RatioInt>(&self) -> Ratio<I> {
        ratio(1, self.denominator)
    }

    pub fn point_count(&self) -> u64 {
        self.denominator + 1
    }

    pub fn points<I: RatioInt>(&self) -> Vec<Ratio<I>> {
        (0..=self.denominator)
            .map(|j| ratio(j, self.denominator))
            .collect()
    }
}

/// Checks that enumerating `tuple_len` digits over `base` points stays
/// within the configured budget.
fn enumeration_guard(base: u64, tuple_len: usize) -> Result<()> {
    let mut total = 1u64;
    for _ in 0..tuple_len {
        total = total.saturating_mul(base);
        if total > MAX_ENUMERATION {
            return Err(Error::InvalidParameter(format!(
                "grid enumeration of {base}^{tuple_len} tuples exceeds the budget of {MAX_ENUMERATION}"
            )));
        }
    }
    Ok(())
}

/// Odometer over index tuples `[0, base)^len` in lexicographic order.
struct GridTuples {
    base: usize,
    digits: Vec<usize>,
    done: bool,
}

impl GridTuples {
    fn new(base: usize, len: usize) -> Self {
        Self {
            base,
            digits: vec![0; len],
            done: base == 0,
        }
    }
}

impl Iterator for GridTuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.digits.clone();
        let mut pos = self.digits.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.digits[pos] += 1;
            if self.digits[pos] < self.base {
                break;
            }
            self.digits[pos] = 0;
        }
        Some(current)
    }
}

fn has_duplicates<I: RatioInt>(bids: &[Ratio<I>]) -> bool {
    let mut sorted = bids.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).any(|w| w[0] == w[1])
}
