//! The four admission mechanisms.
//!
//! All of them serve the lowest bidders first and are index-free: outcomes
//! depend on the multiset of bids only.
//!
//! - [`abar`]: randomized uniform-price admission. Prices at the lowest
//!   losing bid; ties straddling the cut are resolved uniformly at random.
//! - [`astar`]: deterministic refinement of `abar`. Each user faces a
//!   highest-winning-bid threshold computed from the other bids alone,
//!   lowered ("dropped") just enough to keep capacity safe; equal bids are
//!   admitted all-or-none.
//! - [`omniscient`]: non-truthful baselines that maximize admitted users
//!   under a single universal price, or under per-user prices.

pub mod abar;
pub mod astar;
pub mod omniscient;

use num::rational::Ratio;

use crate::drop_schedule::DropSchedule;
use crate::error::Error;
use crate::outcome::OutcomeDistribution;
use crate::profile::BidProfile;
use crate::scalar::RatioInt;
use crate::Result;

/// Identifies one of the four mechanisms. Only `Astar` consumes a
/// [`DropSchedule`]; the others ignore it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mechanism {
    Abar,
    Astar,
    FOmniscient,
    TOmniscient,
}

impl Mechanism {
    pub const ALL: [Mechanism; 4] = [
        Mechanism::Abar,
        Mechanism::Astar,
        Mechanism::FOmniscient,
        Mechanism::TOmniscient,
    ];

    /// Wire name used by files and the command line.
    pub fn code(&self) -> &'static str {
        match self {
            Mechanism::Abar => "abar",
            Mechanism::Astar => "astar",
            Mechanism::FOmniscient => "f",
            Mechanism::TOmniscient => "t",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "abar" => Ok(Mechanism::Abar),
            "astar" => Ok(Mechanism::Astar),
            "f" => Ok(Mechanism::FOmniscient),
            "t" => Ok(Mechanism::TOmniscient),
            other => Err(Error::InvalidParameter(format!(
                "unknown mechanism `{other}` (expected abar, astar, f, or t)"
            ))),
        }
    }

    /// Whether the winning set is a deterministic function of the bids.
    pub fn is_deterministic(&self) -> bool {
        matches!(self, Mechanism::Astar)
    }

    pub fn requires_drop_schedule(&self) -> bool {
        matches!(self, Mechanism::Astar)
    }
}

impl std::fmt::Display for Mechanism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// Runs any mechanism as a distribution over outcomes; deterministic
/// mechanisms yield a single entry with probability 1.
pub fn run_distribution<I: RatioInt>(
    mechanism: Mechanism,
    profile: &BidProfile<I>,
    drops: Option<&DropSchedule<I>>,
) -> Result<OutcomeDistribution<I>> {
    match mechanism {
        Mechanism::Abar => Ok(abar::distribution(profile)),
        Mechanism::Astar => {
            let drops = drops.ok_or(Error::MissingDropSchedule)?;
            Ok(OutcomeDistribution::certain(astar::run(profile, drops)?))
        }
        Mechanism::FOmniscient => Ok(omniscient::single_price(profile)),
        Mechanism::TOmniscient => Ok(omniscient::multi_price(profile)),
    }
}

/// All `k`-element combinations of `items`, in lexicographic order of
/// positions. `k = 0` yields one empty combination.
pub(crate) fn index_combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let n = items.len();
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut positions: Vec<usize> = (0..k).collect();
    loop {
        out.push(positions.iter().map(|&p| items[p]).collect());
        // Advance the rightmost position that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if positions[i] != i + n - k {
                positions[i] += 1;
                for j in i + 1..k {
                    positions[j] = positions[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Splits users into those bidding strictly below `boundary` and those tied
/// with it, preserving index order.
pub(crate) fn split_at_boundary<I: RatioInt>(
    profile: &BidProfile<I>,
    boundary: &Ratio<I>,
) -> (Vec<usize>, Vec<usize>) {
    let mut below = Vec::new();
    let mut tied = Vec::new();
    for (i, bid) in profile.bids().iter().enumerate() {
        if bid < boundary {
            below.push(i);
        } else if bid == boundary {
            tied.push(i);
        }
    }
    (below, tied)
}
