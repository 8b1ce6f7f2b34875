//! The deterministic dropped-threshold mechanism.
//!
//! Each user faces a threshold computed from the other bids alone: the
//! supremum winning bid of the uniform-price mechanism, pulled toward
//! `1/(rank + 1)` by the drop parameter whenever admitting one more user at
//! the threshold rate would overflow capacity. A user wins exactly when
//! their bid is at most their threshold and is assigned the threshold
//! itself, so truthful bidding is optimal and equal bids are admitted
//! all-or-none.

use num::rational::Ratio;
use num::One;

use crate::drop_schedule::DropSchedule;
use crate::outcome::Outcome;
use crate::profile::{BidProfile, SortedProfile};
use crate::scalar::{ratio_int, RatioInt};
use crate::Result;

/// The two capacity ranks of a reduced profile that decide whether the
/// threshold must be dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdRanks {
    /// Largest rank `j` (boundary conventions included) with
    /// `j * value(j) <= 1`; the rank whose value is the supremum winning bid.
    pub supremum_rank: usize,
    /// Largest rank `j` with `(j + 1) * value(j) <= 1`, i.e. the rank that
    /// leaves room for one more admit at its value. Never exceeds
    /// `supremum_rank`; 0 when even two seats at the lowest bid overflow.
    pub headroom_rank: usize,
}

impl ThresholdRanks {
    /// The threshold must be dropped exactly when one more admit at the
    /// supremum value would overflow capacity.
    pub fn needs_drop(&self) -> bool {
        self.supremum_rank != self.headroom_rank
    }
}

pub(crate) fn threshold_ranks_sorted<I: RatioInt>(sorted: &SortedProfile<I>) -> ThresholdRanks {
    let top = sorted.pseudo_rank();
    let mut supremum_rank = 0;
    for j in (1..=top).rev() {
        if ratio_int::<I>(j as u64) * sorted.at_rank_ref(j) <= Ratio::one() {
            supremum_rank = j;
            break;
        }
    }
    let mut headroom_rank = 0;
    for j in (1..=top).rev() {
        if ratio_int::<I>(j as u64 + 1) * sorted.at_rank_ref(j) <= Ratio::one() {
            headroom_rank = j;
            break;
        }
    }
    ThresholdRanks {
        supremum_rank,
        headroom_rank,
    }
}

/// Capacity ranks of a reduced profile, taken over ranks `0..=len + 1` with
/// the virtual 0 at rank 0 and the pseudo-bid 1 at rank `len + 1`.
pub fn threshold_ranks<I: RatioInt>(others: &[Ratio<I>]) -> ThresholdRanks {
    threshold_ranks_sorted(&SortedProfile::from_bids(others))
}

pub(crate) fn highest_winning_bid_sorted<I: RatioInt>(
    sorted: &SortedProfile<I>,
    drops: &DropSchedule<I>,
) -> Result<Ratio<I>> {
    if sorted.source_len() == 0 {
        // A lone bidder is always admitted at the full capacity; the drop
        // indices only cover competitive ranks.
        return Ok(Ratio::one());
    }
    let ranks = threshold_ranks_sorted(sorted);
    let supremum = sorted.at_rank_ref(ranks.supremum_rank);
    if !ranks.needs_drop() {
        return Ok(supremum.clone());
    }
    let d = drops.get(ranks.supremum_rank)?;
    let safe_floor = Ratio::new(I::one(), crate::scalar::int(ranks.supremum_rank as u64 + 1));
    Ok(supremum * (Ratio::one() - d) + safe_floor * d)
}

/// The highest winning bid against `others`: the supremum winning bid when
/// one more admit at that value still fits, and otherwise that value
/// lowered into the open interval between `1/(rank + 1)` and itself.
/// Always lies in `[0, 1]`.
pub fn highest_winning_bid<I: RatioInt>(
    others: &[Ratio<I>],
    drops: &DropSchedule<I>,
) -> Result<Ratio<I>> {
    highest_winning_bid_sorted(&SortedProfile::from_bids(others), drops)
}

/// Runs the mechanism: user `i` wins exactly when `bid_i` is at most the
/// highest winning bid against the other bids, and is assigned that
/// threshold. The outcome is a deterministic, single-priced function of the
/// profile.
pub fn run<I: RatioInt>(profile: &BidProfile<I>, drops: &DropSchedule<I>) -> Result<Outcome<I>> {
    drops.require_users(profile.len())?;
    let mut rates = std::collections::BTreeMap::new();
    for user in 0..profile.len() {
        let threshold =
            highest_winning_bid_sorted(&SortedProfile::from_bids(&profile.without(user)), drops)?;
        if *profile.bid(user) <= threshold {
            rates.insert(user, threshold);
        }
    }
    Outcome::new(rates)
}
