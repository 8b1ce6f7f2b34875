//! The randomized uniform-price admission mechanism.
//!
//! Sort the bids ascending, append a pseudo-bid of 1, and admit the largest
//! prefix of `m` users whose next-higher bid still fits `m` times within
//! capacity. Every winner is assigned that next-higher bid (the lowest
//! losing bid, or the pseudo-bid when everyone wins). When a group of equal
//! bids straddles the cut, the remaining seats go to a uniformly random
//! subset of the group.

use num::rational::Ratio;
use num::One;

use crate::outcome::{Outcome, OutcomeDistribution};
use crate::profile::{BidProfile, SortedProfile};
use crate::scalar::{ratio_int, RatioInt};

use super::{index_combinations, split_at_boundary};

pub(crate) fn admitted_count_sorted<I: RatioInt>(sorted: &SortedProfile<I>) -> usize {
    let n = sorted.source_len();
    for m in (1..=n).rev() {
        if ratio_int::<I>(m as u64) * sorted.at_rank_ref(m + 1) <= Ratio::one() {
            return m;
        }
    }
    // m = 1 always qualifies: the rank-2 value is at most 1.
    unreachable!("a one-user prefix always fits capacity")
}

/// Number of users admitted: the largest `m` with
/// `m * (rank m+1 value) <= 1`. At least 1 for every profile.
pub fn admitted_count<I: RatioInt>(profile: &BidProfile<I>) -> usize {
    admitted_count_sorted(&profile.sorted())
}

/// The exact outcome distribution. Deterministic profiles yield a single
/// entry; a tie straddling the cut yields one outcome per way of seating the
/// tied users, each equally likely.
pub fn distribution<I: RatioInt>(profile: &BidProfile<I>) -> OutcomeDistribution<I> {
    let sorted = profile.sorted();
    let m = admitted_count_sorted(&sorted);
    let rate = sorted.at_rank_ref(m + 1).clone();
    let boundary = sorted.at_rank_ref(m);
    let (below, tied) = split_at_boundary(profile, boundary);
    let seats = m - below.len();
    let outcomes: Vec<Outcome<I>> = index_combinations(&tied, seats)
        .into_iter()
        .map(|chosen| {
            let winners = below.iter().chain(chosen.iter());
            Outcome::new(winners.map(|&u| (u, rate.clone())).collect())
                .expect("admitted rates fit capacity")
        })
        .collect();
    OutcomeDistribution::uniform(outcomes).expect("at least one seating")
}

/// Draws one outcome from the exact distribution with a deterministic
/// seeded generator.
pub fn sample<I: RatioInt>(profile: &BidProfile<I>, seed: u64) -> Outcome<I> {
    distribution(profile).sample(seed).clone()
}

/// The supremum of the bids with which a user could still win against
/// `others`: the largest rank value `v` at rank `j` (pseudo-bid included)
/// such that `j * v <= 1`. Bidding exactly this value may still lose a tie.
pub fn supremum_winning_bid<I: RatioInt>(others: &[Ratio<I>]) -> Ratio<I> {
    let sorted = SortedProfile::from_bids(others);
    for j in (1..=sorted.pseudo_rank()).rev() {
        if ratio_int::<I>(j as u64) * sorted.at_rank_ref(j) <= Ratio::one() {
            return sorted.at_rank_ref(j).clone();
        }
    }
    unreachable!("rank 1 always satisfies the capacity product")
}
