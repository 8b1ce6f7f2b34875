//! Omniscient baselines: admit as many users as capacity allows, with no
//! regard for truthfulness.

use num::rational::Ratio;
use num::{One, Zero};

use crate::outcome::{Outcome, OutcomeDistribution};
use crate::profile::BidProfile;
use crate::scalar::{ratio_int, RatioInt};

use super::{index_combinations, split_at_boundary};

/// Number of users the single-price baseline admits: the largest `m` such
/// that `m` copies of the `m`-th lowest bid fit capacity. At least 1.
pub fn single_price_count<I: RatioInt>(profile: &BidProfile<I>) -> usize {
    let sorted = profile.sorted();
    for m in (1..=profile.len()).rev() {
        if ratio_int::<I>(m as u64) * sorted.at_rank_ref(m) <= Ratio::one() {
            return m;
        }
    }
    unreachable!("one seat at the lowest bid always fits capacity")
}

/// The single-price baseline: admits the `m` lowest bidders at the universal
/// price equal to the highest admitted bid. Ties straddling the cut are
/// seated uniformly at random.
pub fn single_price<I: RatioInt>(profile: &BidProfile<I>) -> OutcomeDistribution<I> {
    let sorted = profile.sorted();
    let m = single_price_count(profile);
    let price = sorted.at_rank_ref(m).clone();
    let (below, tied) = split_at_boundary(profile, &price);
    let seats = m - below.len();
    let outcomes: Vec<Outcome<I>> = index_combinations(&tied, seats)
        .into_iter()
        .map(|chosen| {
            let winners = below.iter().chain(chosen.iter());
            Outcome::new(winners.map(|&u| (u, price.clone())).collect())
                .expect("admitted rates fit capacity")
        })
        .collect();
    OutcomeDistribution::uniform(outcomes).expect("at least one seating")
}

/// Number of users the multi-price baseline admits: the longest prefix of
/// sorted bids whose sum fits capacity. Maximal among all feasible
/// admissions, and at least 1.
pub fn multi_price_count<I: RatioInt>(profile: &BidProfile<I>) -> usize {
    let sorted = profile.sorted();
    let mut total: Ratio<I> = Ratio::zero();
    let mut count = 0;
    for rank in 1..=profile.len() {
        total = total + sorted.at_rank_ref(rank).clone();
        if total > Ratio::one() {
            break;
        }
        count = rank;
    }
    count
}

/// The multi-price baseline: admits the largest feasible set of lowest
/// bidders, each priced at their own bid. Ties straddling the cut are seated
/// uniformly at random.
pub fn multi_price<I: RatioInt>(profile: &BidProfile<I>) -> OutcomeDistribution<I> {
    let sorted = profile.sorted();
    let m = multi_price_count(profile);
    let boundary = sorted.at_rank_ref(m).clone();
    let (below, tied) = split_at_boundary(profile, &boundary);
    let seats = m - below.len();
    let outcomes: Vec<Outcome<I>> = index_combinations(&tied, seats)
        .into_iter()
        .map(|chosen| {
            let winners = below.iter().chain(chosen.iter());
            Outcome::new(winners.map(|&u| (u, profile.bid(u).clone())).collect())
                .expect("admitted rates fit capacity")
        })
        .collect();
    OutcomeDistribution::uniform(outcomes).expect("at least one seating")
}
