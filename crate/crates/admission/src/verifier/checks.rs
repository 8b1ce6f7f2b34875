//! Structural and behavioral checks on concrete profiles.

use std::collections::BTreeMap;

use num::rational::Ratio;
use num::{One, Signed, Zero};

use rand_core::SeedableRng;

use crate::drop_schedule::DropSchedule;
use crate::error::Error;
use crate::mechanisms::{self, abar, astar, omniscient, Mechanism};
use crate::profile::BidProfile;
use crate::scalar::{decimal_string, RatioInt};
use crate::Result;

use super::deviation::marginal;
use super::{enumeration_guard, BidGrid, Counterexample, GridTuples, PropertyReport};

fn structural_failure<I: RatioInt>(
    property_id: &str,
    mechanism: Option<Mechanism>,
    cases: u64,
    profile: &BidProfile<I>,
    reason: String,
) -> PropertyReport<I> {
    PropertyReport::failed(
        property_id,
        mechanism,
        cases,
        Counterexample::Structural {
            profile: profile.bids().to_vec(),
            reason,
        },
    )
}

/// Verifies the three feasibility constraints on one profile: probabilities
/// positive and summing to exactly 1, per-outcome assigned rates
/// non-negative and summing to at most 1, and every winner assigned at
/// least their bid.
pub fn check_feasibility<I: RatioInt>(
    mechanism: Mechanism,
    profile: &BidProfile<I>,
    drops: Option<&DropSchedule<I>>,
) -> Result<PropertyReport<I>> {
    let dist = mechanisms::run_distribution(mechanism, profile, drops)?;
    Ok(feasibility_of(mechanism, profile, &dist))
}

fn feasibility_of<I: RatioInt>(
    mechanism: Mechanism,
    profile: &BidProfile<I>,
    dist: &crate::outcome::OutcomeDistribution<I>,
) -> PropertyReport<I> {
    let mut cases = 0u64;
    let mut total_probability: Ratio<I> = Ratio::zero();
    for (outcome, p) in dist.entries() {
        cases += 1;
        if !p.is_positive() {
            return structural_failure(
                "feasibility",
                Some(mechanism),
                cases,
                profile,
                format!("outcome probability {} is not positive", decimal_string(p)),
            );
        }
        total_probability = total_probability + p.clone();
        let mut assigned_total: Ratio<I> = Ratio::zero();
        for (user, rate) in outcome.iter() {
            if rate.is_negative() {
                return structural_failure(
                    "feasibility",
                    Some(mechanism),
                    cases,
                    profile,
                    format!("user {} assigned negative rate", user + 1),
                );
            }
            if rate < profile.bid(user) {
                return structural_failure(
                    "feasibility",
                    Some(mechanism),
                    cases,
                    profile,
                    format!(
                        "user {} assigned {} below their bid {}",
                        user + 1,
                        decimal_string(rate),
                        decimal_string(profile.bid(user))
                    ),
                );
            }
            assigned_total = assigned_total + rate.clone();
        }
        if assigned_total > Ratio::one() {
            return structural_failure(
                "feasibility",
                Some(mechanism),
                cases,
                profile,
                format!(
                    "assigned rates sum to {} > 1",
                    decimal_string(&assigned_total)
                ),
            );
        }
    }
    if total_probability != Ratio::one() {
        return structural_failure(
            "feasibility",
            Some(mechanism),
            cases,
            profile,
            format!(
                "probabilities sum to {}, not 1",
                decimal_string(&total_probability)
            ),
        );
    }
    PropertyReport::passed("feasibility", Some(mechanism), cases)
}

/// Verifies that every outcome in the support assigns all its winners the
/// same rate.
pub fn check_single_price<I: RatioInt>(
    mechanism: Mechanism,
    profile: &BidProfile<I>,
    drops: Option<&DropSchedule<I>>,
) -> Result<PropertyReport<I>> {
    let dist = mechanisms::run_distribution(mechanism, profile, drops)?;
    Ok(single_price_of(mechanism, profile, &dist))
}

fn single_price_of<I: RatioInt>(
    mechanism: Mechanism,
    profile: &BidProfile<I>,
    dist: &crate::outcome::OutcomeDistribution<I>,
) -> PropertyReport<I> {
    let mut cases = 0u64;
    for (outcome, _) in dist.entries() {
        cases += 1;
        if !outcome.is_single_priced() {
            return structural_failure(
                "single_price",
                Some(mechanism),
                cases,
                profile,
                "winners received unequal rates".into(),
            );
        }
    }
    PropertyReport::passed("single_price", Some(mechanism), cases)
}

/// Verifies that the dropped-threshold mechanism admits users with equal
/// bids all-or-none.
pub fn check_all_or_none<I: RatioInt>(
    profile: &BidProfile<I>,
    drops: &DropSchedule<I>,
) -> Result<PropertyReport<I>> {
    let outcome = astar::run(profile, drops)?;
    Ok(all_or_none_of(profile, &outcome))
}

fn all_or_none_of<I: RatioInt>(
    profile: &BidProfile<I>,
    outcome: &crate::outcome::Outcome<I>,
) -> PropertyReport<I> {
    let mut groups: BTreeMap<Ratio<I>, Vec<usize>> = BTreeMap::new();
    for (i, bid) in profile.bids().iter().enumerate() {
        groups.entry(bid.clone()).or_default().push(i);
    }
    let mut cases = 0u64;
    for (bid, group) in groups {
        cases += 1;
        let admitted = group.iter().filter(|&&u| outcome.contains(u)).count();
        if admitted != 0 && admitted != group.len() {
            return structural_failure(
                "all_or_none",
                Some(Mechanism::Astar),
                cases,
                profile,
                format!(
                    "{admitted} of {} users bidding {} admitted",
                    group.len(),
                    decimal_string(&bid)
                ),
            );
        }
    }
    PropertyReport::passed("all_or_none", Some(Mechanism::Astar), cases)
}

/// Verifies the two admitted-count bounds tying the uniform-price
/// mechanism to the omniscient baselines: it admits at least half (floored)
/// of what the multi-price baseline admits, and lies within one of the
/// single-price baseline.
pub fn check_scalability<I: RatioInt>(profile: &BidProfile<I>) -> PropertyReport<I> {
    let a = abar::admitted_count(profile);
    let t = omniscient::multi_price_count(profile);
    let f = omniscient::single_price_count(profile);
    let mut reasons = Vec::new();
    if a < t / 2 {
        reasons.push(format!("admits {a}, less than half of the maximal {t}"));
    }
    if a + 1 < f || a > f {
        reasons.push(format!(
            "admits {a}, outside [{} - 1, {}] around the single-price baseline",
            f, f
        ));
    }
    if reasons.is_empty() {
        PropertyReport::passed("scalability", Some(Mechanism::Abar), 2)
    } else {
        structural_failure(
            "scalability",
            Some(Mechanism::Abar),
            2,
            profile,
            reasons.join("; "),
        )
    }
}

/// Verifies that relabeling the users relabels the outcome distribution and
/// nothing else. Enumerates all permutations up to 8 users; beyond that,
/// checks `sample_count` seeded random permutations.
pub fn check_permutation_equivariance<I: RatioInt>(
    mechanism: Mechanism,
    profile: &BidProfile<I>,
    drops: Option<&DropSchedule<I>>,
    sample_count: usize,
    seed: u64,
) -> Result<PropertyReport<I>> {
    let n = profile.len();
    let permutations = if n <= 8 {
        all_permutations(n)
    } else {
        sampled_permutations(n, sample_count, seed)
    };
    let baseline = mechanisms::run_distribution(mechanism, profile, drops)?;
    let mut cases = 0u64;
    for perm in permutations {
        cases += 1;
        let permuted = profile.permuted(&perm)?;
        let observed = mechanisms::run_distribution(mechanism, &permuted, drops)?;
        let mut inverse = vec![0usize; n];
        for (new_index, &old_index) in perm.iter().enumerate() {
            inverse[old_index] = new_index;
        }
        let expected = baseline.relabeled(&inverse);
        if observed != expected {
            return Ok(PropertyReport::failed(
                "permutation_equivariance",
                Some(mechanism),
                cases,
                Counterexample::Permutation {
                    profile: profile.bids().to_vec(),
                    permutation: perm,
                },
            ));
        }
    }
    Ok(PropertyReport::passed(
        "permutation_equivariance",
        Some(mechanism),
        cases,
    ))
}

/// Verifies, for every reduced profile on the grid, that a user's admission
/// probability never increases as their own bid increases.
pub fn check_monotonicity<I: RatioInt>(
    mechanism: Mechanism,
    grid: &BidGrid,
    n: usize,
    drops: Option<&DropSchedule<I>>,
) -> Result<PropertyReport<I>> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one user".into()));
    }
    enumeration_guard(grid.point_count(), n)?;
    let points = grid.points::<I>();
    let mut cases = 0u64;
    for tuple in GridTuples::new(points.len(), n - 1) {
        let others: Vec<Ratio<I>> = tuple.iter().map(|&i| points[i].clone()).collect();
        let mut previous: Option<(Ratio<I>, Ratio<I>)> = None;
        for bid in &points {
            let win_probability = marginal(mechanism, &others, bid, drops)?
                .into_iter()
                .fold(Ratio::zero(), |acc, (_, p)| acc + p);
            if let Some((lower_bid, lower_probability)) = previous {
                cases += 1;
                if win_probability > lower_probability {
                    return Ok(PropertyReport::failed(
                        "monotonicity",
                        Some(mechanism),
                        cases,
                        Counterexample::Monotonicity {
                            others,
                            lower_bid,
                            higher_bid: bid.clone(),
                            lower_probability,
                            higher_probability: win_probability,
                        },
                    ));
                }
            }
            previous = Some((bid.clone(), win_probability));
        }
    }
    Ok(PropertyReport::passed(
        "monotonicity",
        Some(mechanism),
        cases,
    ))
}

/// Scans every grid bid against a fixed reduced profile and verifies the
/// deterministic mechanism's win set is exactly the prefix of bids at most
/// the analytic threshold, with the assigned rate constant and equal to
/// that threshold. Returns the threshold alongside the report.
pub fn extract_win_interval<I: RatioInt>(
    mechanism: Mechanism,
    others: &[Ratio<I>],
    grid: &BidGrid,
    drops: Option<&DropSchedule<I>>,
) -> Result<(Ratio<I>, PropertyReport<I>)> {
    if !mechanism.is_deterministic() {
        return Err(Error::NondeterministicMechanism(
            mechanism.code().to_string(),
        ));
    }
    let drops = drops.ok_or(Error::MissingDropSchedule)?;
    drops.require_users(others.len() + 1)?;
    let threshold = astar::highest_winning_bid(others, drops)?;
    let mut cases = 0u64;
    for bid in grid.points::<I>() {
        cases += 1;
        let mut bids = Vec::with_capacity(others.len() + 1);
        bids.push(bid.clone());
        bids.extend_from_slice(others);
        let outcome = astar::run(&BidProfile::new(bids)?, drops)?;
        let should_win = bid <= threshold;
        if outcome.contains(0) != should_win {
            let report = PropertyReport::failed(
                "win_interval",
                Some(mechanism),
                cases,
                Counterexample::WinInterval {
                    others: others.to_vec(),
                    bid,
                    reason: if should_win {
                        "bid within the threshold lost".into()
                    } else {
                        "bid above the threshold won".into()
                    },
                },
            );
            return Ok((threshold, report));
        }
        if should_win && outcome.rate_of(0) != Some(&threshold) {
            let report = PropertyReport::failed(
                "win_interval",
                Some(mechanism),
                cases,
                Counterexample::WinInterval {
                    others: others.to_vec(),
                    bid,
                    reason: "assigned rate differs from the threshold".into(),
                },
            );
            return Ok((threshold, report));
        }
    }
    Ok((
        threshold,
        PropertyReport::passed("win_interval", Some(mechanism), cases),
    ))
}

/// The structural battery run per profile by random sweeps: feasibility for
/// all four mechanisms, single price where claimed, all-or-none for the
/// dropped-threshold mechanism, and the admitted-count bounds. Runs every
/// mechanism exactly once.
pub fn structural_suite<I: RatioInt>(
    profile: &BidProfile<I>,
    drops: &DropSchedule<I>,
) -> Result<Vec<PropertyReport<I>>> {
    let astar_outcome = astar::run(profile, drops)?;
    let dists = [
        (Mechanism::Abar, abar::distribution(profile)),
        (
            Mechanism::Astar,
            crate::outcome::OutcomeDistribution::certain(astar_outcome.clone()),
        ),
        (Mechanism::FOmniscient, omniscient::single_price(profile)),
        (Mechanism::TOmniscient, omniscient::multi_price(profile)),
    ];
    let mut reports = Vec::new();
    for (mechanism, dist) in &dists {
        reports.push(feasibility_of(*mechanism, profile, dist));
    }
    for (mechanism, dist) in &dists[..3] {
        reports.push(single_price_of(*mechanism, profile, dist));
    }
    reports.push(all_or_none_of(profile, &astar_outcome));
    reports.push(check_scalability(profile));
    Ok(reports)
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    let mut stack = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if stack[i] < i {
            if i % 2 == 0 {
                current.swap(0, i);
            } else {
                current.swap(stack[i], i);
            }
            out.push(current.clone());
            stack[i] += 1;
            i = 0;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }
    out
}

fn sampled_permutations(n: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = (rand_core::RngCore::next_u64(&mut rng) % (i as u64 + 1)) as usize;
                perm.swap(i, j);
            }
            perm
        })
        .collect()
}
