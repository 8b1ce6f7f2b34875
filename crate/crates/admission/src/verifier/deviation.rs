//! Expected utility and the brute-force deviation search.

use num::rational::Ratio;
use num::{One, Zero};

use crate::drop_schedule::DropSchedule;
use crate::error::Error;
use crate::mechanisms::{self, astar, Mechanism};
use crate::profile::BidProfile;
use crate::scalar::{in_unit_interval, RatioInt};
use crate::utility::UtilitySpec;
use crate::Result;

use super::{
    enumeration_guard, has_duplicates, BidGrid, Counterexample, GridTuples, PropertyReport,
};

/// Marginal admission view of one user bidding `bid` against `others`:
/// (assigned rate, probability) pairs, summing to the win probability.
pub(crate) fn marginal<I: RatioInt>(
    mechanism: Mechanism,
    others: &[Ratio<I>],
    bid: &Ratio<I>,
    drops: Option<&DropSchedule<I>>,
) -> Result<Vec<(Ratio<I>, Ratio<I>)>> {
    match mechanism {
        Mechanism::Astar => {
            let drops = drops.ok_or(Error::MissingDropSchedule)?;
            drops.require_users(others.len() + 1)?;
            let threshold = astar::highest_winning_bid(others, drops)?;
            if *bid <= threshold {
                Ok(vec![(threshold, Ratio::one())])
            } else {
                Ok(Vec::new())
            }
        }
        _ => {
            let mut bids = Vec::with_capacity(others.len() + 1);
            bids.push(bid.clone());
            bids.extend_from_slice(others);
            let profile = BidProfile::new(bids)?;
            let dist = mechanisms::run_distribution(mechanism, &profile, drops)?;
            Ok(dist.marginal_rates(0))
        }
    }
}

fn expected_utility_of_marginal<I: RatioInt>(
    utility: &UtilitySpec<I>,
    true_rate: &Ratio<I>,
    marginal: &[(Ratio<I>, Ratio<I>)],
) -> Ratio<I> {
    marginal.iter().fold(Ratio::zero(), |acc, (rate, p)| {
        acc + utility.evaluate(true_rate, rate) * p.clone()
    })
}

/// Exact expected utility of a user whose true requirement is `true_rate`,
/// who bids `bid` while the remaining users bid `others`.
pub fn evaluate_expected_utility<I: RatioInt>(
    mechanism: Mechanism,
    true_rate: &Ratio<I>,
    bid: &Ratio<I>,
    others: &[Ratio<I>],
    utility: &UtilitySpec<I>,
    drops: Option<&DropSchedule<I>>,
) -> Result<Ratio<I>> {
    if !in_unit_interval(true_rate) || !in_unit_interval(bid) {
        return Err(Error::InvalidParameter(
            "true rate and bid must lie in [0, 1]".into(),
        ));
    }
    let m = marginal(mechanism, others, bid, drops)?;
    Ok(expected_utility_of_marginal(utility, true_rate, &m))
}

/// The adversarial utility family for a grid: one step utility plus one
/// capped-linear utility per nonzero grid point used as the knee.
pub fn grid_utility_family<I: RatioInt>(grid: &BidGrid) -> Vec<UtilitySpec<I>> {
    let mut family = vec![UtilitySpec::step(Ratio::one()).expect("positive scale")];
    for knee in grid.points::<I>() {
        if knee.is_zero() {
            continue;
        }
        family.push(UtilitySpec::capped_linear(Ratio::one(), knee).expect("knee in (0, 1]"));
    }
    family
}

/// Exhaustive deviation search: over every grid profile taken as the true
/// requirements (all of them, or only those with pairwise-distinct bids),
/// every user, every grid deviation, and every utility, truthful bidding
/// must pay at least as much as deviating. Stops at the first violation,
/// taken in lexicographic (profile, user, deviation, utility) order.
pub fn brute_force_ic<I: RatioInt>(
    mechanism: Mechanism,
    grid: &BidGrid,
    n: usize,
    utilities: &[UtilitySpec<I>],
    drops: Option<&DropSchedule<I>>,
    distinct_bids_only: bool,
) -> Result<PropertyReport<I>> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one user".into()));
    }
    if utilities.is_empty() {
        return Err(Error::InvalidParameter("need at least one utility".into()));
    }
    enumeration_guard(grid.point_count(), n)?;
    let property_id = if distinct_bids_only {
        "weak_incentive_compatibility"
    } else {
        "incentive_compatibility"
    };
    let points = grid.points::<I>();
    let mut cases = 0u64;
    for tuple in GridTuples::new(points.len(), n) {
        let bids: Vec<Ratio<I>> = tuple.iter().map(|&i| points[i].clone()).collect();
        if distinct_bids_only && has_duplicates(&bids) {
            continue;
        }
        for user in 0..n {
            let mut others = bids.clone();
            let true_rate = others.remove(user);
            let truthful = marginal(mechanism, &others, &true_rate, drops)?;
            let truthful_payoffs: Vec<Ratio<I>> = utilities
                .iter()
                .map(|u| expected_utility_of_marginal(u, &true_rate, &truthful))
                .collect();
            for deviation in &points {
                let deviating = if deviation == &true_rate {
                    truthful.clone()
                } else {
                    marginal(mechanism, &others, deviation, drops)?
                };
                for (ui, utility) in utilities.iter().enumerate() {
                    cases += 1;
                    let deviating_payoff =
                        expected_utility_of_marginal(utility, &true_rate, &deviating);
                    if deviating_payoff > truthful_payoffs[ui] {
                        return Ok(PropertyReport::failed(
                            property_id,
                            Some(mechanism),
                            cases,
                            Counterexample::Deviation {
                                profile: bids,
                                user,
                                deviation: deviation.clone(),
                                utility: utility.clone(),
                                truthful_payoff: truthful_payoffs[ui].clone(),
                                deviating_payoff,
                            },
                        ));
                    }
                }
            }
        }
    }
    Ok(PropertyReport::passed(property_id, Some(mechanism), cases))
}
