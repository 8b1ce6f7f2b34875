//! Seeded Monte Carlo and adversarial experiments.
//!
//! Profiles are sampled i.i.d. uniform on the unit cube as exact rationals
//! with denominator 2^64, so every downstream comparison stays exact and the
//! density bound of the sampling distribution is exactly 1. Trial `k` always
//! draws from substream `k` of the seeded generator, so results are
//! byte-identical regardless of how trials are scheduled.

use num::rational::Ratio;
use num::Zero;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::drop_schedule::DropSchedule;
use crate::error::Error;
use crate::mechanisms::{abar, astar, omniscient};
use crate::outcome::uniform_unit;
use crate::profile::BidProfile;
use crate::scalar::{approx, ratio, ratio_int, RatioInt};
use crate::{Int, Result};

/// The generator for trial `trial` of the stream identified by `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One i.i.d. uniform profile of `n` bids, each an exact rational with
/// denominator 2^64.
pub fn sample_profile<I: RatioInt>(n: usize, rng: &mut ChaCha8Rng) -> BidProfile<I> {
    let bids = (0..n).map(|_| uniform_unit(rng)).collect();
    BidProfile::new(bids).expect("uniform draws lie in [0, 1]")
}

/// Monte Carlo estimate of how often the dropped-threshold mechanism
/// behaves differently from the uniform-price mechanism, against the
/// analytic bound `max_drop * n * K` (K = 1 for uniform sampling).
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceEstimate<I: RatioInt = Int> {
    pub n: usize,
    pub max_drop: Ratio<I>,
    pub samples: u64,
    pub divergent_count: u64,
    /// Exactly `divergent_count / samples`.
    pub point_estimate: Ratio<I>,
    /// Binomial standard error of the point estimate.
    pub standard_error: f64,
    /// `max_drop * n`, exact.
    pub analytic_bound: Ratio<I>,
}

impl<I: RatioInt> DivergenceEstimate<I> {
    /// Whether the estimate respects the bound up to three standard errors.
    pub fn within_bound(&self) -> bool {
        if self.point_estimate <= self.analytic_bound {
            return true;
        }
        approx(&self.point_estimate)
            <= approx(&self.analytic_bound) + 3.0 * self.standard_error
    }
}

/// A divergence run: the summary plus the per-trial flags behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceRun<I: RatioInt = Int> {
    pub estimate: DivergenceEstimate<I>,
    pub divergent: Vec<bool>,
}

/// Samples `samples` uniform profiles of `n` bids and flags each profile in
/// which some user's bid falls strictly between their dropped threshold and
/// their supremum winning bid — exactly the profiles on which the two
/// mechanisms differ.
pub fn estimate_divergence<I: RatioInt>(
    n: usize,
    drops: &DropSchedule<I>,
    samples: u64,
    seed: u64,
) -> Result<DivergenceRun<I>> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one user".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    drops.require_users(n)?;
    let mut divergent = Vec::with_capacity(samples as usize);
    let mut divergent_count = 0u64;
    for trial in 0..samples {
        let mut rng = trial_rng(seed, trial);
        let profile: BidProfile<I> = sample_profile(n, &mut rng);
        let mut flagged = false;
        for user in 0..n {
            let others = profile.without(user);
            let dropped = astar::highest_winning_bid(&others, drops)?;
            let bid = profile.bid(user);
            if *bid <= dropped {
                continue;
            }
            let supremum = abar::supremum_winning_bid(&others);
            if *bid < supremum {
                flagged = true;
                break;
            }
        }
        divergent.push(flagged);
        if flagged {
            divergent_count += 1;
        }
    }
    let point_estimate = ratio::<I>(divergent_count, samples);
    let p = approx(&point_estimate);
    let standard_error = (p * (1.0 - p) / samples as f64).sqrt();
    let analytic_bound = drops.max_drop() * ratio_int::<I>(n as u64);
    Ok(DivergenceRun {
        estimate: DivergenceEstimate {
            n,
            max_drop: drops.max_drop(),
            samples,
            divergent_count,
            point_estimate,
            standard_error,
            analytic_bound,
        },
        divergent,
    })
}

/// The profile on which the uniform-price mechanism meets its worst-case
/// guarantee with equality: `m + 1` users bidding 0 and `m` users bidding
/// `1/m`. It admits `m` users while the multi-price baseline admits all
/// `2m + 1`.
pub fn tight_scalability_instance<I: RatioInt>(m: usize) -> Result<BidProfile<I>> {
    if m == 0 {
        return Err(Error::InvalidParameter("need m >= 1".into()));
    }
    let mut bids = vec![Ratio::zero(); m + 1];
    bids.extend(std::iter::repeat_n(
        Ratio::new(I::one(), crate::scalar::int(m as u64)),
        m,
    ));
    BidProfile::new(bids)
}

/// The profile on which the dropped-threshold mechanism admits nobody while
/// the single-price baseline admits `m`: all `n` users bidding `1/m`, for
/// `m < n`.
pub fn worst_case_astar_instance<I: RatioInt>(n: usize, m: usize) -> Result<BidProfile<I>> {
    if m == 0 || m >= n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= m < n, got m = {m}, n = {n}"
        )));
    }
    let bid = Ratio::new(I::one(), crate::scalar::int(m as u64));
    BidProfile::new(vec![bid; n])
}

/// Exact admitted counts of all four mechanisms on one sampled profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow<I: RatioInt = Int> {
    pub sample: u64,
    pub abar: Ratio<I>,
    pub astar: Ratio<I>,
    pub single_price: Ratio<I>,
    pub multi_price: Ratio<I>,
}

/// An admittance sweep: per-sample rows plus their exact means.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmittanceSweep<I: RatioInt = Int> {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub rows: Vec<SweepRow<I>>,
    pub mean_abar: Ratio<I>,
    pub mean_astar: Ratio<I>,
    pub mean_single_price: Ratio<I>,
    pub mean_multi_price: Ratio<I>,
}

/// Runs all four mechanisms on `samples` uniform profiles of `n` bids and
/// tabulates exact admitted counts per row, with exact means.
pub fn admittance_sweep<I: RatioInt>(
    n: usize,
    samples: u64,
    seed: u64,
    drops: &DropSchedule<I>,
) -> Result<AdmittanceSweep<I>> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one user".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    drops.require_users(n)?;
    let mut rows = Vec::with_capacity(samples as usize);
    let mut totals = [
        Ratio::<I>::zero(),
        Ratio::zero(),
        Ratio::zero(),
        Ratio::zero(),
    ];
    for trial in 0..samples {
        let mut rng = trial_rng(seed, trial);
        let profile: BidProfile<I> = sample_profile(n, &mut rng);
        let row = SweepRow {
            sample: trial,
            abar: ratio_int(abar::admitted_count(&profile) as u64),
            astar: ratio_int(astar::run(&profile, drops)?.winner_count() as u64),
            single_price: ratio_int(omniscient::single_price_count(&profile) as u64),
            multi_price: ratio_int(omniscient::multi_price_count(&profile) as u64),
        };
        totals[0] = totals[0].clone() + row.abar.clone();
        totals[1] = totals[1].clone() + row.astar.clone();
        totals[2] = totals[2].clone() + row.single_price.clone();
        totals[3] = totals[3].clone() + row.multi_price.clone();
        rows.push(row);
    }
    let count = ratio_int::<I>(samples);
    Ok(AdmittanceSweep {
        n,
        samples,
        seed,
        rows,
        mean_abar: totals[0].clone() / count.clone(),
        mean_astar: totals[1].clone() / count.clone(),
        mean_single_price: totals[2].clone() / count.clone(),
        mean_multi_price: totals[3].clone() / count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rate;
    use crate::Rate;
    use num::One;

    fn r(s: &str) -> Rate {
        parse_rate(s).unwrap()
    }

    fn tenth_drops(len: usize) -> DropSchedule {
        DropSchedule::uniform(r("0.1"), len).unwrap()
    }

    #[test]
    fn sampling_is_reproducible_and_stream_partitioned() {
        let mut a = trial_rng(42, 3);
        let mut b = trial_rng(42, 3);
        let pa: BidProfile = sample_profile(4, &mut a);
        let pb: BidProfile = sample_profile(4, &mut b);
        assert_eq!(pa, pb);
        let mut c = trial_rng(42, 4);
        let pc: BidProfile = sample_profile(4, &mut c);
        assert_ne!(pa, pc);
    }

    #[test]
    fn divergence_flags_follow_the_analytic_condition() {
        let drops = tenth_drops(2);
        let run = estimate_divergence::<Int>(3, &drops, 500, 7).unwrap();
        assert_eq!(run.divergent.len(), 500);
        assert_eq!(
            run.estimate.divergent_count,
            run.divergent.iter().filter(|&&f| f).count() as u64
        );
        assert_eq!(
            run.estimate.point_estimate,
            Rate::new(run.estimate.divergent_count.into(), 500.into())
        );
        assert_eq!(run.estimate.analytic_bound, r("0.3"));
        // Re-derive a few flags independently from the two thresholds.
        for trial in 0..20u64 {
            let mut rng = trial_rng(7, trial);
            let profile: BidProfile = sample_profile(3, &mut rng);
            let expected = (0..3).any(|u| {
                let others = profile.without(u);
                let z_star = astar::highest_winning_bid(&others, &drops).unwrap();
                let z_bar = abar::supremum_winning_bid(&others);
                *profile.bid(u) > z_star && *profile.bid(u) < z_bar
            });
            assert_eq!(run.divergent[trial as usize], expected);
        }
    }

    #[test]
    fn divergence_rejects_bad_parameters() {
        assert!(estimate_divergence::<Int>(0, &tenth_drops(0), 10, 0).is_err());
        assert!(estimate_divergence::<Int>(3, &tenth_drops(2), 0, 0).is_err());
        assert!(estimate_divergence::<Int>(5, &tenth_drops(2), 10, 0).is_err());
        // Degenerate drop values never form a schedule in the first place.
        assert!(DropSchedule::uniform(r("0"), 2).is_err());
    }

    #[test]
    fn tight_instance_meets_both_counts() {
        for m in [1usize, 2, 10] {
            let p: BidProfile = tight_scalability_instance(m).unwrap();
            assert_eq!(p.len(), 2 * m + 1);
            assert_eq!(abar::admitted_count(&p), m);
            assert_eq!(omniscient::multi_price_count(&p), 2 * m + 1);
        }
        assert_eq!(
            tight_scalability_instance::<Int>(2).unwrap().bids(),
            &[r("0"), r("0"), r("0"), r("0.5"), r("0.5")]
        );
        assert!(tight_scalability_instance::<Int>(0).is_err());
    }

    #[test]
    fn worst_case_instance_starves_the_dropped_threshold_mechanism() {
        for (n, m) in [(3usize, 2usize), (10, 9), (5, 1)] {
            let p: BidProfile = worst_case_astar_instance(n, m).unwrap();
            let drops = tenth_drops(n - 1);
            assert_eq!(astar::run(&p, &drops).unwrap().winner_count(), 0);
            assert_eq!(omniscient::single_price_count(&p), m);
        }
        assert!(worst_case_astar_instance::<Int>(2, 2).is_err());
        assert!(worst_case_astar_instance::<Int>(3, 0).is_err());
    }

    #[test]
    fn sweep_rows_respect_the_count_bounds() {
        let drops = tenth_drops(4);
        let sweep = admittance_sweep::<Int>(5, 300, 1, &drops).unwrap();
        assert_eq!(sweep.rows.len(), 300);
        for row in &sweep.rows {
            assert!(row.single_price.clone() - Rate::one() <= row.abar);
            assert!(row.abar <= row.single_price);
            assert!(row.abar >= (row.multi_price.clone() / r("2")).floor());
            assert!(row.astar <= row.multi_price);
        }
        let total: Rate = sweep
            .rows
            .iter()
            .fold(Rate::zero(), |acc, row| acc + row.abar.clone());
        assert_eq!(sweep.mean_abar, total / r("300"));
    }

    #[test]
    fn single_user_sweep_admits_everyone() {
        let sweep = admittance_sweep::<Int>(1, 10, 3, &tenth_drops(0)).unwrap();
        for row in &sweep.rows {
            assert_eq!(row.abar, r("1"));
            assert_eq!(row.astar, r("1"));
            assert_eq!(row.single_price, r("1"));
            assert_eq!(row.multi_price, r("1"));
        }
    }

    #[test]
    fn identical_seeds_reproduce_identical_sweeps() {
        let drops = tenth_drops(3);
        let a = admittance_sweep::<Int>(4, 50, 9, &drops).unwrap();
        let b = admittance_sweep::<Int>(4, 50, 9, &drops).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn smaller_drops_shrink_divergence() {
        let small = estimate_divergence::<Int>(
            5,
            &DropSchedule::uniform(r("0.001"), 4).unwrap(),
            2000,
            11,
        )
        .unwrap();
        let large = estimate_divergence::<Int>(
            5,
            &DropSchedule::uniform(r("0.2"), 4).unwrap(),
            2000,
            11,
        )
        .unwrap();
        assert!(small.estimate.divergent_count <= large.estimate.divergent_count);
    }
}
