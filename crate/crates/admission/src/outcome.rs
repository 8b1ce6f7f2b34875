//! Admission outcomes and finite distributions over them.

use std::collections::BTreeMap;

use num::rational::Ratio;
use num::{One, Signed, Zero};

use rand_core::{RngCore, SeedableRng};

use crate::error::Error;
use crate::profile::BidProfile;
use crate::scalar::{decimal_string, int, RatioInt};
use crate::{Int, Result};

/// One admission result: the winning users and each winner's assigned rate.
///
/// User indices are 0-based throughout the library; serialization adds 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Outcome<I: RatioInt = Int> {
    rates: BTreeMap<usize, Ratio<I>>,
}

impl<I: RatioInt> Outcome<I> {
    /// Validates non-negative rates that sum to at most the capacity of 1.
    pub fn new(rates: BTreeMap<usize, Ratio<I>>) -> Result<Self> {
        let mut total: Ratio<I> = Ratio::zero();
        for (user, rate) in &rates {
            if rate.is_negative() {
                return Err(Error::InvalidOutcome(format!(
                    "negative rate {} for user {}",
                    decimal_string(rate),
                    user + 1
                )));
            }
            total = total + rate.clone();
        }
        if total > Ratio::one() {
            return Err(Error::InvalidOutcome(format!(
                "assigned rates sum to {} > 1",
                decimal_string(&total)
            )));
        }
        Ok(Self { rates })
    }

    pub fn empty() -> Self {
        Self {
            rates: BTreeMap::new(),
        }
    }

    /// Winning user indices in ascending order.
    pub fn winners(&self) -> impl Iterator<Item = usize> + '_ {
        self.rates.keys().copied()
    }

    pub fn winner_set(&self) -> Vec<usize> {
        self.rates.keys().copied().collect()
    }

    pub fn contains(&self, user: usize) -> bool {
        self.rates.contains_key(&user)
    }

    pub fn rate_of(&self, user: usize) -> Option<&Ratio<I>> {
        self.rates.get(&user)
    }

    pub fn winner_count(&self) -> usize {
        self.rates.len()
    }

    pub fn total_rate(&self) -> Ratio<I> {
        self.rates
            .values()
            .fold(Ratio::zero(), |acc, r| acc + r.clone())
    }

    /// True when every winner receives the same assigned rate.
    pub fn is_single_priced(&self) -> bool {
        let mut rates = self.rates.values();
        match rates.next() {
            None => true,
            Some(first) => rates.all(|r| r == first),
        }
    }

    /// True when every winner's assigned rate covers that winner's bid.
    pub fn satisfies_individual_rationality(&self, profile: &BidProfile<I>) -> bool {
        self.rates
            .iter()
            .all(|(user, rate)| rate >= profile.bid(*user))
    }

    /// The outcome with users renamed through `inverse`, where `inverse[old]`
    /// is the new index of the user previously called `old`.
    pub fn relabeled(&self, inverse: &[usize]) -> Self {
        Self {
            rates: self
                .rates
                .iter()
                .map(|(user, rate)| (inverse[*user], rate.clone()))
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Ratio<I>)> {
        self.rates.iter().map(|(u, r)| (*u, r))
    }
}

/// A finite probability distribution over distinct outcomes; probabilities
/// are exact rationals that sum to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeDistribution<I: RatioInt = Int> {
    entries: Vec<(Outcome<I>, Ratio<I>)>,
}

impl<I: RatioInt> OutcomeDistribution<I> {
    /// Validates positivity, distinctness, and exact total probability 1.
    /// Entries are kept in a canonical order so equal distributions compare
    /// equal structurally.
    pub fn new(mut entries: Vec<(Outcome<I>, Ratio<I>)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut total: Ratio<I> = Ratio::zero();
        for (idx, (outcome, p)) in entries.iter().enumerate() {
            if !p.is_positive() {
                return Err(Error::InvalidDistribution(format!(
                    "probability {} is not positive",
                    decimal_string(p)
                )));
            }
            if idx > 0 && entries[idx - 1].0 == *outcome {
                return Err(Error::InvalidDistribution("duplicate outcome".into()));
            }
            total = total + p.clone();
        }
        if total != Ratio::one() {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {}, not 1",
                decimal_string(&total)
            )));
        }
        Ok(Self { entries })
    }

    /// The distribution placing probability 1 on `outcome`.
    pub fn certain(outcome: Outcome<I>) -> Self {
        Self {
            entries: vec![(outcome, Ratio::one())],
        }
    }

    /// The uniform distribution over the given distinct outcomes.
    pub fn uniform(outcomes: Vec<Outcome<I>>) -> Result<Self> {
        let count = outcomes.len();
        if count == 0 {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        let p = Ratio::new(I::one(), int(count as u64));
        Self::new(outcomes.into_iter().map(|o| (o, p.clone())).collect())
    }

    pub fn entries(&self) -> &[(Outcome<I>, Ratio<I>)] {
        &self.entries
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Expected number of admitted users, exact.
    pub fn admittance(&self) -> Ratio<I> {
        self.entries.iter().fold(Ratio::zero(), |acc, (o, p)| {
            acc + p.clone() * Ratio::from_integer(int(o.winner_count() as u64))
        })
    }

    /// Probability that `user` is admitted.
    pub fn win_probability(&self, user: usize) -> Ratio<I> {
        self.entries
            .iter()
            .filter(|(o, _)| o.contains(user))
            .fold(Ratio::zero(), |acc, (_, p)| acc + p.clone())
    }

    /// The marginal distribution of `user`'s assigned rate conditioned on
    /// admission, as (rate, probability) pairs merged by rate. Probabilities
    /// may sum to less than 1 when the user sometimes loses.
    pub fn marginal_rates(&self, user: usize) -> Vec<(Ratio<I>, Ratio<I>)> {
        let mut by_rate: BTreeMap<Ratio<I>, Ratio<I>> = BTreeMap::new();
        for (outcome, p) in &self.entries {
            if let Some(rate) = outcome.rate_of(user) {
                let slot = by_rate.entry(rate.clone()).or_insert_with(Ratio::zero);
                *slot = slot.clone() + p.clone();
            }
        }
        by_rate.into_iter().collect()
    }

    /// The distribution relabeled through `inverse` (see
    /// [`Outcome::relabeled`]), re-canonicalized.
    pub fn relabeled(&self, inverse: &[usize]) -> Self {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|(o, p)| (o.relabeled(inverse), p.clone()))
            .collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        Self { entries }
    }

    /// Draws one outcome with a deterministic seeded generator; equal seeds
    /// give equal outcomes.
    pub fn sample(&self, seed: u64) -> &Outcome<I> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let draw = uniform_unit(&mut rng);
        let mut acc: Ratio<I> = Ratio::zero();
        for (outcome, p) in &self.entries {
            acc = acc + p.clone();
            if draw < acc {
                return outcome;
            }
        }
        // The draw lies in [0, 1) and the probabilities sum to 1 exactly.
        &self.entries.last().expect("non-empty distribution").0
    }
}

/// A uniform draw from `[0, 1)` with denominator 2^64, exact.
pub(crate) fn uniform_unit<I: RatioInt>(rng: &mut impl RngCore) -> Ratio<I> {
    let two_32: I = int(1u64 << 32);
    let denom = two_32.clone() * two_32;
    Ratio::new(int(rng.next_u64()), denom)
}
