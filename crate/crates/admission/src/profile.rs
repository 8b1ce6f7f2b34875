//! Bid profiles and their sorted view.
//!
//! Capacity is normalized to 1, so a profile is a list of exact rationals in
//! `[0, 1]`, one per user. The sorted view appends a pseudo-bid of 1 past the
//! highest real bid and exposes rank 0 as a virtual 0; admission thresholds
//! are defined in terms of these boundary conventions.

use num::rational::Ratio;
use num::{One, Signed, Zero};

use crate::error::Error;
use crate::scalar::{decimal_string, in_unit_interval, RatioInt};
use crate::{Int, Result};

/// An ordered list of normalized bids, one per user, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BidProfile<I: RatioInt = Int> {
    bids: Vec<Ratio<I>>,
}

impl<I: RatioInt> BidProfile<I> {
    /// Validates that the profile is non-empty and every bid lies in `[0, 1]`.
    pub fn new(bids: Vec<Ratio<I>>) -> Result<Self> {
        if bids.is_empty() {
            return Err(Error::EmptyProfile);
        }
        for (i, bid) in bids.iter().enumerate() {
            if !in_unit_interval(bid) {
                return Err(Error::BidOutOfRange {
                    index: i + 1,
                    bid: decimal_string(bid),
                });
            }
        }
        Ok(Self { bids })
    }

    /// Divides raw resource requests by the capacity, yielding bids in
    /// `[0, 1]`. Rejects non-positive capacities, negative requests, and
    /// requests exceeding the capacity (naming the offending 1-based index).
    pub fn normalize(raw_bids: &[Ratio<I>], capacity: &Ratio<I>) -> Result<Self> {
        if !capacity.is_positive() {
            return Err(Error::InvalidCapacity(decimal_string(capacity)));
        }
        if raw_bids.is_empty() {
            return Err(Error::EmptyProfile);
        }
        let mut bids = Vec::with_capacity(raw_bids.len());
        for (i, raw) in raw_bids.iter().enumerate() {
            if raw.is_negative() {
                return Err(Error::NegativeBid {
                    index: i + 1,
                    bid: decimal_string(raw),
                });
            }
            if raw > capacity {
                return Err(Error::BidExceedsCapacity {
                    index: i + 1,
                    bid: decimal_string(raw),
                    capacity: decimal_string(capacity),
                });
            }
            bids.push(raw / capacity);
        }
        Ok(Self { bids })
    }

    pub fn len(&self) -> usize {
        self.bids.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bids(&self) -> &[Ratio<I>] {
        &self.bids
    }

    pub fn bid(&self, user: usize) -> &Ratio<I> {
        &self.bids[user]
    }

    /// The reduced profile with `user`'s bid removed. Empty for a one-user
    /// profile.
    pub fn without(&self, user: usize) -> Vec<Ratio<I>> {
        let mut others = Vec::with_capacity(self.bids.len() - 1);
        others.extend_from_slice(&self.bids[..user]);
        others.extend_from_slice(&self.bids[user + 1..]);
        others
    }

    /// The sorted view with boundary pseudo-bids.
    pub fn sorted(&self) -> SortedProfile<I> {
        SortedProfile::from_bids(&self.bids)
    }

    /// The profile relabeled through `perm`: user `j` of the result bids what
    /// user `perm[j]` bids here. `perm` must be a permutation of `0..len`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.bids.len() {
            return Err(Error::InvalidParameter(format!(
                "permutation length {} does not match profile length {}",
                perm.len(),
                self.bids.len()
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::InvalidParameter(
                    "not a permutation of the user indices".into(),
                ));
            }
            seen[p] = true;
        }
        Ok(Self {
            bids: perm.iter().map(|&p| self.bids[p].clone()).collect(),
        })
    }
}

/// The non-decreasing rearrangement of a bid list, with a pseudo-bid of 1
/// appended at rank `len + 1` and a virtual 0 at rank 0.
///
/// Built either from a full profile or from a reduced profile (one user
/// removed); the latter may be empty, in which case rank 1 is already the
/// pseudo-bid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedProfile<I: RatioInt = Int> {
    source_len: usize,
    /// `sigma[j - 1]` is the rank-`j` value, for `1 <= j <= source_len + 1`.
    sigma: Vec<Ratio<I>>,
}

impl<I: RatioInt> SortedProfile<I> {
    pub fn from_bids(bids: &[Ratio<I>]) -> Self {
        let mut sigma = bids.to_vec();
        sigma.sort_unstable();
        sigma.push(Ratio::one());
        Self {
            source_len: bids.len(),
            sigma,
        }
    }

    /// Number of real bids behind this view.
    pub fn source_len(&self) -> usize {
        self.source_len
    }

    /// Highest valid rank, i.e. the rank of the appended pseudo-bid.
    pub fn pseudo_rank(&self) -> usize {
        self.source_len + 1
    }

    /// The value at `rank`: 0 at rank 0, the sorted bids at ranks
    /// `1..=source_len`, and 1 at rank `source_len + 1`.
    pub fn at_rank(&self, rank: usize) -> Result<Ratio<I>> {
        if rank == 0 {
            return Ok(Ratio::zero());
        }
        if rank > self.pseudo_rank() {
            return Err(Error::RankOutOfRange {
                rank,
                max: self.pseudo_rank(),
            });
        }
        Ok(self.sigma[rank - 1].clone())
    }

    pub(crate) fn at_rank_ref(&self, rank: usize) -> &Ratio<I> {
        &self.sigma[rank - 1]
    }

    /// The stored values at ranks `1..=source_len + 1`.
    pub fn values(&self) -> &[Ratio<I>] {
        &self.sigma
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rate, ratio, ratio_int};
    use crate::Rate;

    fn r(s: &str) -> Rate {
        parse_rate(s).unwrap()
    }

    fn profile(bids: &[&str]) -> BidProfile {
        BidProfile::new(bids.iter().map(|s| r(s)).collect()).unwrap()
    }

    #[test]
    fn normalizes_by_capacity() {
        let raw: Vec<Rate> = ["5", "4", "3", "4"].iter().map(|s| r(s)).collect();
        let p = BidProfile::normalize(&raw, &r("10")).unwrap();
        assert_eq!(p.bids(), profile(&["0.5", "0.4", "0.3", "0.4"]).bids());

        let single = BidProfile::normalize(&[r("1")], &r("1")).unwrap();
        assert_eq!(single.bids(), &[ratio_int::<Int>(1)]);

        let boundary = BidProfile::normalize(&[r("3"), r("7")], &r("7")).unwrap();
        assert_eq!(boundary.bids(), &[ratio::<Int>(3, 7), ratio_int::<Int>(1)]);
    }

    #[test]
    fn normalize_rejects_bad_inputs() {
        let raw: Vec<Rate> = vec![r("5"), r("12"), r("3")];
        match BidProfile::normalize(&raw, &r("10")) {
            Err(Error::BidExceedsCapacity { index, .. }) => assert_eq!(index, 2),
            other => panic!("expected bid_exceeds_capacity, got {other:?}"),
        }
        assert!(matches!(
            BidProfile::normalize(&[r("1")], &r("0")),
            Err(Error::InvalidCapacity(_))
        ));
        assert!(matches!(
            BidProfile::normalize(&[r("-1")], &r("10")),
            Err(Error::NegativeBid { index: 1, .. })
        ));
        assert!(matches!(
            BidProfile::normalize(&[], &r("10")),
            Err(Error::EmptyProfile)
        ));
    }

    #[test]
    fn profile_validates_unit_interval() {
        assert!(matches!(
            BidProfile::new(vec![r("0.5"), r("1.5")]),
            Err(Error::BidOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            BidProfile::<Int>::new(vec![]),
            Err(Error::EmptyProfile)
        ));
    }

    #[test]
    fn sorted_view_appends_pseudo_bid() {
        let s = profile(&["0.5", "0.4", "0.3", "0.4"]).sorted();
        let want: Vec<Rate> = ["0.3", "0.4", "0.4", "0.5", "1"].iter().map(|x| r(x)).collect();
        assert_eq!(s.values(), &want[..]);

        let single = profile(&["0.7"]).sorted();
        assert_eq!(single.values(), &[r("0.7"), r("1")]);

        let bounds = profile(&["1", "0"]).sorted();
        assert_eq!(bounds.values(), &[r("0"), r("1"), r("1")]);
    }

    #[test]
    fn rank_conventions() {
        let s = SortedProfile::from_bids(profile(&["0.4", "0.3", "0.4"]).bids());
        assert_eq!(s.at_rank(0).unwrap(), r("0"));
        assert_eq!(s.at_rank(2).unwrap(), r("0.4"));
        assert_eq!(s.at_rank(4).unwrap(), r("1"));
        assert!(matches!(
            s.at_rank(5),
            Err(Error::RankOutOfRange { rank: 5, max: 4 })
        ));
    }

    #[test]
    fn empty_reduction_sorts_to_pseudo_only() {
        let s = SortedProfile::<Int>::from_bids(&[]);
        assert_eq!(s.source_len(), 0);
        assert_eq!(s.values(), &[Rate::one()]);
        assert_eq!(s.at_rank(1).unwrap(), Rate::one());
    }

    #[test]
    fn sorting_ignores_order_of_source() {
        let p = profile(&["0.5", "0.4", "0.3", "0.4"]);
        let q = p.permuted(&[2, 0, 3, 1]).unwrap();
        assert_eq!(p.sorted(), q.sorted());
    }

    #[test]
    fn without_removes_one_user() {
        let p = profile(&["0.5", "0.4", "0.3", "0.4"]);
        let others = p.without(0);
        assert_eq!(others, vec![r("0.4"), r("0.3"), r("0.4")]);
        let single = profile(&["0.7"]);
        assert!(single.without(0).is_empty());
    }

    #[test]
    fn permuted_rejects_non_permutations() {
        let p = profile(&["0.1", "0.2"]);
        assert!(p.permuted(&[0]).is_err());
        assert!(p.permuted(&[0, 0]).is_err());
        assert!(p.permuted(&[0, 2]).is_err());
    }
}
