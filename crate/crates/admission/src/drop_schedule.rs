//! Drop parameters for the deterministic threshold mechanism.

use num::rational::Ratio;
use num::{One, Signed};

use crate::error::Error;
use crate::scalar::{decimal_string, RatioInt};
use crate::{Int, Result};

/// Parameters `d_j` for `1 <= j <= n - 1`, each strictly inside `(0, 1)`.
///
/// `d_j` scales how far the admission threshold is pulled toward
/// `1/(j + 1)` when one more admit at the threshold rate would overflow
/// capacity. A schedule of length `n - 1` serves profiles of up to `n`
/// users; the empty schedule serves single-user profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DropSchedule<I: RatioInt = Int> {
    d: Vec<Ratio<I>>,
}

impl<I: RatioInt> DropSchedule<I> {
    pub fn new(d: Vec<Ratio<I>>) -> Result<Self> {
        for (i, value) in d.iter().enumerate() {
            if !value.is_positive() || *value >= Ratio::one() {
                return Err(Error::InvalidDrop {
                    index: i + 1,
                    value: decimal_string(value),
                });
            }
        }
        Ok(Self { d })
    }

    /// The constant schedule `d_j = value` for all `j` in `1..=len`.
    pub fn uniform(value: Ratio<I>, len: usize) -> Result<Self> {
        Self::new(vec![value; len])
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// `d_j`, 1-based.
    pub fn get(&self, j: usize) -> Result<&Ratio<I>> {
        if j == 0 || j > self.d.len() {
            return Err(Error::DropScheduleTooShort {
                users: j + 1,
                needed: j,
                got: self.d.len(),
            });
        }
        Ok(&self.d[j - 1])
    }

    /// Largest drop parameter, or 0 for the empty schedule.
    pub fn max_drop(&self) -> Ratio<I> {
        self.d
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(num::Zero::zero)
    }

    /// Checks the schedule is long enough for an `n`-user profile.
    pub fn require_users(&self, n: usize) -> Result<()> {
        if self.d.len() + 1 < n {
            return Err(Error::DropScheduleTooShort {
                users: n,
                needed: n - 1,
                got: self.d.len(),
            });
        }
        Ok(())
    }
}
