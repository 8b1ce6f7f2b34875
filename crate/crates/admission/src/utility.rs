//! Admissible user utilities.
//!
//! A utility maps (true required rate, assigned rate) to a payoff that is 0
//! whenever the assignment falls short of the requirement, and otherwise
//! non-negative and non-decreasing in the assignment. The two shapes here
//! are the adversarial constructions used by the deviation search: a flat
//! step and a capped linear ramp.

use num::rational::Ratio;
use num::{One, Signed, Zero};

use crate::error::Error;
use crate::scalar::{decimal_string, RatioInt};
use crate::{Int, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UtilitySpec<I: RatioInt = Int> {
    /// `scale` once the assignment covers the requirement, else 0.
    Step { scale: Ratio<I> },
    /// 0 below the requirement; then `scale * assigned / knee`, capped at
    /// `scale` once the assignment reaches the knee.
    CappedLinear { scale: Ratio<I>, knee: Ratio<I> },
}

impl<I: RatioInt> UtilitySpec<I> {
    pub fn step(scale: Ratio<I>) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::InvalidUtility(format!(
                "scale {} must be positive",
                decimal_string(&scale)
            )));
        }
        Ok(Self::Step { scale })
    }

    pub fn capped_linear(scale: Ratio<I>, knee: Ratio<I>) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::InvalidUtility(format!(
                "scale {} must be positive",
                decimal_string(&scale)
            )));
        }
        if !knee.is_positive() || knee > Ratio::one() {
            return Err(Error::InvalidUtility(format!(
                "knee {} must lie in (0, 1]",
                decimal_string(&knee)
            )));
        }
        Ok(Self::CappedLinear { scale, knee })
    }

    /// Payoff for a user requiring `true_rate` who is assigned `assigned`.
    pub fn evaluate(&self, true_rate: &Ratio<I>, assigned: &Ratio<I>) -> Ratio<I> {
        if assigned < true_rate {
            return Ratio::zero();
        }
        match self {
            Self::Step { scale } => scale.clone(),
            Self::CappedLinear { scale, knee } => {
                if assigned >= knee {
                    scale.clone()
                } else {
                    scale * assigned / knee
                }
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Step { .. } => "step",
            Self::CappedLinear { .. } => "capped_linear",
        }
    }
}
