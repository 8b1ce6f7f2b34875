//! File schemas and serialization.
//!
//! Numbers travel as strings to stay exact: bids, rates, and thresholds use
//! decimal form when the denominator allows it and `num/den` otherwise;
//! probabilities always use `num/den` (or a bare integer). User indices are
//! 1-based in every serialized artifact. JSON objects serialize with keys in
//! a fixed (sorted) order, so identical inputs produce identical bytes.

use num::rational::Ratio;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::drop_schedule::DropSchedule;
use crate::error::Error;
use crate::experiments::{AdmittanceSweep, DivergenceRun};
use crate::mechanisms::Mechanism;
use crate::outcome::{Outcome, OutcomeDistribution};
use crate::profile::BidProfile;
use crate::scalar::{approx, decimal_string, fraction_string, parse_rate, RatioInt};
use crate::utility::UtilitySpec;
use crate::verifier::{Counterexample, PropertyReport};
use crate::Result;

/// Bid-profile file: raw requests plus the capacity they are measured
/// against. Bids are normalized on load.
///
/// ```json
/// {"capacity": "10", "bids": ["5", "4", "3", "4"]}
/// ```
#[derive(Debug, Deserialize)]
struct BidFile {
    capacity: String,
    bids: Vec<String>,
}

pub fn parse_bid_file<I: RatioInt>(text: &str) -> Result<BidProfile<I>> {
    let file: BidFile = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let capacity = parse_rate(&file.capacity)
        .map_err(|e| Error::Parse(format!("capacity: {e}")))?;
    let mut raw = Vec::with_capacity(file.bids.len());
    for (i, bid) in file.bids.iter().enumerate() {
        raw.push(parse_rate(bid).map_err(|e| Error::Parse(format!("bids[{i}]: {e}")))?);
    }
    BidProfile::normalize(&raw, &capacity)
}

/// Drop-schedule file: the per-rank drop parameters, 1-based.
///
/// ```json
/// {"d": ["0.1", "0.1", "0.2"]}
/// ```
#[derive(Debug, Deserialize)]
struct DropFile {
    d: Vec<String>,
}

pub fn parse_drop_file<I: RatioInt>(text: &str) -> Result<DropSchedule<I>> {
    let file: DropFile = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let mut values = Vec::with_capacity(file.d.len());
    for (i, value) in file.d.iter().enumerate() {
        values.push(parse_rate(value).map_err(|e| Error::Parse(format!("d[{i}]: {e}")))?);
    }
    DropSchedule::new(values)
}

/// Decimal-when-exact rendering for rates and thresholds.
pub fn rate_str<I: RatioInt>(r: &Ratio<I>) -> String {
    decimal_string(r)
}

/// `num/den` rendering for probabilities.
pub fn prob_str<I: RatioInt>(r: &Ratio<I>) -> String {
    fraction_string(r)
}

pub fn profile_strings<I: RatioInt>(bids: &[Ratio<I>]) -> Vec<String> {
    bids.iter().map(rate_str).collect()
}

fn winners_1based<I: RatioInt>(outcome: &Outcome<I>) -> Vec<usize> {
    outcome.winners().map(|u| u + 1).collect()
}

fn winner_rates<I: RatioInt>(outcome: &Outcome<I>) -> Vec<String> {
    outcome.iter().map(|(_, rate)| rate_str(rate)).collect()
}

/// A deterministic run: one winning set with its rates.
pub fn outcome_json<I: RatioInt>(mechanism: Mechanism, n: usize, outcome: &Outcome<I>) -> Value {
    json!({
        "mechanism": mechanism.code(),
        "n": n,
        "winners": winners_1based(outcome),
        "rates": winner_rates(outcome),
        "admittance": prob_str(&crate::scalar::ratio_int::<I>(outcome.winner_count() as u64)),
    })
}

/// A randomized run: the full outcome distribution.
pub fn distribution_json<I: RatioInt>(
    mechanism: Mechanism,
    n: usize,
    dist: &OutcomeDistribution<I>,
) -> Value {
    let outcomes: Vec<Value> = dist
        .entries()
        .iter()
        .map(|(outcome, p)| {
            json!({
                "winners": winners_1based(outcome),
                "rates": winner_rates(outcome),
                "probability": prob_str(p),
            })
        })
        .collect();
    json!({
        "mechanism": mechanism.code(),
        "n": n,
        "outcomes": outcomes,
        "admittance": prob_str(&dist.admittance()),
    })
}

/// One sampled outcome drawn from a randomized run.
pub fn sampled_json<I: RatioInt>(
    mechanism: Mechanism,
    n: usize,
    seed: u64,
    outcome: &Outcome<I>,
) -> Value {
    json!({
        "mechanism": mechanism.code(),
        "n": n,
        "seed": seed,
        "winners": winners_1based(outcome),
        "rates": winner_rates(outcome),
    })
}

fn utility_json<I: RatioInt>(utility: &UtilitySpec<I>) -> Value {
    match utility {
        UtilitySpec::Step { scale } => json!({"kind": "step", "scale": rate_str(scale)}),
        UtilitySpec::CappedLinear { scale, knee } => json!({
            "kind": "capped_linear",
            "scale": rate_str(scale),
            "knee": rate_str(knee),
        }),
    }
}

pub fn counterexample_json<I: RatioInt>(cex: &Counterexample<I>) -> Value {
    match cex {
        Counterexample::Deviation {
            profile,
            user,
            deviation,
            utility,
            truthful_payoff,
            deviating_payoff,
        } => json!({
            "kind": "deviation",
            "profile": profile_strings(profile),
            "user": user + 1,
            "deviation": rate_str(deviation),
            "utility": utility_json(utility),
            "truthful_payoff": prob_str(truthful_payoff),
            "deviating_payoff": prob_str(deviating_payoff),
        }),
        Counterexample::Monotonicity {
            others,
            lower_bid,
            higher_bid,
            lower_probability,
            higher_probability,
        } => json!({
            "kind": "monotonicity",
            "others": profile_strings(others),
            "lower_bid": rate_str(lower_bid),
            "higher_bid": rate_str(higher_bid),
            "lower_probability": prob_str(lower_probability),
            "higher_probability": prob_str(higher_probability),
        }),
        Counterexample::Structural { profile, reason } => json!({
            "kind": "structural",
            "profile": profile_strings(profile),
            "reason": reason,
        }),
        Counterexample::WinInterval {
            others,
            bid,
            reason,
        } => json!({
            "kind": "win_interval",
            "others": profile_strings(others),
            "bid": rate_str(bid),
            "reason": reason,
        }),
        Counterexample::Permutation {
            profile,
            permutation,
        } => json!({
            "kind": "permutation",
            "profile": profile_strings(profile),
            "permutation": permutation.iter().map(|p| p + 1).collect::<Vec<usize>>(),
        }),
    }
}

/// One property report as a single JSON object (one line of a report
/// stream). `expected` records whether the caller anticipated a pass or a
/// fail.
pub fn report_json<I: RatioInt>(
    suite: &str,
    report: &PropertyReport<I>,
    expected_fail: bool,
) -> Value {
    json!({
        "suite": suite,
        "property_id": report.property_id,
        "mechanism": report.mechanism.map(|m| m.code()),
        "passed": report.passed,
        "expected": if expected_fail { "fail" } else { "pass" },
        "cases": report.cases,
        "counterexample": report.counterexample.as_ref().map(counterexample_json),
    })
}

/// Divergence experiment summary.
pub fn divergence_json<I: RatioInt>(run: &DivergenceRun<I>, seed: u64) -> Value {
    let est = &run.estimate;
    json!({
        "experiment": "divergence",
        "n": est.n,
        "max_drop": rate_str(&est.max_drop),
        "samples": est.samples,
        "seed": seed,
        "divergent_count": est.divergent_count,
        "point_estimate": prob_str(&est.point_estimate),
        "point_estimate_approx": approx(&est.point_estimate),
        "standard_error": est.standard_error,
        "analytic_bound": rate_str(&est.analytic_bound),
        "within_bound": est.within_bound(),
    })
}

/// Divergence experiment per-sample rows.
pub fn divergence_csv<I: RatioInt>(run: &DivergenceRun<I>) -> String {
    let mut out = String::from("sample,divergent\n");
    for (i, flag) in run.divergent.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i, u8::from(*flag)));
    }
    out
}

/// Admittance sweep summary.
pub fn sweep_json<I: RatioInt>(sweep: &AdmittanceSweep<I>, max_drop: &Ratio<I>) -> Value {
    json!({
        "experiment": "sweep",
        "n": sweep.n,
        "samples": sweep.samples,
        "seed": sweep.seed,
        "max_drop": rate_str(max_drop),
        "mean_abar": rate_str(&sweep.mean_abar),
        "mean_astar": rate_str(&sweep.mean_astar),
        "mean_f": rate_str(&sweep.mean_single_price),
        "mean_t": rate_str(&sweep.mean_multi_price),
    })
}

/// Admittance sweep rows, one per sample, with the exact means appended as
/// a final `mean` row.
pub fn sweep_csv<I: RatioInt>(sweep: &AdmittanceSweep<I>) -> String {
    let mut out = String::from("sample,abar,astar,f,t\n");
    for row in &sweep.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.sample,
            rate_str(&row.abar),
            rate_str(&row.astar),
            rate_str(&row.single_price),
            rate_str(&row.multi_price),
        ));
    }
    out.push_str(&format!(
        "mean,{},{},{},{}\n",
        rate_str(&sweep.mean_abar),
        rate_str(&sweep.mean_astar),
        rate_str(&sweep.mean_single_price),
        rate_str(&sweep.mean_multi_price),
    ));
    out
}

/// Tight scalability instance report.
pub fn tight_instance_json<I: RatioInt>(
    m: usize,
    profile: &BidProfile<I>,
    abar_count: usize,
    multi_price_count: usize,
) -> Value {
    json!({
        "experiment": "tight-instance",
        "m": m,
        "profile": profile_strings(profile.bids()),
        "abar": abar_count,
        "t": multi_price_count,
        "passed": abar_count == m && multi_price_count == 2 * m + 1,
    })
}

/// Worst-case instance report.
pub fn worst_case_json<I: RatioInt>(
    n: usize,
    m: usize,
    profile: &BidProfile<I>,
    astar_count: usize,
    single_price_count: usize,
) -> Value {
    json!({
        "experiment": "worst-case",
        "n": n,
        "m": m,
        "profile": profile_strings(profile.bids()),
        "astar": astar_count,
        "f": single_price_count,
        "passed": astar_count == 0 && single_price_count == m,
    })
}
