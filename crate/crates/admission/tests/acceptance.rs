//! Acceptance suite: the golden examples, exhaustive deviation searches,
//! structural sweeps, and Monte Carlo bounds that gate a release. Each test
//! prints one `PASS`/`FAIL` line (run with `--nocapture` to see them all).

use std::time::{Duration, Instant};

use admission::experiments::{
    estimate_divergence, sample_profile, tight_scalability_instance, trial_rng,
    worst_case_astar_instance,
};
use admission::mechanisms::{abar, astar, omniscient, Mechanism};
use admission::scalar::parse_rate;
use admission::verifier::{
    brute_force_ic, extract_win_interval, grid_utility_family, structural_suite, BidGrid,
};
use admission::{BidProfile, DropSchedule, Rate};

fn r(s: &str) -> Rate {
    parse_rate(s).unwrap()
}

fn profile(bids: &[&str]) -> BidProfile {
    BidProfile::new(bids.iter().map(|s| r(s)).collect()).unwrap()
}

fn tenth_drops(len: usize) -> DropSchedule {
    DropSchedule::uniform(r("0.1"), len).unwrap()
}

fn conclude(id: u32, label: &str, ok: bool) {
    println!("criterion {id} ({label}): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} ({label}) failed");
}

#[test]
fn criterion_1_uniform_price_golden_example() {
    let started = Instant::now();
    let p = profile(&["0.5", "0.4", "0.3", "0.4"]);

    let mut ok = abar::admitted_count(&p) == 2;
    let dist = abar::distribution(&p);
    ok &= dist.entries().len() == 2;
    for (outcome, probability) in dist.entries() {
        ok &= *probability == r("1/2");
        ok &= outcome.iter().all(|(_, rate)| *rate == r("2/5"));
    }
    // Winning sets {2, 3} and {3, 4} in 1-based numbering.
    ok &= dist.entries()[0].0.winner_set() == vec![1, 2];
    ok &= dist.entries()[1].0.winner_set() == vec![2, 3];
    ok &= started.elapsed() < Duration::from_secs(1);
    conclude(1, "uniform-price golden example", ok);
}

#[test]
fn criterion_2_dropped_threshold_golden_example() {
    let p = profile(&["0.5", "0.4", "0.3", "0.4"]);
    let drops = tenth_drops(3);

    let mut ok = true;
    for user in 0..4 {
        let threshold = astar::highest_winning_bid(&p.without(user), &drops).unwrap();
        ok &= threshold == r("59/150");
    }
    let outcome = astar::run(&p, &drops).unwrap();
    // Winner {3} in 1-based numbering.
    ok &= outcome.winner_set() == vec![2];
    ok &= outcome.rate_of(2) == Some(&r("59/150"));
    conclude(2, "dropped-threshold golden example", ok);
}

#[test]
fn criterion_3_three_user_boundary_cases() {
    let drops = tenth_drops(2);

    let mut ok =
        astar::highest_winning_bid(&[r("0.8"), r("0.9")], &drops).unwrap() == r("77/100");
    let borderline = profile(&["0.79", "0.8", "0.9"]);
    ok &= !astar::run(&borderline, &drops).unwrap().contains(0);

    let low_pair = profile(&["0.1", "0.1", "0.9"]);
    let outcome = astar::run(&low_pair, &drops).unwrap();
    ok &= outcome.winner_set() == vec![0, 1];
    ok &= outcome.rate_of(0) == Some(&r("1/10"));
    ok &= outcome.rate_of(1) == Some(&r("1/10"));
    ok &= abar::distribution(&low_pair).admittance() == r("1");
    conclude(3, "three-user boundary cases", ok);
}

#[test]
fn criterion_4_deviation_searches() {
    let started = Instant::now();
    let grid = BidGrid::new(20).unwrap();
    let utilities = grid_utility_family(&grid);

    let mut ok = true;
    for n in [2usize, 3] {
        let report = brute_force_ic(
            Mechanism::Astar,
            &grid,
            n,
            &utilities,
            Some(&tenth_drops(n - 1)),
            false,
        )
        .unwrap();
        ok &= report.passed;
    }

    let full = brute_force_ic(Mechanism::Abar, &grid, 2, &utilities, None, false).unwrap();
    ok &= !full.passed && full.counterexample.is_some();

    let distinct = brute_force_ic(Mechanism::Abar, &grid, 2, &utilities, None, true).unwrap();
    ok &= distinct.passed;

    ok &= started.elapsed() < Duration::from_secs(300);
    conclude(4, "exhaustive deviation searches", ok);
}

#[test]
fn criterion_5_structural_sweep() {
    let started = Instant::now();
    let samples_per_n = 10_000u64;

    let mut failures = 0u64;
    for n in 2..=10usize {
        let drops = tenth_drops(n - 1);
        for trial in 0..samples_per_n {
            let mut rng = trial_rng(50_000 + n as u64, trial);
            let p: BidProfile = sample_profile(n, &mut rng);
            for report in structural_suite(&p, &drops).unwrap() {
                if !report.passed {
                    failures += 1;
                }
            }
        }
    }
    let elapsed = started.elapsed();
    let ok = failures == 0 && elapsed < Duration::from_secs(120);
    println!(
        "criterion 5 timing: {:.1}s for 90000 profiles",
        elapsed.as_secs_f64()
    );
    conclude(5, "structural sweep over random profiles", ok);
}

#[test]
fn criterion_6_win_interval_extraction() {
    let grid = BidGrid::new(1000).unwrap();
    let mut ok = true;
    let mut checked = 0;
    for case in 0..100u64 {
        let n = 2 + (case as usize % 5);
        let drops = tenth_drops(n - 1);
        let mut rng = trial_rng(60_000, case);
        let others_profile: BidProfile = sample_profile(n - 1, &mut rng);
        let others = others_profile.bids().to_vec();
        let (threshold, report) =
            extract_win_interval(Mechanism::Astar, &others, &grid, Some(&drops)).unwrap();
        ok &= report.passed;
        ok &= threshold == astar::highest_winning_bid(&others, &drops).unwrap();
        checked += 1;
    }
    ok &= checked == 100;
    conclude(6, "win-interval extraction", ok);
}

#[test]
fn criterion_7_divergence_bound() {
    let mut ok = true;
    for (n, d, bound) in [(4usize, "0.01", "0.04"), (5, "0.02", "0.1")] {
        let started = Instant::now();
        let drops = DropSchedule::uniform(r(d), n - 1).unwrap();
        let run = estimate_divergence(n, &drops, 100_000, 42).unwrap();
        ok &= run.estimate.analytic_bound == r(bound);
        ok &= run.estimate.within_bound();
        let elapsed = started.elapsed();
        ok &= elapsed < Duration::from_secs(60);
        println!(
            "criterion 7 timing: n={n} d={d}: estimate {}/{} vs bound {bound} in {:.1}s",
            run.estimate.divergent_count,
            run.estimate.samples,
            elapsed.as_secs_f64()
        );
    }
    conclude(7, "divergence bound", ok);
}

#[test]
fn criterion_8_tightness_instances() {
    let mut ok = true;
    for m in 1..=20usize {
        let tight: BidProfile = tight_scalability_instance(m).unwrap();
        ok &= abar::admitted_count(&tight) == m;
        ok &= omniscient::multi_price_count(&tight) == 2 * m + 1;

        let worst: BidProfile = worst_case_astar_instance(m + 1, m).unwrap();
        let drops = tenth_drops(m);
        ok &= astar::run(&worst, &drops).unwrap().winner_count() == 0;
        ok &= omniscient::single_price_count(&worst) == m;
    }
    conclude(8, "tightness instances", ok);
}
