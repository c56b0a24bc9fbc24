//! The `verify-oracle` battery: recompute what the exact machinery claims
//! through independent routes, and fail loudly on any disagreement.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use restop_core::dp::{brute_force_online, opt_offline_value, opt_online_value};
use restop_core::harness::random_instance;
use restop_core::lower_bound::{ftl_exact_regret_with, closed_form_gap_minus, closed_form_gap_plus};
use restop_core::model::ProfitKind;
use restop_core::rng::{substream, Purpose};
use restop_core::switching::{eps1, schedule, Delta1Form, ScheduleConfig, ScheduleVariant};

use crate::Failure;

struct Checker {
    failures: u64,
}

impl Checker {
    fn report(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            println!("ok — {name}");
        } else {
            println!("FAIL — {name}: {detail}");
            self.failures += 1;
        }
    }
}

pub fn run(seed: u64) -> Result<(), Failure> {
    let mut checker = Checker { failures: 0 };
    check_dp_against_history_tree(&mut checker, seed)?;
    check_ftl_oracle_against_simulation(&mut checker, seed)?;
    check_schedule_scans(&mut checker)?;
    if checker.failures > 0 {
        println!("{} check(s) failed", checker.failures);
        return Err(Failure::Checks);
    }
    println!("all checks passed");
    Ok(())
}

/// The per-step decomposition must reproduce the pointwise-optimal value of
/// the full observation-history tree, and never beat the offline benchmark.
fn check_dp_against_history_tree(checker: &mut Checker, seed: u64) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_gap = 0.0f64;
    let mut worst_slack = f64::INFINITY;
    for i in 0..60u64 {
        let kind = match i % 4 {
            0 => ProfitKind::Reward,
            1 => ProfitKind::BestChoice,
            2 => ProfitKind::LastSuccess,
            _ => ProfitKind::SkiRental { b: 1.0 },
        };
        let instance = random_instance(&mut rng, kind, 3, 3)?;
        let dp = opt_online_value(&instance)?;
        let tree = brute_force_online(&instance)?.value;
        worst_gap = worst_gap.max((dp - tree).abs());
        let offline = opt_offline_value(&instance)?;
        // Online never beats offline: profit online ≤ offline, cost ≥.
        let slack = if instance.profit_kind().is_cost() { dp - offline } else { offline - dp };
        worst_slack = worst_slack.min(slack);
    }
    checker.report(
        "exact optimum equals the history-tree optimum on 60 random instances",
        worst_gap <= 1e-10,
        format!("worst |difference| = {worst_gap:.3e}"),
    );
    checker.report(
        "online optimum never beats the offline benchmark",
        worst_slack >= -1e-10,
        format!("worst violation = {worst_slack:.3e}"),
    );
    Ok(())
}

/// Monte Carlo of the leader rule's expected per-round losses, independent of
/// the exact distribution walk.
fn ftl_decision_mc(t_rounds: u64, eps: f64, trials: u64, seed: u64) -> (f64, f64) {
    let gap_plus = closed_form_gap_plus(eps, ProfitKind::Reward).expect("valid eps");
    let gap_minus = closed_form_gap_minus(eps, ProfitKind::Reward).expect("valid eps");
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for trial in 0..trials {
        let mut rng = substream(seed, trial, 0, Purpose::Env);
        let plus_env = rng.random::<f64>() < 0.5;
        let p_one = if plus_env { 1.0 / 3.0 + eps } else { 1.0 / 3.0 - eps };
        let p_half = if plus_env { 1.0 / 3.0 - eps } else { 1.0 / 3.0 + eps };
        let mut ones = 0u64;
        let mut halves = 0u64;
        let mut regret = 0.0;
        for _ in 0..t_rounds {
            let plays_plus = ones >= halves;
            if plays_plus && !plus_env {
                regret += gap_minus;
            } else if !plays_plus && plus_env {
                regret += gap_plus;
            }
            let u: f64 = rng.random();
            if u < p_one {
                ones += 1;
            } else if u < p_one + p_half {
                halves += 1;
            }
        }
        sum += regret;
        sumsq += regret * regret;
    }
    let m = trials as f64;
    let mean = sum / m;
    let var = ((sumsq - m * mean * mean) / (m - 1.0)).max(0.0);
    (mean, (var / m).sqrt())
}

fn check_ftl_oracle_against_simulation(checker: &mut Checker, seed: u64) -> Result<(), Failure> {
    let (t_rounds, eps, trials) = (30u64, 0.15, 20_000u64);
    let exact = ftl_exact_regret_with(t_rounds, eps, ProfitKind::Reward, true)?;
    let (mc, stderr) = ftl_decision_mc(t_rounds, eps, trials, seed);
    let tol = 5.0 * stderr + 1e-9;
    checker.report(
        "exact leader-rule regret matches direct simulation",
        (exact - mc).abs() <= tol,
        format!("exact {exact:.6} vs simulated {mc:.6} ± {stderr:.6}"),
    );
    Ok(())
}

fn check_schedule_scans(checker: &mut Checker) -> Result<(), Failure> {
    for (label, variant) in
        [("general", ScheduleVariant::General), ("pi-refined", ScheduleVariant::PiRefined)]
    {
        let cfg = ScheduleConfig::new(1, variant, 1.0, 2, 1.0, Delta1Form::Theorem)?;
        let mut decreasing = true;
        let mut prev = f64::INFINITY;
        for t in 2..=100_000u64 {
            let e = eps1(t, &cfg)?;
            if e >= prev {
                decreasing = false;
                break;
            }
            prev = e;
        }
        checker.report(
            &format!("{label} margin radius is strictly decreasing"),
            decreasing,
            "monotonicity broke".into(),
        );
        let mut delta_ok = true;
        let mut zeta_ok = true;
        for t in 3..=100_000u64 {
            let sv = schedule(t, &cfg)?;
            if sv.delta_t > 4.0 / t as f64 {
                delta_ok = false;
            }
            if !(t / 2 <= sv.zeta && sv.zeta <= t.div_ceil(2)) {
                zeta_ok = false;
            }
        }
        checker.report(
            &format!("{label} failure probability stays below 4/t"),
            delta_ok,
            "bound exceeded".into(),
        );
        checker.report(
            &format!("{label} split point stays within [t/2, (t+1)/2]"),
            zeta_ok,
            "bound exceeded".into(),
        );
    }
    Ok(())
}
