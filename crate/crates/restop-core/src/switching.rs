//! The adaptive meta-policy: schedule arithmetic, hold-out estimation, the
//! switch test, and per-round policy selection.
//!
//! At round `t` the meta-policy splits the recorded history at
//! `ζ(t) = min{t, max{t₀+1, ⌊(t+1)/2⌋}}`: rounds `1..ζ−1` train both the
//! baseline `g` and the learned policy `h`, and rounds `ζ..t−1` are a
//! hold-out on which both are estimated. The learned policy is played only
//! when the switch test [`c_event`] finds its hold-out estimate ahead of the
//! baseline's by a margin calibrated by the concentration schedule
//! `ε(t) = ε₁(ζ(t))`, `δ(t) = 2δ₀(t−ζ, ε₁(ζ)) + δ₁(ζ)`; otherwise the
//! baseline's per-round guarantee is preserved by playing `g`.
//!
//! With the exact worst-case constants (`scale = 1`), `ε₁` exceeds every
//! achievable estimate gap on bounded desk-scale instances, so the test never
//! fires there; `scale < 1` shrinks only the played margin (never the
//! schedule's internal `δ₀` argument) to make switching observable, at the
//! price of the formal guarantee.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::baselines::{baseline_for_round, BaselineFamily};
use crate::dp::{empirical_optimal_policy, LearnerMode};
use crate::error::{Error, Result};
use crate::model::{Instance, RoundRealization};
use crate::policies::{run_policy, StoppingPolicy};

/// Which concentration schedule is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleVariant {
    /// `ε₁(t) = 6B·√(2κ·ln(4t)/(t−1))` with `δ₁` per [`Delta1Form`].
    General,
    /// `ε₁(t) = 5B·ln(4et)/√(t−1)` and `δ₁(t) = 1/(2t)`, the sharper
    /// schedule for threshold families under a known order distribution.
    PiRefined,
}

/// Two recorded forms of `δ₁` for the general schedule (they differ on
/// whether the exponent binds the 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Delta1Form {
    /// `δ₁(t) = 1/(2·t^κ)` — the default.
    Theorem,
    /// `δ₁(t) = 1/(2t)^κ`.
    Corollary,
}

/// Fixed parameters of the switching schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleConfig {
    /// Floor parameter of the split point: `ζ(t) ≥ min{t, t₀+1}`.
    pub t0: u64,
    pub variant: ScheduleVariant,
    /// Profit bound `B` (1 for the bounded-profit kinds; `n + b` for ski
    /// rental).
    pub b: f64,
    /// Pattern-count parameter `κ = min(n·|Π|, 2·n!)`.
    pub kappa: u64,
    /// Multiplier on the played margin `ε(t)`; 1 is the exact worst-case
    /// schedule.
    pub scale: f64,
    pub delta1_form: Delta1Form,
}

impl ScheduleConfig {
    pub fn new(
        t0: u64,
        variant: ScheduleVariant,
        b: f64,
        kappa: u64,
        scale: f64,
        delta1_form: Delta1Form,
    ) -> Result<Self> {
        let cfg = ScheduleConfig { t0, variant, b, kappa, scale, delta1_form };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The exact worst-case schedule for an instance: `t₀ = 1`, general
    /// variant, `B` and `κ` from the instance, `scale = 1`.
    pub fn exact_for(instance: &Instance) -> Self {
        ScheduleConfig {
            t0: 1,
            variant: ScheduleVariant::General,
            b: instance.bound(),
            kappa: instance.order().kappa(instance.n()),
            scale: 1.0,
            delta1_form: Delta1Form::Theorem,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.t0 < 1 {
            return Err(Error::InvalidConfig("schedule t0 must be ≥ 1".into()));
        }
        if self.kappa < 1 {
            return Err(Error::InvalidConfig("schedule kappa must be ≥ 1".into()));
        }
        if !(self.b.is_finite() && self.b > 0.0) {
            return Err(Error::InvalidConfig(format!("schedule bound B={} must be > 0", self.b)));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidConfig(format!("schedule scale {} must be > 0", self.scale)));
        }
        Ok(())
    }
}

/// The split point `ζ(t) = min{t, max{t₀+1, ⌊(t+1)/2⌋}}`.
pub fn zeta(t: u64, t0: u64) -> u64 {
    t.min((t0 + 1).max((t + 1) / 2))
}

/// The raw (unscaled) concentration radius `ε₁(t)`; needs `t ≥ 2`.
pub fn eps1(t: u64, cfg: &ScheduleConfig) -> Result<f64> {
    if t < 2 {
        return Err(Error::ContractViolation(format!("eps1 needs t ≥ 2, got {t}")));
    }
    let tf = t as f64;
    Ok(match cfg.variant {
        ScheduleVariant::General => {
            6.0 * cfg.b * (2.0 * cfg.kappa as f64 * (4.0 * tf).ln() / (tf - 1.0)).sqrt()
        }
        ScheduleVariant::PiRefined => {
            5.0 * cfg.b * (4.0 * std::f64::consts::E * tf).ln() / (tf - 1.0).sqrt()
        }
    })
}

/// The training-failure probability `δ₁(t)`.
pub fn delta1(t: u64, cfg: &ScheduleConfig) -> f64 {
    let tf = t as f64;
    match cfg.variant {
        ScheduleVariant::PiRefined => 1.0 / (2.0 * tf),
        ScheduleVariant::General => {
            let k = i32::try_from(cfg.kappa).unwrap_or(i32::MAX);
            match cfg.delta1_form {
                Delta1Form::Theorem => 1.0 / (2.0 * tf.powi(k)),
                Delta1Form::Corollary => 1.0 / (2.0 * tf).powi(k),
            }
        }
    }
}

/// Two-sided Hoeffding failure probability for a mean of `m` values in
/// `[0, B]` deviating by more than `eta`: `2·exp(−2m·η²/B²)`.
pub fn delta0(m: u64, eta: f64, b: f64) -> f64 {
    2.0 * (-2.0 * m as f64 * eta * eta / (b * b)).exp()
}

/// All schedule quantities at round `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScheduleValues {
    pub zeta: u64,
    /// `scale · ε₁(ζ)` — the played margin.
    pub eps1_at_zeta: f64,
    pub delta1_at_zeta: f64,
    /// `ε(t) = eps1_at_zeta`.
    pub eps_t: f64,
    /// `δ(t) = 2·δ₀(t−ζ, ε₁(ζ)) + δ₁(ζ)`, the `δ₀` term dropped when
    /// `ζ = t` leaves no hold-out. `δ₀` always receives the **unscaled**
    /// `ε₁(ζ)`.
    pub delta_t: f64,
}

/// Evaluate the schedule at round `t ≥ 2`.
pub fn schedule(t: u64, cfg: &ScheduleConfig) -> Result<ScheduleValues> {
    cfg.validate()?;
    let z = zeta(t, cfg.t0);
    let raw = eps1(z, cfg)?;
    let e1 = cfg.scale * raw;
    let d1 = delta1(z, cfg);
    let delta_t = if z < t { 2.0 * delta0(t - z, raw, cfg.b) + d1 } else { d1 };
    Ok(ScheduleValues { zeta: z, eps1_at_zeta: e1, delta1_at_zeta: d1, eps_t: e1, delta_t })
}

/// The switch test: does the learned policy's hold-out estimate beat the
/// baseline's by the calibrated margin?
///
/// Fires iff `ĝ + ε + B·δ ≤ (1 − δ)·(ĥ − ε)`.
pub fn c_event(g_hat: f64, h_hat: f64, eps_t: f64, delta_t: f64, b: f64) -> bool {
    g_hat + eps_t + b * delta_t <= (1.0 - delta_t) * (h_hat - eps_t)
}

/// Which candidate the meta-policy played in a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chosen {
    Baseline,
    Learned,
}

/// One round of the switching decision, for diagnostics. Estimate fields are
/// `None` when the round had no hold-out data (and the margin fields when
/// no schedule was evaluated at all, i.e. round 1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwitchTraceRow {
    pub t: u64,
    pub zeta: u64,
    pub g_hat: Option<f64>,
    pub h_hat: Option<f64>,
    pub eps_t: Option<f64>,
    pub delta_t: Option<f64>,
    pub c_fired: bool,
    pub chosen: Chosen,
}

/// Select the policy for round `t` from the recorded history.
///
/// The baseline is built as for round `ζ(t)` from training rounds `1..ζ−1`
/// (one fresh draw from `policy_rng` when that construction is randomized);
/// the learned policy is trained on the same rounds. Both are estimated on
/// hold-out rounds `ζ..t−1` — on profits shifted to the maximize orientation
/// (`B − cost` for ski rental) — with any per-sample baseline randomness
/// drawn from `est_rng`. Rounds with no hold-out (`ζ = t`, so rounds 1 and
/// 2) never switch.
#[allow(clippy::too_many_arguments)]
pub fn adaptive_select<R: Rng + ?Sized>(
    t: u64,
    history: &[RoundRealization],
    family: BaselineFamily,
    instance: &Instance,
    cfg: &ScheduleConfig,
    learner: LearnerMode,
    policy_rng: &mut R,
    est_rng: &mut R,
) -> Result<(StoppingPolicy, SwitchTraceRow)> {
    if history.len() as u64 != t - 1 {
        return Err(Error::ContractViolation(format!(
            "round {t} needs exactly {} history rounds, got {}",
            t - 1,
            history.len()
        )));
    }
    let z = zeta(t, cfg.t0);
    let training = &history[..(z - 1) as usize];
    let g = baseline_for_round(family, instance, z, training, policy_rng)?;
    let no_switch = |zeta, eps_t, delta_t, g| {
        (
            g,
            SwitchTraceRow {
                t,
                zeta,
                g_hat: None,
                h_hat: None,
                eps_t,
                delta_t,
                c_fired: false,
                chosen: Chosen::Baseline,
            },
        )
    };
    if z == 1 {
        // Round 1: no data at all, nothing to compare.
        return Ok(no_switch(z, None, None, g));
    }
    let sv = schedule(t, cfg)?;
    if z == t {
        // No hold-out rounds: the test is regarded as not having occurred.
        return Ok(no_switch(z, Some(sv.eps_t), Some(sv.delta_t), g));
    }
    let h = empirical_optimal_policy(training, instance, learner)?;
    let holdout = &history[(z - 1) as usize..];
    let n = instance.n();
    let kind = instance.profit_kind();
    let m = holdout.len() as f64;
    // Baseline estimate: the policy is re-drawn per hold-out sample so that
    // randomized constructions are estimated unbiasedly (deterministic ones
    // rebuild to the identical policy).
    let mut g_sum = 0.0;
    for s in holdout {
        let gs = baseline_for_round(family, instance, z, training, est_rng)?;
        let (_, p) = run_policy(&gs, s, kind)?;
        g_sum += kind.shifted(p, n);
    }
    let g_hat = g_sum / m;
    let mut h_sum = 0.0;
    for s in holdout {
        let (_, p) = run_policy(&h, s, kind)?;
        h_sum += kind.shifted(p, n);
    }
    let h_hat = h_sum / m;
    let fired = c_event(g_hat, h_hat, sv.eps_t, sv.delta_t, cfg.b);
    let (policy, chosen) = if fired { (h, Chosen::Learned) } else { (g, Chosen::Baseline) };
    Ok((
        policy,
        SwitchTraceRow {
            t,
            zeta: z,
            g_hat: Some(g_hat),
            h_hat: Some(h_hat),
            eps_t: Some(sv.eps_t),
            delta_t: Some(sv.delta_t),
            c_fired: fired,
            chosen,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DiscreteDist, OrderModel, ProfitKind};
    use crate::rng::{substream, Purpose};

    fn cfg_general(b: f64, kappa: u64) -> ScheduleConfig {
        ScheduleConfig::new(1, ScheduleVariant::General, b, kappa, 1.0, Delta1Form::Theorem)
            .unwrap()
    }

    fn round(x: Vec<f64>) -> RoundRealization {
        let n = x.len();
        RoundRealization { x, tau: (0..n).collect() }
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta(1, 1), 1);
        assert_eq!(zeta(2, 1), 2);
        assert_eq!(zeta(3, 1), 2);
        assert_eq!(zeta(10, 1), 5);
        assert_eq!(zeta(101, 1), 51);
        // A larger floor keeps the split near t until 2·t0 rounds exist.
        assert_eq!(zeta(4, 3), 4);
        assert_eq!(zeta(9, 3), 5);
    }

    #[test]
    fn general_schedule_at_t_101() {
        let cfg = cfg_general(1.0, 2);
        let sv = schedule(101, &cfg).unwrap();
        assert_eq!(sv.zeta, 51);
        let expect = 6.0 * (4.0 * f64::ln(204.0) / 50.0).sqrt();
        assert!((sv.eps1_at_zeta - expect).abs() < 1e-12);
        assert!((sv.eps1_at_zeta - 3.914).abs() < 1e-3);
        assert_eq!(sv.eps_t, sv.eps1_at_zeta);
        // δ₁(51) under the theorem form with κ=2.
        assert!((sv.delta1_at_zeta - 1.0 / (2.0 * 51.0f64.powi(2))).abs() < 1e-15);
        // The hold-out term is astronomically small at this radius.
        assert!((sv.delta_t - sv.delta1_at_zeta).abs() < 1e-15);
    }

    #[test]
    fn pi_refined_schedule_at_t_101() {
        let cfg = ScheduleConfig::new(
            1,
            ScheduleVariant::PiRefined,
            1.0,
            2,
            1.0,
            Delta1Form::Theorem,
        )
        .unwrap();
        let sv = schedule(101, &cfg).unwrap();
        assert_eq!(sv.zeta, 51);
        let expect = 5.0 * f64::ln(4.0 * std::f64::consts::E * 51.0) / 50.0f64.sqrt();
        assert!((sv.eps1_at_zeta - expect).abs() < 1e-12);
        assert!((sv.eps1_at_zeta - 4.468).abs() < 1e-3);
        assert!((sv.delta1_at_zeta - 1.0 / 102.0).abs() < 1e-15);
    }

    #[test]
    fn delta0_worked_example() {
        assert!((delta0(4, 0.5, 1.0) - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
        assert!((delta0(4, 0.5, 1.0) - 0.2707).abs() < 1e-4);
    }

    #[test]
    fn delta1_forms_differ_only_in_binding_the_two() {
        let theorem = cfg_general(1.0, 2);
        let corollary =
            ScheduleConfig::new(1, ScheduleVariant::General, 1.0, 2, 1.0, Delta1Form::Corollary)
                .unwrap();
        assert!((delta1(10, &theorem) - 1.0 / 200.0).abs() < 1e-15);
        assert!((delta1(10, &corollary) - 1.0 / 400.0).abs() < 1e-15);
        // The refined schedule ignores the form flag.
        for form in [Delta1Form::Theorem, Delta1Form::Corollary] {
            let cfg =
                ScheduleConfig::new(1, ScheduleVariant::PiRefined, 1.0, 2, 1.0, form).unwrap();
            assert!((delta1(10, &cfg) - 1.0 / 20.0).abs() < 1e-15);
        }
    }

    #[test]
    fn eps1_needs_two_rounds() {
        let cfg = cfg_general(1.0, 2);
        assert!(matches!(eps1(1, &cfg), Err(Error::ContractViolation(_))));
        assert!(matches!(schedule(1, &cfg), Err(Error::ContractViolation(_))));
        assert!(eps1(2, &cfg).is_ok());
    }

    #[test]
    fn no_holdout_drops_the_hoeffding_term() {
        let cfg = cfg_general(1.0, 2);
        let sv = schedule(2, &cfg).unwrap();
        assert_eq!(sv.zeta, 2);
        assert_eq!(sv.delta_t, sv.delta1_at_zeta);
    }

    #[test]
    fn scale_multiplies_the_margin_but_not_the_hoeffding_argument() {
        let exact = cfg_general(1.0, 2);
        let scaled = ScheduleConfig { scale: 0.01, ..exact };
        let a = schedule(101, &exact).unwrap();
        let b = schedule(101, &scaled).unwrap();
        assert!((b.eps_t - 0.01 * a.eps_t).abs() < 1e-15);
        // δ uses the unscaled radius, so it is unchanged.
        assert_eq!(a.delta_t, b.delta_t);
    }

    #[test]
    fn c_event_worked_triples() {
        assert!(c_event(0.5, 0.8, 0.1, 0.05, 1.0));
        assert!(c_event(0.5, 0.5, 0.0, 0.0, 1.0)); // boundary equality
        assert!(!c_event(0.5, 0.8, 0.2, 0.05, 1.0));
    }

    #[test]
    fn schedule_monotonicity_and_bounds_scan() {
        let cfg = cfg_general(1.0, 2);
        let mut prev = f64::INFINITY;
        for t in 2..=1_000_000u64 {
            let e = eps1(t, &cfg).unwrap();
            assert!(e < prev, "eps1 not strictly decreasing at t={t}");
            prev = e;
        }
        for t in 3..=1_000_000u64 {
            let sv = schedule(t, &cfg).unwrap();
            assert!(
                sv.delta_t <= 4.0 / t as f64,
                "delta({t}) = {} exceeds 4/t",
                sv.delta_t
            );
            assert!(t / 2 <= sv.zeta && sv.zeta <= (t + 1) / 2, "zeta bounds at t={t}");
        }
    }

    #[test]
    fn unscaled_margin_exceeds_any_bounded_gap_at_desk_scale() {
        // With B=1, κ=2 the unscaled radius stays above 1/2 through t = 10⁴,
        // so on a [0,1]-bounded instance the switch test cannot fire.
        let cfg = cfg_general(1.0, 2);
        let mut min = f64::INFINITY;
        for t in 2..=10_000u64 {
            min = min.min(eps1(zeta(t, 1), &cfg).unwrap());
        }
        assert!(min > 0.5, "min ε₁(ζ(t)) = {min}");
        assert!((min - 0.534).abs() < 1e-2);
    }

    fn prophet_instance(eps: f64) -> Instance {
        Instance::new(
            vec![
                DiscreteDist::point_mass(0.5).unwrap(),
                DiscreteDist::bernoulli(0.5 + eps).unwrap(),
            ],
            OrderModel::Adversarial,
            ProfitKind::Reward,
        )
        .unwrap()
    }

    #[test]
    fn round_one_plays_the_uniform_baseline_without_a_test() {
        let inst = prophet_instance(0.25);
        let cfg = cfg_general(1.0, 2);
        let mut pr = substream(1, 0, 1, Purpose::Policy);
        let mut er = substream(1, 0, 1, Purpose::Estimate);
        let (policy, row) = adaptive_select(
            1,
            &[],
            BaselineFamily::ProphetSingleSample,
            &inst,
            &cfg,
            LearnerMode::MarginalDp,
            &mut pr,
            &mut er,
        )
        .unwrap();
        assert!(matches!(policy, StoppingPolicy::UniformPick { .. }));
        assert!(!row.c_fired);
        assert_eq!(row.zeta, 1);
        assert_eq!(row.g_hat, None);
        assert_eq!(row.eps_t, None);
    }

    #[test]
    fn round_two_has_no_holdout_and_keeps_the_baseline() {
        let inst = prophet_instance(0.25);
        let cfg = cfg_general(1.0, 2);
        let mut pr = substream(1, 0, 2, Purpose::Policy);
        let mut er = substream(1, 0, 2, Purpose::Estimate);
        let history = vec![round(vec![0.5, 1.0])];
        let (policy, row) = adaptive_select(
            2,
            &history,
            BaselineFamily::ProphetSingleSample,
            &inst,
            &cfg,
            LearnerMode::MarginalDp,
            &mut pr,
            &mut er,
        )
        .unwrap();
        assert!(matches!(policy, StoppingPolicy::Threshold(_)));
        assert!(!row.c_fired);
        assert_eq!(row.zeta, 2);
        assert_eq!(row.g_hat, None);
        assert!(row.eps_t.is_some());
        assert!(row.delta_t.is_some());
    }

    /// A history whose hold-out rounds make the learned wait-for-the-second
    /// policy look far better than the sample-max baseline: the round-1
    /// sample maxed at 0.5 (its second draw was 0), so the baseline's flat
    /// level 0.5 stops at step 1 forever, while later rounds all carry a 1
    /// in the second slot.
    fn switch_friendly_history(t: u64) -> Vec<RoundRealization> {
        (1..t)
            .map(|s| if s == 1 { round(vec![0.5, 0.0]) } else { round(vec![0.5, 1.0]) })
            .collect()
    }

    #[test]
    fn tiny_margin_lets_the_test_fire_and_replay_is_reproducible() {
        let inst = prophet_instance(0.25);
        let cfg = ScheduleConfig { scale: 1e-9, ..cfg_general(1.0, 2) };
        let t = 41;
        let history = switch_friendly_history(t);
        let mut pr = substream(2, 0, t, Purpose::Policy);
        let mut er = substream(2, 0, t, Purpose::Estimate);
        let (policy, row) = adaptive_select(
            t,
            &history,
            BaselineFamily::ProphetSingleSample,
            &inst,
            &cfg,
            LearnerMode::MarginalDp,
            &mut pr,
            &mut er,
        )
        .unwrap();
        assert!(row.c_fired, "trace: {row:?}");
        assert_eq!(row.chosen, Chosen::Learned);
        // ĝ: the baseline stops at 0.5 every hold-out round; ĥ: the learned
        // policy waits and collects 1.
        assert_eq!(row.g_hat, Some(0.5));
        assert_eq!(row.h_hat, Some(1.0));
        // Replaying the same substreams reproduces the selection bit-for-bit.
        let mut pr2 = substream(2, 0, t, Purpose::Policy);
        let mut er2 = substream(2, 0, t, Purpose::Estimate);
        let (policy2, row2) = adaptive_select(
            t,
            &history,
            BaselineFamily::ProphetSingleSample,
            &inst,
            &cfg,
            LearnerMode::MarginalDp,
            &mut pr2,
            &mut er2,
        )
        .unwrap();
        assert_eq!(policy, policy2);
        assert_eq!(row, row2);
    }

    #[test]
    fn policies_depend_on_training_rounds_only() {
        // Mutating hold-out rounds must change the estimates but never the
        // candidate policies; with the test firing in both runs, the returned
        // (learned) policy must be identical.
        let inst = prophet_instance(0.25);
        let cfg = ScheduleConfig { scale: 1e-9, ..cfg_general(1.0, 2) };
        let t = 41;
        let z = zeta(t, cfg.t0);
        let base = switch_friendly_history(t);
        let mut mutated = base.clone();
        for r in mutated.iter_mut().skip((z - 1) as usize) {
            // Worse hold-out draws for the second coordinate.
            *r = round(vec![0.5, if r.x[1] == 1.0 { 0.0 } else { 1.0 }]);
        }
        // Keep enough 1s in the mutated hold-out for the test to still fire.
        for (i, r) in mutated.iter_mut().enumerate().skip((z - 1) as usize) {
            if i % 3 != 0 {
                *r = round(vec![0.5, 1.0]);
            }
        }
        let run = |history: &[RoundRealization]| {
            let mut pr = substream(3, 0, t, Purpose::Policy);
            let mut er = substream(3, 0, t, Purpose::Estimate);
            adaptive_select(
                t,
                history,
                BaselineFamily::ProphetSingleSample,
                &inst,
                &cfg,
                LearnerMode::MarginalDp,
                &mut pr,
                &mut er,
            )
            .unwrap()
        };
        let (p_base, r_base) = run(&base);
        let (p_mut, r_mut) = run(&mutated);
        assert!(r_base.c_fired && r_mut.c_fired);
        assert_eq!(p_base, p_mut, "policies must be functions of training rounds only");
        assert_ne!(r_base.h_hat, r_mut.h_hat, "estimates should see the mutation");
    }

    #[test]
    fn ski_rental_comparison_runs_on_shifted_profits() {
        // Two point-mass rents of 0.1 with b = 0.5: the learned policy rents
        // through (cost 0.2, shifted B − cost = 2.3 with B = n + b = 2.5),
        // while the randomized baseline buys whenever its level lands below
        // the cumulative rent (cost 0.5 or 0.6, shifted 2.0 or 1.9). A tiny
        // margin switches to learned as soon as any hold-out draw bought.
        let d = DiscreteDist::point_mass(0.1).unwrap();
        let inst = Instance::new(
            vec![d.clone(), d],
            OrderModel::Adversarial,
            ProfitKind::SkiRental { b: 0.5 },
        )
        .unwrap();
        let cfg = ScheduleConfig {
            scale: 1e-9,
            ..cfg_general(inst.bound(), 2)
        };
        let t = 41;
        let history: Vec<RoundRealization> = (1..t).map(|_| round(vec![0.1, 0.1])).collect();
        let mut pr = substream(4, 0, t, Purpose::Policy);
        let mut er = substream(4, 0, t, Purpose::Estimate);
        let (policy, row) = adaptive_select(
            t,
            &history,
            BaselineFamily::SkiRentalRandomized,
            &inst,
            &cfg,
            LearnerMode::MarginalDp,
            &mut pr,
            &mut er,
        )
        .unwrap();
        // ĥ: never buying costs 0.2, shifted to 2.5 − 0.2 = 2.3.
        assert!((row.h_hat.unwrap() - 2.3).abs() < 1e-12);
        // Every baseline draw costs at least 0.2, so its shifted estimate
        // can never exceed the learned one.
        let g_hat = row.g_hat.unwrap();
        assert!((0.0..=2.3 + 1e-12).contains(&g_hat));
        assert!(row.h_hat >= row.g_hat);
        // With 20 hold-out redraws, some draw bought (overwhelmingly likely
        // at this pinned seed), putting ĝ measurably below ĥ.
        assert!(row.c_fired, "g_hat {g_hat}");
        assert_eq!(row.chosen, Chosen::Learned);
        assert!(matches!(policy, StoppingPolicy::Threshold(_)));
    }

    #[test]
    fn history_length_is_enforced() {
        let inst = prophet_instance(0.25);
        let cfg = cfg_general(1.0, 2);
        let mut pr = substream(5, 0, 3, Purpose::Policy);
        let mut er = substream(5, 0, 3, Purpose::Estimate);
        let history = vec![round(vec![0.5, 1.0])]; // one round, but t=3 needs two
        assert!(matches!(
            adaptive_select(
                3,
                &history,
                BaselineFamily::ProphetSingleSample,
                &inst,
                &cfg,
                LearnerMode::MarginalDp,
                &mut pr,
                &mut er,
            ),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn config_validation() {
        assert!(ScheduleConfig::new(0, ScheduleVariant::General, 1.0, 2, 1.0, Delta1Form::Theorem)
            .is_err());
        assert!(ScheduleConfig::new(1, ScheduleVariant::General, 0.0, 2, 1.0, Delta1Form::Theorem)
            .is_err());
        assert!(ScheduleConfig::new(1, ScheduleVariant::General, 1.0, 0, 1.0, Delta1Form::Theorem)
            .is_err());
        assert!(ScheduleConfig::new(1, ScheduleVariant::General, 1.0, 2, 0.0, Delta1Form::Theorem)
            .is_err());
        let inst = prophet_instance(0.25);
        let cfg = ScheduleConfig::exact_for(&inst);
        assert_eq!(cfg.kappa, 2);
        assert_eq!(cfg.b, 1.0);
        assert_eq!(cfg.scale, 1.0);
    }

    #[test]
    fn variant_and_form_strings() {
        assert_eq!(serde_json::to_string(&ScheduleVariant::PiRefined).unwrap(), "\"pi-refined\"");
        assert_eq!(
            serde_json::from_str::<ScheduleVariant>("\"general\"").unwrap(),
            ScheduleVariant::General
        );
        assert_eq!(serde_json::to_string(&Delta1Form::Corollary).unwrap(), "\"corollary\"");
    }
}
