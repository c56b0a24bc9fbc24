//! Experiment driver: run a policy selector over repeated rounds and trials,
//! aggregate per-round statistics against the exact optima, and serialize
//! reports as CSV and JSON.
//!
//! Reproducibility: every random draw comes from a counter-based substream
//! keyed by `(seed, trial, round, purpose)`, so trials are independent,
//! parallelize in any order, and reproduce bit-for-bit. Two selectors run
//! with the same seed see identical environments and identical
//! policy-construction randomness, which makes their per-round statistics
//! directly comparable (identical wherever they play the same policies).

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::baselines::{baseline_for_round, BaselineFamily};
use crate::dp::{
    empirical_optimal_policy, opt_offline_value, opt_offline_value_mc, opt_online_value,
    optimal_policy, LearnerMode,
};
use crate::error::{Error, Result};
use crate::lower_bound::{policy_minus, policy_plus};
use crate::model::{DiscreteDist, Instance, OrderModel, ProfitKind, RoundRealization};
use crate::policies::{run_policy, StoppingPolicy};
use crate::rng::{substream, Purpose};
use crate::switching::{
    c_event, schedule, zeta, Chosen, Delta1Form, ScheduleConfig, ScheduleVariant, SwitchTraceRow,
};

/// Sample count for Monte Carlo value estimates, used when exact enumeration
/// would overflow its outcome cap.
pub const VALUE_MC_TRIALS: u64 = 100_000;

/// How the per-round policy is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selector {
    /// The switching meta-policy: baseline until the hold-out test fires.
    Adaptive,
    /// The configured baseline family every round.
    BaselineOnly,
    /// The empirical-optimal policy trained on the full history (a uniform
    /// random pick in round 1, before any data exists).
    LearnedOnly,
    /// Follow-the-empirical-leader over the two separation policies,
    /// counting 1s against ½s in the second coordinate (ties play the
    /// reject-½ policy). Needs a two-step instance supported on {0, ½, 1}.
    Ftl,
}

/// Partial schedule override; any field left empty resolves to the exact
/// exact worst-case value for the instance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub t0: Option<u64>,
    pub variant: Option<ScheduleVariant>,
    pub b: Option<f64>,
    pub kappa: Option<u64>,
    pub scale: Option<f64>,
    pub delta1_form: Option<Delta1Form>,
}

impl ScheduleSpec {
    /// Fill the gaps from [`ScheduleConfig::exact_for`] and validate.
    pub fn resolve(&self, instance: &Instance) -> Result<ScheduleConfig> {
        let base = ScheduleConfig::exact_for(instance);
        ScheduleConfig::new(
            self.t0.unwrap_or(base.t0),
            self.variant.unwrap_or(base.variant),
            self.b.unwrap_or(base.b),
            self.kappa.unwrap_or(base.kappa),
            self.scale.unwrap_or(base.scale),
            self.delta1_form.unwrap_or(base.delta1_form),
        )
    }
}

fn default_family() -> BaselineFamily {
    BaselineFamily::ProphetSingleSample
}

fn default_learner() -> LearnerMode {
    LearnerMode::MarginalDp
}

/// A complete experiment description, deserializable from JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: Instance,
    /// Number of rounds per trial.
    #[serde(rename = "T")]
    pub t_rounds: u64,
    /// Independent repetitions of the whole round sequence.
    pub trials: u64,
    pub seed: u64,
    pub selector: Selector,
    #[serde(default = "default_family")]
    pub family: BaselineFamily,
    #[serde(default = "default_learner")]
    pub learner: LearnerMode,
    #[serde(default)]
    pub schedule: ScheduleSpec,
    /// Optional CSV destination; the CLI writes per-round rows there and the
    /// summary to stdout (without it, rows go to stdout and the summary to
    /// stderr).
    #[serde(default)]
    pub output: Option<String>,
}

impl ExperimentConfig {
    /// Validate and resolve the schedule this experiment will run under.
    pub fn validate(&self) -> Result<ScheduleConfig> {
        if self.t_rounds < 1 {
            return Err(Error::InvalidConfig("an experiment needs at least one round".into()));
        }
        if self.trials < 1 {
            return Err(Error::InvalidConfig("an experiment needs at least one trial".into()));
        }
        if self.selector == Selector::Ftl {
            validate_ftl_instance(&self.instance)?;
        }
        self.schedule.resolve(&self.instance)
    }
}

fn validate_ftl_instance(instance: &Instance) -> Result<()> {
    if instance.n() != 2 {
        return Err(Error::InvalidConfig(
            "the ftl selector needs a two-step instance".into(),
        ));
    }
    if !matches!(instance.order(), OrderModel::Adversarial) {
        return Err(Error::InvalidConfig(
            "the ftl selector needs the fixed arrival order".into(),
        ));
    }
    for d in instance.dists() {
        if d.values().iter().any(|&v| v != 0.0 && v != 0.5 && v != 1.0) {
            return Err(Error::InvalidConfig(
                "the ftl selector needs distributions supported on {0, 1/2, 1}".into(),
            ));
        }
    }
    // The separation policies exist only for the two bounded profit kinds.
    policy_plus(instance.profit_kind())?;
    Ok(())
}

/// The leader rule: play the reject-½ policy iff the recorded 1s weakly
/// outnumber the recorded ½s in the second coordinate.
fn ftl_leader_policy(instance: &Instance, history: &[RoundRealization]) -> Result<StoppingPolicy> {
    let kind = instance.profit_kind();
    let mut ones = 0u64;
    let mut halves = 0u64;
    for r in history {
        if r.x[1] == 1.0 {
            ones += 1;
        } else if r.x[1] == 0.5 {
            halves += 1;
        }
    }
    if ones >= halves {
        policy_plus(kind)
    } else {
        policy_minus(kind)
    }
}

/// Incremental equivalent of [`crate::switching::adaptive_select`] for a
/// single trial's round loop.
///
/// The reference recomputes everything from scratch each round; this engine
/// caches what provably cannot change — the learned policy between training
/// growths, and per-round hold-out profits of policies that are pure
/// functions of the training rounds — and recomputes the two hold-out means
/// by the same ascending summation over the same values, so its selections
/// and trace rows equal the reference's bit for bit. The randomized
/// ski-rental baseline is estimated exactly as the reference does (a fresh
/// redraw per hold-out sample), since its draws cannot be cached.
struct AdaptiveEngine<'a> {
    instance: &'a Instance,
    family: BaselineFamily,
    cfg: &'a ScheduleConfig,
    learner: LearnerMode,
    /// Hold-out profits (shifted orientation) of the deterministic baseline,
    /// indexed like the history; unused for the randomized ski family.
    g_prof: Vec<f64>,
    /// Learned policy with the training length it was built from.
    h: Option<(usize, StoppingPolicy)>,
    /// Hold-out profits (shifted orientation) of the current learned policy.
    h_prof: Vec<f64>,
}

impl<'a> AdaptiveEngine<'a> {
    fn new(
        instance: &'a Instance,
        family: BaselineFamily,
        cfg: &'a ScheduleConfig,
        learner: LearnerMode,
    ) -> Self {
        AdaptiveEngine { instance, family, cfg, learner, g_prof: Vec::new(), h: None, h_prof: Vec::new() }
    }

    fn select<R: Rng + ?Sized>(
        &mut self,
        t: u64,
        history: &[RoundRealization],
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
        let z = zeta(t, self.cfg.t0);
        let training = &history[..(z - 1) as usize];
        let g = baseline_for_round(self.family, self.instance, z, training, policy_rng)?;
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
            return Ok(no_switch(z, None, None, g));
        }
        let sv = schedule(t, self.cfg)?;
        if z == t {
            return Ok(no_switch(z, Some(sv.eps_t), Some(sv.delta_t), g));
        }
        let kind = self.instance.profit_kind();
        let n = self.instance.n();
        let start = (z - 1) as usize;
        let holdout = &history[start..];
        let m = holdout.len() as f64;
        let g_hat = if matches!(self.family, BaselineFamily::SkiRentalRandomized) {
            let mut g_sum = 0.0;
            for s in holdout {
                let gs = baseline_for_round(self.family, self.instance, z, training, est_rng)?;
                let (_, p) = run_policy(&gs, s, kind)?;
                g_sum += kind.shifted(p, n);
            }
            g_sum / m
        } else {
            // From round 2 on, every non-ski family rebuilds the identical
            // policy from history round 1 without consuming randomness, so
            // this round's `g` stands in for each per-sample rebuild and the
            // profits can be cached.
            for i in self.g_prof.len()..history.len() {
                let (_, p) = run_policy(&g, &history[i], kind)?;
                self.g_prof.push(kind.shifted(p, n));
            }
            let g_sum: f64 = self.g_prof[start..].iter().sum();
            g_sum / m
        };
        let training_len = start;
        let stale = match &self.h {
            Some((len, _)) => *len != training_len,
            None => true,
        };
        if stale {
            let fresh = empirical_optimal_policy(training, self.instance, self.learner)?;
            let changed = self.h.as_ref().is_none_or(|(_, old)| *old != fresh);
            if changed {
                self.h_prof.clear();
            }
            self.h = Some((training_len, fresh));
        }
        let h = &self.h.as_ref().expect("learned policy built above").1;
        for i in self.h_prof.len()..history.len() {
            let (_, p) = run_policy(h, &history[i], kind)?;
            self.h_prof.push(kind.shifted(p, n));
        }
        let h_sum: f64 = self.h_prof[start..].iter().sum();
        let h_hat = h_sum / m;
        let fired = c_event(g_hat, h_hat, sv.eps_t, sv.delta_t, self.cfg.b);
        let (policy, chosen) =
            if fired { (h.clone(), Chosen::Learned) } else { (g, Chosen::Baseline) };
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
}

struct TrialOutput {
    profits: Vec<f64>,
    fired: Vec<bool>,
}

fn run_trial(cfg: &ExperimentConfig, sched: &ScheduleConfig, trial: u64) -> Result<TrialOutput> {
    let instance = &cfg.instance;
    let kind = instance.profit_kind();
    let n = instance.n();
    let rounds = cfg.t_rounds as usize;
    let mut history: Vec<RoundRealization> = Vec::with_capacity(rounds);
    let mut profits = Vec::with_capacity(rounds);
    let mut fired = Vec::with_capacity(rounds);
    let mut engine = AdaptiveEngine::new(instance, cfg.family, sched, cfg.learner);
    for t in 1..=cfg.t_rounds {
        let mut env_rng = substream(cfg.seed, trial, t, Purpose::Env);
        let mut policy_rng = substream(cfg.seed, trial, t, Purpose::Policy);
        let mut est_rng = substream(cfg.seed, trial, t, Purpose::Estimate);
        let round = instance.sample_round(&mut env_rng);
        let (policy, did_fire) = match cfg.selector {
            Selector::BaselineOnly => {
                (baseline_for_round(cfg.family, instance, t, &history, &mut policy_rng)?, false)
            }
            Selector::Adaptive => {
                let (p, row) = engine.select(t, &history, &mut policy_rng, &mut est_rng)?;
                (p, row.c_fired)
            }
            Selector::LearnedOnly => {
                if t == 1 {
                    let chosen = policy_rng.random_range(1..=n);
                    (StoppingPolicy::UniformPick { chosen }, false)
                } else {
                    (empirical_optimal_policy(&history, instance, cfg.learner)?, false)
                }
            }
            Selector::Ftl => (ftl_leader_policy(instance, &history)?, false),
        };
        let (_, p) = run_policy(&policy, &round, kind)?;
        profits.push(p);
        fired.push(did_fire);
        history.push(round);
    }
    Ok(TrialOutput { profits, fired })
}

/// A benchmark value and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum ValueEstimate {
    Exact { value: f64 },
    MonteCarlo { value: f64, stderr: f64, trials: u64 },
}

impl ValueEstimate {
    pub fn value(&self) -> f64 {
        match self {
            ValueEstimate::Exact { value } => *value,
            ValueEstimate::MonteCarlo { value, .. } => *value,
        }
    }
}

/// Monte Carlo `(mean, standard error)` of a policy's raw per-round profit.
pub fn policy_value_mc<R: Rng + ?Sized>(
    policy: &StoppingPolicy,
    instance: &Instance,
    trials: u64,
    rng: &mut R,
) -> Result<(f64, f64)> {
    let kind = instance.profit_kind();
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..trials {
        let r = instance.sample_round(rng);
        let (_, p) = run_policy(policy, &r, kind)?;
        sum += p;
        sumsq += p * p;
    }
    let t = trials as f64;
    let mean = sum / t;
    let var = ((sumsq - t * mean * mean) / (t - 1.0)).max(0.0);
    Ok((mean, (var / t).sqrt()))
}

/// The exact optimal online value where enumeration is feasible; for a fixed
/// arrival order whose outcome space overflows the cap, a Monte Carlo
/// estimate of the exactly computed optimal policy. `None` when the order is
/// not fixed and the history tree overflows — there is then no optimal
/// policy to estimate, and regret columns are reported as NaN.
fn online_estimate(instance: &Instance, seed: u64) -> Result<Option<ValueEstimate>> {
    match opt_online_value(instance) {
        Ok(v) => Ok(Some(ValueEstimate::Exact { value: v })),
        Err(Error::CapExceeded(_)) => {
            if matches!(instance.order(), OrderModel::Adversarial) {
                let policy = optimal_policy(instance)?;
                let mut rng = substream(seed, u64::MAX, 0, Purpose::Env);
                let (value, stderr) =
                    policy_value_mc(&policy, instance, VALUE_MC_TRIALS, &mut rng)?;
                Ok(Some(ValueEstimate::MonteCarlo { value, stderr, trials: VALUE_MC_TRIALS }))
            } else {
                Ok(None)
            }
        }
        Err(e) => Err(e),
    }
}

fn offline_estimate(instance: &Instance, seed: u64) -> Result<ValueEstimate> {
    match opt_offline_value(instance) {
        Ok(v) => Ok(ValueEstimate::Exact { value: v }),
        Err(Error::CapExceeded(_)) => {
            let mut rng = substream(seed, u64::MAX, 1, Purpose::Env);
            let (value, stderr) = opt_offline_value_mc(instance, VALUE_MC_TRIALS, &mut rng);
            Ok(ValueEstimate::MonteCarlo { value, stderr, trials: VALUE_MC_TRIALS })
        }
        Err(e) => Err(e),
    }
}

/// Cross-trial statistics for one round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundStats {
    pub t: u64,
    /// Mean realized profit (cost, for ski rental) across trials.
    pub mean_profit: f64,
    /// Standard error of that mean; 0 with a single trial.
    pub stderr: f64,
    /// `mean_profit / opt_offline` in both orientations: at most 1 is good
    /// for profits, at least 1 for costs.
    pub comp_ratio: f64,
    /// Cumulative regret against the optimal online value: sums of
    /// `opt_online − mean` for profits and `mean − opt_online` for costs.
    pub cum_regret: f64,
    /// Fraction of trials whose switch test fired this round.
    pub switch_rate: f64,
}

/// Everything an experiment produced.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config: ExperimentConfig,
    /// The fully resolved schedule the run used.
    pub schedule: ScheduleConfig,
    pub opt_online: Option<ValueEstimate>,
    pub opt_offline: ValueEstimate,
    pub rounds: Vec<RoundStats>,
    /// Total switch-test firings over all rounds and trials.
    pub switch_fired_total: u64,
}

impl Report {
    /// Cumulative regret after the final round.
    pub fn final_regret(&self) -> f64 {
        self.rounds.last().map_or(0.0, |r| r.cum_regret)
    }

    /// The one-object summary printed next to the CSV table.
    pub fn summary_json(&self, fitted_exponent: Option<f64>) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        m.insert(
            "opt_online".into(),
            match &self.opt_online {
                Some(v) => json!(v.value()),
                None => serde_json::Value::Null,
            },
        );
        m.insert("opt_offline".into(), json!(self.opt_offline.value()));
        m.insert("T".into(), json!(self.config.t_rounds));
        m.insert("trials".into(), json!(self.config.trials));
        m.insert("seed".into(), json!(self.config.seed));
        m.insert(
            "selector".into(),
            serde_json::to_value(self.config.selector).expect("selector serializes"),
        );
        m.insert("scale".into(), json!(self.schedule.scale));
        m.insert("final_regret".into(), json!(self.final_regret()));
        if let Some(e) = fitted_exponent {
            m.insert("fitted_exponent".into(), json!(e));
        }
        serde_json::Value::Object(m)
    }

    /// Write the per-round table: a fixed header then one row per round,
    /// floats at 12 significant digits.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "t,mean_profit,stderr,comp_ratio,cum_regret,switch_rate")?;
        for r in &self.rounds {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.t,
                format_sig12(r.mean_profit),
                format_sig12(r.stderr),
                format_sig12(r.comp_ratio),
                format_sig12(r.cum_regret),
                format_sig12(r.switch_rate),
            )?;
        }
        Ok(())
    }
}

/// Format with 12 significant digits (fixed-point, so columns align and
/// small schedule quantities keep their precision).
pub fn format_sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v:.11}");
    }
    let decimals = (11 - v.abs().log10().floor() as i64).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Run the configured experiment: `trials` independent sequences of
/// `T` rounds, reduced to per-round statistics.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    let sched = cfg.validate()?;
    let results: Vec<TrialOutput> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_trial(cfg, &sched, trial))
        .collect::<Result<Vec<_>>>()?;
    let opt_online = online_estimate(&cfg.instance, cfg.seed)?;
    let opt_offline = offline_estimate(&cfg.instance, cfg.seed)?;
    let on = opt_online.as_ref().map_or(f64::NAN, |v| v.value());
    let off = opt_offline.value();
    let is_cost = cfg.instance.profit_kind().is_cost();
    let trials_f = cfg.trials as f64;
    let mut rounds = Vec::with_capacity(cfg.t_rounds as usize);
    let mut cum = 0.0;
    let mut fired_total = 0u64;
    for ti in 0..cfg.t_rounds as usize {
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        let mut nf = 0u64;
        for tr in &results {
            let p = tr.profits[ti];
            sum += p;
            sumsq += p * p;
            if tr.fired[ti] {
                nf += 1;
            }
        }
        let mean = sum / trials_f;
        let stderr = if cfg.trials > 1 {
            (((sumsq - trials_f * mean * mean) / (trials_f - 1.0)).max(0.0) / trials_f).sqrt()
        } else {
            0.0
        };
        cum += if is_cost { mean - on } else { on - mean };
        fired_total += nf;
        rounds.push(RoundStats {
            t: (ti + 1) as u64,
            mean_profit: mean,
            stderr,
            comp_ratio: mean / off,
            cum_regret: cum,
            switch_rate: nf as f64 / trials_f,
        });
    }
    Ok(Report {
        config: cfg.clone(),
        schedule: sched,
        opt_online,
        opt_offline,
        rounds,
        switch_fired_total: fired_total,
    })
}

/// A fitted power law through regret measurements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentFit {
    /// Least-squares slope of `ln regret` against `ln T`.
    pub exponent: f64,
    /// Points that entered the fit.
    pub used: usize,
    /// Points dropped for non-positive regret (their logarithm is undefined).
    pub dropped: usize,
}

/// Fit `regret ≈ c·T^a` through `(T, regret)` points by least squares in
/// log–log space. Needs at least three input points and two positive ones.
pub fn fit_regret_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::ContractViolation(format!(
            "an exponent fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    let kept: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(t, r)| t > 0.0 && r > 0.0 && t.is_finite() && r.is_finite())
        .collect();
    let dropped = points.len() - kept.len();
    if kept.len() < 2 {
        return Err(Error::ContractViolation(
            "an exponent fit needs at least 2 positive points".into(),
        ));
    }
    let m = kept.len() as f64;
    let xs: Vec<f64> = kept.iter().map(|&(t, _)| t.ln()).collect();
    let ys: Vec<f64> = kept.iter().map(|&(_, r)| r.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - xbar) * (y - ybar);
        den += (x - xbar) * (x - xbar);
    }
    if den == 0.0 {
        return Err(Error::ContractViolation(
            "an exponent fit needs at least two distinct horizons".into(),
        ));
    }
    Ok(ExponentFit { exponent: num / den, used: kept.len(), dropped })
}

/// Draw a small random fixed-order instance for cross-validation batteries:
/// dimension up to `max_n`, supports up to `max_atoms` points on a 1/20
/// grid (Bernoulli marginals for last-success, a random rent bound for ski
/// rental).
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    kind: ProfitKind,
    max_n: usize,
    max_atoms: usize,
) -> Result<Instance> {
    let n = rng.random_range(1..=max_n);
    let kind = match kind {
        ProfitKind::SkiRental { .. } => {
            ProfitKind::SkiRental { b: rng.random_range(2..=40) as f64 / 20.0 }
        }
        other => other,
    };
    let mut dists = Vec::with_capacity(n);
    for _ in 0..n {
        if matches!(kind, ProfitKind::LastSuccess) {
            dists.push(DiscreteDist::bernoulli(rng.random_range(1..=19) as f64 / 20.0)?);
            continue;
        }
        let atoms = rng.random_range(1..=max_atoms);
        let mut values = Vec::with_capacity(atoms);
        while values.len() < atoms {
            let v = rng.random_range(0..=20) as f64 / 20.0;
            if !values.contains(&v) {
                values.push(v);
            }
        }
        values.sort_by(|a: &f64, b: &f64| a.partial_cmp(b).expect("finite grid values"));
        let weights: Vec<f64> = (0..atoms).map(|_| rng.random::<f64>() + 0.05).collect();
        let total: f64 = weights.iter().sum();
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        dists.push(DiscreteDist::new(values, probs)?);
    }
    Instance::new(dists, OrderModel::Adversarial, kind)
}
