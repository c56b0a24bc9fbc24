//! Exact optimal online policies and values.
//!
//! Under a fixed (identity) arrival order every profit kind here admits an
//! optimal policy of threshold form, computable by backward induction with a
//! small sufficient statistic instead of full value histories:
//!
//! - **Reward** — continuation values `V_{n+1} = 0`, `V_i = E[max(X_i,
//!   V_{i+1})]`; accept at step `i` iff `x_i ≥ V_{i+1}`.
//! - **BestChoice** — state is the running maximum `m` (on the union of
//!   supports): accept a running max `v` iff the probability that all later
//!   values stay ≤ `v` (`A_i(v) = Π_{j>i} F_j(v)`) is at least the optimal
//!   continuation win probability `W_{i+1}(v)`. `A_i` is nondecreasing and
//!   `W_{i+1}` nonincreasing in `v`, so the accept set is an upward-closed
//!   threshold set; rejecting a non-running-max is always optimal, giving an
//!   *essentially threshold* policy.
//! - **LastSuccess** — no state: accept a success at `i` iff the probability
//!   of no later success `A_i = Π_{j>i}(1−p_j)` is at least the continuation
//!   win probability `W_{i+1}`.
//! - **SkiRental** — remaining-cost recursion `C_{n+1} = 0`, `C_i = E[min(b,
//!   X_i + C_{i+1})]`; buying at `i` costs `b` while continuing costs `x_i +
//!   C_{i+1}` in expectation (the observed rent is paid only when *not*
//!   stopping at `i`), so buy iff `x_i ≥ b − C_{i+1}`.
//!
//! For arbitrary order models [`brute_force_online`] computes the exact
//! optimum by backward induction over the complete observation-history tree —
//! it is the oracle the threshold constructions are validated against.
//!
//! [`empirical_optimal_policy`] is the learner: it rebuilds the threshold
//! optimum from empirical marginals (`MarginalDp`), or exhaustively maximizes
//! the empirical mean over all sample-distinguishable threshold policies
//! (`JointExhaustive`, an oracle for small cases).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    for_each_value_tuple, offline_best, profit, DiscreteDist, Instance, OrderModel, ProfitKind,
    RoundRealization,
};
use crate::policies::{
    candidate_levels, empirical_value, exact_policy_value, StepRule, StoppingPolicy,
    ThresholdPolicy, DEFAULT_OUTCOME_CAP,
};

/// Default cap on brute-force history-tree nodes.
pub const DEFAULT_NODE_CAP: u64 = 100_000;

// --- backward induction under a fixed order ---------------------------------

/// Acceptance/continuation tables from one backward-induction pass, with the
/// thresholds derived from their crossing.
#[derive(Debug, Clone)]
pub struct ValueTables {
    /// `thresholds[i]`: the acceptance rule at step `i+1`.
    pub thresholds: Vec<StepRule>,
    /// `alpha[i]`: value of accepting at step `i+1`, per state grid point
    /// (see `grid[i]`).
    pub alpha: Vec<Vec<f64>>,
    /// `beta[i]`: value of continuing optimally past step `i+1`, aligned with
    /// `alpha[i]`.
    pub beta: Vec<Vec<f64>>,
    /// The evaluation points of `alpha[i]`/`beta[i]`: observed values (reward,
    /// ski), the running-max grid (best-choice), or a singleton (last-success).
    pub grid: Vec<Vec<f64>>,
    /// Expected profit of the derived policy (expected *cost* for ski rental).
    pub value: f64,
    /// Whether acceptance additionally requires the value to be a running
    /// maximum (best-choice).
    pub essentially: bool,
    /// Cost orientation: accept when `alpha ≤ beta` instead of `alpha ≥ beta`.
    pub cost: bool,
}

impl ValueTables {
    /// The derived optimal stopping policy.
    pub fn policy(&self) -> StoppingPolicy {
        let inner = ThresholdPolicy::PerStep(self.thresholds.clone());
        if self.essentially {
            StoppingPolicy::EssentiallyThreshold { inner }
        } else {
            StoppingPolicy::Threshold(inner)
        }
    }
}

fn require_fixed_order(instance: &Instance) -> Result<()> {
    if instance.order() != &OrderModel::Adversarial {
        return Err(Error::UnsupportedOrder(
            "backward induction needs a fixed (identity) arrival order; \
             use brute_force_online for other order models"
            .into(),
        ));
    }
    Ok(())
}

/// Backward-induction tables for a fixed-order instance.
pub fn value_tables(instance: &Instance) -> Result<ValueTables> {
    require_fixed_order(instance)?;
    Ok(match instance.profit_kind() {
        ProfitKind::Reward => reward_tables(instance),
        ProfitKind::BestChoice => best_choice_tables(instance),
        ProfitKind::LastSuccess => last_success_tables(instance),
        ProfitKind::SkiRental { b } => ski_rental_tables(instance, b),
    })
}

/// The optimal online policy of a fixed-order instance, in threshold form.
pub fn optimal_policy(instance: &Instance) -> Result<StoppingPolicy> {
    value_tables(instance).map(|t| t.policy())
}

/// Exact optimal online value: the exact value of the threshold optimum under
/// a fixed order, or the brute-force tree value for other order models.
pub fn opt_online_value(instance: &Instance) -> Result<f64> {
    if instance.order() == &OrderModel::Adversarial {
        let policy = optimal_policy(instance)?;
        exact_policy_value(&policy, instance)
    } else {
        brute_force_online(instance).map(|b| b.value)
    }
}

fn reward_tables(instance: &Instance) -> ValueTables {
    let n = instance.n();
    let mut thresholds = vec![StepRule::never(); n];
    let mut alpha = vec![Vec::new(); n];
    let mut beta = vec![Vec::new(); n];
    let mut grid = vec![Vec::new(); n];
    let mut v_next = 0.0; // V_{i+1}, walking i = n..1
    for i in (0..n).rev() {
        let d = &instance.dists()[i];
        // Accepting earns the value itself; continuing earns V_{i+1}.
        grid[i] = d.values().to_vec();
        alpha[i] = d.values().to_vec();
        beta[i] = vec![v_next; d.support_size()];
        thresholds[i] = StepRule { level: v_next, accept_on_equal: true };
        v_next = d.atoms().map(|(v, p)| p * v.max(v_next)).sum();
    }
    ValueTables { thresholds, alpha, beta, grid, value: v_next, essentially: false, cost: false }
}

fn best_choice_tables(instance: &Instance) -> ValueTables {
    let n = instance.n();
    // Running-max grid: all support values plus the "nothing yet" state 0
    // (values live in [0,1], so an empty history behaves like a running max
    // of 0, and stopping nowhere wins exactly from the all-zero state).
    let mut grid_vals: Vec<f64> = instance
        .dists()
        .iter()
        .flat_map(|d| d.values().iter().copied())
        .chain(std::iter::once(0.0))
        .collect();
    grid_vals.sort_by(|a, b| a.partial_cmp(b).expect("finite support"));
    grid_vals.dedup();
    let g = grid_vals.len();
    let gidx = |v: f64| -> usize {
        grid_vals.binary_search_by(|x| x.partial_cmp(&v).expect("finite")).expect("on-grid value")
    };

    // W_{n+1}(m) = 1 iff m = 0 (stopping nowhere wins only when all values
    // were 0, i.e. the running max never left 0).
    let mut w_next: Vec<f64> = grid_vals.iter().map(|&m| if m == 0.0 { 1.0 } else { 0.0 }).collect();
    let mut thresholds = vec![StepRule::never(); n];
    let mut alpha = vec![Vec::new(); n];
    let mut beta = vec![Vec::new(); n];
    let mut grid = vec![Vec::new(); n];
    // Suffix products A_i(v) = Π_{j>i} F_j(v), built back to front.
    let mut a: Vec<f64> = vec![1.0; g];

    for i in (0..n).rev() {
        let d = &instance.dists()[i];
        // Acceptance/continuation tables at this step, on the full grid.
        alpha[i] = a.clone();
        beta[i] = w_next.clone();
        grid[i] = grid_vals.clone();
        // Threshold: the smallest support value v with A_i(v) ≥ W_{i+1}(v).
        // A_i is nondecreasing and W_{i+1} nonincreasing in v, so the accept
        // set is upward-closed on the grid.
        let mut level = f64::INFINITY;
        for &v in d.values() {
            let j = gidx(v);
            if a[j] >= w_next[j] {
                level = v;
                break;
            }
        }
        thresholds[i] =
            if level.is_finite() { StepRule { level, accept_on_equal: true } } else { StepRule::never() };
        debug_assert!(
            d.values().iter().all(|&v| {
                let j = gidx(v);
                thresholds[i].accepts(v) == (a[j] >= w_next[j])
            }),
            "best-choice accept set must be threshold-shaped"
        );

        // W_i(m) = Σ_{v ≥ m} P(v)·max(A_i(v), W_{i+1}(v)) + P(v<m)·W_{i+1}(m).
        let w_i: Vec<f64> = grid_vals
            .iter()
            .enumerate()
            .map(|(mj, &m)| {
                let mut acc = 0.0;
                for (v, p) in d.atoms() {
                    if v >= m {
                        let j = gidx(v);
                        acc += p * a[j].max(w_next[j]);
                    } else {
                        acc += p * w_next[mj];
                    }
                }
                acc
            })
            .collect();
        w_next = w_i;
        // Fold this step's cdf into the suffix products for step i-1.
        for (j, &v) in grid_vals.iter().enumerate() {
            a[j] *= d.cdf(v);
        }
    }

    let value = w_next[gidx(0.0)];
    ValueTables { thresholds, alpha, beta, grid, value, essentially: true, cost: false }
}

fn last_success_tables(instance: &Instance) -> ValueTables {
    let n = instance.n();
    let p: Vec<f64> = instance.dists().iter().map(|d| d.prob_one()).collect();
    let mut thresholds = vec![StepRule::never(); n];
    let mut alpha = vec![Vec::new(); n];
    let mut beta = vec![Vec::new(); n];
    let mut grid = vec![Vec::new(); n];
    let mut w_next = 0.0f64; // W_{i+1}
    let mut a_next = 1.0f64; // Π_{j>i}(1-p_j), built back to front
    for i in (0..n).rev() {
        let a_i = a_next;
        alpha[i] = vec![a_i];
        beta[i] = vec![w_next];
        grid[i] = vec![1.0];
        // Accept a success iff no-later-success is at least as likely as the
        // optimal continuation win probability. Zeros are never accepted
        // (their win probability is 0 and continuing never hurts).
        thresholds[i] = if a_i >= w_next {
            StepRule { level: 1.0, accept_on_equal: true }
        } else {
            StepRule::never()
        };
        w_next = p[i] * a_i.max(w_next) + (1.0 - p[i]) * w_next;
        a_next *= 1.0 - p[i];
    }
    ValueTables { thresholds, alpha, beta, grid, value: w_next, essentially: false, cost: false }
}

fn ski_rental_tables(instance: &Instance, b: f64) -> ValueTables {
    let n = instance.n();
    let mut thresholds = vec![StepRule::never(); n];
    let mut alpha = vec![Vec::new(); n];
    let mut beta = vec![Vec::new(); n];
    let mut grid = vec![Vec::new(); n];
    let mut c_next = 0.0; // C_{i+1}
    for i in (0..n).rev() {
        let d = &instance.dists()[i];
        grid[i] = d.values().to_vec();
        // Buying now costs b; continuing costs the observed rent plus C_{i+1}.
        alpha[i] = vec![b; d.support_size()];
        beta[i] = d.values().iter().map(|&v| v + c_next).collect();
        let level = b - c_next;
        thresholds[i] = if level <= 0.0 {
            StepRule { level: 0.0, accept_on_equal: true }
        } else if level > 1.0 {
            StepRule::never()
        } else {
            StepRule { level, accept_on_equal: true }
        };
        c_next = d.atoms().map(|(v, p)| p * b.min(v + c_next)).sum();
    }
    ValueTables { thresholds, alpha, beta, grid, value: c_next, essentially: false, cost: true }
}

// --- offline optimum --------------------------------------------------------

/// Exact expected clairvoyant profit (minimum cost for ski rental), by full
/// enumeration under the default cap.
pub fn opt_offline_value(instance: &Instance) -> Result<f64> {
    opt_offline_value_capped(instance, DEFAULT_OUTCOME_CAP)
}

/// Exact offline optimum with an explicit outcome cap; exceeding it is a
/// typed refusal (callers fall back to [`opt_offline_value_mc`]).
pub fn opt_offline_value_capped(instance: &Instance, cap: u64) -> Result<f64> {
    let n = instance.n();
    let total = instance.outcome_count().unwrap_or(u64::MAX);
    if total > cap {
        return Err(Error::CapExceeded(format!(
            "{total} outcomes exceed the cap of {cap} for the exact offline optimum"
        )));
    }
    let perms = instance.order().perms(n, cap)?;
    let kind = instance.profit_kind();
    let mut value = 0.0;
    let mut x = vec![0.0; n];
    for (perm, perm_p) in &perms {
        if *perm_p == 0.0 {
            continue;
        }
        for_each_value_tuple(instance.dists(), |y, p| {
            for (i, &k) in perm.iter().enumerate() {
                x[i] = y[k];
            }
            value += perm_p * p * offline_best(kind, &x).1;
            Ok(())
        })?;
    }
    Ok(value)
}

/// Monte Carlo estimate of the offline optimum: `(mean, standard error)` over
/// `trials` sampled rounds.
pub fn opt_offline_value_mc<R: rand::Rng + ?Sized>(
    instance: &Instance,
    trials: u64,
    rng: &mut R,
) -> (f64, f64) {
    let kind = instance.profit_kind();
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..trials {
        let r = instance.sample_round(rng);
        let p = offline_best(kind, &r.x).1;
        sum += p;
        sumsq += p * p;
    }
    let t = trials as f64;
    let mean = sum / t;
    let var = ((sumsq - t * mean * mean) / (t - 1.0)).max(0.0);
    (mean, (var / t).sqrt())
}

// --- brute-force history-tree oracle ----------------------------------------

/// What the optimal online player does after one more observation: the exact
/// accept/continue values and the chosen action, with the subtree reached by
/// continuing.
#[derive(Debug, Clone)]
pub struct DecisionNode {
    /// Expected profit of stopping here, given everything observed.
    pub alpha: f64,
    /// Expected profit of continuing optimally.
    pub beta: f64,
    /// The optimal action (ties accept).
    pub accept: bool,
    /// Branches after the next observation; `None` at the final step.
    pub next: Option<DecisionTree>,
}

/// Branches of the history tree before the next observation, keyed by
/// (arriving distribution index, observed value).
#[derive(Debug, Clone, Default)]
pub struct DecisionTree {
    pub children: Vec<(usize, f64, DecisionNode)>,
}

/// Exact optimal online value plus the full decision tree.
#[derive(Debug, Clone)]
pub struct BruteForce {
    pub value: f64,
    pub tree: DecisionTree,
}

/// Exact optimal online play for **any** order model, by backward induction
/// over the complete observation-history tree with pointwise accept/continue
/// decisions; the default node cap is [`DEFAULT_NODE_CAP`].
pub fn brute_force_online(instance: &Instance) -> Result<BruteForce> {
    brute_force_online_capped(instance, DEFAULT_NODE_CAP)
}

/// [`brute_force_online`] with an explicit cap on decision nodes.
pub fn brute_force_online_capped(instance: &Instance, cap: u64) -> Result<BruteForce> {
    let mut ctx = BruteCtx { instance, nodes: 0, cap };
    let mut x = Vec::with_capacity(instance.n());
    let mut tau = Vec::with_capacity(instance.n());
    let (value, tree) = expand(&mut ctx, &mut x, &mut tau)?;
    Ok(BruteForce { value, tree })
}

struct BruteCtx<'a> {
    instance: &'a Instance,
    nodes: u64,
    cap: u64,
}

/// Conditional distribution of the next arriving distribution index, given
/// the arrival prefix.
fn next_arrivals(order: &OrderModel, tau: &[usize], n: usize) -> Vec<(usize, f64)> {
    let i = tau.len();
    match order {
        OrderModel::Adversarial => vec![(i, 1.0)],
        OrderModel::RandomOrder => {
            let w = 1.0 / (n - i) as f64;
            (0..n).filter(|k| !tau.contains(k)).map(|k| (k, w)).collect()
        }
        OrderModel::Explicit(ps) => {
            let mut weights = vec![0.0; n];
            let mut total = 0.0;
            for p in ps {
                if p.perm().starts_with(tau) && p.prob() > 0.0 {
                    weights[p.perm()[i]] += p.prob();
                    total += p.prob();
                }
            }
            (0..n).filter(|&k| weights[k] > 0.0).map(|k| (k, weights[k] / total)).collect()
        }
    }
}

/// Expected profit of stopping at the current (last observed) step, averaged
/// over the values of the distributions that have not arrived yet. The profit
/// kinds here depend on the unseen values only through their multiset, so the
/// completion can be laid out in any fixed order.
fn accept_value(instance: &Instance, x: &[f64], tau: &[usize]) -> Result<f64> {
    let i = x.len(); // stopping index, 1-based
    let n = instance.n();
    let kind = instance.profit_kind();
    let remaining: Vec<&DiscreteDist> =
        (0..n).filter(|k| !tau.contains(k)).map(|k| &instance.dists()[k]).collect();
    if remaining.is_empty() {
        return profit(kind, x, i);
    }
    let mut full = x.to_vec();
    full.resize(n, 0.0);
    let mut acc = 0.0;
    for_each_value_tuple(&remaining, |ys, p| {
        full[i..].copy_from_slice(ys);
        acc += p * profit(kind, &full, i)?;
        Ok(())
    })?;
    Ok(acc)
}

/// Value of being about to receive observation `tau.len()+1` with history
/// `(x, tau)`, plus the subtree of decisions.
fn expand(ctx: &mut BruteCtx, x: &mut Vec<f64>, tau: &mut Vec<usize>) -> Result<(f64, DecisionTree)> {
    let inst = ctx.instance;
    let n = inst.n();
    let cost = inst.profit_kind().is_cost();
    let mut tree = DecisionTree::default();
    let mut value = 0.0;
    for (k, pk) in next_arrivals(inst.order(), tau, n) {
        let atoms: Vec<(f64, f64)> = inst.dists()[k].atoms().collect();
        for (v, pv) in atoms {
            if pv == 0.0 {
                continue;
            }
            ctx.nodes += 1;
            if ctx.nodes > ctx.cap {
                return Err(Error::CapExceeded(format!(
                    "history tree exceeds {} decision nodes",
                    ctx.cap
                )));
            }
            x.push(v);
            tau.push(k);
            let alpha = accept_value(inst, x, tau)?;
            let (beta, next) = if x.len() == n {
                // Continuing past the last step means stopping nowhere.
                (profit(inst.profit_kind(), x, n + 1)?, None)
            } else {
                let (b, t) = expand(ctx, x, tau)?;
                (b, Some(t))
            };
            x.pop();
            tau.pop();
            let accept = if cost { alpha <= beta } else { alpha >= beta };
            let node_value = if cost { alpha.min(beta) } else { alpha.max(beta) };
            value += pk * pv * node_value;
            tree.children.push((k, v, DecisionNode { alpha, beta, accept, next }));
        }
    }
    Ok((value, tree))
}

// --- empirically optimal policies -------------------------------------------

/// How the learned policy is computed from samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnerMode {
    /// Backward induction on per-coordinate empirical marginals (pooled across
    /// coordinates when the instance is flagged i.i.d.). The default.
    MarginalDp,
    /// Exhaustive argmax of the empirical mean over every threshold policy the
    /// samples can distinguish (per-step candidate levels = distinct observed
    /// values plus "never"). Exact on its own objective, exponential in `n`;
    /// used as an oracle on small cases.
    JointExhaustive,
}

/// Per-coordinate empirical distributions of a sample set (observed arrival
/// position `i` ↔ distribution `i` under the fixed identity order).
fn empirical_marginals(samples: &[RoundRealization], shape: &Instance) -> Result<Vec<DiscreteDist>> {
    let n = shape.n();
    let from_values = |vals: &mut Vec<f64>| -> Result<DiscreteDist> {
        vals.sort_by(|a, b| a.partial_cmp(b).expect("finite sample values"));
        let total = vals.len() as f64;
        // Integer occurrence counts, so probabilities are exact ratios
        // (reproducible regardless of how the counting is organized).
        let mut support: Vec<f64> = Vec::new();
        let mut counts: Vec<u64> = Vec::new();
        for &v in vals.iter() {
            if support.last() == Some(&v) {
                *counts.last_mut().expect("parallel") += 1;
            } else {
                support.push(v);
                counts.push(1);
            }
        }
        let probs = counts.into_iter().map(|c| c as f64 / total).collect();
        DiscreteDist::new(support, probs)
    };
    if shape.iid() {
        let mut pooled: Vec<f64> = samples.iter().flat_map(|r| r.x.iter().copied()).collect();
        let d = from_values(&mut pooled)?;
        Ok(vec![d; n])
    } else {
        (0..n)
            .map(|i| {
                let mut vals: Vec<f64> = samples.iter().map(|r| r.x[i]).collect();
                from_values(&mut vals)
            })
            .collect()
    }
}

/// The policy a learner extracts from recorded rounds: the threshold optimum
/// of the empirical instance (`MarginalDp`), or the exact empirical argmax
/// over sample-distinguishable threshold policies (`JointExhaustive`).
///
/// `shape` supplies the dimension, profit kind, and i.i.d. flag; its
/// distributions are *not* consulted. Requires a fixed arrival order and a
/// nonempty sample set.
pub fn empirical_optimal_policy(
    samples: &[RoundRealization],
    shape: &Instance,
    mode: LearnerMode,
) -> Result<StoppingPolicy> {
    if samples.is_empty() {
        return Err(Error::ContractViolation("learning from an empty sample set".into()));
    }
    require_fixed_order(shape)?;
    let n = shape.n();
    if samples.iter().any(|r| r.x.len() != n) {
        return Err(Error::ContractViolation("sample rounds must share the instance dimension".into()));
    }
    match mode {
        LearnerMode::MarginalDp => {
            let dists = empirical_marginals(samples, shape)?;
            let emp = Instance::new(dists, OrderModel::Adversarial, shape.profit_kind())?;
            optimal_policy(&emp)
        }
        LearnerMode::JointExhaustive => joint_exhaustive(samples, shape),
    }
}

fn joint_exhaustive(samples: &[RoundRealization], shape: &Instance) -> Result<StoppingPolicy> {
    let n = shape.n();
    let kind = shape.profit_kind();
    let essentially = matches!(kind, ProfitKind::BestChoice);
    let candidates: Vec<Vec<StepRule>> = (0..n)
        .map(|i| {
            let observed: Vec<f64> = samples.iter().map(|r| r.x[i]).collect();
            candidate_levels(&observed)
        })
        .collect();
    let total: u64 = candidates.iter().try_fold(1u64, |acc, c| {
        acc.checked_mul(c.len() as u64).filter(|&t| t <= DEFAULT_OUTCOME_CAP)
    }).ok_or_else(|| {
        Error::CapExceeded(format!(
            "exhaustive search over {} per-step candidates exceeds {DEFAULT_OUTCOME_CAP} policies",
            candidates.iter().map(|c| c.len().to_string()).collect::<Vec<_>>().join("×")
        ))
    })?;
    let _ = total;

    let build = |rules: Vec<StepRule>| -> StoppingPolicy {
        let inner = ThresholdPolicy::PerStep(rules);
        if essentially {
            StoppingPolicy::EssentiallyThreshold { inner }
        } else {
            StoppingPolicy::Threshold(inner)
        }
    };

    let mut idx = vec![0usize; n];
    let mut best: Option<(f64, StoppingPolicy)> = None;
    loop {
        let rules: Vec<StepRule> = idx.iter().zip(&candidates).map(|(&j, c)| c[j]).collect();
        let policy = build(rules);
        let raw = empirical_value(&policy, samples, kind)?;
        // Compare in the maximize orientation (shift is affine, so the shifted
        // mean equals the mean of shifted profits).
        let score = kind.shifted(raw, n);
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, policy));
        }
        // Odometer.
        let mut k = 0;
        loop {
            if k == n {
                return Ok(best.expect("at least one candidate combination").1);
            }
            idx[k] += 1;
            if idx[k] < candidates[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
