//! Executable stopping policies and policy-value evaluation.
//!
//! A policy scans a round's values in arrival order and decides accept/reject
//! at each step from the information seen so far; the first accept stops the
//! round (index `n+1` when nothing is accepted). All policy variants here are
//! deterministic — randomized rules (a uniform first-round pick, the ski-rental
//! level draw) are represented as distributions over these deterministic
//! policies, with the draw made by the factory that constructs them.
//!
//! Values:
//! - [`exact_policy_value`] — full enumeration of value tuples × arrival
//!   permutations (with a size cap; callers fall back to Monte Carlo).
//! - [`empirical_value`] — arithmetic mean of the policy's profit over a
//!   recorded sample set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{profit, Instance, ProfitKind, RoundRealization};

/// Default cap on exact-enumeration outcomes (value tuples × permutations).
pub const DEFAULT_OUTCOME_CAP: u64 = 1_000_000;

// --- threshold policies -----------------------------------------------------

/// One step's acceptance rule: accept value `v` iff `v > level`, or `v ==
/// level` when `accept_on_equal` is set. `level = +∞` never accepts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRule {
    #[serde(with = "level_serde")]
    pub level: f64,
    pub accept_on_equal: bool,
}

impl StepRule {
    /// A rule with a level in `[0,1]` or `+∞`.
    pub fn new(level: f64, accept_on_equal: bool) -> Result<Self> {
        if !(level.is_infinite() && level > 0.0) && !((0.0..=1.0).contains(&level)) {
            return Err(Error::InvalidPolicy(format!("threshold level {level} outside [0,1] ∪ {{∞}}")));
        }
        Ok(StepRule { level, accept_on_equal })
    }

    /// The never-accept rule.
    pub fn never() -> Self {
        StepRule { level: f64::INFINITY, accept_on_equal: false }
    }

    /// Does this rule accept value `v`?
    #[inline]
    pub fn accepts(&self, v: f64) -> bool {
        v > self.level || (self.accept_on_equal && v == self.level)
    }
}

/// JSON encoding for threshold levels: finite levels are numbers, `+∞` is the
/// string `"inf"` (JSON has no infinity literal).
mod level_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str("inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Num(f64),
            Tag(String),
        }
        match Wire::deserialize(d)? {
            Wire::Num(x) => Ok(x),
            Wire::Tag(s) if s == "inf" => Ok(f64::INFINITY),
            Wire::Tag(s) => Err(serde::de::Error::custom(format!("unknown level {s:?}"))),
        }
    }
}

/// Threshold levels addressed by the arrival-order prefix.
///
/// Under a fixed (adversarial/identity) order the prefix is determined by the
/// step number, so a flat per-step list suffices. Under other orders the level
/// may depend on which distributions have arrived: entries are keyed by the
/// arrival prefix `(tau(1),…,tau(i))`, optionally *canonicalized* to (sorted
/// set of earlier arrivals, current arrival) — sufficient under a uniformly
/// random order, where thresholds can only depend on the set seen and the
/// current arrival.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdPolicy {
    /// One rule per step, for order-oblivious prefixes.
    PerStep(Vec<StepRule>),
    /// Rules keyed by (canonicalized) arrival prefix; 0-based entries.
    ByPrefix { n: usize, canonical: bool, entries: Vec<(Vec<usize>, StepRule)> },
}

impl ThresholdPolicy {
    /// Flat policy with the same rule at every step.
    pub fn flat(n: usize, rule: StepRule) -> Self {
        ThresholdPolicy::PerStep(vec![rule; n])
    }

    /// Number of steps this policy covers.
    pub fn n(&self) -> usize {
        match self {
            ThresholdPolicy::PerStep(rules) => rules.len(),
            ThresholdPolicy::ByPrefix { n, .. } => *n,
        }
    }

    /// The rule governing step `i` (1-based) given the arrival prefix
    /// `tau[..i]`. A missing prefix entry is a contract violation — policies
    /// must cover every prefix they are run on, never silently reject.
    pub fn rule_for(&self, i: usize, tau: &[usize]) -> Result<StepRule> {
        match self {
            ThresholdPolicy::PerStep(rules) => rules.get(i - 1).copied().ok_or_else(|| {
                Error::ContractViolation(format!(
                    "step {i} beyond the {}-step threshold list",
                    rules.len()
                ))
            }),
            ThresholdPolicy::ByPrefix { canonical, entries, .. } => {
                let key = prefix_key(&tau[..i], *canonical);
                entries
                    .iter()
                    .find(|(k, _)| *k == key)
                    .map(|&(_, r)| r)
                    .ok_or_else(|| {
                        Error::ContractViolation(format!(
                            "no threshold entry for arrival prefix {key:?}"
                        ))
                    })
            }
        }
    }

    /// Validate against an instance dimension.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::InvalidPolicy(format!(
                "threshold policy covers {} steps, instance has n={n}",
                self.n()
            )));
        }
        let check = |r: &StepRule| StepRule::new(r.level, r.accept_on_equal).map(|_| ());
        match self {
            ThresholdPolicy::PerStep(rules) => rules.iter().try_for_each(check),
            ThresholdPolicy::ByPrefix { entries, .. } => {
                entries.iter().try_for_each(|(k, r)| {
                    if k.is_empty() || k.len() > n {
                        return Err(Error::InvalidPolicy(format!("prefix key {k:?} has bad length")));
                    }
                    check(r)
                })
            }
        }
    }
}

/// Canonicalized prefix key: the exact prefix, or (sorted earlier arrivals,
/// current arrival) when `canonical` is set.
pub fn prefix_key(prefix: &[usize], canonical: bool) -> Vec<usize> {
    if !canonical || prefix.len() <= 1 {
        return prefix.to_vec();
    }
    let (earlier, current) = prefix.split_at(prefix.len() - 1);
    let mut key = earlier.to_vec();
    key.sort_unstable();
    key.push(current[0]);
    key
}

// --- the policy taxonomy ----------------------------------------------------

/// An online stopping rule. Every variant is deterministic; see the module
/// docs for how randomized rules are represented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoppingPolicy {
    /// Accept the first value crossing its prefix-addressed level.
    Threshold(ThresholdPolicy),
    /// Threshold rule applied only to running maxima: a value below the
    /// running maximum of earlier values is always rejected.
    EssentiallyThreshold { inner: ThresholdPolicy },
    /// Reject the first `cutoff` values, then accept the first value ≥ their
    /// maximum (cutoff 0 accepts the first value).
    ObservationRank { cutoff: usize },
    /// Accept the first index `i ≥ gate` with value exactly 1.
    IndexGate { gate: usize },
    /// Accept the first index whose running value sum exceeds `level`.
    CumulativeCost { level: f64 },
    /// Accept exactly at step `chosen` (1-based).
    UniformPick { chosen: usize },
}

impl StoppingPolicy {
    /// Validate against an instance dimension.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            StoppingPolicy::Threshold(t) | StoppingPolicy::EssentiallyThreshold { inner: t } => {
                t.validate(n)
            }
            StoppingPolicy::ObservationRank { cutoff } => {
                if *cutoff > n {
                    Err(Error::InvalidPolicy(format!("cutoff {cutoff} exceeds n={n}")))
                } else {
                    Ok(())
                }
            }
            StoppingPolicy::IndexGate { gate } => {
                if *gate < 1 || *gate > n + 1 {
                    Err(Error::InvalidPolicy(format!("gate {gate} outside 1..={}", n + 1)))
                } else {
                    Ok(())
                }
            }
            StoppingPolicy::CumulativeCost { level } => {
                if level.is_finite() && *level >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidPolicy(format!("cumulative level {level} must be ≥ 0")))
                }
            }
            StoppingPolicy::UniformPick { chosen } => {
                if *chosen < 1 || *chosen > n {
                    Err(Error::InvalidPolicy(format!("chosen index {chosen} outside 1..={n}")))
                } else {
                    Ok(())
                }
            }
        }
    }
}

// --- running a policy -------------------------------------------------------

/// Play `policy` on one realized round: returns the 1-based stop index (or
/// `n+1` when no step accepts) and the earned profit.
pub fn run_policy(
    policy: &StoppingPolicy,
    round: &RoundRealization,
    kind: ProfitKind,
) -> Result<(usize, f64)> {
    let n = round.x.len();
    if round.tau.len() != n {
        return Err(Error::ContractViolation(format!(
            "round has {} values but {} arrival entries",
            n,
            round.tau.len()
        )));
    }
    policy.validate(n)?;
    let stop = first_accept(policy, round, n)?;
    let p = profit(kind, &round.x, stop)?;
    Ok((stop, p))
}

fn first_accept(policy: &StoppingPolicy, round: &RoundRealization, n: usize) -> Result<usize> {
    match policy {
        StoppingPolicy::Threshold(t) => {
            for i in 1..=n {
                if t.rule_for(i, &round.tau)?.accepts(round.x[i - 1]) {
                    return Ok(i);
                }
            }
            Ok(n + 1)
        }
        StoppingPolicy::EssentiallyThreshold { inner } => {
            let mut running_max = f64::NEG_INFINITY;
            for i in 1..=n {
                let v = round.x[i - 1];
                if v >= running_max && inner.rule_for(i, &round.tau)?.accepts(v) {
                    return Ok(i);
                }
                running_max = running_max.max(v);
            }
            Ok(n + 1)
        }
        StoppingPolicy::ObservationRank { cutoff } => {
            let bar = round.x[..*cutoff].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for i in cutoff + 1..=n {
                if round.x[i - 1] >= bar {
                    return Ok(i);
                }
            }
            Ok(n + 1)
        }
        StoppingPolicy::IndexGate { gate } => {
            for i in *gate..=n {
                if round.x[i - 1] == 1.0 {
                    return Ok(i);
                }
            }
            Ok(n + 1)
        }
        StoppingPolicy::CumulativeCost { level } => {
            let mut cum = 0.0;
            for i in 1..=n {
                cum += round.x[i - 1];
                if cum > *level {
                    return Ok(i);
                }
            }
            Ok(n + 1)
        }
        StoppingPolicy::UniformPick { chosen } => Ok(*chosen),
    }
}

// --- exact and empirical values ---------------------------------------------

/// Exact expected profit of a deterministic policy under the instance, by full
/// enumeration with the default outcome cap ([`DEFAULT_OUTCOME_CAP`]).
pub fn exact_policy_value(policy: &StoppingPolicy, instance: &Instance) -> Result<f64> {
    exact_policy_value_capped(policy, instance, DEFAULT_OUTCOME_CAP)
}

/// Exact expected profit with an explicit outcome cap. Exceeding the cap is a
/// typed refusal — callers that can estimate should fall back to Monte Carlo.
pub fn exact_policy_value_capped(
    policy: &StoppingPolicy,
    instance: &Instance,
    cap: u64,
) -> Result<f64> {
    let n = instance.n();
    policy.validate(n)?;
    let total = instance.outcome_count().unwrap_or(u64::MAX);
    if total > cap {
        return Err(Error::CapExceeded(format!(
            "{total} outcomes exceed the cap of {cap} for exact evaluation"
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
        crate::model::for_each_value_tuple(instance.dists(), |y, p| {
            for (i, &k) in perm.iter().enumerate() {
                x[i] = y[k];
            }
            let round = RoundRealization { x: x.clone(), tau: perm.clone() };
            let (_, pr) = run_policy(policy, &round, kind)?;
            value += perm_p * p * pr;
            Ok(())
        })?;
    }
    Ok(value)
}

/// Arithmetic mean of the policy's profit over recorded rounds.
pub fn empirical_value(
    policy: &StoppingPolicy,
    samples: &[RoundRealization],
    kind: ProfitKind,
) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::ContractViolation("empirical value of an empty sample set".into()));
    }
    let mut sum = 0.0;
    for r in samples {
        sum += run_policy(policy, r, kind)?.1;
    }
    Ok(sum / samples.len() as f64)
}

/// The distinct-behaviour threshold levels at one step induced by a sample of
/// observed values: each distinct observed value as an accept-on-equal level
/// (realizing every nonempty upward-closed accept set over the sample) plus
/// `+∞` (accept nothing). Used by the exhaustive empirical learner.
pub fn candidate_levels(observed: &[f64]) -> Vec<StepRule> {
    let mut vals: Vec<f64> = observed.to_vec();
    vals.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    vals.dedup();
    let mut out: Vec<StepRule> =
        vals.into_iter().map(|v| StepRule { level: v, accept_on_equal: true }).collect();
    out.push(StepRule::never());
    out
}
