//! Per-round competitive baseline policies built from at most one sample
//! round.
//!
//! Each family maps a round index and the recorded history to a
//! [`StoppingPolicy`] for that round. With no history yet (round 1) the
//! families fall back to a uniformly random pick, an observation-phase rule,
//! or a freshly randomized policy; from round 2 on, the sample-based families
//! compute their policy **from round 1 only**, so the policy is independent
//! of every later round — the property that makes hold-out estimates on
//! later rounds unbiased.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, ProfitKind, RoundRealization};
use crate::policies::{StepRule, StoppingPolicy, ThresholdPolicy};

/// The baseline families selectable by configuration string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaselineFamily {
    /// Flat threshold at the sample maximum; for expected-value profit.
    #[serde(rename = "prophet_ss")]
    ProphetSingleSample,
    /// The same construction, scored as best-choice under a fixed order.
    #[serde(rename = "secretary_ss")]
    AdversarialSecretarySingleSample,
    /// Round 1 plays the classical observe-then-commit rule; later rounds the
    /// single-sample threshold.
    #[serde(rename = "prophet_secretary")]
    ProphetSecretary,
    /// Gate at the sample's second-to-last success; for last-success profit.
    #[serde(rename = "last_success_ss")]
    LastSuccessOneSample,
    /// Fresh randomized buy level every round; for ski-rental cost.
    #[serde(rename = "ski_rental_rand")]
    SkiRentalRandomized,
}

impl BaselineFamily {
    /// Whether the policy for a round involves fresh internal randomness
    /// (true for the randomized ski-rental family at every round, and for
    /// every family's uniform round-1 fallback).
    pub fn randomized_at(self, t: u64) -> bool {
        match self {
            BaselineFamily::SkiRentalRandomized => true,
            BaselineFamily::ProphetSecretary => false,
            _ => t == 1,
        }
    }
}

/// Flat threshold at the sample round's maximum value, accepted on equality.
///
/// Values live in `[0, 1]`, so an all-zero sample yields level 0 and the
/// policy accepts the first live value unconditionally.
pub fn prophet_single_sample(first_round: &RoundRealization) -> ThresholdPolicy {
    let m = first_round.x.iter().copied().fold(0.0, f64::max);
    ThresholdPolicy::flat(first_round.x.len(), StepRule { level: m, accept_on_equal: true })
}

/// Identical construction to [`prophet_single_sample`]; conventionally scored
/// against the best-choice profit under a fixed arrival order.
pub fn adversarial_secretary_single_sample(first_round: &RoundRealization) -> ThresholdPolicy {
    prophet_single_sample(first_round)
}

/// Observe the first `⌊n/e⌋` values, then accept the first value at least as
/// large as everything seen in the observation phase (cutoff 0 accepts the
/// first value outright).
pub fn classical_secretary(n: usize) -> StoppingPolicy {
    let cutoff = (n as f64 / std::f64::consts::E).floor() as usize;
    StoppingPolicy::ObservationRank { cutoff }
}

/// Accept the first live success at or after the position just past the
/// sample's second-to-last success; with fewer than two sample successes,
/// accept the first live success anywhere.
pub fn last_success_one_sample(first_round: &RoundRealization) -> StoppingPolicy {
    let successes: Vec<usize> = first_round
        .x
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == 1.0)
        .map(|(i, _)| i + 1)
        .collect();
    let gate = if successes.len() >= 2 { successes[successes.len() - 2] + 1 } else { 1 };
    StoppingPolicy::IndexGate { gate }
}

/// The buy level drawn by the randomized ski-rental rule from a uniform
/// variate `u ∈ [0, 1)`: `z = b·ln(1 + u(e−1))`, which has density
/// `e^{z/b} / (b(e−1))` on `[0, b)`.
pub fn ski_level_from_uniform(b: f64, u: f64) -> f64 {
    b * (1.0 + u * (std::f64::consts::E - 1.0)).ln()
}

/// Buy once the cumulative rent exceeds a level drawn with density
/// `e^{z/b}/(b(e−1))` on `[0, b)`; re-drawn on every call.
pub fn ski_rental_randomized<R: Rng + ?Sized>(b: f64, rng: &mut R) -> StoppingPolicy {
    let u: f64 = rng.random();
    StoppingPolicy::CumulativeCost { level: ski_level_from_uniform(b, u) }
}

/// The policy a baseline family plays in round `t`, given the recorded
/// history (only round 1 is ever consulted).
///
/// Round 1 falls back to a fresh uniformly random pick, except that
/// `ProphetSecretary` plays [`classical_secretary`] and
/// `SkiRentalRandomized` plays its freshly randomized policy (as it does
/// every round). From round 2 on, each sample-based family builds its policy
/// from history round 1.
pub fn baseline_for_round<R: Rng + ?Sized>(
    family: BaselineFamily,
    instance: &Instance,
    t: u64,
    history: &[RoundRealization],
    rng: &mut R,
) -> Result<StoppingPolicy> {
    if t == 0 {
        return Err(Error::ContractViolation("round indices are 1-based".into()));
    }
    let n = instance.n();
    if let BaselineFamily::SkiRentalRandomized = family {
        let ProfitKind::SkiRental { b } = instance.profit_kind() else {
            return Err(Error::InvalidConfig(
                "the ski_rental_rand family needs a ski-rental instance".into(),
            ));
        };
        return Ok(ski_rental_randomized(b, rng));
    }
    if t == 1 {
        return Ok(match family {
            BaselineFamily::ProphetSecretary => classical_secretary(n),
            _ => StoppingPolicy::UniformPick { chosen: rng.random_range(1..=n) },
        });
    }
    let first = history.first().ok_or_else(|| {
        Error::ContractViolation("baselines for round ≥ 2 need the round-1 sample".into())
    })?;
    if first.x.len() != n {
        return Err(Error::ContractViolation("history round has the wrong dimension".into()));
    }
    Ok(match family {
        BaselineFamily::ProphetSingleSample => {
            StoppingPolicy::Threshold(prophet_single_sample(first))
        }
        BaselineFamily::AdversarialSecretarySingleSample | BaselineFamily::ProphetSecretary => {
            StoppingPolicy::Threshold(adversarial_secretary_single_sample(first))
        }
        BaselineFamily::LastSuccessOneSample => last_success_one_sample(first),
        BaselineFamily::SkiRentalRandomized => unreachable!("handled above"),
    })
}
