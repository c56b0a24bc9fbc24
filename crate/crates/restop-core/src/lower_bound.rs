//! Hard instances with closed-form separations, and an exact oracle for the
//! `Ω(√T)` regret of follow-the-empirical-leader.
//!
//! The separation construction: two i.i.d. draws from a three-point
//! distribution on `{0, ½, 1}`, perturbed by `±ε` on the masses of 1 and ½.
//! Exactly two stopping policies are optimal depending on the sign — accept
//! ½ at step 1 strictly (plus) or on equality (minus) — and the value gap
//! between them has the closed forms
//!
//! - expected value: `(1/3 ∓ ε)·ε/2`,
//! - best choice: `(1/3 ∓ ε)·ε`,
//!
//! each at least `ε/12` for `ε ≤ 1/6`. Distinguishing the sign needs
//! `Ω(1/ε²)` samples, so any learner pays `Ω(√T)` total regret at
//! `ε = 1/(8√T)`; [`ftl_exact_regret`] computes that cost exactly for the
//! count-based leader rule.
//!
//! The counterexample (for single-sample baselines): a sure ½ followed by a
//! `(½+ε)`-probability 1. The sample-max baseline misreads the sample with
//! probability ½−ε and then stops on the ½ forever, losing `ε/2 − ε²` per
//! round — linear regret despite the per-round competitive guarantee.

use crate::error::{Error, Result};
use crate::model::{DiscreteDist, Instance, OrderModel, ProfitKind};
use crate::policies::{StepRule, StoppingPolicy, ThresholdPolicy};

fn require_separation_kind(kind: ProfitKind) -> Result<()> {
    match kind {
        ProfitKind::Reward | ProfitKind::BestChoice => Ok(()),
        other => Err(Error::InvalidConfig(format!(
            "the separation construction is defined for reward and best-choice profits, not {other:?}"
        ))),
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps.is_finite() && 0.0 < eps && eps < 1.0 / 6.0) {
        return Err(Error::ContractViolation(format!(
            "separation perturbation eps={eps} must lie in (0, 1/6)"
        )));
    }
    Ok(())
}

/// The three separation marginals on `{0, ½, 1}`: the symmetric base, the
/// plus perturbation (mass `1/3+ε` on 1, `1/3−ε` on ½), and its mirror.
pub fn lower_bound_dists(eps: f64) -> Result<(DiscreteDist, DiscreteDist, DiscreteDist)> {
    check_eps(eps)?;
    let third = 1.0 / 3.0;
    let base = DiscreteDist::uniform(vec![0.0, 0.5, 1.0])?;
    let plus = DiscreteDist::new(vec![0.0, 0.5, 1.0], vec![third, third - eps, third + eps])?;
    let minus = DiscreteDist::new(vec![0.0, 0.5, 1.0], vec![third, third + eps, third - eps])?;
    Ok((base, plus, minus))
}

/// The separation instances: i.i.d. pairs under a fixed order.
#[derive(Debug, Clone)]
pub struct LowerBoundInstances {
    pub base: Instance,
    pub plus: Instance,
    pub minus: Instance,
}

/// Build the three two-step i.i.d. instances for a profit kind.
pub fn lower_bound_instances(eps: f64, kind: ProfitKind) -> Result<LowerBoundInstances> {
    require_separation_kind(kind)?;
    let (base, plus, minus) = lower_bound_dists(eps)?;
    let pair = |d: DiscreteDist| {
        Instance::new(vec![d.clone(), d], OrderModel::Adversarial, kind)
    };
    Ok(LowerBoundInstances { base: pair(base)?, plus: pair(plus)?, minus: pair(minus)? })
}

fn separation_policy(kind: ProfitKind, accept_half_on_equal: bool) -> Result<StoppingPolicy> {
    require_separation_kind(kind)?;
    let inner = ThresholdPolicy::PerStep(vec![
        StepRule { level: 0.5, accept_on_equal: accept_half_on_equal },
        StepRule { level: 0.0, accept_on_equal: true },
    ]);
    Ok(match kind {
        ProfitKind::BestChoice => StoppingPolicy::EssentiallyThreshold { inner },
        _ => StoppingPolicy::Threshold(inner),
    })
}

/// The policy that is optimal under the plus perturbation: reject ½ at step 1
/// (accept only a strict crossing), accept anything at step 2.
pub fn policy_plus(kind: ProfitKind) -> Result<StoppingPolicy> {
    separation_policy(kind, false)
}

/// The policy that is optimal under the minus perturbation: accept ½ at
/// step 1 as well.
pub fn policy_minus(kind: ProfitKind) -> Result<StoppingPolicy> {
    separation_policy(kind, true)
}

/// Closed-form value gap between the two candidate policies on the **plus**
/// instance (where [`policy_plus`] is optimal).
pub fn closed_form_gap_plus(eps: f64, kind: ProfitKind) -> Result<f64> {
    require_separation_kind(kind)?;
    check_eps(eps)?;
    let p_half = 1.0 / 3.0 - eps;
    Ok(match kind {
        ProfitKind::BestChoice => p_half * eps,
        _ => p_half * eps / 2.0,
    })
}

/// Closed-form value gap on the **minus** instance (where [`policy_minus`]
/// is optimal).
pub fn closed_form_gap_minus(eps: f64, kind: ProfitKind) -> Result<f64> {
    require_separation_kind(kind)?;
    check_eps(eps)?;
    let p_half = 1.0 / 3.0 + eps;
    Ok(match kind {
        ProfitKind::BestChoice => p_half * eps,
        _ => p_half * eps / 2.0,
    })
}

/// The two-step instance on which the single-sample baseline has linear
/// regret: a sure ½, then 1 with probability ½+ε (else 0), expected-value
/// profit.
pub fn counterexample_instance(eps: f64) -> Result<Instance> {
    if !(eps.is_finite() && 0.0 < eps && eps < 0.5) {
        return Err(Error::ContractViolation(format!(
            "counterexample eps={eps} must lie in (0, 1/2)"
        )));
    }
    Instance::new(
        vec![DiscreteDist::point_mass(0.5)?, DiscreteDist::bernoulli(0.5 + eps)?],
        OrderModel::Adversarial,
        ProfitKind::Reward,
    )
}

/// Expected cumulative regret of the sample-max baseline on
/// [`counterexample_instance`] over rounds `2..T`: `(T−1)·(ε/2 − ε²)`.
///
/// (Round 1's uniform pick adds a further `ε/2` that this closed form,
/// which describes the sample-based rounds, does not include.)
pub fn counterexample_expected_regret(eps: f64, t_rounds: u64) -> f64 {
    (t_rounds.saturating_sub(1)) as f64 * (eps / 2.0 - eps * eps)
}

/// Maximum horizon for the exact leader-rule oracle.
pub const FTL_ORACLE_CAP: u64 = 5000;

/// Exact expected cumulative regret of follow-the-empirical-leader on the
/// separation pair at the calibrated perturbation `ε = 1/(8√T)`, expected-
/// value profit, ties toward the plus policy.
pub fn ftl_exact_regret(t_rounds: u64) -> Result<f64> {
    let eps = 1.0 / (8.0 * (t_rounds as f64).sqrt());
    ftl_exact_regret_with(t_rounds, eps, ProfitKind::Reward, true)
}

/// Exact expected cumulative regret of the count-based leader rule, averaged
/// over the two environments (plus/minus chosen by a fair coin before round
/// 1).
///
/// The rule at round `t` compares, among the second-coordinate samples of
/// rounds `1..t−1`, the count of 1s against the count of ½s, and plays
/// [`policy_plus`] when the 1s weakly lead (`tie_to_plus`; strictly lead
/// otherwise). Playing the wrong policy for an environment costs exactly the
/// closed-form gap per round. The count difference is a lattice random walk
/// whose distribution is maintained exactly, so the result is exact up to
/// float rounding — an oracle for the `Ω(√T)` growth.
pub fn ftl_exact_regret_with(
    t_rounds: u64,
    eps: f64,
    kind: ProfitKind,
    tie_to_plus: bool,
) -> Result<f64> {
    if t_rounds == 0 {
        return Err(Error::ContractViolation("the horizon must be at least 1".into()));
    }
    if t_rounds > FTL_ORACLE_CAP {
        return Err(Error::CapExceeded(format!(
            "horizon {t_rounds} exceeds the exact-oracle cap of {FTL_ORACLE_CAP}"
        )));
    }
    let gap_plus = closed_form_gap_plus(eps, kind)?;
    let gap_minus = closed_form_gap_minus(eps, kind)?;
    // Walk of d = (#1s − #½s) under the PLUS environment: +1 with mass
    // 1/3+ε, −1 with 1/3−ε, 0 with 1/3. Under the minus environment the walk
    // is the exact mirror (−d), so its tails read off the same distribution:
    // P_minus(d ≥ 0) = P_plus(d ≤ 0) and P_minus(d > 0) = P_plus(d < 0).
    let p_up = 1.0 / 3.0 + eps;
    let p_down = 1.0 / 3.0 - eps;
    let p_stay = 1.0 / 3.0;
    // pmf[j] = P(d = j − m) after m samples.
    let mut pmf = vec![1.0f64];
    let mut regret = 0.0;
    for t in 1..=t_rounds {
        let m = (t - 1) as usize;
        let mut below = 0.0; // P_plus(d < 0)
        let mut at = 0.0; // P_plus(d = 0)
        for (j, &q) in pmf.iter().enumerate() {
            match j.cmp(&m) {
                std::cmp::Ordering::Less => below += q,
                std::cmp::Ordering::Equal => at += q,
                std::cmp::Ordering::Greater => {}
            }
        }
        let (wrong_on_plus, wrong_on_minus) = if tie_to_plus {
            // Plays plus iff d ≥ 0: wrong on plus iff d < 0; wrong on minus
            // iff d ≥ 0, i.e. P_minus(d ≥ 0) = P_plus(d ≤ 0).
            (below, below + at)
        } else {
            // Plays plus iff d > 0.
            (below + at, below)
        };
        regret += 0.5 * (wrong_on_plus * gap_plus + wrong_on_minus * gap_minus);
        if t < t_rounds {
            let mut next = vec![0.0f64; pmf.len() + 2];
            for (j, &q) in pmf.iter().enumerate() {
                next[j] += q * p_down;
                next[j + 1] += q * p_stay;
                next[j + 2] += q * p_up;
            }
            pmf = next;
        }
    }
    Ok(regret)
}
