//! Core data model: discrete value distributions, arrival-order models, profit
//! functions, and problem instances.
//!
//! An *instance* is `n` independent discrete distributions on `[0,1]`, an
//! arrival-order model, and a profit kind. One *round* draws a value from each
//! distribution and an arrival permutation, presenting value `x_i` (produced by
//! distribution `tau(i)`) at step `i`. A policy irrevocably stops at one index
//! `i ∈ {1..n+1}` (`n+1` = "never stopped") and earns `profit(kind, x, i)`.
//!
//! Profit kinds:
//! - `Reward`: the stopped value `x_i` (0 at `n+1`).
//! - `BestChoice`: 1 iff `x_i` equals the maximum of all values (ties count;
//!   stopping nowhere wins exactly when every value is 0, since the phantom
//!   value at `n+1` is 0 and then ties the maximum).
//! - `LastSuccess`: 1 iff `x_i = 1` and no later value is 1 (supports must be
//!   binary; stopping nowhere never wins).
//! - `SkiRental{b}`: a cost to *minimize* — rents paid before stopping plus the
//!   buy price `b` (`Σ_{j<i} x_j + b`), or all rents `Σ_j x_j` when never
//!   buying. Profits are bounded by `B = n + b`; estimators work on the shifted
//!   profit `B − cost` so all four kinds live in `[0, B]`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for probability normalization: inputs whose total mass is within
/// this distance of 1 are renormalized; anything further off is rejected.
pub const PROB_TOL: f64 = 1e-12;

// --- discrete distributions -------------------------------------------------

/// A discrete probability distribution on `[0,1]`: strictly increasing support
/// values with nonnegative probabilities summing to 1 (within [`PROB_TOL`],
/// after which they are renormalized exactly).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistWire", into = "DistWire")]
pub struct DiscreteDist {
    values: Vec<f64>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize, Clone)]
struct DistWire {
    values: Vec<f64>,
    probs: Vec<f64>,
}

impl TryFrom<DistWire> for DiscreteDist {
    type Error = Error;
    fn try_from(w: DistWire) -> Result<Self> {
        DiscreteDist::new(w.values, w.probs)
    }
}

impl From<DiscreteDist> for DistWire {
    fn from(d: DiscreteDist) -> Self {
        DistWire { values: d.values, probs: d.probs }
    }
}

impl DiscreteDist {
    /// Build a distribution from parallel `values`/`probs` lists.
    ///
    /// Requirements: equal nonzero lengths; values finite, inside `[0,1]`, and
    /// strictly increasing; probabilities finite and nonnegative with total
    /// mass within [`PROB_TOL`] of 1 (then renormalized to sum exactly 1).
    pub fn new(values: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() != probs.len() {
            return Err(Error::InvalidDistribution(format!(
                "need equal nonzero lengths, got {} values / {} probs",
                values.len(),
                probs.len()
            )));
        }
        for &v in &values {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidDistribution(format!("value {v} outside [0,1]")));
            }
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDistribution(
                "values must be strictly increasing (no duplicates)".into(),
            ));
        }
        for &p in &probs {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution(format!("probability {p} is negative")));
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, which is off 1 by more than {PROB_TOL}"
            )));
        }
        let probs = probs.into_iter().map(|p| p / total).collect();
        Ok(DiscreteDist { values, probs })
    }

    /// The distribution putting all mass on a single value.
    pub fn point_mass(v: f64) -> Result<Self> {
        DiscreteDist::new(vec![v], vec![1.0])
    }

    /// `Bernoulli(p)` on `{0, 1}` (degenerate endpoints collapse to one atom).
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidDistribution(format!("Bernoulli p={p} outside [0,1]")));
        }
        if p == 0.0 {
            DiscreteDist::point_mass(0.0)
        } else if p == 1.0 {
            DiscreteDist::point_mass(1.0)
        } else {
            DiscreteDist::new(vec![0.0, 1.0], vec![1.0 - p, p])
        }
    }

    /// The uniform distribution over the given (strictly increasing) values.
    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let k = values.len();
        DiscreteDist::new(values, vec![1.0 / k as f64; k])
    }

    /// Number of support points.
    pub fn support_size(&self) -> usize {
        self.values.len()
    }

    /// Support values, strictly increasing.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Probabilities, parallel to [`Self::values`].
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `(value, probability)` pairs in increasing value order.
    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().copied().zip(self.probs.iter().copied())
    }

    /// Expected value.
    pub fn mean(&self) -> f64 {
        self.atoms().map(|(v, p)| v * p).sum()
    }

    /// `P(X ≤ v)`.
    pub fn cdf(&self, v: f64) -> f64 {
        self.atoms().filter(|&(x, _)| x <= v).map(|(_, p)| p).sum()
    }

    /// `P(X < v)`.
    pub fn cdf_strict(&self, v: f64) -> f64 {
        self.atoms().filter(|&(x, _)| x < v).map(|(_, p)| p).sum()
    }

    /// `P(X = v)` (exact support-value match, else 0).
    pub fn prob_eq(&self, v: f64) -> f64 {
        self.atoms().find(|&(x, _)| x == v).map_or(0.0, |(_, p)| p)
    }

    /// `P(X = 1)`; the success probability of a binary distribution.
    pub fn prob_one(&self) -> f64 {
        self.prob_eq(1.0)
    }

    /// True when every support value is 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    /// Draw one value.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let mut cum = 0.0;
        for (v, p) in self.atoms() {
            cum += p;
            if u < cum {
                return v;
            }
        }
        // Float round-off can leave `cum` a hair under 1; the last atom wins.
        *self.values.last().expect("nonempty support")
    }
}

// --- arrival-order models ---------------------------------------------------

/// A permutation with a probability, for [`OrderModel::Explicit`].
/// Internally 0-based; the JSON form uses 1-based entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PermWire", into = "PermWire")]
pub struct WeightedPerm {
    perm: Vec<usize>,
    prob: f64,
}

#[derive(Serialize, Deserialize, Clone)]
struct PermWire {
    perm: Vec<usize>,
    prob: f64,
}

impl TryFrom<PermWire> for WeightedPerm {
    type Error = Error;
    fn try_from(w: PermWire) -> Result<Self> {
        let n = w.perm.len();
        for &e in &w.perm {
            if e < 1 || e > n {
                return Err(Error::InvalidInstance(format!(
                    "permutation entry {e} outside 1..={n} (JSON permutations are 1-based)"
                )));
            }
        }
        WeightedPerm::new(w.perm.iter().map(|&e| e - 1).collect(), w.prob)
    }
}

impl From<WeightedPerm> for PermWire {
    fn from(p: WeightedPerm) -> Self {
        PermWire { perm: p.perm.iter().map(|&e| e + 1).collect(), prob: p.prob }
    }
}

impl WeightedPerm {
    /// Build from a 0-based permutation of `{0..n-1}` and a nonnegative weight.
    pub fn new(perm: Vec<usize>, prob: f64) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &e in &perm {
            if e >= n || seen[e] {
                return Err(Error::InvalidInstance(format!("{perm:?} is not a permutation")));
            }
            seen[e] = true;
        }
        if !prob.is_finite() || prob < 0.0 {
            return Err(Error::InvalidInstance(format!("permutation weight {prob} invalid")));
        }
        Ok(WeightedPerm { perm, prob })
    }

    /// The 0-based permutation.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Its probability.
    pub fn prob(&self) -> f64 {
        self.prob
    }
}

/// How the arrival order of the `n` distributions is drawn each round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderModel {
    /// Point mass on the identity: distribution `i` always arrives at step `i`.
    Adversarial,
    /// Uniform over all `n!` permutations.
    #[serde(rename = "random")]
    RandomOrder,
    /// An arbitrary finite distribution over permutations.
    Explicit(Vec<WeightedPerm>),
}

fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

impl OrderModel {
    /// Number of permutations in the support (`None` if `n!` overflows u64).
    pub fn support_size(&self, n: usize) -> Option<u64> {
        match self {
            OrderModel::Adversarial => Some(1),
            OrderModel::RandomOrder => factorial(n),
            OrderModel::Explicit(ps) => Some(ps.len() as u64),
        }
    }

    /// The pattern-count parameter `min(n·|Π|, 2·n!)`, saturating at `u64::MAX`.
    pub fn kappa(&self, n: usize) -> u64 {
        let two_nfact = factorial(n).and_then(|f| f.checked_mul(2)).unwrap_or(u64::MAX);
        let n_support = self
            .support_size(n)
            .and_then(|s| s.checked_mul(n as u64))
            .unwrap_or(u64::MAX);
        n_support.min(two_nfact).max(1)
    }

    /// Validate against dimension `n` and renormalize explicit weights.
    fn validated(self, n: usize) -> Result<Self> {
        match self {
            OrderModel::Explicit(ps) => {
                if ps.is_empty() {
                    return Err(Error::InvalidInstance("explicit order with empty support".into()));
                }
                for p in &ps {
                    if p.perm.len() != n {
                        return Err(Error::InvalidInstance(format!(
                            "permutation {:?} has length {}, instance has n={n}",
                            p.perm,
                            p.perm.len()
                        )));
                    }
                }
                let total: f64 = ps.iter().map(|p| p.prob).sum();
                if (total - 1.0).abs() > PROB_TOL {
                    return Err(Error::InvalidInstance(format!(
                        "permutation weights sum to {total}, off 1 by more than {PROB_TOL}"
                    )));
                }
                let ps = ps
                    .into_iter()
                    .map(|p| WeightedPerm { perm: p.perm, prob: p.prob / total })
                    .collect();
                Ok(OrderModel::Explicit(ps))
            }
            other => Ok(other),
        }
    }

    /// Enumerate the support as `(permutation, probability)` pairs.
    ///
    /// Refuses `RandomOrder` when `n!` would exceed `cap`.
    pub fn perms(&self, n: usize, cap: u64) -> Result<Vec<(Vec<usize>, f64)>> {
        match self {
            OrderModel::Adversarial => Ok(vec![((0..n).collect(), 1.0)]),
            OrderModel::RandomOrder => {
                let count = factorial(n).ok_or_else(|| {
                    Error::CapExceeded(format!("{n}! overflows while enumerating permutations"))
                })?;
                if count > cap {
                    return Err(Error::CapExceeded(format!(
                        "{n}! = {count} permutations exceeds cap {cap}"
                    )));
                }
                let w = 1.0 / count as f64;
                let mut out = Vec::with_capacity(count as usize);
                let mut current: Vec<usize> = (0..n).collect();
                permute_into(&mut current, 0, &mut out, w);
                Ok(out)
            }
            OrderModel::Explicit(ps) => {
                Ok(ps.iter().map(|p| (p.perm.clone(), p.prob)).collect())
            }
        }
    }

    /// Draw one permutation.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<usize> {
        match self {
            OrderModel::Adversarial => (0..n).collect(),
            OrderModel::RandomOrder => {
                // Fisher–Yates; draws exactly n−1 indices from the stream.
                let mut p: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    let j = rng.random_range(0..=i);
                    p.swap(i, j);
                }
                p
            }
            OrderModel::Explicit(ps) => {
                let u: f64 = rng.random();
                let mut cum = 0.0;
                for p in ps {
                    cum += p.prob;
                    if u < cum {
                        return p.perm.clone();
                    }
                }
                ps.last().expect("nonempty support").perm.clone()
            }
        }
    }
}

fn permute_into(current: &mut Vec<usize>, k: usize, out: &mut Vec<(Vec<usize>, f64)>, w: f64) {
    let n = current.len();
    if k + 1 >= n {
        out.push((current.clone(), w));
        return;
    }
    for i in k..n {
        current.swap(k, i);
        permute_into(current, k + 1, out, w);
        current.swap(k, i);
    }
}

// --- profit functions -------------------------------------------------------

/// The objective a policy optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfitKind {
    /// Earn the stopped value.
    Reward,
    /// Earn 1 for stopping on (one of) the maximum value(s).
    BestChoice,
    /// Earn 1 for stopping on the last value equal to 1.
    LastSuccess,
    /// Pay rents until buying at price `b` (cost minimization).
    SkiRental { b: f64 },
}

impl ProfitKind {
    /// Validate kind-level parameters.
    pub fn validate(&self) -> Result<()> {
        if let ProfitKind::SkiRental { b } = self {
            if !b.is_finite() || *b <= 0.0 {
                return Err(Error::InvalidInstance(format!("ski-rental buy price b={b} must be > 0")));
            }
        }
        Ok(())
    }

    /// True for cost-minimization kinds (ski rental).
    pub fn is_cost(&self) -> bool {
        matches!(self, ProfitKind::SkiRental { .. })
    }

    /// Upper bound `B` on `|profit|`: 1 for the win/reward kinds, `n + b` for
    /// ski rental.
    pub fn bound(&self, n: usize) -> f64 {
        match self {
            ProfitKind::SkiRental { b } => n as f64 + b,
            _ => 1.0,
        }
    }

    /// Profit mapped to the maximize-in-`[0, B]` orientation: identity for the
    /// reward/win kinds, `B − cost` for ski rental. Estimation and the
    /// switching test always compare shifted profits.
    pub fn shifted(&self, raw: f64, n: usize) -> f64 {
        if self.is_cost() {
            self.bound(n) - raw
        } else {
            raw
        }
    }
}

/// The profit of stopping at 1-based index `i ∈ {1..n+1}` on value vector `x`
/// (`i = n+1` means the policy never stopped; the phantom value there is 0).
pub fn profit(kind: ProfitKind, x: &[f64], i: usize) -> Result<f64> {
    let n = x.len();
    if i < 1 || i > n + 1 {
        return Err(Error::ContractViolation(format!(
            "stop index {i} outside 1..={} for n={n}",
            n + 1
        )));
    }
    Ok(match kind {
        ProfitKind::Reward => {
            if i <= n {
                x[i - 1]
            } else {
                0.0
            }
        }
        ProfitKind::BestChoice => {
            let m = x.iter().copied().fold(0.0_f64, f64::max);
            let chosen = if i <= n { x[i - 1] } else { 0.0 };
            if chosen == m {
                1.0
            } else {
                0.0
            }
        }
        ProfitKind::LastSuccess => {
            if i <= n && x[i - 1] == 1.0 && x[i..].iter().all(|&v| v != 1.0) {
                1.0
            } else {
                0.0
            }
        }
        ProfitKind::SkiRental { b } => {
            if i <= n {
                x[..i - 1].iter().sum::<f64>() + b
            } else {
                x.iter().sum::<f64>()
            }
        }
    })
}

/// The clairvoyant's choice on realized values `x`: the stop index achieving
/// the maximum profit (minimum cost for ski rental), smallest index on ties,
/// paired with that profit.
pub fn offline_best(kind: ProfitKind, x: &[f64]) -> (usize, f64) {
    let n = x.len();
    let mut best_i = 1;
    let mut best_p = profit(kind, x, 1).expect("index 1 is always valid");
    for i in 2..=n + 1 {
        let p = profit(kind, x, i).expect("index within 1..=n+1");
        let better = if kind.is_cost() { p < best_p } else { p > best_p };
        if better {
            best_i = i;
            best_p = p;
        }
    }
    (best_i, best_p)
}

// --- instances and rounds ---------------------------------------------------

/// One realized round: values in arrival order plus the arrival permutation.
/// `tau[i]` is the (0-based) index of the distribution that produced `x[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRealization {
    pub x: Vec<f64>,
    pub tau: Vec<usize>,
}

/// Ordered history of realized rounds (the feedback available to learners).
pub type SampleSet = Vec<RoundRealization>;

/// A full problem description: distributions, order model, and profit kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceWire", into = "InstanceWire")]
pub struct Instance {
    n: usize,
    dists: Vec<DiscreteDist>,
    order: OrderModel,
    profit: ProfitKind,
    iid: bool,
}

#[derive(Serialize, Deserialize, Clone)]
struct InstanceWire {
    n: usize,
    profit: ProfitKind,
    order: OrderModel,
    dists: Vec<DiscreteDist>,
}

impl TryFrom<InstanceWire> for Instance {
    type Error = Error;
    fn try_from(w: InstanceWire) -> Result<Self> {
        if w.n != w.dists.len() {
            return Err(Error::InvalidInstance(format!(
                "declared n={} but {} distributions given",
                w.n,
                w.dists.len()
            )));
        }
        Instance::new(w.dists, w.order, w.profit)
    }
}

impl From<Instance> for InstanceWire {
    fn from(i: Instance) -> Self {
        InstanceWire { n: i.n, profit: i.profit, order: i.order, dists: i.dists }
    }
}

impl Instance {
    /// Build and validate an instance. The i.i.d. flag is derived: it is set
    /// exactly when all distributions are identical **and** the order is
    /// adversarial (fixed identity), which is when per-step learners may pool
    /// observations across coordinates.
    pub fn new(dists: Vec<DiscreteDist>, order: OrderModel, profit: ProfitKind) -> Result<Self> {
        let n = dists.len();
        if n == 0 {
            return Err(Error::InvalidInstance("need at least one distribution".into()));
        }
        profit.validate()?;
        if matches!(profit, ProfitKind::LastSuccess) && !dists.iter().all(|d| d.is_binary()) {
            return Err(Error::InvalidInstance(
                "last-success instances need binary supports (values in {0,1})".into(),
            ));
        }
        let order = order.validated(n)?;
        let iid = order == OrderModel::Adversarial && dists.iter().all(|d| d == &dists[0]);
        Ok(Instance { n, dists, order, profit, iid })
    }

    /// Number of distributions / steps per round.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The value distributions, indexed by distribution (not arrival) index.
    pub fn dists(&self) -> &[DiscreteDist] {
        &self.dists
    }

    /// The arrival-order model.
    pub fn order(&self) -> &OrderModel {
        &self.order
    }

    /// The objective.
    pub fn profit_kind(&self) -> ProfitKind {
        self.profit
    }

    /// Whether all distributions are identical under a fixed identity order.
    pub fn iid(&self) -> bool {
        self.iid
    }

    /// Profit bound `B` for this instance.
    pub fn bound(&self) -> f64 {
        self.profit.bound(self.n)
    }

    /// Draw one round: independent values, then the arrival permutation.
    pub fn sample_round<R: Rng + ?Sized>(&self, rng: &mut R) -> RoundRealization {
        let y: Vec<f64> = self.dists.iter().map(|d| d.sample(rng)).collect();
        let tau = self.order.sample(rng, self.n);
        let x = tau.iter().map(|&k| y[k]).collect();
        RoundRealization { x, tau }
    }

    /// Total outcome count of the exact enumeration (value tuples × support
    /// permutations), saturating; `None` when the permutation support itself
    /// overflows.
    pub fn outcome_count(&self) -> Option<u64> {
        let values: u64 = self
            .dists
            .iter()
            .try_fold(1u64, |acc, d| acc.checked_mul(d.support_size() as u64))?;
        values.checked_mul(self.order.support_size(self.n)?)
    }
}

/// Enumerate the product of per-distribution supports, invoking `f` with the
/// tuple of values *by distribution index* and its probability.
pub(crate) fn for_each_value_tuple<D, F>(dists: &[D], mut f: F) -> Result<()>
where
    D: std::borrow::Borrow<DiscreteDist>,
    F: FnMut(&[f64], f64) -> Result<()>,
{
    let n = dists.len();
    if n == 0 {
        return f(&[], 1.0);
    }
    let mut idx = vec![0usize; n];
    let mut values: Vec<f64> = dists.iter().map(|d| d.borrow().values()[0]).collect();
    loop {
        let p: f64 = idx.iter().zip(dists).map(|(&j, d)| d.borrow().probs()[j]).product();
        if p > 0.0 {
            f(&values, p)?;
        }
        // Odometer increment.
        let mut k = 0;
        loop {
            if k == n {
                return Ok(());
            }
            idx[k] += 1;
            if idx[k] < dists[k].borrow().support_size() {
                values[k] = dists[k].borrow().values()[idx[k]];
                break;
            }
            idx[k] = 0;
            values[k] = dists[k].borrow().values()[0];
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Purpose};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn uniform01() -> DiscreteDist {
        DiscreteDist::uniform(vec![0.0, 1.0]).unwrap()
    }

    // --- DiscreteDist construction and queries ---

    #[test]
    fn rejects_unsorted_values() {
        assert!(matches!(
            DiscreteDist::new(vec![0.5, 0.2], vec![0.5, 0.5]),
            Err(Error::InvalidDistribution(_))
        ));
    }

    #[test]
    fn rejects_duplicate_values() {
        assert!(DiscreteDist::new(vec![0.4, 0.4], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn rejects_out_of_range_values() {
        assert!(DiscreteDist::new(vec![-0.1, 0.5], vec![0.5, 0.5]).is_err());
        assert!(DiscreteDist::new(vec![0.5, 1.1], vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn rejects_bad_mass() {
        assert!(DiscreteDist::new(vec![0.0, 1.0], vec![0.5, 0.6]).is_err());
        assert!(DiscreteDist::new(vec![0.0, 1.0], vec![0.5, -0.5]).is_err());
    }

    #[test]
    fn renormalizes_tiny_mass_error() {
        let d = DiscreteDist::new(vec![0.0, 1.0], vec![0.5, 0.5 + 1e-13]).unwrap();
        let total: f64 = d.probs().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cdf_mean_and_point_queries() {
        let d = DiscreteDist::new(vec![0.0, 0.5, 1.0], vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(d.cdf(0.5), 0.5);
        assert_eq!(d.cdf_strict(0.5), 0.2);
        assert_eq!(d.cdf(0.49), 0.2);
        assert_eq!(d.prob_eq(0.5), 0.3);
        assert_eq!(d.prob_eq(0.25), 0.0);
        assert!((d.mean() - 0.65).abs() < 1e-15);
        assert_eq!(d.prob_one(), 0.5);
        assert!(!d.is_binary());
        assert!(DiscreteDist::bernoulli(0.3).unwrap().is_binary());
    }

    // --- profit: pinned input/output pairs ---

    #[test]
    fn reward_profit_is_the_stopped_value() {
        assert_eq!(profit(ProfitKind::Reward, &[0.2, 0.7], 1).unwrap(), 0.2);
        assert_eq!(profit(ProfitKind::Reward, &[0.2, 0.7], 3).unwrap(), 0.0);
    }

    #[test]
    fn best_choice_ties_count_as_best() {
        assert_eq!(profit(ProfitKind::BestChoice, &[0.3, 0.9, 0.9], 2).unwrap(), 1.0);
        assert_eq!(profit(ProfitKind::BestChoice, &[0.3, 0.9, 0.9], 1).unwrap(), 0.0);
    }

    #[test]
    fn best_choice_reject_all_wins_only_on_all_zero() {
        assert_eq!(profit(ProfitKind::BestChoice, &[0.0, 0.0], 3).unwrap(), 1.0);
        assert_eq!(profit(ProfitKind::BestChoice, &[0.0, 0.1], 3).unwrap(), 0.0);
        // All-zero vectors also make every in-range index a winner.
        assert_eq!(profit(ProfitKind::BestChoice, &[0.0, 0.0], 1).unwrap(), 1.0);
    }

    #[test]
    fn last_success_wants_the_final_one() {
        assert_eq!(profit(ProfitKind::LastSuccess, &[1.0, 0.0, 1.0, 0.0], 3).unwrap(), 1.0);
        assert_eq!(profit(ProfitKind::LastSuccess, &[1.0, 0.0, 1.0, 0.0], 1).unwrap(), 0.0);
        assert_eq!(profit(ProfitKind::LastSuccess, &[1.0, 0.0], 3).unwrap(), 0.0);
    }

    #[test]
    fn ski_rental_cost_arithmetic() {
        let kind = ProfitKind::SkiRental { b: 3.0 };
        assert_eq!(profit(kind, &[0.5, 1.0, 0.5], 3).unwrap(), 4.5);
        assert_eq!(profit(kind, &[0.5, 1.0, 0.5], 4).unwrap(), 2.0);
        assert_eq!(profit(kind, &[0.5, 1.0, 0.5], 1).unwrap(), 3.0);
    }

    #[test]
    fn profit_rejects_out_of_range_index() {
        assert!(profit(ProfitKind::Reward, &[0.5], 0).is_err());
        assert!(profit(ProfitKind::Reward, &[0.5], 3).is_err());
    }

    // --- offline_best ---

    #[test]
    fn offline_best_takes_the_max_reward() {
        assert_eq!(offline_best(ProfitKind::Reward, &[0.2, 0.7]), (2, 0.7));
    }

    #[test]
    fn offline_best_buys_immediately_when_rents_are_steep() {
        // Buying at step 1 costs b=1; every later stop pays rents on top, and
        // never buying pays 2.7.
        assert_eq!(offline_best(ProfitKind::SkiRental { b: 1.0 }, &[0.9, 0.9, 0.9]), (1, 1.0));
    }

    #[test]
    fn offline_best_smallest_index_on_full_tie() {
        // No success: every stop index earns 0, so the smallest index wins.
        assert_eq!(offline_best(ProfitKind::LastSuccess, &[0.0, 0.0, 0.0]), (1, 0.0));
    }

    #[test]
    fn offline_best_never_buying_when_rents_are_cheap() {
        let (i, p) = offline_best(ProfitKind::SkiRental { b: 5.0 }, &[0.1, 0.1]);
        assert_eq!((i, p), (3, 0.2));
    }

    // --- instances ---

    #[test]
    fn instance_derives_iid_flag() {
        let i = Instance::new(
            vec![uniform01(), uniform01()],
            OrderModel::Adversarial,
            ProfitKind::Reward,
        )
        .unwrap();
        assert!(i.iid());
        let j = Instance::new(
            vec![uniform01(), uniform01()],
            OrderModel::RandomOrder,
            ProfitKind::Reward,
        )
        .unwrap();
        assert!(!j.iid());
        let k = Instance::new(
            vec![uniform01(), DiscreteDist::point_mass(0.5).unwrap()],
            OrderModel::Adversarial,
            ProfitKind::Reward,
        )
        .unwrap();
        assert!(!k.iid());
    }

    #[test]
    fn last_success_requires_binary_support() {
        let err = Instance::new(
            vec![DiscreteDist::point_mass(0.5).unwrap()],
            OrderModel::Adversarial,
            ProfitKind::LastSuccess,
        );
        assert!(matches!(err, Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn explicit_order_must_sum_to_one() {
        let p = WeightedPerm::new(vec![1, 0], 0.7).unwrap();
        let err = Instance::new(
            vec![uniform01(), uniform01()],
            OrderModel::Explicit(vec![p]),
            ProfitKind::Reward,
        );
        assert!(matches!(err, Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn sample_round_deterministic_on_point_masses() {
        let i = Instance::new(
            vec![DiscreteDist::point_mass(0.4).unwrap(), DiscreteDist::point_mass(0.9).unwrap()],
            OrderModel::Adversarial,
            ProfitKind::Reward,
        )
        .unwrap();
        // Any seed: the instance is deterministic.
        let mut rng = StdRng::seed_from_u64(0);
        let r = i.sample_round(&mut rng);
        assert_eq!(r.x, vec![0.4, 0.9]);
        assert_eq!(r.tau, vec![0, 1]);
    }

    #[test]
    fn forced_reverse_permutation() {
        let rev = WeightedPerm::new(vec![1, 0], 1.0).unwrap();
        let i = Instance::new(
            vec![DiscreteDist::point_mass(0.1).unwrap(), DiscreteDist::point_mass(0.2).unwrap()],
            OrderModel::Explicit(vec![rev]),
            ProfitKind::Reward,
        )
        .unwrap();
        let mut rng = substream(0, 0, 1, Purpose::Env);
        let r = i.sample_round(&mut rng);
        assert_eq!(r.x, vec![0.2, 0.1]);
        assert_eq!(r.tau, vec![1, 0]);
    }

    #[test]
    fn random_order_identity_frequency_binomial() {
        let i = Instance::new(
            vec![uniform01(), uniform01()],
            OrderModel::RandomOrder,
            ProfitKind::Reward,
        )
        .unwrap();
        let mut rng = substream(11, 0, 1, Purpose::Env);
        let trials = 20_000;
        let mut ident = 0u32;
        for _ in 0..trials {
            if i.sample_round(&mut rng).tau == [0, 1] {
                ident += 1;
            }
        }
        let freq = f64::from(ident) / f64::from(trials);
        // 3σ window around 1/2 for a Binomial(20000, 1/2) frequency.
        let sigma = (0.25 / f64::from(trials)).sqrt();
        assert!((freq - 0.5).abs() < 3.0 * sigma, "identity frequency {freq}");
    }

    #[test]
    fn sample_round_marginals_match_atom_probabilities() {
        // Empirical frequency of each atom of distribution k among draws where
        // tau(i) = k stays within 4σ of its probability.
        let d0 = DiscreteDist::new(vec![0.1, 0.6], vec![0.3, 0.7]).unwrap();
        let d1 = DiscreteDist::new(vec![0.2, 0.5, 0.9], vec![0.2, 0.5, 0.3]).unwrap();
        let inst =
            Instance::new(vec![d0.clone(), d1.clone()], OrderModel::RandomOrder, ProfitKind::Reward)
                .unwrap();
        let mut rng = substream(99, 0, 1, Purpose::Env);
        let trials = 40_000usize;
        let mut counts: Vec<std::collections::HashMap<u64, u64>> = vec![Default::default(); 2];
        let mut arrivals = [0u64; 2];
        for _ in 0..trials {
            let r = inst.sample_round(&mut rng);
            // Look at arrival position 0 only; k = producing distribution.
            let k = r.tau[0];
            arrivals[k] += 1;
            *counts[k].entry(r.x[0].to_bits()).or_default() += 1;
        }
        for (k, d) in [d0, d1].iter().enumerate() {
            for (v, p) in d.atoms() {
                let m = arrivals[k] as f64;
                let got = *counts[k].get(&v.to_bits()).unwrap_or(&0) as f64 / m;
                let sigma = (p * (1.0 - p) / m).sqrt();
                assert!(
                    (got - p).abs() <= 4.0 * sigma,
                    "atom {v} of dist {k}: freq {got} vs prob {p}"
                );
            }
        }
    }

    #[test]
    fn kappa_is_min_of_support_and_factorial_terms() {
        let adv = OrderModel::Adversarial;
        assert_eq!(adv.kappa(2), 2); // min(2·1, 2·2!) = 2
        assert_eq!(adv.kappa(3), 3); // min(3, 12)
        let ro = OrderModel::RandomOrder;
        assert_eq!(ro.kappa(3), 12); // min(3·6, 12) = 12
        assert_eq!(ro.kappa(2), 4); // min(2·2, 4) = 4
    }

    #[test]
    fn perms_enumeration_matches_support() {
        let all = OrderModel::RandomOrder.perms(3, 10).unwrap();
        assert_eq!(all.len(), 6);
        let total: f64 = all.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(OrderModel::RandomOrder.perms(10, 100).is_err());
    }

    #[test]
    fn outcome_count_multiplies_supports_and_perms() {
        let d = DiscreteDist::uniform(vec![0.0, 0.5, 1.0]).unwrap();
        let i = Instance::new(
            vec![d.clone(), d],
            OrderModel::RandomOrder,
            ProfitKind::Reward,
        )
        .unwrap();
        assert_eq!(i.outcome_count(), Some(9 * 2));
    }

    #[test]
    fn value_tuple_enumeration_covers_the_product() {
        let d0 = DiscreteDist::uniform(vec![0.0, 1.0]).unwrap();
        let d1 = DiscreteDist::uniform(vec![0.2, 0.5, 0.9]).unwrap();
        let mut seen = Vec::new();
        for_each_value_tuple(&[d0, d1], |v, p| {
            seen.push((v.to_vec(), p));
            Ok(())
        })
        .unwrap();
        assert_eq!(seen.len(), 6);
        let total: f64 = seen.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    // --- serde wire format ---

    #[test]
    fn instance_json_round_trip_and_wire_shape() {
        let inst = Instance::new(
            vec![
                DiscreteDist::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap(),
                DiscreteDist::point_mass(0.5).unwrap(),
            ],
            OrderModel::Explicit(vec![WeightedPerm::new(vec![1, 0], 1.0).unwrap()]),
            ProfitKind::SkiRental { b: 2.0 },
        )
        .unwrap();
        let json = serde_json::to_value(&inst).unwrap();
        assert_eq!(json["n"], 2);
        assert_eq!(json["profit"]["ski_rental"]["b"], 2.0);
        // 1-based permutation on the wire.
        assert_eq!(json["order"]["explicit"][0]["perm"], serde_json::json!([2, 1]));
        let back: Instance = serde_json::from_value(json).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn simple_instance_json_parses_from_text() {
        let text = r#"{
            "n": 2,
            "profit": "reward",
            "order": "adversarial",
            "dists": [
                {"values": [0.0, 1.0], "probs": [0.5, 0.5]},
                {"values": [0.0, 1.0], "probs": [0.5, 0.5]}
            ]
        }"#;
        let inst: Instance = serde_json::from_str(text).unwrap();
        assert!(inst.iid());
        assert_eq!(inst.profit_kind(), ProfitKind::Reward);
    }

    #[test]
    fn wire_rejects_bad_permutation_base() {
        let text = r#"{
            "n": 2,
            "profit": "reward",
            "order": {"explicit": [{"perm": [0, 1], "prob": 1.0}]},
            "dists": [
                {"values": [0.5], "probs": [1.0]},
                {"values": [0.5], "probs": [1.0]}
            ]
        }"#;
        assert!(serde_json::from_str::<Instance>(text).is_err());
    }
}
