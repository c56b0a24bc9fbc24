//! Repeated optimal stopping: model, policies, exact optima, sample-based
//! baselines, an adaptive switching rule, and a reproducible experiment
//! harness.
//!
//! The crate is organized bottom-up:
//!
//! - [`model`] — discrete distributions, arrival-order models, profit
//!   functions, instances, and round sampling.
//! - [`policies`] — executable stopping policies plus exact and empirical
//!   policy-value evaluation.
//! - [`dp`] — backward-induction optimal policies and values, a brute-force
//!   decision-tree oracle, and the empirically-optimal learned policy.
//! - [`baselines`] — the sample-based competitive baseline families
//!   (single-sample prophet/secretary, 1/e secretary, one-sample last-success,
//!   randomized ski rental).
//! - [`switching`] — the adaptive selector: schedule arithmetic, hold-out
//!   estimation, and the switch test that moves from a baseline to the learned
//!   policy once the estimated advantage clears a calibrated margin.
//! - [`lower_bound`] — hard three-point environments, their closed-form
//!   per-round gaps, an exact follow-the-leader regret oracle, and the
//!   two-point counterexample with linear baseline regret.
//! - [`harness`] — repeated-game simulation with per-round statistics,
//!   regret/competitive-ratio accounting, and deterministic parallel trials.
//! - [`rng`] — addressed RNG substreams making every experiment bit-for-bit
//!   reproducible.

pub mod baselines;
pub mod dp;
pub mod error;
pub mod harness;
pub mod lower_bound;
pub mod model;
pub mod policies;
pub mod rng;
pub mod switching;

pub use error::{Error, Result};
