//! Online notification policies.
//!
//! A policy is asked for per-volunteer notification probabilities whenever a
//! task arrives. It never sees volunteer states; the belief filter passed in
//! summarizes its own notification history.

pub mod belief;
pub mod heuristics;
pub mod scaled;
pub mod sparse;
pub mod spec;

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Instance;

pub use belief::BeliefState;
pub use heuristics::{FollowExAnte, NotifyAll, NotifyBest, NotifyRandom, NotifyUpTo, RollingHorizon};
pub use scaled::{sdn_decide, sdn_offline, SdnPlan};
pub use sparse::{sn_decide, sn_offline, SnPlan};
pub use spec::{build_policy, PolicySpec};

/// Notification probabilities for the current arrival, one per volunteer.
/// Empty when there is no arrival.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolicyDecision {
    pub probs: Vec<f64>,
}

impl PolicyDecision {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Deterministic decision notifying exactly `chosen`.
    pub fn subset(volunteers: usize, chosen: impl IntoIterator<Item = usize>) -> Self {
        let mut probs = vec![0.0; volunteers];
        for v in chosen {
            probs[v] = 1.0;
        }
        Self { probs }
    }
}

/// What a policy can see when asked to decide: period `t` and arrival type
/// `s` (zero-based) and the belief filter.
#[derive(Debug, Clone, Copy)]
pub struct DecisionContext<'a> {
    pub instance: &'a Instance,
    pub t: usize,
    pub s: usize,
    pub beliefs: &'a BeliefState,
}

pub trait Policy: Send + Sync {
    /// Name in the policy grammar, used in reports.
    fn name(&self) -> String;

    /// Whether `decide` reads the belief filter; the simulator skips filter
    /// updates otherwise.
    fn uses_beliefs(&self) -> bool {
        false
    }

    /// May draw from `rng` (before any notification coin is drawn).
    fn decide(&self, ctx: &DecisionContext<'_>, rng: &mut ChaCha8Rng) -> Result<PolicyDecision>;
}

pub(crate) fn check_period_type(instance: &Instance, t: usize, s: usize) -> Result<()> {
    if t >= instance.horizon() {
        return Err(Error::Index {
            what: "period",
            index: t,
            bound: instance.horizon(),
        });
    }
    if s >= instance.types() {
        return Err(Error::Index {
            what: "task type",
            index: s,
            bound: instance.types(),
        });
    }
    Ok(())
}
