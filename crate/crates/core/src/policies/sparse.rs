//! Sparse notification: each volunteer keeps an entry of the ex-ante solution
//! only when notifying then is worth at least as much as waiting, judged by a
//! backward dynamic program over her own value-to-go.

use ndarray::{Array2, Array3};
use rand_chacha::ChaCha8Rng;

use super::{check_period_type, DecisionContext, Policy, PolicyDecision};
use crate::error::Result;
use crate::model::{require_feasible, FractionalSolution, Instance};

#[derive(Debug, Clone, PartialEq)]
pub struct SnPlan {
    /// Entries are either 0 or the corresponding ex-ante entry.
    pub x_tilde: FractionalSolution,
    /// Value-to-go `J[v, t]`, shaped `(V, T + 1)` with a zero last column.
    pub value_to_go: Array2<f64>,
    /// Reward `r[v, s, t]`: probability that `v` completes the task if
    /// notified, given the sparsified plans of lower-indexed volunteers.
    pub reward: Array3<f64>,
}

/// Offline phase: volunteers in index order, each solved by backward
/// induction from `T` down to 1.
pub fn sn_offline(instance: &Instance, x_star: &FractionalSolution) -> Result<SnPlan> {
    require_feasible(instance, x_star)?;
    let (volunteers, types, horizon) = instance.shape();
    let dist = instance.dist();
    let mut x_tilde = Array3::zeros((volunteers, types, horizon));
    let mut value_to_go = Array2::zeros((volunteers, horizon + 1));
    let mut reward = Array3::zeros((volunteers, types, horizon));
    // probability that no lower-indexed volunteer responds under x_tilde
    let mut ahead = Array2::<f64>::ones((types, horizon));

    for v in 0..volunteers {
        for t in 0..horizon {
            for s in 0..types {
                reward[[v, s, t]] = instance.match_prob(v, s) * ahead[[s, t]];
            }
        }
        for t in (0..horizon).rev() {
            let wait = value_to_go[[v, t + 1]];
            let future: f64 = (t + 1..horizon)
                .map(|tau| dist.mass(tau - t) * value_to_go[[v, tau]])
                .sum();
            let mut gain = 0.0;
            for s in 0..types {
                let notify = reward[[v, s, t]] + future;
                if notify >= wait {
                    let x = x_star.get(v, s, t);
                    x_tilde[[v, s, t]] = x;
                    gain += instance.rate(s, t) * x * (notify - wait);
                }
            }
            value_to_go[[v, t]] = wait + gain;
        }
        for t in 0..horizon {
            for s in 0..types {
                ahead[[s, t]] *= 1.0 - x_tilde[[v, s, t]] * instance.match_prob(v, s);
            }
        }
    }
    Ok(SnPlan {
        x_tilde: FractionalSolution::from_array(x_tilde),
        value_to_go,
        reward,
    })
}

/// Online phase: probabilities `x_tilde[., s, t]`.
pub fn sn_decide(plan: &SnPlan, instance: &Instance, t: usize, s: usize) -> Result<PolicyDecision> {
    check_period_type(instance, t, s)?;
    let probs = (0..instance.volunteers()).map(|v| plan.x_tilde.get(v, s, t)).collect();
    Ok(PolicyDecision { probs })
}

#[derive(Debug, Clone)]
pub struct SparseNotification {
    plan: SnPlan,
}

impl SparseNotification {
    pub fn new(plan: SnPlan) -> Self {
        Self { plan }
    }

    pub fn plan(&self) -> &SnPlan {
        &self.plan
    }
}

impl Policy for SparseNotification {
    fn name(&self) -> String {
        "sn".into()
    }

    fn decide(&self, ctx: &DecisionContext<'_>, _rng: &mut ChaCha8Rng) -> Result<PolicyDecision> {
        sn_decide(&self.plan, ctx.instance, ctx.t, ctx.s)
    }
}
