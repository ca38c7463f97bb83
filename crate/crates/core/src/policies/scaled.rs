//! Scaled-down notification: the ex-ante probabilities are divided by
//! `(2 - q)` times the exact probability that the volunteer is still active
//! under this same policy.

use ndarray::Array2;
use rand_chacha::ChaCha8Rng;

use super::{check_period_type, DecisionContext, Policy, PolicyDecision};
use crate::error::{Error, Result};
use crate::model::{require_feasible, FractionalSolution, Instance};

#[derive(Debug, Clone, PartialEq)]
pub struct SdnPlan {
    /// `beta[v, t]`: probability that `v` is active at the start of `t`.
    pub beta: Array2<f64>,
    pub q: f64,
    pub x_star: FractionalSolution,
}

impl SdnPlan {
    /// Notification probability for `(v, s, t)`, clamped to `[0, 1]`.
    pub fn prob(&self, v: usize, s: usize, t: usize) -> f64 {
        let x = self.x_star.get(v, s, t);
        if x == 0.0 {
            return 0.0;
        }
        (x / ((2.0 - self.q) * self.beta[[v, t]])).clamp(0.0, 1.0)
    }
}

pub fn sdn_offline(instance: &Instance, x_star: &FractionalSolution) -> Result<SdnPlan> {
    require_feasible(instance, x_star)?;
    let (volunteers, types, horizon) = instance.shape();
    let q = instance.mdhr();
    let scale = 1.0 / (2.0 - q);
    let dist = instance.dist();
    let mut beta = Array2::ones((volunteers, horizon));
    for v in 0..volunteers {
        let load: Vec<f64> = (0..horizon)
            .map(|t| (0..types).map(|s| instance.rate(s, t) * x_star.get(v, s, t)).sum::<f64>() * scale)
            .collect();
        for t in 1..horizon {
            let away: f64 = (0..t).map(|tp| load[tp] * dist.survival(t - tp)).sum();
            let b = 1.0 - away;
            if b < scale - 1e-9 {
                return Err(Error::Precondition(format!(
                    "activity probability {b} for v={}, t={} is below 1/(2-q) = {scale}",
                    v + 1,
                    t + 1
                )));
            }
            beta[[v, t]] = b;
        }
    }
    Ok(SdnPlan {
        beta,
        q,
        x_star: x_star.clone(),
    })
}

pub fn sdn_decide(plan: &SdnPlan, instance: &Instance, t: usize, s: usize) -> Result<PolicyDecision> {
    check_period_type(instance, t, s)?;
    let probs = (0..instance.volunteers()).map(|v| plan.prob(v, s, t)).collect();
    Ok(PolicyDecision { probs })
}

#[derive(Debug, Clone)]
pub struct ScaledDownNotification {
    plan: SdnPlan,
}

impl ScaledDownNotification {
    pub fn new(plan: SdnPlan) -> Self {
        Self { plan }
    }

    pub fn plan(&self) -> &SdnPlan {
        &self.plan
    }
}

impl Policy for ScaledDownNotification {
    fn name(&self) -> String {
        "sdn".into()
    }

    fn decide(&self, ctx: &DecisionContext<'_>, _rng: &mut ChaCha8Rng) -> Result<PolicyDecision> {
        sdn_decide(&self.plan, ctx.instance, ctx.t, ctx.s)
    }
}
