//! Baseline policies. Those that care about availability consult the belief
//! filter and treat a volunteer as eligible when her belief of being active
//! is at least `theta`.

use std::collections::HashMap;
use std::sync::Mutex;

use ndarray::{s, Array2};
use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;

use super::{check_period_type, DecisionContext, Policy, PolicyDecision};
use crate::error::{Error, Result};
use crate::exante::benchmark_lp;
use crate::model::{FractionalSolution, Instance};

fn eligible(ctx: &DecisionContext<'_>, theta: f64) -> Vec<usize> {
    (0..ctx.instance.volunteers())
        .filter(|&v| ctx.beliefs.is_eligible(v, theta))
        .collect()
}

/// Indices sorted by descending match probability for type `s`, ties to the
/// lower index.
fn by_match_prob(instance: &Instance, s: usize, mut vs: Vec<usize>) -> Vec<usize> {
    vs.sort_by(|&a, &b| {
        instance
            .match_prob(b, s)
            .total_cmp(&instance.match_prob(a, s))
            .then(a.cmp(&b))
    });
    vs
}

#[derive(Debug, Clone, Default)]
pub struct NotifyAll;

impl Policy for NotifyAll {
    fn name(&self) -> String {
        "all".into()
    }

    fn decide(&self, ctx: &DecisionContext<'_>, _rng: &mut ChaCha8Rng) -> Result<PolicyDecision> {
        check_period_type(ctx.instance, ctx.t, ctx.s)?;
        Ok(PolicyDecision {
            probs: vec![1.0; ctx.instance.volunteers()],
        })
    }
}

/// `n` eligible volunteers chosen uniformly without replacement.
#[derive(Debug, Clone)]
pub struct NotifyRandom {
    pub n: usize,
    pub theta: f64,
}

impl Policy for NotifyRandom {
    fn name(&self) -> String {
        format!("random:{}", self.n)
    }

    fn uses_beliefs(&self) -> bool {
        true
    }

    fn decide(&self, ctx: &DecisionContext<'_>, rng: &mut ChaCha8Rng) -> Result<PolicyDecision> {
        check_period_type(ctx.instance, ctx.t, ctx.s)?;
        let pool = eligible(ctx, self.theta);
        let chosen: Vec<usize> = if pool.len() <= self.n {
            pool
        } else {
            sample(rng, pool.len(), self.n).into_iter().map(|i| pool[i]).collect()
        };
        Ok(PolicyDecision::subset(ctx.instance.volunteers(), chosen))
    }
}

/// The `n` eligible volunteers with the largest match probabilities.
#[derive(Debug, Clone)]
pub struct NotifyBest {
    pub n: usize,
    pub theta: f64,
}

impl Policy for NotifyBest {
    fn name(&self) -> String {
        format!("best:{}", self.n)
    }

    fn uses_beliefs(&self) -> bool {
        true
    }

    fn decide(&self, ctx: &DecisionContext<'_>, _rng: &mut ChaCha8Rng) -> Result<PolicyDecision> {
        check_period_type(ctx.instance, ctx.t, ctx.s)?;
        let ranked = by_match_prob(ctx.instance, ctx.s, eligible(ctx, self.theta));
        Ok(PolicyDecision::subset(
            ctx.instance.volunteers(),
            ranked.into_iter().take(self.n),
        ))
    }
}

/// Adds volunteers in descending match probability until the chance that at
/// least one responds (using the activity beliefs) reaches `rho`.
///
/// Volunteers with `p * a = 0` are skipped. If the target is never reached,
/// every remaining candidate is notified.
#[derive(Debug, Clone)]
pub struct NotifyUpTo {
    pub rho: f64,
}

impl Policy for NotifyUpTo {
    fn name(&self) -> String {
        format!("upto:{}", self.rho)
    }

    fn uses_beliefs(&self) -> bool {
        true
    }

    fn decide(&self, ctx: &DecisionContext<'_>, _rng: &mut ChaCha8Rng) -> Result<PolicyDecision> {
        check_period_type(ctx.instance, ctx.t, ctx.s)?;
        let volunteers = ctx.instance.volunteers();
        if self.rho <= 0.0 {
            return Ok(PolicyDecision::subset(volunteers, []));
        }
        let respond = |v: usize| ctx.instance.match_prob(v, ctx.s) * ctx.beliefs.active(v);
        let candidates: Vec<usize> = (0..volunteers).filter(|&v| respond(v) > 0.0).collect();
        let mut chosen = Vec::new();
        let mut miss = 1.0;
        for v in by_match_prob(ctx.instance, ctx.s, candidates) {
            chosen.push(v);
            miss *= 1.0 - respond(v);
            if 1.0 - miss >= self.rho {
                break;
            }
        }
        Ok(PolicyDecision::subset(volunteers, chosen))
    }
}

type RollingKey = (usize, usize, Vec<usize>);

/// Re-solves the benchmark LP over the next `horizon` periods for the
/// currently eligible volunteers (all treated as active), with the current
/// period's arrival fixed to the realized type, and notifies independently
/// with the first-period solution.
#[derive(Debug)]
pub struct RollingHorizon {
    instance: Instance,
    horizon: usize,
    theta: f64,
    cache: Mutex<HashMap<RollingKey, Vec<f64>>>,
}

impl RollingHorizon {
    /// `instance` supplies the primitives the lookahead LP is built from.
    pub fn new(instance: Instance, horizon: usize, theta: f64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidParameter("rolling horizon length must be at least 1".into()));
        }
        Ok(Self {
            instance,
            horizon,
            theta,
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// Mean inter-activity length rounded to the nearest period.
    pub fn default_horizon(instance: &Instance) -> usize {
        (instance.dist().mean().round() as usize).max(1)
    }

    fn first_period_probs(&self, t: usize, s: usize, pool: &[usize]) -> Result<Vec<f64>> {
        let end = (t + self.horizon).min(self.instance.horizon());
        let mut arrivals = self.instance.arrivals().slice(s![t..end, ..]).to_owned();
        arrivals.row_mut(0).fill(0.0);
        arrivals[[0, s]] = 1.0;
        let types = self.instance.types();
        let match_probs = Array2::from_shape_fn((pool.len(), types), |(i, st)| self.instance.match_prob(pool[i], st));
        let window = Instance::new(arrivals, match_probs, self.instance.dist().clone())?;
        let solved = benchmark_lp(&window)?;
        Ok((0..pool.len()).map(|i| solved.x_lp.get(i, s, 0).clamp(0.0, 1.0)).collect())
    }
}

impl Policy for RollingHorizon {
    fn name(&self) -> String {
        format!("rolling:{}", self.horizon)
    }

    fn uses_beliefs(&self) -> bool {
        true
    }

    fn decide(&self, ctx: &DecisionContext<'_>, _rng: &mut ChaCha8Rng) -> Result<PolicyDecision> {
        check_period_type(ctx.instance, ctx.t, ctx.s)?;
        let volunteers = ctx.instance.volunteers();
        let pool = eligible(ctx, self.theta);
        let mut probs = vec![0.0; volunteers];
        if pool.is_empty() {
            return Ok(PolicyDecision { probs });
        }
        let key = (ctx.t, ctx.s, pool.clone());
        let cached = self.cache.lock().expect("cache lock poisoned").get(&key).cloned();
        let first = match cached {
            Some(p) => p,
            None => {
                let p = self.first_period_probs(ctx.t, ctx.s, &pool)?;
                self.cache.lock().expect("cache lock poisoned").insert(key, p.clone());
                p
            }
        };
        for (v, p) in pool.iter().zip(first) {
            probs[*v] = p;
        }
        Ok(PolicyDecision { probs })
    }
}

/// Notifies independently with the ex-ante probabilities.
#[derive(Debug, Clone)]
pub struct FollowExAnte {
    pub x_star: FractionalSolution,
}

impl Policy for FollowExAnte {
    fn name(&self) -> String {
        "exante".into()
    }

    fn decide(&self, ctx: &DecisionContext<'_>, _rng: &mut ChaCha8Rng) -> Result<PolicyDecision> {
        check_period_type(ctx.instance, ctx.t, ctx.s)?;
        Ok(PolicyDecision {
            probs: (0..ctx.instance.volunteers()).map(|v| self.x_star.get(v, ctx.s, ctx.t)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::InterActivity;
    use crate::policies::BeliefState;
    use rand::SeedableRng;

    fn instance(probs: &[f64]) -> Instance {
        Instance::new(
            Array2::from_elem((3, 1), 1.0),
            Array2::from_shape_vec((probs.len(), 1), probs.to_vec()).unwrap(),
            InterActivity::deterministic(2).unwrap(),
        )
        .unwrap()
    }

    fn decide(policy: &dyn Policy, inst: &Instance, beliefs: &BeliefState) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ctx = DecisionContext { instance: inst, t: 0, s: 0, beliefs };
        policy.decide(&ctx, &mut rng).unwrap().probs
    }

    #[test]
    fn upto_stops_at_threshold() {
        let inst = instance(&[0.3, 0.6]);
        let b = BeliefState::new(2);
        assert_eq!(decide(&NotifyUpTo { rho: 0.5 }, &inst, &b), vec![0.0, 1.0]);
        assert_eq!(decide(&NotifyUpTo { rho: 0.7 }, &inst, &b), vec![1.0, 1.0]);
        // unreachable target: everyone with a positive response chance
        assert_eq!(decide(&NotifyUpTo { rho: 0.99 }, &inst, &b), vec![1.0, 1.0]);
        assert_eq!(decide(&NotifyUpTo { rho: 0.0 }, &inst, &b), vec![0.0, 0.0]);
    }

    #[test]
    fn upto_skips_zero_response_and_uses_beliefs() {
        let inst = instance(&[0.9, 0.0, 0.5]);
        let mut b = BeliefState::new(3);
        b.notify(0, 0);
        assert_eq!(decide(&NotifyUpTo { rho: 0.4 }, &inst, &b), vec![0.0, 0.0, 1.0]);
        let inst = instance(&[0.0, 0.0]);
        assert_eq!(decide(&NotifyUpTo { rho: 0.4 }, &inst, &BeliefState::new(2)), vec![0.0, 0.0]);
    }

    #[test]
    fn best_picks_largest_eligible() {
        let inst = instance(&[0.2, 0.9]);
        let b = BeliefState::new(2);
        assert_eq!(decide(&NotifyBest { n: 1, theta: 1.0 }, &inst, &b), vec![0.0, 1.0]);
        let inst = instance(&[0.5, 0.5, 0.9]);
        let mut b = BeliefState::new(3);
        b.notify(2, 0);
        assert_eq!(decide(&NotifyBest { n: 1, theta: 1.0 }, &inst, &b), vec![1.0, 0.0, 0.0]);
        assert_eq!(decide(&NotifyBest { n: 5, theta: 1.0 }, &inst, &b), vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn all_notifies_everyone() {
        let inst = instance(&[0.1, 0.2, 0.3]);
        assert_eq!(decide(&NotifyAll, &inst, &BeliefState::new(3)), vec![1.0; 3]);
    }

    #[test]
    fn random_respects_eligibility_and_count() {
        let inst = instance(&[0.1, 0.2, 0.3, 0.4]);
        let mut b = BeliefState::new(4);
        b.notify(1, 0);
        let policy = NotifyRandom { n: 2, theta: 1.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut counts = [0usize; 4];
        for _ in 0..3000 {
            let ctx = DecisionContext { instance: &inst, t: 0, s: 0, beliefs: &b };
            let probs = policy.decide(&ctx, &mut rng).unwrap().probs;
            assert_eq!(probs.iter().filter(|p| **p == 1.0).count(), 2);
            for (c, p) in counts.iter_mut().zip(&probs) {
                *c += *p as usize;
            }
        }
        assert_eq!(counts[1], 0);
        for v in [0, 2, 3] {
            assert!((1800..2200).contains(&counts[v]), "{counts:?}");
        }
        let few = NotifyRandom { n: 10, theta: 1.0 };
        assert_eq!(decide(&few, &inst, &b), vec![1.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn rolling_single_volunteer_takes_the_arrival() {
        let inst = instance(&[0.5]);
        let policy = RollingHorizon::new(inst.clone(), 1, 1.0).unwrap();
        assert_eq!(decide(&policy, &inst, &BeliefState::new(1)), vec![1.0]);
        let mut b = BeliefState::new(1);
        b.notify(0, 0);
        assert_eq!(decide(&policy, &inst, &b), vec![0.0]);
        assert!(RollingHorizon::new(inst, 0, 1.0).is_err());
    }

    #[test]
    fn rolling_waits_for_better_match() {
        // a poor match now against a sure match next period, two-period spell
        let inst = Instance::new(
            ndarray::array![[1.0, 0.0], [0.0, 1.0]],
            ndarray::array![[0.1, 1.0]],
            InterActivity::deterministic(2).unwrap(),
        )
        .unwrap();
        let policy = RollingHorizon::new(inst.clone(), 2, 1.0).unwrap();
        assert_eq!(decide(&policy, &inst, &BeliefState::new(1)), vec![0.0]);
        assert_eq!(RollingHorizon::default_horizon(&inst), 2);
    }
}
