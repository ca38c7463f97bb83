use ndarray::Array2;
use rayon::prelude::*;

use super::engine::{episode_rng, play};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::policies::Policy;

/// Aggregate outcome of a batch of episodes.
///
/// Sums are kept as integers so that the result does not depend on how
/// episodes were split across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct SimStats {
    pub episodes: u64,
    pub seed: u64,
    pub total_completed: u64,
    pub total_completed_sq: u128,
    /// Tasks credited to each volunteer, summed over episodes.
    pub attribution_counts: Vec<u64>,
}

impl SimStats {
    pub fn mean_completed(&self) -> f64 {
        self.total_completed as f64 / self.episodes as f64
    }

    /// Sample standard deviation over `sqrt(episodes)`.
    pub fn std_error(&self) -> f64 {
        let n = self.episodes as u128;
        if n < 2 {
            return 0.0;
        }
        let sum = self.total_completed as u128;
        // n * sum_sq - sum^2 is exact and non-negative
        let centered = n * self.total_completed_sq - sum * sum;
        let variance = centered as f64 / (n * (n - 1)) as f64;
        (variance / n as f64).sqrt()
    }

    /// Mean tasks credited to each volunteer.
    pub fn attribution(&self) -> Vec<f64> {
        self.attribution_counts
            .iter()
            .map(|c| *c as f64 / self.episodes as f64)
            .collect()
    }

    /// Mean completions over `lp_value`; `None` when the benchmark is zero.
    pub fn ratio_to(&self, lp_value: f64) -> Option<f64> {
        (lp_value > 0.0).then(|| self.mean_completed() / lp_value)
    }
}

struct Tally {
    episodes: u64,
    sum: u64,
    sum_sq: u128,
    credit: Vec<u64>,
}

impl Tally {
    fn empty(volunteers: usize) -> Self {
        Self {
            episodes: 0,
            sum: 0,
            sum_sq: 0,
            credit: vec![0; volunteers],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.credit.iter_mut().zip(&other.credit) {
            *a += b;
        }
        self.episodes += other.episodes;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self
    }
}

/// Runs episodes `first .. first + count` of the stream family `seed`.
/// Splitting a run into consecutive ranges reproduces the same episodes.
pub fn simulate_range(instance: &Instance, policy: &dyn Policy, seed: u64, first: u64, count: u64) -> Result<SimStats> {
    if count == 0 {
        return Err(Error::InvalidParameter("episode count must be at least 1".into()));
    }
    let volunteers = instance.volunteers();
    let tally = (first..first + count)
        .into_par_iter()
        .map(|e| {
            let mut rng = episode_rng(seed, e);
            let mut credit = vec![0u64; volunteers];
            let done = play(instance, policy, &mut rng, |_, rec| {
                if let Some(v) = rec.completed_by {
                    credit[v] += 1;
                }
            })? as u64;
            Ok::<_, Error>(Tally {
                episodes: 1,
                sum: done,
                sum_sq: (done as u128) * (done as u128),
                credit,
            })
        })
        .try_reduce(|| Tally::empty(volunteers), |a, b| Ok(a.merge(b)))?;
    Ok(SimStats {
        episodes: tally.episodes,
        seed,
        total_completed: tally.sum,
        total_completed_sq: tally.sum_sq,
        attribution_counts: tally.credit,
    })
}

pub fn simulate(instance: &Instance, policy: &dyn Policy, episodes: u64, seed: u64) -> Result<SimStats> {
    simulate_range(instance, policy, seed, 0, episodes)
}

/// Fraction of episodes in which each volunteer is active when the arrival
/// of period `t` is drawn, shaped `(V, T)`.
pub fn empirical_active_prob(instance: &Instance, policy: &dyn Policy, episodes: u64, seed: u64) -> Result<Array2<f64>> {
    if episodes == 0 {
        return Err(Error::InvalidParameter("episode count must be at least 1".into()));
    }
    let (volunteers, horizon) = (instance.volunteers(), instance.horizon());
    let counts = (0..episodes)
        .into_par_iter()
        .map(|e| {
            let mut rng = episode_rng(seed, e);
            let mut seen = Array2::<u64>::zeros((volunteers, horizon));
            play(instance, policy, &mut rng, |t, rec| {
                for (v, a) in rec.active.iter().enumerate() {
                    seen[[v, t]] += *a as u64;
                }
            })?;
            Ok::<_, Error>(seen)
        })
        .try_reduce(|| Array2::zeros((volunteers, horizon)), |a, b| Ok(a + b))?;
    Ok(counts.mapv(|c| c as f64 / episodes as f64))
}
