use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::policies::{BeliefState, DecisionContext, Policy};

/// Random stream for episode `episode` of a run seeded with `seed`.
pub fn episode_rng(seed: u64, episode: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(episode);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodRecord {
    /// Arrived task type, if any.
    pub arrival: Option<usize>,
    /// Activity of each volunteer when the period's arrival is drawn.
    pub active: Vec<bool>,
    pub notified: Vec<usize>,
    pub responders: Vec<usize>,
    /// Lowest-indexed responder.
    pub completed_by: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpisodeLog {
    pub completed: usize,
    pub periods: Vec<PeriodRecord>,
}

impl EpisodeLog {
    /// Tasks credited to each volunteer.
    pub fn attribution(&self, volunteers: usize) -> Vec<usize> {
        let mut counts = vec![0; volunteers];
        for v in self.periods.iter().filter_map(|p| p.completed_by) {
            counts[v] += 1;
        }
        counts
    }
}

/// Plays one episode, reporting each period to `observe`.
pub(crate) fn play(
    instance: &Instance,
    policy: &dyn Policy,
    rng: &mut ChaCha8Rng,
    mut observe: impl FnMut(usize, &PeriodRecord),
) -> Result<usize> {
    let (volunteers, types, horizon) = instance.shape();
    let dist = instance.dist();
    let track_beliefs = policy.uses_beliefs();
    let mut beliefs = BeliefState::new(volunteers);
    // volunteer v is active in period t iff free_at[v] <= t
    let mut free_at = vec![0u64; volunteers];
    let mut completed = 0;
    let mut record = PeriodRecord {
        arrival: None,
        active: vec![true; volunteers],
        notified: Vec::with_capacity(volunteers),
        responders: Vec::with_capacity(volunteers),
        completed_by: None,
    };

    for t in 0..horizon {
        if track_beliefs && t > 0 {
            beliefs.step(dist, t);
        }
        for (a, f) in record.active.iter_mut().zip(&free_at) {
            *a = *f <= t as u64;
        }
        record.notified.clear();
        record.responders.clear();
        record.completed_by = None;

        let u: f64 = rng.random();
        let mut cumulative = 0.0;
        record.arrival = (0..types).find(|&s| {
            cumulative += instance.rate(s, t);
            u < cumulative
        });

        if let Some(s) = record.arrival {
            let ctx = DecisionContext {
                instance,
                t,
                s,
                beliefs: &beliefs,
            };
            let decision = policy.decide(&ctx, rng)?;
            if decision.probs.len() != volunteers {
                return Err(Error::Dimension(format!(
                    "policy {} returned {} probabilities for {volunteers} volunteers",
                    policy.name(),
                    decision.probs.len()
                )));
            }
            for (v, p) in decision.probs.iter().enumerate() {
                let coin: f64 = rng.random();
                if coin < *p {
                    record.notified.push(v);
                }
            }
            for &v in &record.notified {
                if record.active[v] {
                    let coin: f64 = rng.random();
                    if coin < instance.match_prob(v, s) {
                        record.responders.push(v);
                    }
                }
            }
            for &v in &record.notified {
                if record.active[v] {
                    free_at[v] = t as u64 + dist.sample(rng);
                }
            }
            record.completed_by = record.responders.first().copied();
            if record.completed_by.is_some() {
                completed += 1;
            }
            if track_beliefs {
                for &v in &record.notified {
                    beliefs.notify(v, t);
                }
            }
        }
        observe(t, &record);
    }
    Ok(completed)
}

pub fn run_episode(instance: &Instance, policy: &dyn Policy, rng: &mut ChaCha8Rng) -> Result<EpisodeLog> {
    let mut periods = Vec::with_capacity(instance.horizon());
    let completed = play(instance, policy, rng, |_, rec| periods.push(rec.clone()))?;
    Ok(EpisodeLog { completed, periods })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::canonical::CanonicalSpec;
    use crate::bounds::random::{random_instance, RandomShape};
    use crate::model::InterActivity;
    use crate::policies::NotifyAll;
    use ndarray::array;

    #[test]
    fn sure_completion() {
        let inst = Instance::new(array![[1.0]], array![[1.0]], InterActivity::geometric(0.5).unwrap()).unwrap();
        for e in 0..20 {
            let log = run_episode(&inst, &NotifyAll, &mut episode_rng(1, e)).unwrap();
            assert_eq!(log.completed, 1);
            assert_eq!(log.periods[0].completed_by, Some(0));
        }
    }

    #[test]
    fn zero_match_never_completes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let inst = random_instance(&mut rng, &RandomShape::new(4, 3, 10));
        let inst = inst.with_match_probs(ndarray::Array2::zeros((inst.volunteers(), inst.types()))).unwrap();
        for e in 0..50 {
            assert_eq!(run_episode(&inst, &NotifyAll, &mut episode_rng(2, e)).unwrap().completed, 0);
        }
    }

    #[test]
    fn logs_are_consistent_and_reproducible() {
        let inst = CanonicalSpec::I2 { n: 4 }.build().unwrap();
        for e in 0..200 {
            let a = run_episode(&inst, &NotifyAll, &mut episode_rng(3, e)).unwrap();
            let b = run_episode(&inst, &NotifyAll, &mut episode_rng(3, e)).unwrap();
            assert_eq!(a, b);
            assert!(a.periods[0].active.iter().all(|x| *x));
            let mut total = 0;
            for p in &a.periods {
                assert_eq!(p.completed_by, p.responders.iter().min().copied());
                assert!(p.responders.iter().all(|v| p.notified.contains(v) && p.active[*v]));
                if p.arrival.is_none() {
                    assert!(p.notified.is_empty());
                }
                total += p.completed_by.is_some() as usize;
            }
            assert_eq!(total, a.completed);
            assert_eq!(a.attribution(4).iter().sum::<usize>(), a.completed);
        }
    }

    #[test]
    fn deterministic_spell_blocks_exactly() {
        // always an arrival, sure response, spell of 3: completions at t = 0, 3, 6
        let inst = Instance::new(
            ndarray::Array2::ones((8, 1)),
            array![[1.0]],
            InterActivity::deterministic(3).unwrap(),
        )
        .unwrap();
        let log = run_episode(&inst, &NotifyAll, &mut episode_rng(0, 0)).unwrap();
        let done: Vec<usize> = log
            .periods
            .iter()
            .enumerate()
            .filter(|(_, p)| p.completed_by.is_some())
            .map(|(t, _)| t)
            .collect();
        assert_eq!(done, [0, 3, 6]);
    }
}
