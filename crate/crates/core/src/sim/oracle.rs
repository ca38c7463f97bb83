//! Exact value of the best online policy that observes volunteer states, by
//! backward induction over joint volunteer states.
//!
//! A volunteer's state at the start of a period is either active or the time
//! elapsed since the notification that sent her away. Under geometric spells
//! the elapsed time is irrelevant and the state collapses to active/inactive.

use crate::error::{Error, Result};
use crate::model::{Instance, InterActivity};

/// Upper bound on the number of joint states.
pub const ORACLE_STATE_LIMIT: u128 = 1_000_000;

struct Codec {
    radix: usize,
    volunteers: usize,
    memoryless: bool,
}

impl Codec {
    fn states(&self) -> usize {
        self.radix.pow(self.volunteers as u32)
    }

    fn decode(&self, mut index: usize, out: &mut [usize]) {
        for slot in out.iter_mut() {
            *slot = index % self.radix;
            index /= self.radix;
        }
    }

    fn encode(&self, codes: &[usize]) -> usize {
        codes.iter().rev().fold(0, |acc, c| acc * self.radix + c)
    }

    /// Code for an inactive volunteer one period later.
    fn age(&self, code: usize) -> usize {
        if self.memoryless {
            code
        } else {
            (code + 1).min(self.radix - 1)
        }
    }
}

pub fn brute_force_optimal_online(instance: &Instance) -> Result<f64> {
    let (volunteers, types, horizon) = instance.shape();
    let dist = instance.dist();
    let (radix, memoryless) = match dist {
        InterActivity::Geometric { .. } => (2usize, true),
        other => (other.max_support().expect("finite support") as usize + 1, false),
    };
    let states = (radix as u128).checked_pow(volunteers as u32).unwrap_or(u128::MAX);
    if states > ORACLE_STATE_LIMIT || volunteers > 20 {
        return Err(Error::Capacity {
            states,
            limit: ORACLE_STATE_LIMIT,
        });
    }
    let codec = Codec {
        radix,
        volunteers,
        memoryless,
    };
    let hazard = |code: usize| if memoryless { dist.hazard(1) } else { dist.hazard(code) };

    let mut next = vec![0.0; codec.states()];
    let mut current = vec![0.0; codec.states()];
    let mut codes = vec![0usize; volunteers];
    let mut after = vec![0usize; volunteers];
    let mut outcome = vec![0usize; volunteers];

    for t in (0..horizon).rev() {
        for (index, value) in current.iter_mut().enumerate() {
            codec.decode(index, &mut codes);
            let inactive: Vec<usize> = (0..volunteers).filter(|&v| codes[v] != 0).collect();
            let mut total = 0.0;
            // every combination of which inactive volunteers come back
            for mask in 0u32..(1 << inactive.len()) {
                let mut prob = 1.0;
                outcome.copy_from_slice(&codes);
                for (i, &v) in inactive.iter().enumerate() {
                    let h = hazard(codes[v]);
                    if mask & (1 << i) != 0 {
                        prob *= h;
                        outcome[v] = 0;
                    } else {
                        prob *= 1.0 - h;
                    }
                }
                if prob == 0.0 {
                    continue;
                }
                let active: Vec<usize> = (0..volunteers).filter(|&v| outcome[v] == 0).collect();
                let mut advance = |notified: u32| {
                    for v in 0..volunteers {
                        after[v] = if outcome[v] != 0 { codec.age(outcome[v]) } else { 0 };
                    }
                    for (i, &v) in active.iter().enumerate() {
                        if notified & (1 << i) != 0 {
                            after[v] = 1;
                        }
                    }
                    next[codec.encode(&after)]
                };
                let idle = advance(0);
                let mut stage = instance.idle_rate(t) * idle;
                let futures: Vec<f64> = (0..1u32 << active.len()).map(&mut advance).collect();
                for s in 0..types {
                    let rate = instance.rate(s, t);
                    if rate == 0.0 {
                        continue;
                    }
                    let best = futures
                        .iter()
                        .enumerate()
                        .map(|(subset, future)| {
                            let miss: f64 = active
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| subset & (1 << i) != 0)
                                .map(|(_, &v)| 1.0 - instance.match_prob(v, s))
                                .product();
                            1.0 - miss + future
                        })
                        .fold(f64::NEG_INFINITY, f64::max);
                    stage += rate * best;
                }
                total += prob * stage;
            }
            *value = total;
        }
        std::mem::swap(&mut current, &mut next);
    }
    Ok(next[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::canonical::CanonicalSpec;
    use crate::bounds::random::{random_instance, DistChoice, RandomShape};
    use crate::exante::benchmark_lp;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_period_one_volunteer() {
        let inst = Instance::new(array![[0.7]], array![[0.4]], InterActivity::deterministic(3).unwrap()).unwrap();
        assert_abs_diff_eq!(brute_force_optimal_online(&inst).unwrap(), 0.28, epsilon = 1e-15);
    }

    #[test]
    fn prophet_instance_value() {
        let eps = 1e-3;
        let inst = CanonicalSpec::I1 { q: 0.0, eps }.build().unwrap();
        assert_abs_diff_eq!(brute_force_optimal_online(&inst).unwrap(), eps, epsilon = 1e-12);
    }

    #[test]
    fn geometric_i4_saves_for_later() {
        let (q, eps) = (0.1, 1e-3);
        let inst = CanonicalSpec::I4 { q, eps }.build().unwrap();
        // notify now: eps + q * q; wait: q
        assert_abs_diff_eq!(brute_force_optimal_online(&inst).unwrap(), q, epsilon = 1e-12);
    }

    /// Exhaustive search over deterministic state-feedback policies for a
    /// single volunteer with a two-period spell.
    #[test]
    fn matches_enumeration_for_single_volunteer() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let shape = RandomShape::exact(1, 2, 4).with_dist(DistChoice::Fixed(InterActivity::deterministic(2).unwrap()));
        for _ in 0..20 {
            let inst = random_instance(&mut rng, &shape);
            // a policy: notify-or-not for each (t, s); active status is
            // determined by earlier notifications only
            let mut best: f64 = 0.0;
            for plan in 0u32..(1 << 8) {
                let mut value = 0.0;
                // enumerate arrival sequences
                for seq in 0..3usize.pow(4) {
                    let mut prob = 1.0;
                    let mut code = seq;
                    let mut free_at = 0;
                    let mut got = 0.0;
                    for t in 0..4 {
                        let a = code % 3;
                        code /= 3;
                        if a == 2 {
                            prob *= inst.idle_rate(t);
                            continue;
                        }
                        prob *= inst.rate(a, t);
                        if t >= free_at && plan & (1 << (t * 2 + a)) != 0 {
                            got += inst.match_prob(0, a);
                            free_at = t + 2;
                        }
                    }
                    value += prob * got;
                }
                best = best.max(value);
            }
            assert_abs_diff_eq!(brute_force_optimal_online(&inst).unwrap(), best, epsilon = 1e-12);
        }
    }

    #[test]
    fn below_benchmark() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let inst = random_instance(&mut rng, &RandomShape::new(3, 2, 5));
            if inst.dist().max_support().is_some_and(|m| m > 4) {
                continue;
            }
            let opt = brute_force_optimal_online(&inst).unwrap();
            assert!(opt <= benchmark_lp(&inst).unwrap().lp_value + 1e-6);
        }
    }

    #[test]
    fn capacity_guard() {
        let inst = CanonicalSpec::I3 { n: 20 }.build().unwrap();
        assert!(matches!(brute_force_optimal_online(&inst), Err(Error::Capacity { .. })));
    }
}
