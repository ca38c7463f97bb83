use std::collections::BTreeMap;

use crate::model::InterActivity;

/// Exact marginal probability that each volunteer is active, given only the
/// history of notifications sent.
///
/// Inactive mass is tagged with the period of the notification that caused
/// it, since the reactivation hazard depends on the elapsed time.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefState {
    active: Vec<f64>,
    inactive: Vec<BTreeMap<usize, f64>>,
}

impl BeliefState {
    /// Everybody starts active.
    pub fn new(volunteers: usize) -> Self {
        Self {
            active: vec![1.0; volunteers],
            inactive: vec![BTreeMap::new(); volunteers],
        }
    }

    pub fn volunteers(&self) -> usize {
        self.active.len()
    }

    pub fn active(&self, v: usize) -> f64 {
        self.active[v]
    }

    pub fn inactive_masses(&self, v: usize) -> &BTreeMap<usize, f64> {
        &self.inactive[v]
    }

    /// `a_v >= theta`, with a little slack for rounding.
    pub fn is_eligible(&self, v: usize, theta: f64) -> bool {
        self.active[v] >= theta - 1e-12
    }

    /// Advances to period `t`: inactive mass notified at `tau` reactivates
    /// with the hazard at elapsed time `t - tau`.
    pub fn step(&mut self, dist: &InterActivity, t: usize) {
        for (a, masses) in self.active.iter_mut().zip(&mut self.inactive) {
            masses.retain(|&tau, mass| {
                debug_assert!(tau < t);
                let elapsed = t - tau;
                let h = if dist.survival(elapsed) == 0.0 {
                    1.0
                } else {
                    dist.hazard(elapsed)
                };
                let back = h * *mass;
                *a += back;
                *mass -= back;
                *mass > 0.0
            });
        }
    }

    /// Notifying `v` at `t` sends its active mass into inactivity; mass that
    /// is already inactive is unaffected.
    pub fn notify(&mut self, v: usize, t: usize) {
        let a = std::mem::take(&mut self.active[v]);
        if a > 0.0 {
            *self.inactive[v].entry(t).or_insert(0.0) += a;
        }
    }

    /// Sets volunteer `v`'s belief directly (for tests and replays).
    pub fn set(&mut self, v: usize, active: f64, inactive: BTreeMap<usize, f64>) {
        self.active[v] = active;
        self.inactive[v] = inactive;
    }
}

/// Functional form of [`BeliefState::step`].
pub fn belief_step(state: &BeliefState, dist: &InterActivity, t: usize) -> BeliefState {
    let mut next = state.clone();
    next.step(dist, t);
    next
}

/// Functional form of [`BeliefState::notify`].
pub fn belief_notify(state: &BeliefState, v: usize, t: usize) -> BeliefState {
    let mut next = state.clone();
    next.notify(v, t);
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn total(state: &BeliefState, v: usize) -> f64 {
        state.active(v) + state.inactive_masses(v).values().sum::<f64>()
    }

    #[test]
    fn deterministic_returns_exactly() {
        let dist = InterActivity::deterministic(7).unwrap();
        let mut b = BeliefState::new(1);
        b.notify(0, 0);
        for t in 1..7 {
            b.step(&dist, t);
            assert_eq!(b.active(0), 0.0);
        }
        b.step(&dist, 7);
        assert_eq!(b.active(0), 1.0);
        assert!(b.inactive_masses(0).is_empty());
    }

    #[test]
    fn six_quiet_days_make_eligible() {
        // notified on day 1 (index 0): eligible again on day 8 only
        let dist = InterActivity::deterministic(7).unwrap();
        let mut b = BeliefState::new(1);
        b.notify(0, 0);
        let eligible: Vec<bool> = (1..10)
            .map(|t| {
                b.step(&dist, t);
                b.is_eligible(0, 1.0)
            })
            .collect();
        assert_eq!(eligible, [false, false, false, false, false, false, true, true, true]);
    }

    #[test]
    fn geometric_moves_fixed_fraction() {
        let dist = InterActivity::geometric(0.3).unwrap();
        let mut b = BeliefState::new(1);
        b.notify(0, 0);
        b.step(&dist, 1);
        assert_abs_diff_eq!(b.active(0), 0.3, epsilon = 1e-15);
        b.step(&dist, 2);
        assert_abs_diff_eq!(b.active(0), 0.3 + 0.7 * 0.3, epsilon = 1e-15);
    }

    #[test]
    fn tabulated_hazards() {
        let dist = InterActivity::tabulated(vec![0.2, 0.8]).unwrap();
        let b = belief_notify(&BeliefState::new(1), 0, 0);
        let b = belief_step(&b, &dist, 1);
        assert_abs_diff_eq!(b.active(0), 0.2, epsilon = 1e-15);
        let b = belief_step(&b, &dist, 2);
        assert_eq!(b.active(0), 1.0);
    }

    #[test]
    fn notify_examples() {
        let b = belief_notify(&BeliefState::new(1), 0, 4);
        assert_eq!(b.active(0), 0.0);
        assert_eq!(b.inactive_masses(0).get(&4), Some(&1.0));
        assert_eq!(belief_notify(&b, 0, 5), b);

        let mut b = BeliefState::new(1);
        b.set(0, 0.4, BTreeMap::from([(0, 0.6)]));
        let b = belief_notify(&b, 0, 2);
        assert_eq!(b.active(0), 0.0);
        assert_eq!(b.inactive_masses(0), &BTreeMap::from([(0, 0.6), (2, 0.4)]));
    }

    proptest! {
        #[test]
        fn mass_is_conserved(
            notify in proptest::collection::vec(any::<bool>(), 1..30),
            probs in proptest::collection::vec(0.01f64..1.0, 1..5),
        ) {
            let sum: f64 = probs.iter().sum();
            let dist = InterActivity::tabulated(probs.iter().map(|p| p / sum).collect()).unwrap();
            let mut b = BeliefState::new(1);
            for (t, n) in notify.iter().enumerate() {
                if t > 0 {
                    b.step(&dist, t);
                }
                if *n {
                    b.notify(0, t);
                }
                prop_assert!((total(&b, 0) - 1.0).abs() <= 1e-9);
                prop_assert!(b.active(0) >= 0.0);
                prop_assert!(b.inactive_masses(0).values().all(|m| *m >= 0.0));
            }
        }
    }
}
