//! Seeded random instances for property tests and synthetic experiments.

use ndarray::Array2;
use rand::Rng;

use crate::model::{Instance, InterActivity};

/// Which inter-activity family a random instance uses.
#[derive(Debug, Clone, PartialEq)]
pub enum DistChoice {
    Any,
    Geometric,
    Deterministic,
    Tabulated,
    Fixed(InterActivity),
}

/// Dimension limits for [`random_instance`]. With `exact` unset every
/// dimension is drawn uniformly from `1..=limit`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomShape {
    pub volunteers: usize,
    pub types: usize,
    pub horizon: usize,
    pub exact: bool,
    pub dist: DistChoice,
}

impl RandomShape {
    pub fn new(volunteers: usize, types: usize, horizon: usize) -> Self {
        Self {
            volunteers,
            types,
            horizon,
            exact: false,
            dist: DistChoice::Any,
        }
    }

    pub fn exact(volunteers: usize, types: usize, horizon: usize) -> Self {
        Self {
            exact: true,
            ..Self::new(volunteers, types, horizon)
        }
    }

    pub fn with_dist(mut self, dist: DistChoice) -> Self {
        self.dist = dist;
        self
    }
}

fn random_dist(rng: &mut (impl Rng + ?Sized), choice: &DistChoice) -> InterActivity {
    let choice = match choice {
        DistChoice::Any => match rng.random_range(0..3) {
            0 => DistChoice::Geometric,
            1 => DistChoice::Deterministic,
            _ => DistChoice::Tabulated,
        },
        other => other.clone(),
    };
    match choice {
        DistChoice::Geometric => InterActivity::geometric(rng.random_range(0.05..=1.0)).expect("valid range"),
        DistChoice::Deterministic => InterActivity::deterministic(rng.random_range(1..=4)).expect("length >= 1"),
        DistChoice::Tabulated => {
            let len = rng.random_range(1..=4);
            let weights: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..1.0)).collect();
            let total: f64 = weights.iter().sum();
            let probs = if total > 0.0 {
                weights.iter().map(|w| w / total).collect()
            } else {
                vec![1.0]
            };
            InterActivity::tabulated(probs).expect("normalized")
        }
        DistChoice::Fixed(dist) => dist,
        DistChoice::Any => unreachable!(),
    }
}

/// Random valid instance: roughly a fifth of arrival and match entries are
/// zero, and every arrival row sums to at most one.
pub fn random_instance(rng: &mut (impl Rng + ?Sized), shape: &RandomShape) -> Instance {
    let mut dim = |limit: usize| {
        if shape.exact {
            limit.max(1)
        } else {
            rng.random_range(1..=limit.max(1))
        }
    };
    let (volunteers, types, horizon) = (dim(shape.volunteers), dim(shape.types), dim(shape.horizon));

    let mut arrivals = Array2::zeros((horizon, types));
    for mut row in arrivals.outer_iter_mut() {
        let weights: Vec<f64> = (0..types)
            .map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.0..1.0) })
            .collect();
        let total: f64 = weights.iter().sum();
        if total == 0.0 {
            continue;
        }
        let mass = rng.random_range(0.1..=1.0);
        for (entry, w) in row.iter_mut().zip(&weights) {
            *entry = (w / total * mass).min(1.0);
        }
        // guard against the normalized row landing a hair above one
        let sum: f64 = row.sum();
        if sum > 1.0 {
            row.mapv_inplace(|x| x / sum);
        }
    }
    let match_probs = Array2::from_shape_fn((volunteers, types), |_| {
        if rng.random_bool(0.15) {
            0.0
        } else {
            rng.random_range(0.0..=1.0)
        }
    });
    let dist = random_dist(rng, &shape.dist);
    Instance::new(arrivals, match_probs, dist).expect("random instance is valid by construction")
}
