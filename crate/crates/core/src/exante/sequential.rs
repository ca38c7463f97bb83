use ndarray::{s, Array2, Array3};

use super::polytope::maximize_for_volunteer;
use crate::error::Result;
use crate::model::{FractionalSolution, Instance};

/// Volunteers in index order each maximize their own priority-weighted
/// contribution, holding the solutions of lower-indexed volunteers fixed.
pub fn sequential_sq(instance: &Instance) -> Result<FractionalSolution> {
    let (volunteers, types, horizon) = instance.shape();
    let mut x = Array3::zeros((volunteers, types, horizon));
    // probability that no lower-indexed volunteer responds
    let mut ahead = Array2::<f64>::ones((types, horizon));
    for v in 0..volunteers {
        let mut weights = Array2::zeros((types, horizon));
        for t in 0..horizon {
            for st in 0..types {
                weights[[st, t]] = instance.rate(st, t) * instance.match_prob(v, st) * ahead[[st, t]];
            }
        }
        let (xv, _) = maximize_for_volunteer(instance, weights.view())?;
        for t in 0..horizon {
            for st in 0..types {
                ahead[[st, t]] *= 1.0 - instance.match_prob(v, st) * xv[[st, t]];
            }
        }
        x.slice_mut(s![v, .., ..]).assign(&xv);
    }
    Ok(FractionalSolution::from_array(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::canonical::CanonicalSpec;
    use crate::bounds::random::{random_instance, RandomShape};
    use crate::exante::benchmark::benchmark_lp;
    use crate::model::{check_feasible, evaluate_f, evaluate_fv};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn i5_solution() {
        let eps = 0.01;
        let inst = CanonicalSpec::I5 { eps }.build().unwrap();
        let x = sequential_sq(&inst).unwrap();
        assert_abs_diff_eq!(x.get(0, 0, 0), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(x.get(1, 0, 0), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(x.get(1, 1, 1), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(evaluate_f(&inst, &x).unwrap(), 1.0 - eps, epsilon = 1e-9);
    }

    #[test]
    fn i6_value() {
        let inst = CanonicalSpec::I6.build().unwrap();
        let x = sequential_sq(&inst).unwrap();
        assert_abs_diff_eq!(evaluate_f(&inst, &x).unwrap(), 1.296, epsilon = 1e-3);
    }

    #[test]
    fn single_volunteer_matches_benchmark() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let inst = random_instance(&mut rng, &RandomShape::exact(1, 2, 4));
            let x = sequential_sq(&inst).unwrap();
            let lp = benchmark_lp(&inst).unwrap();
            assert_abs_diff_eq!(evaluate_fv(&inst, &x, 0).unwrap(), lp.lp_value, epsilon = 1e-6);
        }
    }

    #[test]
    fn feasible_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..30 {
            let inst = random_instance(&mut rng, &RandomShape::new(5, 4, 10));
            let x = sequential_sq(&inst).unwrap();
            assert!(check_feasible(&inst, &x).unwrap().is_empty());
        }
    }
}
