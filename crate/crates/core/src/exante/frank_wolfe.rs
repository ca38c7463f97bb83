use ndarray::Array3;

use super::polytope::maximize_linear;
use crate::error::{Error, Result};
use crate::model::{gradient, FractionalSolution, Instance};

/// Step count used when none is given.
pub const DEFAULT_STEPS: usize = 100;

/// Frank-Wolfe with step size `1/m` started from zero.
///
/// The iterate is kept as the running sum of the linear-maximization vertices
/// divided by `m`, so entries that every vertex sets to 1 come out as exactly 1.
pub fn frank_wolfe_aa(instance: &Instance, m: usize) -> Result<FractionalSolution> {
    frank_wolfe_aa_observed(instance, m, |_, _| {})
}

/// As [`frank_wolfe_aa`], calling `observe(i, x_i)` after every iteration.
pub fn frank_wolfe_aa_observed(
    instance: &Instance,
    m: usize,
    mut observe: impl FnMut(usize, &FractionalSolution),
) -> Result<FractionalSolution> {
    if m == 0 {
        return Err(Error::InvalidParameter("Frank-Wolfe step count must be at least 1".into()));
    }
    let mut sum = Array3::zeros(instance.shape());
    let mut x = FractionalSolution::zeros(instance);
    for i in 1..=m {
        let grad = gradient(instance, &x);
        let (vertex, _) = maximize_linear(instance, &grad)?;
        sum += &vertex;
        x = FractionalSolution::from_array(&sum / m as f64);
        observe(i, &x);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::canonical::CanonicalSpec;
    use crate::bounds::random::{random_instance, RandomShape};
    use crate::model::{check_feasible, evaluate_f};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn i5_two_steps() {
        let eps = 0.01;
        let inst = CanonicalSpec::I5 { eps }.build().unwrap();
        let x = frank_wolfe_aa(&inst, 2).unwrap();
        assert_abs_diff_eq!(x.get(0, 0, 0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x.get(1, 0, 0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(x.get(1, 1, 1), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(evaluate_f(&inst, &x).unwrap(), 0.875 - 0.5 * eps, epsilon = 1e-12);
    }

    #[test]
    fn i6_five_steps() {
        let inst = CanonicalSpec::I6.build().unwrap();
        let x = frank_wolfe_aa(&inst, 5).unwrap();
        assert_abs_diff_eq!(evaluate_f(&inst, &x).unwrap(), 1.307, epsilon = 1e-3);
    }

    #[test]
    fn zero_steps_rejected() {
        let inst = CanonicalSpec::I6.build().unwrap();
        assert!(matches!(frank_wolfe_aa(&inst, 0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn every_iterate_is_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let inst = random_instance(&mut rng, &RandomShape::new(4, 3, 8));
            let mut seen = 0;
            frank_wolfe_aa_observed(&inst, 15, |_, x| {
                seen += 1;
                assert!(check_feasible(&inst, x).unwrap().is_empty());
            })
            .unwrap();
            assert_eq!(seen, 15);
        }
    }
}
