use ndarray::Array3;

use super::lp::{solve_lp, LpProblem};
use super::polytope::add_capacity_rows;
use crate::error::Result;
use crate::model::{FractionalSolution, Instance};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkResult {
    pub x_lp: FractionalSolution,
    pub lp_value: f64,
}

/// Benchmark objective `sum_{s,t} rate * min(sum_v x p, 1)` at `x`.
pub fn lp_objective(instance: &Instance, x: &FractionalSolution) -> Result<f64> {
    x.ensure_shape(instance)?;
    let (volunteers, types, horizon) = instance.shape();
    let mut total = 0.0;
    for t in 0..horizon {
        for s in 0..types {
            let covered: f64 = (0..volunteers)
                .map(|v| x.get(v, s, t) * instance.match_prob(v, s))
                .sum();
            total += instance.rate(s, t) * covered.min(1.0);
        }
    }
    Ok(total)
}

/// Solves the linearized benchmark program.
///
/// `min(sum x p, 1)` is replaced by an auxiliary `y[s,t] <= sum_v x p`,
/// `y <= 1`. Entries with a zero rate or zero match probability never enter
/// the objective and are fixed at zero.
pub fn benchmark_lp(instance: &Instance) -> Result<BenchmarkResult> {
    let (volunteers, types, horizon) = instance.shape();
    let mut lp = LpProblem::new();
    let mut per_volunteer: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); volunteers];
    for t in 0..horizon {
        for s in 0..types {
            let rate = instance.rate(s, t);
            if rate == 0.0 {
                continue;
            }
            let mut row = Vec::new();
            for (v, vars) in per_volunteer.iter_mut().enumerate() {
                let p = instance.match_prob(v, s);
                if p > 0.0 {
                    let j = lp.add_var(0.0, 0.0, 1.0);
                    vars.push((s, t, j));
                    row.push((j, -p));
                }
            }
            if row.is_empty() {
                continue;
            }
            let y = lp.add_var(rate, 0.0, 1.0);
            row.push((y, 1.0));
            lp.add_le(row, 0.0);
        }
    }
    for vars in &mut per_volunteer {
        vars.sort_unstable_by_key(|&(_, t, _)| t);
        add_capacity_rows(&mut lp, instance, vars);
    }
    let sol = solve_lp(&lp)?;
    let mut x = Array3::zeros((volunteers, types, horizon));
    for (v, vars) in per_volunteer.iter().enumerate() {
        for &(s, t, j) in vars {
            x[[v, s, t]] = sol.x[j];
        }
    }
    Ok(BenchmarkResult {
        x_lp: FractionalSolution::from_array(x),
        lp_value: sol.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::canonical::CanonicalSpec;
    use crate::bounds::random::{random_instance, RandomShape};
    use crate::model::{check_feasible, evaluate_f};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn i4_value_and_solution() {
        let inst = CanonicalSpec::I4 { q: 0.1, eps: 1e-3 }.build().unwrap();
        let res = benchmark_lp(&inst).unwrap();
        assert_abs_diff_eq!(res.lp_value, 0.101, epsilon = 1e-9);
        assert_abs_diff_eq!(res.x_lp.get(0, 0, 0), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(res.x_lp.get(0, 1, 1), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn i2_value_is_one_plus_n() {
        let inst = CanonicalSpec::I2 { n: 4 }.build().unwrap();
        let res = benchmark_lp(&inst).unwrap();
        assert_abs_diff_eq!(res.lp_value, 5.0, epsilon = 1e-6);
        let mut ones = FractionalSolution::zeros(&inst);
        ones.values_mut().fill(1.0);
        assert_abs_diff_eq!(lp_objective(&inst, &ones).unwrap(), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_match_probabilities_give_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let inst = random_instance(&mut rng, &RandomShape::new(3, 2, 5));
        let inst = inst.with_match_probs(ndarray::Array2::zeros((inst.volunteers(), inst.types()))).unwrap();
        assert_eq!(benchmark_lp(&inst).unwrap().lp_value, 0.0);
    }

    #[test]
    fn value_matches_objective_and_dominates_f() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let inst = random_instance(&mut rng, &RandomShape::new(5, 4, 10));
            let res = benchmark_lp(&inst).unwrap();
            assert!(check_feasible(&inst, &res.x_lp).unwrap().is_empty());
            assert_abs_diff_eq!(lp_objective(&inst, &res.x_lp).unwrap(), res.lp_value, epsilon = 1e-6);
            // random feasible points: scale a random tensor into the set
            let mut x = FractionalSolution::zeros(&inst);
            x.values_mut().mapv_inplace(|_| rng.random::<f64>());
            let worst = (0..inst.volunteers())
                .flat_map(|v| (0..inst.horizon()).map(move |t| (v, t)))
                .map(|(v, t)| crate::model::capacity_load(&inst, &x, v, t))
                .fold(1.0, f64::max);
            x.values_mut().mapv_inplace(|e| e / worst);
            assert!(res.lp_value + 1e-6 >= evaluate_f(&inst, &x).unwrap());
        }
    }
}
