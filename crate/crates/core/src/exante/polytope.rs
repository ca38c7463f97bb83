//! Linear maximization over the feasible set of fractional solutions.
//!
//! The inter-activity constraints only couple entries of the same volunteer,
//! so a linear objective over the whole set splits into one LP per volunteer.
//! Every row is a packing constraint (non-negative coefficients, rhs 1), so
//! entries with a zero objective weight can be fixed at zero without losing
//! optimality; they are left out of the LP.

use ndarray::{Array2, Array3, ArrayView2};

use super::lp::{solve_lp, LpProblem};
use crate::error::Result;
use crate::model::Instance;

/// Appends the inter-activity rows for one volunteer whose variables are
/// given as `(s, t, index)` triples.
pub(crate) fn add_capacity_rows(lp: &mut LpProblem, instance: &Instance, vars: &[(usize, usize, usize)]) {
    let dist = instance.dist();
    for t in 0..instance.horizon() {
        let row: Vec<(usize, f64)> = vars
            .iter()
            .filter(|(_, tau, _)| *tau <= t)
            .map(|&(s, tau, j)| (j, instance.rate(s, tau) * dist.survival(t - tau)))
            .filter(|(_, a)| *a > 0.0)
            .collect();
        if !row.is_empty() {
            lp.add_le(row, 1.0);
        }
    }
}

/// `max sum_{s,t} weights[s,t] * x[s,t]` over one volunteer's box and
/// inter-activity constraints. Returns the `S x T` maximizer and its value.
pub fn maximize_for_volunteer(
    instance: &Instance,
    weights: ArrayView2<'_, f64>,
) -> Result<(Array2<f64>, f64)> {
    let (types, horizon) = (instance.types(), instance.horizon());
    let mut lp = LpProblem::new();
    let mut vars = Vec::new();
    for t in 0..horizon {
        for s in 0..types {
            let w = weights[[s, t]];
            if instance.rate(s, t) > 0.0 && w > 0.0 {
                vars.push((s, t, lp.add_var(w, 0.0, 1.0)));
            }
        }
    }
    add_capacity_rows(&mut lp, instance, &vars);
    let sol = solve_lp(&lp)?;
    let mut x = Array2::zeros((types, horizon));
    for &(s, t, j) in &vars {
        x[[s, t]] = sol.x[j];
    }
    Ok((x, sol.value))
}

/// Volunteer-by-volunteer linear maximization over the full feasible set.
/// `weights` is shaped `(V, S, T)`.
pub fn maximize_linear(instance: &Instance, weights: &Array3<f64>) -> Result<(Array3<f64>, f64)> {
    let mut x = Array3::zeros(instance.shape());
    let mut value = 0.0;
    for v in 0..instance.volunteers() {
        let (xv, val) = maximize_for_volunteer(instance, weights.slice(ndarray::s![v, .., ..]))?;
        x.slice_mut(ndarray::s![v, .., ..]).assign(&xv);
        value += val;
    }
    Ok((x, value))
}

/// The same maximization posed as a single LP over all volunteers.
pub fn maximize_linear_joint(instance: &Instance, weights: &Array3<f64>) -> Result<(Array3<f64>, f64)> {
    let (volunteers, types, horizon) = instance.shape();
    let mut lp = LpProblem::new();
    let mut per_volunteer = vec![Vec::new(); volunteers];
    for (v, vars) in per_volunteer.iter_mut().enumerate() {
        for t in 0..horizon {
            for s in 0..types {
                let w = weights[[v, s, t]];
                if instance.rate(s, t) > 0.0 && w > 0.0 {
                    vars.push((s, t, lp.add_var(w, 0.0, 1.0)));
                }
            }
        }
    }
    for vars in &per_volunteer {
        add_capacity_rows(&mut lp, instance, vars);
    }
    let sol = solve_lp(&lp)?;
    let mut x = Array3::zeros((volunteers, types, horizon));
    for (v, vars) in per_volunteer.iter().enumerate() {
        for &(s, t, j) in vars {
            x[[v, s, t]] = sol.x[j];
        }
    }
    Ok((x, sol.value))
}
