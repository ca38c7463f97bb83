//! The always-active completion objective `f` and its per-volunteer split.

use ndarray::Array3;

use super::instance::Instance;
use super::solution::FractionalSolution;
use crate::error::{Error, Result};

/// Expected completions if every volunteer were active whenever notified and
/// notifications were sent independently according to `x`.
pub fn evaluate_f(instance: &Instance, x: &FractionalSolution) -> Result<f64> {
    x.ensure_shape(instance)?;
    let (volunteers, types, horizon) = instance.shape();
    let mut total = 0.0;
    for t in 0..horizon {
        for s in 0..types {
            let rate = instance.rate(s, t);
            if rate == 0.0 {
                continue;
            }
            let miss: f64 = (0..volunteers)
                .map(|v| 1.0 - x.get(v, s, t) * instance.match_prob(v, s))
                .product();
            total += rate * (1.0 - miss);
        }
    }
    Ok(total)
}

/// Contribution of volunteer `v` under index priority: the probability mass
/// of `v` being the lowest-indexed responder, summed over arrivals.
pub fn evaluate_fv(instance: &Instance, x: &FractionalSolution, v: usize) -> Result<f64> {
    x.ensure_shape(instance)?;
    let (volunteers, types, horizon) = instance.shape();
    if v >= volunteers {
        return Err(Error::Index {
            what: "volunteer",
            index: v,
            bound: volunteers,
        });
    }
    let mut total = 0.0;
    for t in 0..horizon {
        for s in 0..types {
            let rate = instance.rate(s, t);
            if rate == 0.0 {
                continue;
            }
            let ahead: f64 = (0..v)
                .map(|u| 1.0 - instance.match_prob(u, s) * x.get(u, s, t))
                .product();
            total += rate * ahead * instance.match_prob(v, s) * x.get(v, s, t);
        }
    }
    Ok(total)
}

/// `df/dx[v,s,t] = rate * p[v,s] * prod_{u != v} (1 - x[u,s,t] p[u,s])`.
///
/// Products over the other volunteers use prefix/suffix sweeps so that a
/// zero factor does not require division.
pub fn gradient(instance: &Instance, x: &FractionalSolution) -> Array3<f64> {
    let (volunteers, types, horizon) = instance.shape();
    let mut grad = Array3::zeros((volunteers, types, horizon));
    let mut prefix = vec![1.0; volunteers + 1];
    let mut suffix = vec![1.0; volunteers + 1];
    for t in 0..horizon {
        for s in 0..types {
            let rate = instance.rate(s, t);
            if rate == 0.0 {
                continue;
            }
            for v in 0..volunteers {
                prefix[v + 1] = prefix[v] * (1.0 - x.get(v, s, t) * instance.match_prob(v, s));
            }
            for v in (0..volunteers).rev() {
                suffix[v] = suffix[v + 1] * (1.0 - x.get(v, s, t) * instance.match_prob(v, s));
            }
            for v in 0..volunteers {
                grad[[v, s, t]] = rate * instance.match_prob(v, s) * prefix[v] * suffix[v + 1];
            }
        }
    }
    grad
}
