//! Dual solution certifying `J[v,1] >= f_v(x) / (2 - q)`.

use crate::error::{Error, Result};
use crate::model::{require_feasible, FractionalSolution, Instance};

/// Slack allowed on the sign and tightness checks.
pub const DUAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub mu: f64,
    pub gamma: Vec<f64>,
    pub alpha: Vec<f64>,
    /// Largest violation of any dual constraint (zero when all are tight).
    pub max_residual: f64,
    /// All `alpha >= -1e-9` and every constraint holds within tolerance.
    pub feasible: bool,
}

/// Builds `mu = 1/(2-q)`, `gamma = mu`, `alpha[0] = 1 - mu` and the `alpha`
/// recursion for volunteer `v`, then checks the dual constraints directly.
pub fn verify_dual_certificate(instance: &Instance, x: &FractionalSolution, v: usize) -> Result<DualCertificate> {
    require_feasible(instance, x)?;
    if v >= instance.volunteers() {
        return Err(Error::Index {
            what: "volunteer",
            index: v,
            bound: instance.volunteers(),
        });
    }
    let horizon = instance.horizon();
    let dist = instance.dist();
    let mu = 1.0 / (2.0 - instance.mdhr());
    // expected notifications of v per period
    let load: Vec<f64> = (0..horizon)
        .map(|t| (0..instance.types()).map(|s| instance.rate(s, t) * x.get(v, s, t)).sum())
        .collect();
    let returns = |t: usize, weights: &[f64]| -> f64 {
        (0..t).map(|tp| weights[tp] * load[tp] * dist.mass(t - tp)).sum()
    };

    let gamma = vec![mu; horizon];
    let mut alpha = vec![0.0; horizon];
    if horizon > 0 {
        alpha[0] = 1.0 - mu;
    }
    for t in 1..horizon {
        alpha[t] = alpha[t - 1] - mu * (load[t - 1] - returns(t, &vec![1.0; t]));
    }

    let mut residual: f64 = 0.0;
    if horizon > 0 {
        residual = residual.max(gamma[0] - (1.0 - alpha[0]));
    }
    for t in 1..horizon {
        let rhs = gamma[t - 1] + alpha[t - 1] - alpha[t] - gamma[t - 1] * load[t - 1] + returns(t, &gamma);
        residual = residual.max(gamma[t] - rhs);
    }
    for g in &gamma {
        residual = residual.max(mu - g).max(-g);
    }
    let feasible = alpha.iter().all(|a| *a >= -DUAL_TOLERANCE) && residual <= DUAL_TOLERANCE;
    Ok(DualCertificate {
        mu,
        gamma,
        alpha,
        max_residual: residual,
        feasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::canonical::CanonicalSpec;
    use crate::bounds::random::{random_instance, RandomShape};
    use crate::exante::select_ex_ante;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_solution_is_flat() {
        let inst = CanonicalSpec::I4 { q: 0.1, eps: 1e-3 }.build().unwrap();
        let cert = verify_dual_certificate(&inst, &FractionalSolution::zeros(&inst), 0).unwrap();
        assert!(cert.feasible);
        for a in &cert.alpha {
            assert_abs_diff_eq!(*a, 1.0 - cert.mu, epsilon = 1e-15);
        }
    }

    #[test]
    fn i2_all_ones_bottoms_out_at_zero() {
        let inst = CanonicalSpec::I2 { n: 4 }.build().unwrap();
        let mut x = FractionalSolution::zeros(&inst);
        x.values_mut().fill(1.0);
        for v in 0..4 {
            let cert = verify_dual_certificate(&inst, &x, v).unwrap();
            assert!(cert.feasible);
            assert_abs_diff_eq!(cert.mu, 1.0 / 1.75, epsilon = 1e-15);
            assert!(cert.alpha.iter().all(|a| *a >= -1e-9));
            assert_abs_diff_eq!(cert.alpha[5], 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn infeasible_input_rejected() {
        let inst = CanonicalSpec::I5 { eps: 0.01 }.build().unwrap();
        let mut x = FractionalSolution::zeros(&inst);
        x.set(1, 0, 0, 1.0);
        x.set(1, 1, 1, 1.0);
        assert!(matches!(verify_dual_certificate(&inst, &x, 1), Err(Error::Precondition(_))));
    }

    /// The recursion must equal its telescoped form
    /// `alpha[t] = 1 - mu - mu * sum_{t' < t} load[t'] (1 - G(t - t'))`.
    #[test]
    fn recursion_matches_telescoped_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        for _ in 0..30 {
            let inst = random_instance(&mut rng, &RandomShape::new(4, 3, 8));
            let sel = select_ex_ante(&inst, 10).unwrap();
            for v in 0..inst.volunteers() {
                let cert = verify_dual_certificate(&inst, &sel.x, v).unwrap();
                assert!(cert.feasible, "{cert:?}");
                for t in 0..inst.horizon() {
                    let tail: f64 = (0..t)
                        .map(|tp| {
                            let load: f64 = (0..inst.types()).map(|s| inst.rate(s, tp) * sel.x.get(v, s, tp)).sum();
                            load * inst.dist().survival(t - tp)
                        })
                        .sum();
                    assert_abs_diff_eq!(cert.alpha[t], 1.0 - cert.mu - cert.mu * tail, epsilon = 1e-10);
                }
            }
        }
    }
}
