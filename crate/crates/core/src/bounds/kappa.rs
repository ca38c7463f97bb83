//! Upper bound on the competitive ratio of any online policy, and the
//! matching lower bound achieved by sparse notification.

use crate::error::{Error, Result};

/// Value of the bound at `q = 0`, where the formula degenerates.
pub const KAPPA_AT_ZERO: f64 = 0.334;

/// `kappa(q) = min{1/(2-q), 1 + q - q(1-q)/(ln(1/(1-q))(1+q)) (1 - 1/e)}`.
///
/// `q = 0` and `q = 1` return the limiting constants 0.334 and 1. Other `q`
/// use the formula directly, including values where it is only an
/// extrapolation of the proven bound.
pub fn kappa(q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!("kappa needs q in [0, 1], got {q}")));
    }
    if q == 0.0 {
        return Ok(KAPPA_AT_ZERO);
    }
    if q == 1.0 {
        return Ok(1.0);
    }
    let prophet = 1.0 / (2.0 - q);
    let geometric = 1.0 + q - q * (1.0 - q) / ((1.0 / (1.0 - q)).ln() * (1.0 + q)) * (1.0 - (-1.0f64).exp());
    Ok(prophet.min(geometric))
}

/// Competitive ratio guaranteed by sparse notification: `(1-1/e)/(2-q)`.
pub fn sn_lower_bound(q: f64) -> f64 {
    (1.0 - (-1.0f64).exp()) / (2.0 - q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaPoint {
    pub q: f64,
    pub sn_lower: f64,
    pub kappa: f64,
}

/// Both bounds on the grid `0, step, 2 step, ...` ending exactly at 1.
pub fn kappa_curve(step: f64) -> Result<Vec<KappaPoint>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidParameter(format!("grid step must be in (0, 1], got {step}")));
    }
    let n = (1.0 / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|k| (k as f64 * step).min(1.0)).collect();
    if (1.0 - grid[n]).abs() <= 1e-9 {
        grid[n] = 1.0;
    } else {
        grid.push(1.0);
    }
    grid.into_iter()
        .map(|q| {
            Ok(KappaPoint {
                q,
                sn_lower: sn_lower_bound(q),
                kappa: kappa(q)?,
            })
        })
        .collect()
}
