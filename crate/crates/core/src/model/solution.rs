use std::fmt;

use ndarray::Array3;

use super::instance::Instance;
use crate::error::{Error, Result};

/// Absolute slack allowed on the inter-activity constraints.
pub const CAPACITY_TOLERANCE: f64 = 1e-7;
/// Absolute slack allowed on the `[0, 1]` box.
pub const RANGE_TOLERANCE: f64 = 1e-9;

/// Notification probabilities `x[v, s, t]`, shaped `(V, S, T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution {
    values: Array3<f64>,
}

impl FractionalSolution {
    pub fn zeros(instance: &Instance) -> Self {
        Self {
            values: Array3::zeros(instance.shape()),
        }
    }

    pub fn from_array(values: Array3<f64>) -> Self {
        Self { values }
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        self.values.dim()
    }

    #[inline]
    pub fn get(&self, v: usize, s: usize, t: usize) -> f64 {
        self.values[[v, s, t]]
    }

    #[inline]
    pub fn set(&mut self, v: usize, s: usize, t: usize, value: f64) {
        self.values[[v, s, t]] = value;
    }

    pub fn values(&self) -> &Array3<f64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array3<f64> {
        &mut self.values
    }

    pub fn into_array(self) -> Array3<f64> {
        self.values
    }

    pub(crate) fn ensure_shape(&self, instance: &Instance) -> Result<()> {
        if self.shape() != instance.shape() {
            return Err(Error::Dimension(format!(
                "solution shape {:?} does not match instance (V, S, T) = {:?}",
                self.shape(),
                instance.shape()
            )));
        }
        Ok(())
    }

    /// Non-zero entries as 1-indexed `(v, s, t, value)` triples in `v, s, t`
    /// lexicographic order.
    pub fn nonzero_triples(&self) -> Vec<(usize, usize, usize, f64)> {
        self.values
            .indexed_iter()
            .filter(|(_, x)| **x != 0.0)
            .map(|((v, s, t), x)| (v + 1, s + 1, t + 1, *x))
            .collect()
    }
}

/// Left-hand side of the inter-activity constraint for volunteer `v` at
/// period `t`: expected notifications up to `t` whose inactivity has not yet
/// elapsed.
pub fn capacity_load(instance: &Instance, x: &FractionalSolution, v: usize, t: usize) -> f64 {
    let dist = instance.dist();
    (0..=t)
        .map(|tau| {
            let weight = dist.survival(t - tau);
            if weight == 0.0 {
                return 0.0;
            }
            let sent: f64 = (0..instance.types())
                .map(|s| instance.rate(s, tau) * x.get(v, s, tau))
                .sum();
            sent * weight
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Entry outside `[0, 1]` (1-indexed coordinates).
    Range { v: usize, s: usize, t: usize, value: f64 },
    /// Inter-activity constraint exceeded for `(v, t)` (1-indexed).
    Capacity { v: usize, t: usize, lhs: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Range { v, s, t, value } => {
                write!(f, "x[{v},{s},{t}] = {value} outside [0, 1]")
            }
            Violation::Capacity { v, t, lhs } => {
                write!(f, "inter-activity constraint for v={v}, t={t}: {lhs} > 1")
            }
        }
    }
}

/// Lists every box and inter-activity violation; empty means `x` is in the
/// feasible set.
pub fn check_feasible(instance: &Instance, x: &FractionalSolution) -> Result<Vec<Violation>> {
    x.ensure_shape(instance)?;
    let mut report: Vec<Violation> = x
        .values()
        .indexed_iter()
        .filter(|(_, val)| !(-RANGE_TOLERANCE..=1.0 + RANGE_TOLERANCE).contains(*val))
        .map(|((v, s, t), val)| Violation::Range {
            v: v + 1,
            s: s + 1,
            t: t + 1,
            value: *val,
        })
        .collect();
    for v in 0..instance.volunteers() {
        for t in 0..instance.horizon() {
            let lhs = capacity_load(instance, x, v, t);
            if lhs > 1.0 + CAPACITY_TOLERANCE {
                report.push(Violation::Capacity { v: v + 1, t: t + 1, lhs });
            }
        }
    }
    Ok(report)
}

/// Convenience wrapper turning a non-empty report into a precondition error.
pub fn require_feasible(instance: &Instance, x: &FractionalSolution) -> Result<()> {
    let report = check_feasible(instance, x)?;
    match report.first() {
        None => Ok(()),
        Some(first) => Err(Error::Precondition(format!(
            "solution is not feasible ({} violations, first: {first})",
            report.len()
        ))),
    }
}
