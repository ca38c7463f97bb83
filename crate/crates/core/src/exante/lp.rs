//! A small LP carrier and solver front end.
//!
//! Problems are stated as `max c.x` subject to sparse `<=` rows and variable
//! bounds. The simplex itself is delegated to `microlp`; this layer
//! validates input, maps errors, and re-checks the returned point.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{Error, Result};

/// Constraint violation tolerated on returned points.
pub const LP_FEASIBILITY_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpProblem {
    objective: Vec<f64>,
    bounds: Vec<(f64, f64)>,
    rows: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable with objective coefficient `cost` and bounds
    /// `[lower, upper]`; returns its index.
    pub fn add_var(&mut self, cost: f64, lower: f64, upper: f64) -> usize {
        self.objective.push(cost);
        self.bounds.push((lower, upper));
        self.objective.len() - 1
    }

    /// Adds `sum coeff * x[var] <= rhs`.
    pub fn add_le(&mut self, terms: Vec<(usize, f64)>, rhs: f64) {
        self.rows.push(terms);
        self.rhs.push(rhs);
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of any row or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.rows.iter().zip(&self.rhs).map(|(row, rhs)| {
            let lhs: f64 = row.iter().map(|(j, a)| a * x[*j]).sum();
            lhs - rhs
        });
        let bounds = self
            .bounds
            .iter()
            .zip(x)
            .map(|((lo, hi), v)| (lo - v).max(v - hi));
        rows.chain(bounds).fold(0.0, f64::max)
    }

    fn validate(&self) -> Result<()> {
        for (j, (lo, hi)) in self.bounds.iter().enumerate() {
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(Error::InvalidParameter(format!(
                    "variable {j} has bounds [{lo}, {hi}]"
                )));
            }
        }
        if let Some(c) = self.objective.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!("objective coefficient {c}")));
        }
        for (i, (row, rhs)) in self.rows.iter().zip(&self.rhs).enumerate() {
            if !rhs.is_finite() {
                return Err(Error::InvalidParameter(format!("row {i} has right-hand side {rhs}")));
            }
            if let Some((j, a)) = row.iter().find(|(j, a)| *j >= self.num_vars() || !a.is_finite()) {
                return Err(Error::InvalidParameter(format!("row {i} has term ({j}, {a})")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
}

/// Maximizes the problem's objective.
pub fn solve_lp(problem: &LpProblem) -> Result<LpSolution> {
    problem.validate()?;
    if problem.num_vars() == 0 {
        if let Some(i) = problem.rhs.iter().position(|r| *r < 0.0) {
            return Err(Error::Infeasible {
                witness: Some(format!("row {i}: 0 <= {}", problem.rhs[i])),
            });
        }
        return Ok(LpSolution { x: vec![], value: 0.0 });
    }

    let mut model = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = problem
        .objective
        .iter()
        .zip(&problem.bounds)
        .map(|(c, bounds)| model.add_var(*c, *bounds))
        .collect();
    for (row, rhs) in problem.rows.iter().zip(&problem.rhs) {
        let terms: Vec<_> = row.iter().map(|(j, a)| (vars[*j], *a)).collect();
        model.add_constraint(terms.as_slice(), ComparisonOp::Le, *rhs);
    }

    let solution = match model.solve() {
        Ok(outcome) => outcome
            .into_solution()
            .map_err(|_| Error::Solver("solve interrupted".into()))?,
        Err(microlp::Error::Infeasible) => {
            let witness = problem
                .rows
                .iter()
                .zip(&problem.rhs)
                .position(|(row, rhs)| {
                    // a row that cannot be met even at the most favourable bounds
                    let best: f64 = row
                        .iter()
                        .map(|(j, a)| {
                            let (lo, hi) = problem.bounds[*j];
                            if *a >= 0.0 { a * lo } else { a * hi }
                        })
                        .sum();
                    best > *rhs
                })
                .map(|i| format!("row {i} cannot be satisfied within variable bounds"));
            return Err(Error::Infeasible { witness });
        }
        Err(microlp::Error::Unbounded) => return Err(Error::Unbounded),
        Err(e) => return Err(Error::Solver(e.to_string())),
    };

    let x: Vec<f64> = vars
        .iter()
        .zip(&problem.bounds)
        .map(|(v, (lo, hi))| solution.var_value(*v).clamp(*lo, *hi))
        .collect();
    let violation = problem.max_violation(&x);
    if violation > LP_FEASIBILITY_TOLERANCE {
        return Err(Error::Solver(format!(
            "returned point violates constraints by {violation:e}"
        )));
    }
    let value = problem.objective_value(&x);
    Ok(LpSolution { x, value })
}
