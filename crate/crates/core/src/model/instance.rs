use ndarray::{Array2, ArrayView1};

use super::distribution::InterActivity;
use crate::error::{Error, Result};

const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// A problem instance: horizon, arrival rates, match probabilities and the
/// inter-activity distribution.
///
/// All indices are zero-based: period `t` in `0..horizon`, task type `s` in
/// `0..types`, volunteer `v` in `0..volunteers`. The "no arrival" type is
/// implicit in the row slack of the arrival matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    arrivals: Array2<f64>,
    match_probs: Array2<f64>,
    dist: InterActivity,
    mdhr: f64,
}

impl Instance {
    /// `arrivals` is `horizon x types`, `match_probs` is `volunteers x types`.
    pub fn new(arrivals: Array2<f64>, match_probs: Array2<f64>, dist: InterActivity) -> Result<Self> {
        let (horizon, types) = arrivals.dim();
        let (volunteers, p_types) = match_probs.dim();
        if horizon == 0 || types == 0 || volunteers == 0 {
            return Err(Error::InvalidInstance(format!(
                "empty dimensions: T={horizon}, S={types}, V={volunteers}"
            )));
        }
        if p_types != types {
            return Err(Error::Dimension(format!(
                "arrival matrix has {types} task types but match matrix has {p_types}"
            )));
        }
        for ((t, s), &rate) in arrivals.indexed_iter() {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::InvalidInstance(format!(
                    "arrival rate at (t={}, s={}) is {rate}",
                    t + 1,
                    s + 1
                )));
            }
        }
        for (t, row) in arrivals.outer_iter().enumerate() {
            let total = row.sum();
            if total > 1.0 + ROW_SUM_TOLERANCE {
                return Err(Error::InvalidInstance(format!(
                    "arrival rates in period {} sum to {total} > 1",
                    t + 1
                )));
            }
        }
        for ((v, s), &p) in match_probs.indexed_iter() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidInstance(format!(
                    "match probability at (v={}, s={}) is {p}",
                    v + 1,
                    s + 1
                )));
            }
        }
        let mdhr = dist.mdhr();
        Ok(Self {
            arrivals,
            match_probs,
            dist,
            mdhr,
        })
    }

    pub fn horizon(&self) -> usize {
        self.arrivals.nrows()
    }

    pub fn types(&self) -> usize {
        self.arrivals.ncols()
    }

    pub fn volunteers(&self) -> usize {
        self.match_probs.nrows()
    }

    /// `(V, S, T)`, the shape of every fractional solution for this instance.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.volunteers(), self.types(), self.horizon())
    }

    #[inline]
    pub fn rate(&self, s: usize, t: usize) -> f64 {
        self.arrivals[[t, s]]
    }

    /// Probability that no task arrives in period `t`.
    pub fn idle_rate(&self, t: usize) -> f64 {
        (1.0 - self.arrivals.row(t).sum()).max(0.0)
    }

    #[inline]
    pub fn match_prob(&self, v: usize, s: usize) -> f64 {
        self.match_probs[[v, s]]
    }

    pub fn arrivals(&self) -> &Array2<f64> {
        &self.arrivals
    }

    pub fn arrivals_at(&self, t: usize) -> ArrayView1<'_, f64> {
        self.arrivals.row(t)
    }

    pub fn match_probs(&self) -> &Array2<f64> {
        &self.match_probs
    }

    pub fn dist(&self) -> &InterActivity {
        &self.dist
    }

    /// Minimum discrete hazard rate of the inter-activity distribution.
    pub fn mdhr(&self) -> f64 {
        self.mdhr
    }

    /// Copy with the given match matrix (validated).
    pub fn with_match_probs(&self, match_probs: Array2<f64>) -> Result<Self> {
        Self::new(self.arrivals.clone(), match_probs, self.dist.clone())
    }

    /// Copy with the given arrival matrix (validated).
    pub fn with_arrivals(&self, arrivals: Array2<f64>) -> Result<Self> {
        Self::new(arrivals, self.match_probs.clone(), self.dist.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn geo() -> InterActivity {
        InterActivity::geometric(0.5).unwrap()
    }

    #[test]
    fn rejects_overfull_period() {
        let err = Instance::new(array![[0.6, 0.5]], array![[0.1, 0.1]], geo()).unwrap_err();
        assert!(matches!(err, Error::InvalidInstance(_)));
    }

    #[test]
    fn rejects_bad_probabilities() {
        assert!(Instance::new(array![[1.2]], array![[0.1]], geo()).is_err());
        assert!(Instance::new(array![[0.2]], array![[-0.1]], geo()).is_err());
    }

    #[test]
    fn rejects_shape_mismatch() {
        let err = Instance::new(array![[0.2, 0.1]], array![[0.1]], geo()).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    #[test]
    fn allows_empty_periods() {
        let inst = Instance::new(array![[0.0], [0.5], [0.0]], array![[0.3]], geo()).unwrap();
        assert_eq!(inst.idle_rate(0), 1.0);
        assert_eq!(inst.idle_rate(1), 0.5);
        assert_eq!(inst.shape(), (1, 1, 3));
    }
}
