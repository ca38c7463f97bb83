//! Inter-activity time distributions.
//!
//! A notified active volunteer goes quiet for `Z >= 1` periods, with `Z`
//! drawn from one of these distributions. Besides the pmf and cdf, the
//! simulator and the policies need the survival function `1 - G(k)` and the
//! discrete hazard `g(k) / (1 - G(k-1))`, so those are first-class here.

use rand::Rng;

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum InterActivity {
    /// `g(k) = q (1-q)^(k-1)`, unbounded support.
    Geometric { success: f64 },
    /// `Z = length` with probability one.
    Deterministic { length: u32 },
    /// Explicit pmf over `1..=probs.len()`.
    Tabulated(Tabulated),
}

/// A finite pmf with cached prefix and tail sums.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    probs: Vec<f64>,
    // cdf[k] = G(k) for k in 0..=len
    cdf: Vec<f64>,
    // tail[k] = 1 - G(k) computed as a tail sum, for k in 0..=len
    tail: Vec<f64>,
}

impl Tabulated {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Domain("tabulated distribution needs at least one entry".into()));
        }
        if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::Domain(format!("tabulated probability {bad} is not a valid mass")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Domain(format!(
                "tabulated probabilities sum to {total}, expected 1"
            )));
        }
        let n = probs.len();
        let mut cdf = vec![0.0; n + 1];
        for k in 1..=n {
            cdf[k] = cdf[k - 1] + probs[k - 1];
        }
        cdf[n] = 1.0;
        let mut tail = vec![0.0; n + 1];
        for k in (0..n).rev() {
            tail[k] = tail[k + 1] + probs[k];
        }
        tail[0] = 1.0;
        Ok(Self { probs, cdf, tail })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

impl InterActivity {
    pub fn geometric(success: f64) -> Result<Self> {
        if !(success > 0.0 && success <= 1.0) {
            return Err(Error::Domain(format!(
                "geometric success probability {success} outside (0, 1]"
            )));
        }
        Ok(Self::Geometric { success })
    }

    pub fn deterministic(length: u32) -> Result<Self> {
        if length == 0 {
            return Err(Error::Domain("deterministic length must be at least 1".into()));
        }
        Ok(Self::Deterministic { length })
    }

    pub fn tabulated(probs: Vec<f64>) -> Result<Self> {
        Tabulated::new(probs).map(Self::Tabulated)
    }

    /// Largest value with positive mass, `None` for unbounded support.
    pub fn max_support(&self) -> Option<u32> {
        match self {
            Self::Geometric { .. } => None,
            Self::Deterministic { length } => Some(*length),
            Self::Tabulated(tab) => {
                let last = tab.probs.iter().rposition(|p| *p > 0.0).unwrap_or(0);
                Some(last as u32 + 1)
            }
        }
    }

    /// `g(tau) = P(Z = tau)`; zero is outside the domain since `Z > 0`.
    pub fn pmf(&self, tau: u32) -> Result<f64> {
        if tau == 0 {
            return Err(Error::Domain("pmf is defined for tau >= 1".into()));
        }
        Ok(self.mass(tau as usize))
    }

    /// Unchecked pmf used on hot paths; `mass(0) == 0`.
    #[inline]
    pub(crate) fn mass(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        match self {
            Self::Geometric { success } => success * (1.0 - success).powi(k as i32 - 1),
            Self::Deterministic { length } => {
                if k == *length as usize {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Tabulated(tab) => tab.probs.get(k - 1).copied().unwrap_or(0.0),
        }
    }

    /// `G(k) = P(Z <= k)`, with `G(0) = 0`.
    pub fn cdf(&self, k: usize) -> f64 {
        match self {
            Self::Geometric { success } => 1.0 - (1.0 - success).powi(k as i32),
            Self::Deterministic { length } => {
                if k >= *length as usize {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Tabulated(tab) => tab.cdf[k.min(tab.probs.len())],
        }
    }

    /// `1 - G(k) = P(Z > k)`, evaluated without cancellation.
    #[inline]
    pub fn survival(&self, k: usize) -> f64 {
        match self {
            Self::Geometric { success } => (1.0 - success).powi(k as i32),
            Self::Deterministic { length } => {
                if k >= *length as usize {
                    0.0
                } else {
                    1.0
                }
            }
            Self::Tabulated(tab) => tab.tail[k.min(tab.probs.len())],
        }
    }

    /// Discrete hazard `g(k) / (1 - G(k-1))` for `k >= 1`, with `0/0 := 1`.
    pub fn hazard(&self, k: usize) -> f64 {
        debug_assert!(k >= 1);
        let at_risk = self.survival(k - 1);
        if at_risk <= 0.0 {
            return 1.0;
        }
        match self {
            Self::Geometric { success } => *success,
            _ => (self.mass(k) / at_risk).min(1.0),
        }
    }

    /// Minimum discrete hazard rate over the support.
    ///
    /// Terms whose denominator vanishes are skipped; if every term is skipped
    /// the rate is 1.
    pub fn mdhr(&self) -> f64 {
        match self {
            Self::Geometric { success } => *success,
            _ => {
                let top = self.max_support().unwrap_or(1) as usize;
                (1..=top)
                    .filter(|&k| self.survival(k - 1) > 0.0)
                    .map(|k| self.hazard(k))
                    .fold(1.0, f64::min)
            }
        }
    }

    /// Expected inactivity length.
    pub fn mean(&self) -> f64 {
        match self {
            Self::Geometric { success } => 1.0 / success,
            Self::Deterministic { length } => *length as f64,
            Self::Tabulated(tab) => tab
                .probs
                .iter()
                .enumerate()
                .map(|(i, p)| (i + 1) as f64 * p)
                .sum(),
        }
    }

    /// Draws `Z` with a single uniform by inverting the cdf.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        match self {
            Self::Geometric { success } => {
                if *success >= 1.0 {
                    return 1;
                }
                // 1 - u lies in (0, 1]; Z = ceil(ln(1-u) / ln(1-q)).
                let z = ((1.0 - u).ln() / (1.0 - success).ln()).ceil();
                (z as u64).max(1)
            }
            Self::Deterministic { length } => *length as u64,
            Self::Tabulated(tab) => {
                let n = tab.probs.len();
                let idx = tab.cdf[1..].iter().position(|c| u < *c).unwrap_or(n - 1);
                // Never land on a zero-mass trailing entry through rounding.
                let idx = if tab.probs[idx] > 0.0 {
                    idx
                } else {
                    tab.probs[..=idx]
                        .iter()
                        .rposition(|p| *p > 0.0)
                        .or_else(|| tab.probs.iter().position(|p| *p > 0.0))
                        .unwrap_or(idx)
                };
                idx as u64 + 1
            }
        }
    }
}
