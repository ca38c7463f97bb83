use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbTarget {
    MatchProbs,
    ArrivalRates,
}

impl fmt::Display for PerturbTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PerturbTarget::MatchProbs => "p",
            PerturbTarget::ArrivalRates => "lambda",
        })
    }
}

impl FromStr for PerturbTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" | "match" | "match_probs" => Ok(PerturbTarget::MatchProbs),
            "lambda" | "arrivals" | "arrival_rates" => Ok(PerturbTarget::ArrivalRates),
            _ => Err(Error::Parse(format!("unknown perturbation target '{s}'"))),
        }
    }
}

/// Multiplicative noise: every targeted entry is scaled by an independent
/// uniform factor in `[1 - width, 1 + width]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSpec {
    pub target: PerturbTarget,
    pub width: f64,
    pub replicates: usize,
    pub seed: u64,
}

impl PerturbationSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.width) {
            return Err(Error::InvalidParameter(format!("width {} outside [0, 1)", self.width)));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidParameter("at least one replicate is required".into()));
        }
        Ok(())
    }
}

/// Perturbed copy of `instance` for one replicate. Draws come from stream
/// `replicate` of `spec.seed`, one per matrix entry in row-major order.
/// Match probabilities are clamped to `[0, 1]`; arrival rows whose sum
/// exceeds one are rescaled to sum to one.
pub fn perturb_instance(instance: &Instance, spec: &PerturbationSpec, replicate: usize) -> Result<Instance> {
    spec.validate()?;
    if replicate >= spec.replicates {
        return Err(Error::Index {
            what: "replicate",
            index: replicate,
            bound: spec.replicates,
        });
    }
    if spec.width == 0.0 {
        return Ok(instance.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(replicate as u64);
    let mut jitter = |m: &Array2<f64>| m.mapv(|x| x * (1.0 + spec.width * (2.0 * rng.random::<f64>() - 1.0)));
    match spec.target {
        PerturbTarget::MatchProbs => {
            let p = jitter(instance.match_probs()).mapv(|x| x.clamp(0.0, 1.0));
            instance.with_match_probs(p)
        }
        PerturbTarget::ArrivalRates => {
            let mut rates = jitter(instance.arrivals());
            for (t, mut row) in rates.outer_iter_mut().enumerate() {
                let sum = row.sum();
                if sum > 1.0 {
                    log::warn!("perturbed arrival rates of period {} sum to {sum}; rescaling to 1", t + 1);
                    row.mapv_inplace(|x| x / sum);
                }
            }
            instance.with_arrivals(rates)
        }
    }
}
