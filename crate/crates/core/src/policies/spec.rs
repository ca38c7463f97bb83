use std::fmt;
use std::str::FromStr;

use super::heuristics::{FollowExAnte, NotifyAll, NotifyBest, NotifyRandom, NotifyUpTo, RollingHorizon};
use super::scaled::{sdn_offline, ScaledDownNotification};
use super::sparse::{sn_offline, SparseNotification};
use super::Policy;
use crate::error::{Error, Result};
use crate::model::{FractionalSolution, Instance};

/// Policy grammar: `sn`, `sdn`, `exante`, `all`, `random:n`, `best:n`,
/// `upto:rho`, `rolling` or `rolling:H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicySpec {
    Sn,
    Sdn,
    ExAnte,
    All,
    Random(usize),
    Best(usize),
    UpTo(f64),
    Rolling(Option<usize>),
}

impl PolicySpec {
    /// Whether building the policy needs the ex-ante solution.
    pub fn needs_ex_ante(&self) -> bool {
        matches!(self, PolicySpec::Sn | PolicySpec::Sdn | PolicySpec::ExAnte)
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicySpec::Sn => f.write_str("sn"),
            PolicySpec::Sdn => f.write_str("sdn"),
            PolicySpec::ExAnte => f.write_str("exante"),
            PolicySpec::All => f.write_str("all"),
            PolicySpec::Random(n) => write!(f, "random:{n}"),
            PolicySpec::Best(n) => write!(f, "best:{n}"),
            PolicySpec::UpTo(rho) => write!(f, "upto:{rho}"),
            PolicySpec::Rolling(None) => f.write_str("rolling"),
            PolicySpec::Rolling(Some(h)) => write!(f, "rolling:{h}"),
        }
    }
}

impl FromStr for PolicySpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, arg) = match text.split_once(':') {
            Some((n, a)) => (n, Some(a.trim())),
            None => (text, None),
        };
        let bad = || Error::Parse(format!("bad policy '{text}'"));
        let count = |a: Option<&str>| -> Result<usize> {
            a.ok_or_else(bad)?.parse().map_err(|_| bad())
        };
        let spec = match (name.to_ascii_lowercase().as_str(), arg) {
            ("sn", None) => PolicySpec::Sn,
            ("sdn", None) => PolicySpec::Sdn,
            ("exante", None) => PolicySpec::ExAnte,
            ("all", None) => PolicySpec::All,
            ("random", a) => PolicySpec::Random(count(a)?),
            ("best", a) => PolicySpec::Best(count(a)?),
            ("upto", a) => {
                let rho: f64 = a.ok_or_else(bad)?.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&rho) {
                    return Err(Error::InvalidParameter(format!("upto threshold {rho} outside [0, 1]")));
                }
                PolicySpec::UpTo(rho)
            }
            ("rolling", None) => PolicySpec::Rolling(None),
            ("rolling", a) => {
                let h = count(a)?;
                if h == 0 {
                    return Err(Error::InvalidParameter("rolling horizon length must be at least 1".into()));
                }
                PolicySpec::Rolling(Some(h))
            }
            _ => return Err(Error::Parse(format!("unknown policy '{text}'"))),
        };
        Ok(spec)
    }
}

/// Builds a policy whose offline plan is computed from `instance` and
/// `x_star` (the ex-ante solution of `instance`; ignored by policies that do
/// not use it). `theta` is the eligibility threshold of the heuristics.
pub fn build_policy(
    spec: &PolicySpec,
    instance: &Instance,
    x_star: &FractionalSolution,
    theta: f64,
) -> Result<Box<dyn Policy>> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidParameter(format!("eligibility threshold {theta} outside [0, 1]")));
    }
    let policy: Box<dyn Policy> = match *spec {
        PolicySpec::Sn => Box::new(SparseNotification::new(sn_offline(instance, x_star)?)),
        PolicySpec::Sdn => Box::new(ScaledDownNotification::new(sdn_offline(instance, x_star)?)),
        PolicySpec::ExAnte => {
            x_star.ensure_shape(instance)?;
            Box::new(FollowExAnte { x_star: x_star.clone() })
        }
        PolicySpec::All => Box::new(NotifyAll),
        PolicySpec::Random(n) => Box::new(NotifyRandom { n, theta }),
        PolicySpec::Best(n) => Box::new(NotifyBest { n, theta }),
        PolicySpec::UpTo(rho) => Box::new(NotifyUpTo { rho }),
        PolicySpec::Rolling(h) => {
            let h = h.unwrap_or_else(|| RollingHorizon::default_horizon(instance));
            Box::new(RollingHorizon::new(instance.clone(), h, theta)?)
        }
    };
    Ok(policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_round_trip() {
        for text in ["sn", "sdn", "exante", "all", "random:3", "best:1", "upto:0.5", "rolling", "rolling:7"] {
            let spec: PolicySpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
    }

    #[test]
    fn grammar_rejects_garbage() {
        for text in ["", "foo", "random", "random:x", "best:-1", "upto:1.5", "rolling:0", "sn:2"] {
            assert!(text.parse::<PolicySpec>().is_err(), "{text}");
        }
    }
}
