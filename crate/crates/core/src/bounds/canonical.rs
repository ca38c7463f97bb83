use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::{random_instance, RandomShape};
use crate::error::{Error, Result};
use crate::model::{Instance, InterActivity};

/// Named instances used to probe the bounds, plus a seeded synthetic family.
///
/// String form: `I1:q=0.1,eps=0.001`, `I2:n=4`, `I3:n=20`,
/// `I4:q=0.1,eps=0.001`, `I5:eps=0.01`, `I6`, `synthetic:v=5,s=4,t=20,seed=1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CanonicalSpec {
    /// Two periods, one volunteer: a cheap early task against a rare valuable
    /// late one. `q = 0` uses a deterministic two-period spell.
    I1 { q: f64, eps: f64 },
    /// `n` homogeneous volunteers, geometric spells with parameter `1/n`.
    I2 { n: usize },
    /// `n` homogeneous volunteers, deterministic spells of length `n`.
    I3 { n: usize },
    /// Like `I1` with the late arrival rate raised to `q`.
    I4 { q: f64, eps: f64 },
    I5 { eps: f64 },
    I6,
    /// A random instance with exactly these dimensions.
    Synthetic { volunteers: usize, types: usize, horizon: usize, seed: u64 },
}

/// Default `eps` when a spec omits it.
pub const DEFAULT_EPS: f64 = 1e-3;
/// Default `n` for `I3`.
pub const DEFAULT_I3_N: usize = 20;

fn matrix(rows: usize, cols: usize, entries: &[(usize, usize, f64)]) -> Array2<f64> {
    let mut m = Array2::zeros((rows, cols));
    for &(i, j, val) in entries {
        m[[i, j]] = val;
    }
    m
}

fn check_unit(name: &str, value: f64, lo_open: bool, hi_open: bool) -> Result<()> {
    let lo_ok = if lo_open { value > 0.0 } else { value >= 0.0 };
    let hi_ok = if hi_open { value < 1.0 } else { value <= 1.0 };
    if lo_ok && hi_ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {value} out of range")))
    }
}

impl CanonicalSpec {
    pub fn build(&self) -> Result<Instance> {
        match *self {
            CanonicalSpec::I1 { q, eps } => {
                check_unit("q", q, false, true)?;
                check_unit("eps", eps, true, false)?;
                if eps > (1.0 - q) / 100.0 {
                    return Err(Error::InvalidParameter(format!(
                        "I1 needs eps <= (1-q)/100, got eps = {eps}, q = {q}"
                    )));
                }
                let dist = if q == 0.0 {
                    InterActivity::deterministic(2)?
                } else {
                    InterActivity::geometric(q)?
                };
                Instance::new(
                    matrix(2, 2, &[(0, 0, 1.0), (1, 1, eps / (1.0 - q))]),
                    matrix(1, 2, &[(0, 0, eps), (0, 1, 1.0)]),
                    dist,
                )
            }
            CanonicalSpec::I2 { n } => {
                if n == 0 {
                    return Err(Error::InvalidParameter("I2 needs n >= 1".into()));
                }
                let q = 1.0 / n as f64;
                let horizon = n * n + 1;
                let mut arrivals = Array2::from_elem((horizon, 1), q);
                arrivals[[0, 0]] = 1.0;
                Instance::new(arrivals, Array2::from_elem((n, 1), q), InterActivity::geometric(q)?)
            }
            CanonicalSpec::I3 { n } => {
                if n == 0 {
                    return Err(Error::InvalidParameter("I3 needs n >= 1".into()));
                }
                let r = 1.0 / n as f64;
                let length = u32::try_from(n).map_err(|_| Error::InvalidParameter("I3 n too large".into()))?;
                Instance::new(
                    Array2::from_elem((n * n, 1), r),
                    Array2::from_elem((n, 1), r),
                    InterActivity::deterministic(length)?,
                )
            }
            CanonicalSpec::I4 { q, eps } => {
                check_unit("q", q, true, true)?;
                check_unit("eps", eps, true, false)?;
                Instance::new(
                    matrix(2, 2, &[(0, 0, 1.0), (1, 1, q)]),
                    matrix(1, 2, &[(0, 0, eps), (0, 1, 1.0)]),
                    InterActivity::geometric(q)?,
                )
            }
            CanonicalSpec::I5 { eps } => {
                if !(eps > 0.0 && eps <= 0.5) {
                    return Err(Error::InvalidParameter(format!("I5 needs eps in (0, 0.5], got {eps}")));
                }
                Instance::new(
                    matrix(2, 2, &[(0, 0, 1.0), (1, 1, 1.0)]),
                    matrix(2, 2, &[(0, 0, 0.5), (1, 0, 0.5), (1, 1, 0.5 - eps)]),
                    InterActivity::deterministic(2)?,
                )
            }
            CanonicalSpec::I6 => {
                let third = 1.0 / 3.0;
                Instance::new(
                    matrix(2, 2, &[(0, 0, 1.0), (1, 1, 1.0)]),
                    matrix(
                        4,
                        2,
                        &[
                            (0, 0, third),
                            (1, 0, third),
                            (2, 0, third),
                            (2, 1, third - 1e-3),
                            (3, 1, 11.0 / 18.0),
                        ],
                    ),
                    InterActivity::deterministic(2)?,
                )
            }
            CanonicalSpec::Synthetic { volunteers, types, horizon, seed } => {
                if volunteers == 0 || types == 0 || horizon == 0 {
                    return Err(Error::InvalidParameter("synthetic dimensions must be positive".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok(random_instance(&mut rng, &RandomShape::exact(volunteers, types, horizon)))
            }
        }
    }
}

impl fmt::Display for CanonicalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalSpec::I1 { q, eps } => write!(f, "I1:q={q},eps={eps}"),
            CanonicalSpec::I2 { n } => write!(f, "I2:n={n}"),
            CanonicalSpec::I3 { n } => write!(f, "I3:n={n}"),
            CanonicalSpec::I4 { q, eps } => write!(f, "I4:q={q},eps={eps}"),
            CanonicalSpec::I5 { eps } => write!(f, "I5:eps={eps}"),
            CanonicalSpec::I6 => f.write_str("I6"),
            CanonicalSpec::Synthetic { volunteers, types, horizon, seed } => {
                write!(f, "synthetic:v={volunteers},s={types},t={horizon},seed={seed}")
            }
        }
    }
}

struct Params<'a> {
    pairs: Vec<(&'a str, &'a str)>,
    spec: &'a str,
}

impl<'a> Params<'a> {
    fn parse(spec: &'a str, body: &'a str) -> Result<Self> {
        let pairs = body
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.split_once('=')
                    .map(|(k, v)| (k.trim(), v.trim()))
                    .ok_or_else(|| Error::Parse(format!("expected key=value in '{spec}', got '{p}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { pairs, spec })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.pairs.iter().find(|(k, _)| *k == key) {
            None => Ok(None),
            Some((_, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Parse(format!("bad value for '{key}' in '{}'", self.spec))),
        }
    }

    fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?
            .ok_or_else(|| Error::Parse(format!("'{}' is missing '{key}'", self.spec)))
    }

    fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.pairs.iter().find(|(k, _)| !allowed.contains(k)) {
            Some((k, _)) => Err(Error::Parse(format!("unknown key '{k}' in '{}'", self.spec))),
            None => Ok(()),
        }
    }
}

impl FromStr for CanonicalSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (kind, body) = text.split_once(':').unwrap_or((text, ""));
        let params = Params::parse(text, body)?;
        let spec = match kind.to_ascii_uppercase().as_str() {
            "I1" | "I4" => {
                params.only(&["q", "eps"])?;
                let q = params.require("q")?;
                let eps = params.get("eps")?.unwrap_or(DEFAULT_EPS);
                if kind.eq_ignore_ascii_case("I1") {
                    CanonicalSpec::I1 { q, eps }
                } else {
                    CanonicalSpec::I4 { q, eps }
                }
            }
            "I2" => {
                params.only(&["n"])?;
                CanonicalSpec::I2 { n: params.require("n")? }
            }
            "I3" => {
                params.only(&["n"])?;
                CanonicalSpec::I3 { n: params.get("n")?.unwrap_or(DEFAULT_I3_N) }
            }
            "I5" => {
                params.only(&["eps"])?;
                CanonicalSpec::I5 { eps: params.get("eps")?.unwrap_or(DEFAULT_EPS) }
            }
            "I6" => {
                params.only(&[])?;
                CanonicalSpec::I6
            }
            "SYNTHETIC" => {
                params.only(&["v", "s", "t", "seed"])?;
                CanonicalSpec::Synthetic {
                    volunteers: params.require("v")?,
                    types: params.require("s")?,
                    horizon: params.require("t")?,
                    seed: params.get("seed")?.unwrap_or(0),
                }
            }
            _ => return Err(Error::Parse(format!("unknown instance kind '{kind}'"))),
        };
        Ok(spec)
    }
}
