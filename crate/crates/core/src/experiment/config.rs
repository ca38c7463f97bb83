use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::bounds::CanonicalSpec;
use crate::error::{Error, Result};
use crate::exante::DEFAULT_STEPS;
use crate::model::io::read_instance;
use crate::model::Instance;
use crate::policies::PolicySpec;

/// Where the instance comes from: `{ file = "inst.json" }` or
/// `{ canonical = "I4:q=0.1,eps=0.001" }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceSource {
    File(PathBuf),
    #[serde(serialize_with = "as_text", deserialize_with = "from_text")]
    Canonical(CanonicalSpec),
}

impl InstanceSource {
    /// Command-line form: an existing file path, otherwise a canonical spec
    /// string.
    pub fn from_arg(arg: &str) -> Result<Self> {
        let path = Path::new(arg);
        if path.is_file() {
            return Ok(InstanceSource::File(path.to_path_buf()));
        }
        arg.parse().map(InstanceSource::Canonical).map_err(|e| {
            Error::Parse(format!("'{arg}' is neither an instance file nor a canonical spec ({e})"))
        })
    }

    /// Builds the instance, resolving relative file paths against `base`.
    pub fn load(&self, base: Option<&Path>) -> Result<Instance> {
        match (self, base) {
            (InstanceSource::Canonical(spec), _) => spec.build(),
            (InstanceSource::File(path), Some(base)) if path.is_relative() => read_instance(&base.join(path)),
            (InstanceSource::File(path), _) => read_instance(path),
        }
    }

    /// The canonical spec string or the file stem.
    pub fn label(&self) -> String {
        match self {
            InstanceSource::Canonical(spec) => spec.to_string(),
            InstanceSource::File(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
        }
    }
}

/// Experiment description, stored as TOML:
///
/// ```toml
/// instance = { canonical = "I4:q=0.1,eps=0.001" }
/// policies = ["sn", "sdn"]
/// episodes = 100000
/// seed = 7
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: InstanceSource,
    /// Label used in output rows; defaults to the canonical spec or file stem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance_id: Option<String>,
    #[serde(serialize_with = "all_as_text", deserialize_with = "all_from_text")]
    pub policies: Vec<PolicySpec>,
    pub episodes: u64,
    /// TOML integers are signed, so seeds above `i64::MAX` are written as
    /// strings.
    #[serde(serialize_with = "seed_out", deserialize_with = "seed_in")]
    pub seed: u64,
    #[serde(default = "default_steps")]
    pub m: usize,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default = "default_batches")]
    pub batches: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Directory relative instance paths are resolved against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

fn default_steps() -> usize {
    DEFAULT_STEPS
}

fn default_theta() -> f64 {
    1.0
}

fn default_batches() -> u64 {
    25
}

fn as_text<T: fmt::Display, S: Serializer>(value: &T, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_str(value)
}

fn from_text<'de, T, D>(de: D) -> Result<T, D::Error>
where
    T: FromStr<Err = Error>,
    D: Deserializer<'de>,
{
    String::deserialize(de)?.parse().map_err(de::Error::custom)
}

fn seed_out<S: Serializer>(seed: &u64, ser: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(*seed) {
        Ok(small) => ser.serialize_i64(small),
        Err(_) => ser.collect_str(seed),
    }
}

fn seed_in<'de, D: Deserializer<'de>>(de: D) -> Result<u64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Seed {
        Int(i64),
        Text(String),
    }
    match Seed::deserialize(de)? {
        Seed::Int(v) => u64::try_from(v).map_err(|_| de::Error::custom(format!("seed {v} is negative"))),
        Seed::Text(s) => s.parse().map_err(|_| de::Error::custom(format!("seed '{s}' is not a u64"))),
    }
}

fn all_as_text<S: Serializer>(values: &[PolicySpec], ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(values.iter().map(|v| v.to_string()))
}

fn all_from_text<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<PolicySpec>, D::Error> {
    Vec::<String>::deserialize(de)?
        .iter()
        .map(|s| s.parse().map_err(de::Error::custom))
        .collect()
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    /// Reads a config file; relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut config = Self::from_toml_str(&std::fs::read_to_string(path)?)?;
        config.base_dir = path.parent().map(Path::to_path_buf);
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.episodes == 0 {
            return Err(Error::InvalidParameter("episodes must be at least 1".into()));
        }
        if self.m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        if self.batches == 0 {
            return Err(Error::InvalidParameter("batches must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::InvalidParameter(format!("theta = {} outside [0, 1]", self.theta)));
        }
        if self.policies.is_empty() {
            return Err(Error::InvalidParameter("at least one policy is required".into()));
        }
        Ok(())
    }

    pub fn load_instance(&self) -> Result<Instance> {
        self.instance.load(self.base_dir.as_deref())
    }

    pub fn instance_label(&self) -> String {
        self.instance_id.clone().unwrap_or_else(|| self.instance.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
instance = { canonical = "I4:q=0.1,eps=0.001" }
policies = ["sn", "sdn", "random:2", "upto:0.75", "rolling"]
episodes = 1000
seed = "18446744073709551615"
theta = 0.5
output = "out/compare.csv"
"#;

    #[test]
    fn round_trip() {
        let config = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        assert_eq!(config.m, DEFAULT_STEPS);
        assert_eq!(config.batches, 25);
        assert_eq!(config.seed, u64::MAX);
        assert_eq!(config.instance_label(), "I4:q=0.1,eps=0.001");
        let again = ExperimentConfig::from_toml_str(&config.to_toml_string()).unwrap();
        assert_eq!(again, config);
    }

    #[test]
    fn file_source_and_label() {
        let config = ExperimentConfig::from_toml_str(
            "instance = { file = \"data/site_a.json\" }\npolicies = [\"all\"]\nepisodes = 5\nseed = 1\n",
        )
        .unwrap();
        assert_eq!(config.instance, InstanceSource::File("data/site_a.json".into()));
        assert_eq!(config.instance_label(), "site_a");
    }

    #[test]
    fn invalid_configs() {
        let base = "instance = { canonical = \"I6\" }\nseed = 1\n";
        for extra in [
            "policies = [\"sn\"]\nepisodes = 0\n",
            "policies = []\nepisodes = 3\n",
            "policies = [\"nope\"]\nepisodes = 3\n",
            "policies = [\"sn\"]\nepisodes = 3\nm = 0\n",
            "policies = [\"sn\"]\nepisodes = 3\ntheta = 2.0\n",
            "policies = [\"sn\"]\nepisodes = 3\nbogus = 1\n",
        ] {
            assert!(ExperimentConfig::from_toml_str(&format!("{base}{extra}")).is_err(), "{extra}");
        }
    }
}
