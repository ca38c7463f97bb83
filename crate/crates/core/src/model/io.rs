//! JSON documents for instances and fractional solutions.
//!
//! Instance layout:
//!
//! ```json
//! {
//!   "T": 2, "V": 1, "S": 2,
//!   "arrivals": [[1.0, 0.0], [0.0, 0.1]],
//!   "match": [[0.001, 1.0]],
//!   "dist": {"type": "geometric", "params": {"q": 0.1}}
//! }
//! ```
//!
//! `arrivals` may instead be `{"sparse": [[t, s, rate], ...]}` with 1-indexed
//! periods and types; omitted entries are zero. Distribution params are
//! `{"q": ..}`, `{"d": ..}` or `{"probs": [..]}`.

use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::distribution::InterActivity;
use super::instance::Instance;
use super::solution::FractionalSolution;
use crate::error::{Error, Result};
use crate::format::sig_digits;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDoc {
    #[serde(rename = "T")]
    pub horizon: usize,
    #[serde(rename = "V")]
    pub volunteers: usize,
    #[serde(rename = "S")]
    pub types: usize,
    pub arrivals: ArrivalsDoc,
    #[serde(rename = "match")]
    pub match_probs: Vec<Vec<f64>>,
    pub dist: DistDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArrivalsDoc {
    Dense(Vec<Vec<f64>>),
    Sparse { sparse: Vec<(usize, usize, f64)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "params", rename_all = "lowercase")]
pub enum DistDoc {
    Geometric { q: f64 },
    Deterministic { d: u32 },
    Tabulated { probs: Vec<f64> },
}

impl From<&InterActivity> for DistDoc {
    fn from(dist: &InterActivity) -> Self {
        match dist {
            InterActivity::Geometric { success } => DistDoc::Geometric { q: *success },
            InterActivity::Deterministic { length } => DistDoc::Deterministic { d: *length },
            InterActivity::Tabulated(tab) => DistDoc::Tabulated {
                probs: tab.probs().to_vec(),
            },
        }
    }
}

impl TryFrom<&DistDoc> for InterActivity {
    type Error = Error;

    fn try_from(doc: &DistDoc) -> Result<Self> {
        match doc {
            DistDoc::Geometric { q } => InterActivity::geometric(*q),
            DistDoc::Deterministic { d } => InterActivity::deterministic(*d),
            DistDoc::Tabulated { probs } => InterActivity::tabulated(probs.clone()),
        }
    }
}

fn dense_matrix(rows: &[Vec<f64>], nrows: usize, ncols: usize, what: &str) -> Result<Array2<f64>> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Dimension(format!("{what} must be a {nrows}x{ncols} array")));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Array2::from_shape_vec((nrows, ncols), flat).map_err(|e| Error::Dimension(e.to_string()))
}

impl InstanceDoc {
    pub fn from_instance(instance: &Instance) -> Self {
        let rows = |m: &Array2<f64>| m.outer_iter().map(|r| r.to_vec()).collect::<Vec<_>>();
        Self {
            horizon: instance.horizon(),
            volunteers: instance.volunteers(),
            types: instance.types(),
            arrivals: ArrivalsDoc::Dense(rows(instance.arrivals())),
            match_probs: rows(instance.match_probs()),
            dist: DistDoc::from(instance.dist()),
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let arrivals = match &self.arrivals {
            ArrivalsDoc::Dense(rows) => dense_matrix(rows, self.horizon, self.types, "arrivals")?,
            ArrivalsDoc::Sparse { sparse } => {
                let mut m = Array2::zeros((self.horizon, self.types));
                for &(t, s, rate) in sparse {
                    if t == 0 || t > self.horizon || s == 0 || s > self.types {
                        return Err(Error::Index {
                            what: "sparse arrival entry",
                            index: if t == 0 || t > self.horizon { t } else { s },
                            bound: if t == 0 || t > self.horizon { self.horizon } else { self.types },
                        });
                    }
                    m[[t - 1, s - 1]] = rate;
                }
                m
            }
        };
        let match_probs = dense_matrix(&self.match_probs, self.volunteers, self.types, "match")?;
        Instance::new(arrivals, match_probs, InterActivity::try_from(&self.dist)?)
    }
}

pub fn instance_to_json(instance: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceDoc::from_instance(instance))
        .expect("instance documents always serialize")
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    doc.to_instance()
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    instance_from_json(&std::fs::read_to_string(path)?)
}

/// Sparse JSON export: `[{"v":1,"s":1,"t":1,"value":1.00000000000}, ...]`,
/// 1-indexed, zeros omitted, values with 12 significant digits.
pub fn solution_to_json(x: &FractionalSolution) -> String {
    let entries: Vec<String> = x
        .nonzero_triples()
        .into_iter()
        .map(|(v, s, t, value)| {
            format!(
                "  {{\"v\": {v}, \"s\": {s}, \"t\": {t}, \"value\": {}}}",
                sig_digits(value, 12)
            )
        })
        .collect();
    if entries.is_empty() {
        "[]".to_string()
    } else {
        format!("[\n{}\n]", entries.join(",\n"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::canonical::CanonicalSpec;
    use crate::bounds::random::{random_instance, RandomShape};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sparse_and_dense_arrivals_agree() {
        let dense = r#"{"T":2,"V":1,"S":2,"arrivals":[[1.0,0.0],[0.0,0.1]],
            "match":[[0.001,1.0]],"dist":{"type":"geometric","params":{"q":0.1}}}"#;
        let sparse = r#"{"T":2,"V":1,"S":2,"arrivals":{"sparse":[[1,1,1.0],[2,2,0.1]]},
            "match":[[0.001,1.0]],"dist":{"type":"geometric","params":{"q":0.1}}}"#;
        let a = instance_from_json(dense).unwrap();
        let b = instance_from_json(sparse).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, CanonicalSpec::I4 { q: 0.1, eps: 1e-3 }.build().unwrap());
    }

    #[test]
    fn bad_documents_are_rejected() {
        let wrong_rows = r#"{"T":3,"V":1,"S":1,"arrivals":[[0.5]],"match":[[0.5]],
            "dist":{"type":"deterministic","params":{"d":2}}}"#;
        assert!(matches!(instance_from_json(wrong_rows), Err(Error::Dimension(_))));
        let bad_index = r#"{"T":1,"V":1,"S":1,"arrivals":{"sparse":[[2,1,0.5]]},"match":[[0.5]],
            "dist":{"type":"deterministic","params":{"d":2}}}"#;
        assert!(matches!(instance_from_json(bad_index), Err(Error::Index { .. })));
        let bad_dist = r#"{"T":1,"V":1,"S":1,"arrivals":[[0.5]],"match":[[0.5]],
            "dist":{"type":"tabulated","params":{"probs":[0.5]}}}"#;
        assert!(matches!(instance_from_json(bad_dist), Err(Error::Domain(_))));
        assert!(matches!(instance_from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn solution_export_format() {
        let inst = CanonicalSpec::I5 { eps: 0.01 }.build().unwrap();
        let mut x = FractionalSolution::zeros(&inst);
        x.set(0, 0, 0, 1.0);
        x.set(1, 1, 1, 1.0 / 3.0);
        let json = solution_to_json(&x);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let arr = parsed.as_array().unwrap();
        assert_eq!(arr.len(), 2);
        assert_eq!(arr[1]["v"], 2);
        assert_eq!(arr[1]["t"], 2);
        assert!(json.contains("0.333333333333"));
        assert!(json.contains("1.00000000000"));
        assert_eq!(solution_to_json(&FractionalSolution::zeros(&inst)), "[]");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn instance_round_trip_is_bit_exact(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = random_instance(&mut rng, &RandomShape::new(4, 3, 6));
            let back = instance_from_json(&instance_to_json(&inst)).unwrap();
            prop_assert_eq!(back, inst);
        }
    }
}
