//! Config-driven experiments: policy comparisons and robustness to
//! misestimated primitives.

pub mod compare;
pub mod config;
pub mod perturb;
pub mod robustness;

pub use compare::{run_compare, CompareReport, CompareRow, PolicySummary};
pub use config::{ExperimentConfig, InstanceSource};
pub use perturb::{perturb_instance, PerturbTarget, PerturbationSpec};
pub use robustness::{run_robustness, RobustnessReport, RobustnessRow};
