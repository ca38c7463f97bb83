use std::io::Write;

use super::config::ExperimentConfig;
use super::perturb::{perturb_instance, PerturbationSpec};
use crate::error::Result;
use crate::exante::select_ex_ante;
use crate::format::sig_digits;
use crate::model::{FractionalSolution, Instance};
use crate::policies::{build_policy, PolicySpec};
use crate::sim::simulate;

pub const ROBUSTNESS_COLUMNS: [&str; 6] = [
    "policy",
    "target",
    "replicate",
    "baseline_mean",
    "perturbed_mean",
    "pct_change",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessRow {
    pub policy: String,
    pub target: String,
    /// 1-based replicate number; `None` marks the mean row.
    pub replicate: Option<usize>,
    pub baseline_mean: f64,
    pub perturbed_mean: f64,
    pub pct_change: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessReport {
    pub rows: Vec<RobustnessRow>,
}

impl RobustnessReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(ROBUSTNESS_COLUMNS)?;
        for row in &self.rows {
            writer.write_record([
                row.policy.clone(),
                row.target.clone(),
                row.replicate.map_or_else(|| "mean".to_string(), |r| r.to_string()),
                sig_digits(row.baseline_mean, 10),
                sig_digits(row.perturbed_mean, 10),
                sig_digits(row.pct_change, 10),
            ])?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

fn ex_ante_for(instance: &Instance, specs: &[PolicySpec], m: usize) -> Result<FractionalSolution> {
    if specs.iter().any(|p| p.needs_ex_ante()) {
        Ok(select_ex_ante(instance, m)?.x)
    } else {
        Ok(FractionalSolution::zeros(instance))
    }
}

fn pct_change(baseline: f64, perturbed: f64) -> f64 {
    if baseline == perturbed {
        0.0
    } else if baseline == 0.0 {
        f64::NAN
    } else {
        100.0 * (perturbed - baseline) / baseline
    }
}

/// Plans computed from perturbed primitives, each simulated on the true
/// instance with the same episode streams as the unperturbed plan.
pub fn run_robustness(config: &ExperimentConfig, spec: &PerturbationSpec) -> Result<RobustnessReport> {
    config.validate()?;
    spec.validate()?;
    let truth = config.load_instance()?;
    let target = spec.target.to_string();
    let x_true = ex_ante_for(&truth, &config.policies, config.m)?;

    let mut baselines = Vec::new();
    for policy_spec in &config.policies {
        let policy = build_policy(policy_spec, &truth, &x_true, config.theta)?;
        baselines.push(simulate(&truth, policy.as_ref(), config.episodes, config.seed)?.mean_completed());
    }

    let mut per_policy: Vec<Vec<RobustnessRow>> = vec![Vec::new(); config.policies.len()];
    for r in 0..spec.replicates {
        let believed = perturb_instance(&truth, spec, r)?;
        let x_believed = ex_ante_for(&believed, &config.policies, config.m)?;
        for (i, policy_spec) in config.policies.iter().enumerate() {
            let policy = build_policy(policy_spec, &believed, &x_believed, config.theta)?;
            let perturbed = simulate(&truth, policy.as_ref(), config.episodes, config.seed)?.mean_completed();
            per_policy[i].push(RobustnessRow {
                policy: policy_spec.to_string(),
                target: target.clone(),
                replicate: Some(r + 1),
                baseline_mean: baselines[i],
                perturbed_mean: perturbed,
                pct_change: pct_change(baselines[i], perturbed),
            });
        }
    }

    let mut rows = Vec::new();
    for (i, reps) in per_policy.into_iter().enumerate() {
        let n = reps.len() as f64;
        let perturbed_mean = reps.iter().map(|r| r.perturbed_mean).sum::<f64>() / n;
        let mean = RobustnessRow {
            policy: config.policies[i].to_string(),
            target: target.clone(),
            replicate: None,
            baseline_mean: baselines[i],
            perturbed_mean,
            pct_change: reps.iter().map(|r| r.pct_change).sum::<f64>() / n,
        };
        rows.extend(reps);
        rows.push(mean);
    }
    Ok(RobustnessReport { rows })
}
