use std::io::Write;

use serde::Serialize;

use super::config::ExperimentConfig;
use crate::error::Result;
use crate::exante::{benchmark_lp, select_ex_ante};
use crate::format::sig_digits;
use crate::model::FractionalSolution;
use crate::policies::build_policy;
use crate::sim::{simulate_range, SimStats};

pub const COMPARE_COLUMNS: [&str; 9] = [
    "policy",
    "batch",
    "instance_id",
    "episodes",
    "seed",
    "mean_completed",
    "std_error",
    "lp_value",
    "ratio",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub policy: String,
    /// 1-based batch number.
    pub batch: u64,
    pub instance_id: String,
    pub stats: SimStats,
    pub lp_value: f64,
}

impl CompareRow {
    pub fn ratio(&self) -> Option<f64> {
        self.stats.ratio_to(self.lp_value)
    }

    fn record(&self) -> [String; 9] {
        [
            self.policy.clone(),
            self.batch.to_string(),
            self.instance_id.clone(),
            self.stats.episodes.to_string(),
            self.stats.seed.to_string(),
            sig_digits(self.stats.mean_completed(), 10),
            sig_digits(self.stats.std_error(), 10),
            sig_digits(self.lp_value, 10),
            self.ratio().map(|r| sig_digits(r, 10)).unwrap_or_default(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicySummary {
    pub policy: String,
    pub episodes: u64,
    pub mean_completed: f64,
    pub std_error: f64,
    /// Mean over batches of the batch ratio; `None` when the benchmark is 0.
    pub mean_ratio: Option<f64>,
    /// Standard error of the pooled ratio.
    pub ratio_std_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub instance_id: String,
    pub lp_value: f64,
    /// Tag of the selected ex-ante solution, when any policy needed one.
    pub exante_tag: Option<String>,
    pub rows: Vec<CompareRow>,
    pub summary: Vec<PolicySummary>,
}

impl CompareReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(COMPARE_COLUMNS)?;
        for row in &self.rows {
            writer.write_record(row.record())?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn summary_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            instance_id: &'a str,
            lp_value: f64,
            exante: Option<&'a str>,
            policies: &'a [PolicySummary],
        }
        serde_json::to_string_pretty(&Doc {
            instance_id: &self.instance_id,
            lp_value: self.lp_value,
            exante: self.exante_tag.as_deref(),
            policies: &self.summary,
        })
        .expect("summary serializes")
    }

    pub fn policy(&self, name: &str) -> Option<&PolicySummary> {
        self.summary.iter().find(|s| s.policy == name)
    }
}

/// Sizes of `batches` consecutive groups covering `episodes`, as even as
/// possible with larger groups first.
pub(crate) fn batch_sizes(episodes: u64, batches: u64) -> Vec<u64> {
    let batches = batches.min(episodes).max(1);
    let base = episodes / batches;
    let extra = episodes % batches;
    (0..batches).map(|b| base + u64::from(b < extra)).collect()
}

fn merge(parts: &[SimStats]) -> SimStats {
    let mut total = parts[0].clone();
    for p in &parts[1..] {
        total.episodes += p.episodes;
        total.total_completed += p.total_completed;
        total.total_completed_sq += p.total_completed_sq;
        for (a, b) in total.attribution_counts.iter_mut().zip(&p.attribution_counts) {
            *a += b;
        }
    }
    total
}

/// Simulates every configured policy on the same episode streams and reports
/// per-batch rows plus a per-policy summary.
pub fn run_compare(config: &ExperimentConfig) -> Result<CompareReport> {
    config.validate()?;
    let instance = config.load_instance()?;
    let instance_id = config.instance_label();
    let (x_star, lp_value, exante_tag) = if config.policies.iter().any(|p| p.needs_ex_ante()) {
        let sel = select_ex_ante(&instance, config.m)?;
        (sel.x, sel.lp_value, Some(sel.tag.to_string()))
    } else {
        (FractionalSolution::zeros(&instance), benchmark_lp(&instance)?.lp_value, None)
    };
    log::info!("{instance_id}: benchmark value {lp_value}");

    let sizes = batch_sizes(config.episodes, config.batches);
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for spec in &config.policies {
        let policy = build_policy(spec, &instance, &x_star, config.theta)?;
        let name = spec.to_string();
        let mut first = 0;
        let mut parts = Vec::with_capacity(sizes.len());
        for (b, size) in sizes.iter().enumerate() {
            let stats = simulate_range(&instance, policy.as_ref(), config.seed, first, *size)?;
            first += size;
            rows.push(CompareRow {
                policy: name.clone(),
                batch: b as u64 + 1,
                instance_id: instance_id.clone(),
                stats: stats.clone(),
                lp_value,
            });
            parts.push(stats);
        }
        let total = merge(&parts);
        let mean_ratio = (lp_value > 0.0).then(|| {
            parts.iter().map(|p| p.mean_completed() / lp_value).sum::<f64>() / parts.len() as f64
        });
        log::info!("{name}: mean {} (se {})", total.mean_completed(), total.std_error());
        summary.push(PolicySummary {
            policy: name,
            episodes: total.episodes,
            mean_completed: total.mean_completed(),
            std_error: total.std_error(),
            mean_ratio,
            ratio_std_error: (lp_value > 0.0).then(|| total.std_error() / lp_value),
        });
    }
    Ok(CompareReport {
        instance_id,
        lp_value,
        exante_tag,
        rows,
        summary,
    })
}
