use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use volnotify::bounds::kappa_curve;
use volnotify::exante::{benchmark_lp, select_ex_ante, DEFAULT_STEPS};
use volnotify::experiment::{
    run_compare, run_robustness, CompareReport, ExperimentConfig, InstanceSource, PerturbTarget,
    PerturbationSpec,
};
use volnotify::format::sig_digits;
use volnotify::model::io::solution_to_json;
use volnotify::policies::PolicySpec;
use volnotify::{Error, Result};

#[derive(Parser)]
#[command(name = "volnotify", version, about = "Volunteer notification experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the LP benchmark and print its value.
    Bench {
        /// Instance JSON file or canonical spec such as `I4:q=0.1`.
        instance: String,
    },
    /// Select the ex-ante solution; prints its nonzero entries as JSON.
    Exante {
        instance: String,
        /// Frank-Wolfe steps.
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        m: usize,
    },
    /// Simulate one policy.
    Simulate {
        instance: String,
        #[arg(long)]
        policy: PolicySpec,
        #[arg(long)]
        episodes: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        m: usize,
    },
    /// Run every policy of a TOML experiment config.
    Compare { config: PathBuf },
    /// Tabulate the sparse-notification guarantee and kappa over a q grid.
    Bounds {
        #[arg(long, default_value_t = 0.05)]
        grid: f64,
    },
    /// Re-plan on perturbed primitives and evaluate on the true instance.
    Perturb {
        config: PathBuf,
        #[arg(long)]
        target: PerturbTarget,
        #[arg(long)]
        width: f64,
        #[arg(long)]
        replicates: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 1 for bad input, 2 for solver or capacity failures.
fn exit_code(e: &Error) -> u8 {
    if e.is_solver_failure() { 2 } else { 1 }
}

fn run(command: Command) -> Result<()> {
    let mut out = io::stdout().lock();
    match command {
        Command::Bench { instance } => {
            let source = InstanceSource::from_arg(&instance)?;
            let bench = benchmark_lp(&source.load(None)?)?;
            writeln!(out, "instance_id,lp_value")?;
            writeln!(out, "{},{}", csv_field(&source.label()), sig_digits(bench.lp_value, 10))?;
        }
        Command::Exante { instance, m } => {
            let source = InstanceSource::from_arg(&instance)?;
            let sel = select_ex_ante(&source.load(None)?, m)?;
            writeln!(out, "{}", solution_to_json(&sel.x))?;
            let candidates: serde_json::Map<String, serde_json::Value> = sel
                .candidates
                .iter()
                .map(|c| (c.tag.to_string(), c.f_value.into()))
                .collect();
            let summary = serde_json::json!({
                "instance_id": source.label(),
                "selected": sel.tag.to_string(),
                "f_value": sel.f_value,
                "lp_value": sel.lp_value,
                "candidates": candidates,
            });
            eprintln!("{summary:#}");
        }
        Command::Simulate { instance, policy, episodes, seed, theta, m } => {
            let config = ExperimentConfig {
                instance: InstanceSource::from_arg(&instance)?,
                instance_id: None,
                policies: vec![policy],
                episodes,
                seed,
                m,
                theta,
                batches: 1,
                output: None,
                base_dir: None,
            };
            let report = run_compare(&config)?;
            report.write_csv(&mut out)?;
            eprintln!("{}", report.summary_json());
        }
        Command::Compare { config } => {
            let config = ExperimentConfig::load(&config)?;
            let report = run_compare(&config)?;
            match &config.output {
                Some(path) => write_report_files(&report, &resolve(config.base_dir.as_deref(), path))?,
                None => {
                    report.write_csv(&mut out)?;
                    eprintln!("{}", report.summary_json());
                }
            }
        }
        Command::Bounds { grid } => {
            writeln!(out, "q,sn_lower,kappa")?;
            for point in kappa_curve(grid)? {
                writeln!(
                    out,
                    "{},{},{}",
                    sig_digits(point.q, 10),
                    sig_digits(point.sn_lower, 10),
                    sig_digits(point.kappa, 10)
                )?;
            }
        }
        Command::Perturb { config, target, width, replicates, output } => {
            let config = ExperimentConfig::load(&config)?;
            let spec = PerturbationSpec { target, width, replicates, seed: config.seed };
            let report = run_robustness(&config, &spec)?;
            match output {
                Some(path) => report.write_csv(fs::File::create(path)?)?,
                None => report.write_csv(&mut out)?,
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn resolve(base: Option<&Path>, path: &Path) -> PathBuf {
    match base {
        Some(base) if path.is_relative() => base.join(path),
        _ => path.to_path_buf(),
    }
}

/// CSV at `path`, JSON summary next to it with a `.json` extension.
fn write_report_files(report: &CompareReport, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    report.write_csv(fs::File::create(path)?)?;
    fs::write(path.with_extension("json"), report.summary_json() + "\n")?;
    Ok(())
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}
