//! The `cdh` command line: `run`, `verify` and `list`.
//!
//! Exit codes: 0 ok, 1 criterion failure, 2 config error, 3 solver error.
//! `CDH_OUTPUT_DIR` overrides the output root of every experiment.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

pub use config::{Entry, ExperimentConfig, GridSpec, TimesSpec};
pub use experiments::{Artifacts, Experiment, REGISTRY};

use crate::analysis::acceptance;
use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CRITERION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

/// Environment variable overriding the output root.
pub const OUTPUT_ENV: &str = "CDH_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "cdh", about = "Heat flow with critical singular density |x|^-2 u_t = Δu", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment, a comma-separated batch, or `all`.
    ///
    /// Options are `--key value` config overrides (`--dim 3`,
    /// `--datum.family step_to_K`) plus `--config FILE` and `--workers N`.
    Run {
        experiment: String,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Run the acceptance suite and print a pass/fail table.
    Verify {
        /// Only criteria whose name contains this substring.
        #[arg(long)]
        filter: Option<String>,
    },
    /// List the experiments.
    List,
}

/// Options of `cdh run` after the experiment name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub config: Option<PathBuf>,
    pub workers: Option<usize>,
    pub overrides: Vec<Entry>,
}

pub fn parse_run_args(args: &[String]) -> Result<RunOptions> {
    let mut opts = RunOptions::default();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let key = arg
            .strip_prefix("--")
            .ok_or_else(|| Error::config(0, arg.as_str(), "expected --key value"))?;
        let (key, value) = match key.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| Error::config(0, key, "missing value"))?;
                (key.to_string(), v.clone())
            }
        };
        match key.as_str() {
            "config" => opts.config = Some(PathBuf::from(value)),
            "workers" => {
                let w: usize = value
                    .parse()
                    .map_err(|e| Error::config(0, "workers", format!("{e}")))?;
                if w == 0 {
                    return Err(Error::config(0, "workers", "must be at least 1"));
                }
                opts.workers = Some(w);
            }
            _ => opts.overrides.push(Entry { line: 0, key, value }),
        }
    }
    Ok(opts)
}

/// Defaults of `experiment`, then the config file, then the overrides.
pub fn build_config(experiment: &str, opts: &RunOptions) -> Result<ExperimentConfig> {
    let defaults = experiments::default_config(experiment)
        .ok_or_else(|| Error::config(0, "experiment", format!("unknown experiment {experiment:?}")))?;
    let from_file = match &opts.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::config(0, "config", format!("{}: {e}", path.display())))?;
            defaults.with_entries(&config::parse_lines(&text)?)?
        }
        None => defaults,
    };
    from_file.with_entries(&opts.overrides)
}

/// Output root: `CDH_OUTPUT_DIR` if set, else the config's `output_dir`.
pub fn output_root(cfg: &ExperimentConfig) -> PathBuf {
    std::env::var_os(OUTPUT_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| cfg.output_dir.clone())
}

/// Runs an experiment and writes `series.csv`, `summary.csv`, `plot.svg`
/// (if any) and the effective `config.txt` to `root/<experiment>/`.
pub fn execute(cfg: &ExperimentConfig, root: &Path) -> Result<Artifacts> {
    let exp = experiments::find(&cfg.experiment)
        .ok_or_else(|| Error::config(0, "experiment", format!("unknown experiment {:?}", cfg.experiment)))?;
    let artifacts = exp.run(cfg)?;
    let dir = root.join(&cfg.experiment);
    std::fs::create_dir_all(&dir)?;
    output::write_series(&dir.join("series.csv"), &artifacts.series)?;
    output::write_summary(&dir.join("summary.csv"), &artifacts.summary)?;
    if let Some(svg) = &artifacts.plot {
        std::fs::write(dir.join("plot.svg"), svg)?;
    }
    std::fs::write(dir.join("config.txt"), cfg.serialize())?;
    Ok(artifacts)
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config { .. } => EXIT_CONFIG,
        _ => EXIT_SOLVER,
    }
}

fn run_command(experiment: &str, args: &[String]) -> i32 {
    let opts = match parse_run_args(args) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("cdh: {e}");
            return exit_code(&e);
        }
    };
    let names: Vec<&str> = if experiment == "all" {
        REGISTRY.iter().map(|e| e.name).collect()
    } else {
        experiment.split(',').map(str::trim).collect()
    };
    if names.len() > 1 && opts.config.is_some() {
        eprintln!("cdh: config error: --config applies to a single experiment");
        return EXIT_CONFIG;
    }
    let mut configs = Vec::with_capacity(names.len());
    for name in &names {
        match build_config(name, &opts) {
            Ok(c) => configs.push(c),
            Err(e) => {
                eprintln!("cdh: {name}: {e}");
                return exit_code(&e);
            }
        }
    }
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("cdh: cannot start workers: {e}");
            return EXIT_SOLVER;
        }
    };
    let results: Vec<Result<Artifacts>> =
        pool.install(|| configs.par_iter().map(|c| execute(c, &output_root(c))).collect());
    let mut code = EXIT_OK;
    for (cfg, res) in configs.iter().zip(results) {
        match res {
            Ok(a) => {
                for row in &a.summary {
                    println!(
                        "{:<22} {:<26} {:>14.6e} {:>12} {}",
                        cfg.experiment,
                        row.metric,
                        row.value,
                        row.tolerance,
                        if row.pass { "pass" } else { "FAIL" }
                    );
                }
                if !a.passed() {
                    code = code.max(EXIT_CRITERION);
                }
            }
            Err(e) => {
                eprintln!("cdh: {}: {e}", cfg.experiment);
                code = code.max(exit_code(&e));
            }
        }
    }
    code
}

fn verify_command(filter: Option<&str>) -> i32 {
    let outcomes = acceptance::run_all(filter);
    if outcomes.is_empty() {
        eprintln!("cdh: no criterion matches the filter");
        return EXIT_CONFIG;
    }
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_CRITERION
    }
}

/// Entry point of the binary; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Run { experiment, args } => run_command(&experiment, &args),
        Command::Verify { filter } => verify_command(filter.as_deref()),
        Command::List => {
            for e in &REGISTRY {
                println!("{:<22} {}", e.name, e.description);
            }
            EXIT_OK
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn run_args() {
        let o = parse_run_args(&args(&["--dim", "4", "--times=1,2", "--workers", "2", "--config", "c.txt"])).unwrap();
        assert_eq!(o.workers, Some(2));
        assert_eq!(o.config, Some(PathBuf::from("c.txt")));
        assert_eq!(o.overrides.len(), 2);
        assert_eq!(o.overrides[1].value, "1,2");
        assert!(parse_run_args(&args(&["dim", "4"])).is_err());
        assert!(parse_run_args(&args(&["--dim"])).is_err());
    }

    #[test]
    fn empty_times_is_a_config_error() {
        let o = parse_run_args(&args(&["--times", ""])).unwrap();
        let e = build_config("figure1_profiles", &o).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_CONFIG);
    }

    #[test]
    fn unknown_experiment_and_key() {
        assert_eq!(main_with_args(["cdh", "run", "nope"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["cdh", "run", "hotspot", "--colour", "red"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["cdh", "frobnicate"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["cdh", "list"]), EXIT_OK);
        assert_eq!(main_with_args(["cdh", "verify", "--filter", "zzz"]), EXIT_CONFIG);
    }
}
